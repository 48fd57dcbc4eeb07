// correlators.hpp — symmetric thermal correlators and coherent-state expectation values
//
// Per mode, with phase(w) = w dt - k dr:
//   <phi phi'>_sym = (hbar/pi) int coth(beta hbar w/2) cos(phase) Im G dw
//   <pi pi'>_sym   = (hbar/pi) int w^2 coth(beta hbar w/2) cos(phase) Im G dw
// Coherent states add (1/4pi^2) int cos(phase) <phi(w)>^2 dw to the vacuum part.

#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "dissfield/thermo.hpp"

namespace dissfield {

struct SeparationGrid {
    std::vector<double> dt_values;
    std::vector<double> dr_values;
};

struct CorrelatorRow {
    double dt;
    double dr;
    double value;
    double est_error;
};

// Rows ordered dt-major, in grid order.
using CorrelatorTable = std::vector<CorrelatorRow>;

class CoherentAmplitude {
public:
    struct Constant {
        std::complex<double> value;
    };
    // amplitude * exp(-(w - center)^2 / (2 width^2)) * exp(i phase)
    struct GaussianPacket {
        double amplitude{1.0};
        double center{1.0};
        double width{0.1};
        double phase{0.0};
    };
    // Linear interpolation of complex samples; zero outside the sampled range.
    struct Table {
        std::vector<double> omega;
        std::vector<std::complex<double>> values;
    };
    using Representation = std::variant<Constant, GaussianPacket, Table>;

    explicit CoherentAmplitude(Representation rep);
    static CoherentAmplitude zero() { return CoherentAmplitude(Constant{}); }

    std::complex<double> operator()(double w) const;
    CoherentAmplitude scaled(std::complex<double> factor) const;
    std::string name() const;
    const Representation& representation() const { return rep_; }
    std::vector<double> feature_points() const;
    bool is_zero() const;

private:
    Representation rep_;
};

CorrelatorTable thermal_corr_phi(const ResponseEvaluator& ev, const ThermalState& state, const SeparationGrid& grid);
CorrelatorTable thermal_corr_pi(const ResponseEvaluator& ev, const ThermalState& state, const SeparationGrid& grid);

// 4 pi sqrt(hbar/2w) Re(f G C)
double coherent_expectation_phi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, double w);
// 4 pi sqrt(hbar w/2) Im(f G C)
double coherent_expectation_pi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, double w);

// Sign of the <pi>^2 mean term in the coherent pi correlator.
enum class PiMeanSign { subtract, add };

CorrelatorTable coherent_corr_phi(const ResponseEvaluator& ev, const CoherentAmplitude& amp,
                                  const SeparationGrid& grid);
CorrelatorTable coherent_corr_pi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, const SeparationGrid& grid,
                                 PiMeanSign sign = PiMeanSign::subtract);

} // namespace dissfield
