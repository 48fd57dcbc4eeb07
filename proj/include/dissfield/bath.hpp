// bath.hpp — reservoir susceptibility models, coupling function and memory kernel
//
// A model specifies the dimensionless, k-independent response chi(w) of the
// reservoir. The field mode enters only through omega_k, which rescales the
// coupling:  f(w)^2 = 2 w omega_k^2 Im chi(w) / pi.

#pragma once

#include <complex>
#include <cstddef>
#include <istream>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dissfield/numerics.hpp"

namespace dissfield {

struct ModeContext {
    double k{0.0};
    double m{0.0};
    double omega_k{0.0};

    // omega_k = sqrt(m^2 + k^2); rejects negative inputs and k = m = 0.
    static ModeContext make(double k, double m);
    // Mode with k = omega_k and m = 0, convenient for per-frequency studies.
    static ModeContext with_frequency(double omega_k);
};

// chi(w) = eta w0^2 / (w0^2 - w^2 - i gamma w)
struct DrudeLorentz {
    double eta{0.1};
    double omega0{1.0};
    double gamma{0.1};
};

// chi(w) = (eta/2) / (1 - i w/wc)^2, so Im chi = eta x / (1 + x^2)^2 with x = w/wc.
struct Ohmic {
    double eta{0.2};
    double omega_c{5.0};
};

// Im chi sampled on a strictly increasing grid starting at w = 0, interpolated with a
// monotone piecewise cubic (Fritsch-Carlson). Zero beyond the last sample.
class Tabulated {
public:
    Tabulated(std::vector<double> omega, std::vector<double> im_chi);

    // Two-column text: header "# omega im_chi", then rows "w value".
    static Tabulated parse(std::istream& in);
    static Tabulated load(const std::string& path);

    double operator()(double w) const;
    // Derivative of the interpolant (zero outside the table).
    double derivative(double w) const;
    // P int_0^last p(xi) / (xi - c) dxi for the interpolant p: closed form on cells near c,
    // Gauss-Legendre on the rest.
    double hilbert(double c) const;
    // Local maxima, the table end and spectral-weight quantiles; at most a few dozen points.
    std::vector<double> landmarks() const;

    const std::vector<double>& omega() const { return data_->omega; }
    const std::vector<double>& values() const { return data_->im; }
    double last() const { return data_->omega.back(); }
    bool passive() const;

private:
    struct Data {
        std::vector<double> omega;
        std::vector<double> im;
        std::vector<double> slope;
    };
    std::shared_ptr<const Data> data_;
};

class SusceptibilityModel {
public:
    using Kind = std::variant<DrudeLorentz, Ohmic, Tabulated>;

    SusceptibilityModel(Kind kind, numerics::QuadratureSpec quad = {});

    const Kind& kind() const { return kind_; }
    const numerics::QuadratureSpec& quadrature() const { return quad_; }
    std::string name() const;

    bool has_closed_form() const;
    // True when Im chi vanishes identically (free field).
    bool is_zero() const;

    double im_chi(double w) const;
    // Closed form when available, Kramers-Kronig reconstruction otherwise.
    std::complex<double> chi(double w) const;
    // d chi / d w: analytic for closed forms, Richardson differences otherwise.
    std::complex<double> dchi(double w) const;
    // Static response chi(0) (real).
    double static_chi() const;

    // Narrowest spectral feature (sets the frequency resolution of noise synthesis).
    double spectral_width() const;
    // Characteristic frequencies used as quadrature breakpoints.
    std::vector<double> feature_points() const;

    // True when w lies past the last tabulated sample.
    bool out_of_table(double w) const;

private:
    Kind kind_;
    numerics::QuadratureSpec quad_;
};

double im_chi(const SusceptibilityModel& model, double w);
// Throws Error{NoClosedForm} for tabulated models.
double re_chi_closed(const SusceptibilityModel& model, double w);
// (2/pi) P int_0^inf xi Im chi(xi) / (xi^2 - w^2) d xi
numerics::QuadResult re_chi_kk(const SusceptibilityModel& model, double w);

class CouplingFunction {
public:
    CouplingFunction(SusceptibilityModel model, ModeContext mode)
        : model_(std::move(model)), mode_(mode) {}

    // sqrt(2 w omega_k^2 Im chi(w) / pi); throws Error{NegativeImChi} on passivity violation.
    double operator()(double w) const;
    double squared(double w) const;

    const SusceptibilityModel& model() const { return model_; }
    const ModeContext& mode() const { return mode_; }

private:
    SusceptibilityModel model_;
    ModeContext mode_;
};

double coupling_f(const CouplingFunction& c, double w);

enum class KernelRoute {
    coupling,  // (1/omega_k^2) int sin(w t)/w f^2(w) dw
    spectral,  // (2/pi) int Im chi(w) sin(w t) dw
};

// Memory kernel chi(t) by oscillatory quadrature.
numerics::QuadResult chi_time(const CouplingFunction& c, double t, KernelRoute route = KernelRoute::coupling);
// Analytic chi(t) for Drude-Lorentz and Ohmic models; throws NoClosedForm otherwise.
double chi_time_closed(const SusceptibilityModel& model, double t);

struct KKRow {
    double omega;
    double re_closed;
    double re_kk;
    double abs_dev;
    double rel_dev;
};

struct KKReport {
    std::vector<KKRow> rows;
    double max_abs_dev{0.0};
    double max_rel_dev{0.0};
    std::vector<std::string> warnings;
    // Convention note carried into emitted files.
    static constexpr const char* convention =
        "Im chi(w) = pi f(w)^2 / (2 w omega_k^2); Re chi(w) = (2/pi) P int xi Im chi(xi)/(xi^2 - w^2) dxi";
};

// Relative deviation uses max(|Re_closed|, 1e-6 * max_grid |Re_closed|) as denominator.
KKReport kk_report(const SusceptibilityModel& model, const std::vector<double>& grid);

} // namespace dissfield
