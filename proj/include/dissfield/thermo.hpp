// thermo.hpp — mean-force thermodynamics of a single field mode
//
// With coth = coth(beta hbar w / 2) and per-mode integrals over w in (0, inf):
//   E_S  = (hbar/2pi) int (w^2 + omega_k^2) coth Im G
//   E_I  = -(hbar/pi) int omega_k^2 coth Im(chi G)
//   E_R  = (hbar/2pi) int omega_k^2 coth Im[d(w chi)/dw G]
//   U*   = E_S + E_I + E_R = (1/pi) int (hbar w/2) coth Im[d ln G/dw]

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dissfield/response.hpp"

namespace dissfield {

class ThermalState {
public:
    // T > 0.
    ThermalState(double T, double hbar = 1.0, double kB = 1.0);
    // T -> 0 limit: coth = 1, N = 0.
    static ThermalState vacuum(double hbar = 1.0, double kB = 1.0);

    double T() const { return T_; }
    double hbar() const { return hbar_; }
    double kB() const { return kB_; }
    double beta() const { return beta_; }
    double kT() const { return kB_ * T_; }
    bool is_vacuum() const { return T_ == 0.0; }

    // coth(beta hbar w / 2) = 2N + 1
    double coth_half(double w) const;

private:
    ThermalState() = default;
    double T_{0.0};
    double hbar_{1.0};
    double kB_{1.0};
    double beta_{0.0};
};

// 1 / (exp(beta hbar w) - 1), zero once beta hbar w > 700.
double bose_occupation(const ThermalState& state, double w);

double energy_system(const ResponseEvaluator& ev, const ThermalState& state);
double energy_reservoir_excess(const ResponseEvaluator& ev, const ThermalState& state);
double energy_interaction(const ResponseEvaluator& ev, const ThermalState& state);
double internal_energy_mean_force(const ResponseEvaluator& ev, const ThermalState& state);
// Single-integral form through the phase derivative of G; equal to the component sum.
double internal_energy_spectral(const ResponseEvaluator& ev, const ThermalState& state);

// Anchor of the thermodynamic integration: the classical plateau is searched from
// T_ref (0 selects 100 * max(omega_k, features) * hbar/kB), doubling up to T_max.
struct ThermoIntegrationSpec {
    double T_ref{0.0};
    double T_max{1e6};
    double plateau_tol{1e-6};
};

enum class FreeEnergyMethod { closed_form, thermo_integration };
enum class EntropyMethod { closed_form, closed_form_alt, finite_difference };

double free_energy_mean_force(const ResponseEvaluator& ev, const ThermalState& state, FreeEnergyMethod method,
                              const ThermoIntegrationSpec& ti = {});
// closed_form carries + kB T ln 2 as printed; closed_form_alt carries + kB ln 2 instead.
// finite_difference is -dF/dT of the closed-form F.
double entropy_mean_force(const ResponseEvaluator& ev, const ThermalState& state, EntropyMethod method);

struct ThermoConsistency {
    double S_from_dF{0.0};
    double U_from_GibbsHelmholtz{0.0};
    double max_rel_dev{0.0};
};

struct ThermoReport {
    ModeContext mode;
    double T{0.0};
    double U_star{0.0};
    double F_star{0.0};  // thermodynamic integration (normative)
    double F_closed{0.0};
    double S_star{0.0};  // finite difference of F_closed
    double S_closed{0.0};
    double S_closed_alt{0.0};
    double E_system{0.0};
    double E_reservoir_excess{0.0};
    double E_interaction{0.0};
    ThermoConsistency consistency;
    std::optional<std::string> error;
};

ThermoReport thermo_point(const ResponseEvaluator& ev, const ThermalState& state, const ThermoIntegrationSpec& ti = {});
// Per-point failures are stored in ThermoReport::error; the sweep continues.
std::vector<ThermoReport> thermo_sweep(const ResponseEvaluator& ev, const std::vector<double>& T_grid,
                                       double kB = 1.0, const ThermoIntegrationSpec& ti = {}, int threads = 1);

// Integral over modes, int_0^kmax dk of the per-mode quantities, by the trapezoid rule on a
// user-supplied increasing k grid. Values depend on the cutoff kmax = k_grid.back().
struct ModeSum {
    double k_cutoff{0.0};
    double U_star{0.0};
    double F_star{0.0};
    double F_closed{0.0};
    double S_star{0.0};
    std::vector<ThermoReport> per_mode;
};

ModeSum mode_sum(const SusceptibilityModel& model, double m, const std::vector<double>& k_grid,
                 const ThermalState& state, const ThermoIntegrationSpec& ti = {}, double epsilon = 1e-9);

} // namespace dissfield
