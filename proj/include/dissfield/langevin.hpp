// langevin.hpp — classical generalized Langevin simulation of one field mode
//
//   phi'' + omega_k^2 phi - omega_k^2 int_0^t chi(t - t') phi(t') dt' = zeta(t)
//
// zeta is stationary Gaussian noise with one-sided spectrum 2 kT omega_k^2 Im chi(w) / w.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dissfield/response.hpp"

namespace dissfield {

enum class MemoryMethod {
    automatic,    // auxiliary when the model has one, convolution otherwise
    auxiliary,    // exact propagation of the Drude-Lorentz (or Ohmic) kernel ODE
    convolution,  // trapezoidal sum over the stored history, O(n^2)
};

struct LangevinConfig {
    double T{10.0};
    double kB{1.0};
    double dt{0.05};
    double t_max{2000.0};
    double burn_in{200.0};
    std::int64_t n_traj{10000};
    std::uint64_t seed{0};
    double acf_stride{1.0};
    double acf_max_lag{50.0};
    MemoryMethod method{MemoryMethod::automatic};
    int threads{1};

    double kT() const { return kB * T; }
    std::int64_t n_steps() const;
    // Throws Error{InvalidInput} on a violated invariant.
    void validate(const ResponseEvaluator& ev) const;
};

struct NoiseSpectrumCheck {
    double target_variance{0.0};
    double sample_variance{0.0};
};

struct NoiseRealization {
    double dt{0.0};
    std::vector<double> samples;  // zeta(n dt), n = 0 .. n_steps
    NoiseSpectrumCheck spectrum_check;
};

NoiseRealization sample_noise(const ResponseEvaluator& ev, const LangevinConfig& cfg, std::uint64_t traj_index);

struct InitialData {
    double phi{0.0};
    double phidot{0.0};
};

struct Trajectory {
    double dt{0.0};
    std::vector<double> phi;
    std::vector<double> phidot;
};

// Velocity Verlet; throws Error{Instability} when the mode energy exceeds
// 1e6 * max(kT, initial energy).
Trajectory integrate_gle(const ResponseEvaluator& ev, const LangevinConfig& cfg, const NoiseRealization& noise,
                         MemoryMethod method = MemoryMethod::automatic, InitialData init = {});

struct AcfPoint {
    double lag{0.0};
    double value{0.0};
    std::optional<double> stderr_;
};

struct EnsembleStats {
    std::int64_t n_traj{0};
    std::int64_t failures{0};
    double mean_phi{0.0};
    double var_phi{0.0};
    double var_pi{0.0};
    double var_phi_first_half{0.0};
    double var_phi_second_half{0.0};
    std::optional<double> stderr_mean_phi;
    std::optional<double> stderr_var_phi;
    std::optional<double> stderr_var_pi;
    std::optional<double> stderr_half_difference;
    std::vector<AcfPoint> acf_phi;
    std::vector<std::string> warnings;
};

// Trajectories may run concurrently; the reduction runs in trajectory-index order.
EnsembleStats run_ensemble(const ResponseEvaluator& ev, const LangevinConfig& cfg);

struct FdtCheck {
    std::string name;
    double lag{0.0};
    double simulated{0.0};
    double predicted{0.0};
    std::optional<double> stderr_;
    double quadrature_error{0.0};
    bool pass{false};
};

struct FdtComparison {
    std::vector<FdtCheck> checks;
    bool stationary{false};
    bool pass{false};
};

// Classical predictions: var_phi = (2kT/pi) int Im G/w, acf(lag) = (2kT/pi) int Im G/w cos(w lag),
// var_pi = kT. A check passes within 3 combined standard errors.
FdtComparison fdt_compare(const ResponseEvaluator& ev, const LangevinConfig& cfg, const EnsembleStats& stats);

} // namespace dissfield
