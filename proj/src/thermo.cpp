// thermo.cpp — component energies, U*, F*, S* and the sweep driver

#include "dissfield/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "dissfield/error.hpp"

namespace dissfield {

using std::numbers::ln2;
using std::numbers::pi;

ThermalState::ThermalState(double T, double hbar, double kB) : T_(T), hbar_(hbar), kB_(kB) {
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidInput, "temperature must be positive and finite");
    if (!(hbar > 0.0) || !(kB > 0.0)) throw Error(ErrorKind::InvalidInput, "hbar and kB must be positive");
    beta_ = 1.0 / (kB * T);
}

ThermalState ThermalState::vacuum(double hbar, double kB) {
    if (!(hbar > 0.0) || !(kB > 0.0)) throw Error(ErrorKind::InvalidInput, "hbar and kB must be positive");
    ThermalState s;
    s.hbar_ = hbar;
    s.kB_ = kB;
    s.beta_ = numerics::kInf;
    return s;
}

double ThermalState::coth_half(double w) const {
    if (is_vacuum()) return 1.0;
    return 1.0 / std::tanh(0.5 * beta_ * hbar_ * w);
}

double bose_occupation(const ThermalState& state, double w) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "bose_occupation requires omega > 0");
    if (state.is_vacuum()) return 0.0;
    const double x = state.beta() * state.hbar() * w;
    if (x > 700.0) return 0.0;
    return 1.0 / std::expm1(x);
}

namespace {

void check_hbar(const ResponseEvaluator& ev, const ThermalState& state) {
    if (ev.hbar() != state.hbar())
        throw Error(ErrorKind::InvalidInput, "thermal state and response evaluator use different hbar");
}

// (1/pi) int g(w) Im[d ln G / dw] dw; the weight has unit mass and collapses to
// delta(w - omega_k) in the free limit.
double phase_average(const ResponseEvaluator& ev, const numerics::RealFn& g) {
    if (ev.is_free()) return g(ev.mode().omega_k);
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    auto integrand = [&](double w) {
        const double weight = ((wk2 * ev.model().dchi(w) + 2.0 * w) * ev.greens(w)).imag();
        return weight == 0.0 ? 0.0 : g(w) * weight;
    };
    return ev.integrate_spectral(integrand).value / pi;
}

// ln sinh(x) without overflow.
double log_sinh(double x) {
    if (x > 20.0) return x - ln2 + std::log1p(-std::exp(-2.0 * x));
    return std::log(std::sinh(x));
}

double default_T_ref(const ResponseEvaluator& ev, double kB) {
    double scale = ev.mode().omega_k;
    if (!ev.is_free())
        for (double p : ev.model().feature_points()) scale = std::max(scale, p);
    return 100.0 * scale * ev.hbar() / kB;
}

} // namespace

double energy_system(const ResponseEvaluator& ev, const ThermalState& state) {
    check_hbar(ev, state);
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    const auto r = ev.integrate_im_greens([&](double w) { return (w * w + wk2) * state.coth_half(w); });
    return state.hbar() / (2.0 * pi) * r.value;
}

double energy_interaction(const ResponseEvaluator& ev, const ThermalState& state) {
    check_hbar(ev, state);
    if (ev.is_free()) return 0.0;
    // omega_k^2 Im(chi G) = (omega_k^2 - w^2) Im G, since omega_k^2 chi = omega_k^2 - w^2 - Lambda.
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    const auto r = ev.integrate_im_greens([&](double w) { return (wk2 - w * w) * state.coth_half(w); });
    return -state.hbar() / pi * r.value;
}

double energy_reservoir_excess(const ResponseEvaluator& ev, const ThermalState& state) {
    check_hbar(ev, state);
    if (ev.is_free()) return 0.0;
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    auto integrand = [&](double w) {
        const auto d = ev.chi(w) + w * ev.model().dchi(w);
        const double im = (d * ev.greens(w)).imag();
        return im == 0.0 ? 0.0 : wk2 * state.coth_half(w) * im;
    };
    return state.hbar() / (2.0 * pi) * ev.integrate_spectral(integrand).value;
}

double internal_energy_mean_force(const ResponseEvaluator& ev, const ThermalState& state) {
    return energy_system(ev, state) + energy_interaction(ev, state) + energy_reservoir_excess(ev, state);
}

double internal_energy_spectral(const ResponseEvaluator& ev, const ThermalState& state) {
    check_hbar(ev, state);
    return phase_average(ev, [&](double w) { return 0.5 * state.hbar() * w * state.coth_half(w); });
}

namespace {

double free_energy_closed(const ResponseEvaluator& ev, const ThermalState& state) {
    check_hbar(ev, state);
    if (state.is_vacuum()) throw Error(ErrorKind::InvalidInput, "free energy requires T > 0");
    const double x = 0.5 * state.beta() * state.hbar();
    return state.kT() * (phase_average(ev, [&](double w) { return log_sinh(x * w); }) + ln2);
}

double free_energy_integrated(const ResponseEvaluator& ev, const ThermalState& state,
                              const ThermoIntegrationSpec& ti) {
    check_hbar(ev, state);
    if (state.is_vacuum()) throw Error(ErrorKind::InvalidInput, "free energy requires T > 0");
    const double kB = state.kB();
    const double hbar = state.hbar();
    const double wk = ev.mode().omega_k;

    // Classical plateau: U -> kT + hbar^2 omega_k^2 / (12 kT) with no higher-order residue.
    double T_ref = ti.T_ref > 0.0 ? ti.T_ref : default_T_ref(ev, kB);
    double U_ref = 0.0;
    for (;;) {
        if (T_ref > ti.T_max)
            throw Error(ErrorKind::ReferenceLimitUnreached,
                        "classical plateau not reached below T_max = " + std::to_string(ti.T_max));
        const ThermalState ref(T_ref, hbar, kB);
        U_ref = internal_energy_spectral(ev, ref);
        const double kT = ref.kT();
        if (std::abs(U_ref - kT - hbar * hbar * wk * wk / (12.0 * kT)) <= ti.plateau_tol * kT) break;
        T_ref *= 2.0;
    }

    const double kT_ref = kB * T_ref;
    const double omega_static = ev.static_frequency();
    const double F_ref = kT_ref * std::log(hbar * omega_static / kT_ref) + hbar * hbar * wk * wk / (24.0 * kT_ref);
    const double beta_ref = 1.0 / kT_ref;

    // d(beta F)/d beta = U, integrated in s = ln beta.
    const double s0 = std::log(beta_ref);
    const double s1 = std::log(state.beta());
    auto integrand = [&](double s) {
        const double beta = std::exp(s);
        return beta * internal_energy_spectral(ev, ThermalState(1.0 / (kB * beta), hbar, kB));
    };
    numerics::QuadratureSpec outer = ev.quadrature();
    outer.rel_tol = std::max(outer.rel_tol * 10.0, 1e-10);
    double integral = 0.0;
    if (s1 > s0)
        integral = numerics::integrate(integrand, s0, s1, outer).value;
    else if (s1 < s0)
        integral = -numerics::integrate(integrand, s1, s0, outer).value;
    return (beta_ref * F_ref + integral) / state.beta();
}

} // namespace

double free_energy_mean_force(const ResponseEvaluator& ev, const ThermalState& state, FreeEnergyMethod method,
                              const ThermoIntegrationSpec& ti) {
    return method == FreeEnergyMethod::closed_form ? free_energy_closed(ev, state)
                                                   : free_energy_integrated(ev, state, ti);
}

double entropy_mean_force(const ResponseEvaluator& ev, const ThermalState& state, EntropyMethod method) {
    check_hbar(ev, state);
    if (state.is_vacuum()) throw Error(ErrorKind::InvalidInput, "entropy requires T > 0");
    const double kB = state.kB();
    const double hbar = state.hbar();
    const double T = state.T();

    if (method == EntropyMethod::finite_difference) {
        numerics::DiffSpec spec;
        spec.domain_min = 0.0;
        spec.x_floor = T;
        spec.noise = ev.quadrature().rel_tol;
        auto F = [&](double t) { return free_energy_closed(ev, ThermalState(t, hbar, kB)); };
        return -numerics::differentiate(F, T, spec).value;
    }

    // Printed integrand against Im B with B = w d ln G/dw + 1 (the d w measure as printed).
    const double x = 0.5 * state.beta() * hbar;
    auto bracket = [&](double w) {
        return state.coth_half(w) / T - 2.0 * kB / (hbar * w) * log_sinh(x * w);
    };
    const double integral = pi * phase_average(ev, [&](double w) { return w * bracket(w); });
    const double tail = method == EntropyMethod::closed_form ? state.kT() * ln2 : kB * ln2;
    return state.kT() / pi * integral + tail;
}

ThermoReport thermo_point(const ResponseEvaluator& ev, const ThermalState& state, const ThermoIntegrationSpec& ti) {
    ThermoReport r;
    r.mode = ev.mode();
    r.T = state.T();
    try {
        r.E_system = energy_system(ev, state);
        r.E_interaction = energy_interaction(ev, state);
        r.E_reservoir_excess = energy_reservoir_excess(ev, state);
        r.U_star = r.E_system + r.E_interaction + r.E_reservoir_excess;
        r.F_closed = free_energy_mean_force(ev, state, FreeEnergyMethod::closed_form);
        r.F_star = free_energy_mean_force(ev, state, FreeEnergyMethod::thermo_integration, ti);
        r.S_star = entropy_mean_force(ev, state, EntropyMethod::finite_difference);
        r.S_closed = entropy_mean_force(ev, state, EntropyMethod::closed_form);
        r.S_closed_alt = entropy_mean_force(ev, state, EntropyMethod::closed_form_alt);

        r.consistency.S_from_dF = r.S_star;
        r.consistency.U_from_GibbsHelmholtz = r.F_closed + state.T() * r.S_star;
        const double dev_u = std::abs(r.consistency.U_from_GibbsHelmholtz - r.U_star) / std::abs(r.U_star);
        const double dev_f = std::abs(r.F_closed - r.F_star) / std::max(std::abs(r.F_star), state.kT() * 1e-12);
        r.consistency.max_rel_dev = std::max(dev_u, dev_f);
    } catch (const Error& e) {
        r.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    return r;
}

std::vector<ThermoReport> thermo_sweep(const ResponseEvaluator& ev, const std::vector<double>& T_grid, double kB,
                                       const ThermoIntegrationSpec& ti, int threads) {
    for (std::size_t i = 0; i < T_grid.size(); ++i) {
        if (!(T_grid[i] > 0.0)) throw Error(ErrorKind::InvalidInput, "temperature grid must be positive");
        if (i > 0 && !(T_grid[i] > T_grid[i - 1]))
            throw Error(ErrorKind::InvalidInput, "temperature grid must be increasing");
    }
    std::vector<ThermoReport> out(T_grid.size());
    auto work = [&](std::size_t i) { out[i] = thermo_point(ev, ThermalState(T_grid[i], ev.hbar(), kB), ti); };

    const std::size_t n_threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, T_grid.size()));
    if (n_threads == 1) {
        for (std::size_t i = 0; i < T_grid.size(); ++i) work(i);
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < T_grid.size(); i += n_threads) work(i);
        });
    for (auto& th : pool) th.join();
    return out;
}

ModeSum mode_sum(const SusceptibilityModel& model, double m, const std::vector<double>& k_grid,
                 const ThermalState& state, const ThermoIntegrationSpec& ti, double epsilon) {
    if (k_grid.size() < 2) throw Error(ErrorKind::InvalidInput, "mode_sum needs at least two k values");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] >= 0.0)) throw Error(ErrorKind::InvalidInput, "mode_sum k grid must be non-negative");
        if (i > 0 && !(k_grid[i] > k_grid[i - 1]))
            throw Error(ErrorKind::InvalidInput, "mode_sum k grid must be increasing");
    }
    ModeSum out;
    out.k_cutoff = k_grid.back();
    for (double k : k_grid) {
        const ResponseEvaluator ev(model, ModeContext::make(k, m), state.hbar(), epsilon);
        out.per_mode.push_back(thermo_point(ev, state, ti));
        if (out.per_mode.back().error)
            throw Error(ErrorKind::NonConvergence, "mode_sum at k = " + std::to_string(k) + ": " + *out.per_mode.back().error);
    }
    for (std::size_t i = 0; i + 1 < k_grid.size(); ++i) {
        const double w = 0.5 * (k_grid[i + 1] - k_grid[i]);
        const auto& a = out.per_mode[i];
        const auto& b = out.per_mode[i + 1];
        out.U_star += w * (a.U_star + b.U_star);
        out.F_star += w * (a.F_star + b.F_star);
        out.F_closed += w * (a.F_closed + b.F_closed);
        out.S_star += w * (a.S_star + b.S_star);
    }
    return out;
}

} // namespace dissfield
