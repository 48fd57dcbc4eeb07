// Acceptance suite: one PASS/FAIL line per criterion at its stated tolerance.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dissfield/correlators.hpp"
#include "dissfield/langevin.hpp"
#include "dissfield/thermo.hpp"

using namespace dissfield;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

ResponseEvaluator drude(double eta, double omega_k) {
    return {SusceptibilityModel(DrudeLorentz{eta, 1.0, 0.1}), ModeContext::with_frequency(omega_k)};
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. Kramers-Kronig closure
Outcome kk_closure() {
    Outcome o;
    const auto grid = linspace(0.0, 10.0, 200);
    for (double eta : {0.01, 0.1, 0.5}) {
        const auto r = kk_report(SusceptibilityModel(DrudeLorentz{eta, 1.0, 0.1}), grid);
        o.pass = o.pass && r.max_rel_dev <= 1e-3;
        o.detail += "eta=" + num(eta) + " max_rel=" + num(r.max_rel_dev) + "; ";
    }
    return o;
}

// 2. Commutator sum rule
Outcome sum_rule() {
    Outcome o;
    double worst = 0.0;
    for (double wk : {0.5, 1.0, 2.0})
        for (double eta : {0.01, 0.1, 0.5}) {
            const double dev = std::abs(commutator_sum_rule(drude(eta, wk)).value - 1.0);
            worst = std::max(worst, dev);
        }
    o.pass = worst <= 1e-3;
    o.detail = "max |sum - 1| = " + num(worst) + " over 9 (omega_k, eta) pairs";
    return o;
}

// 3. Algebraic identities
Outcome identities() {
    double lambda_printed = 0.0, lambda_lib = 0.0, im_g = 0.0, coupling = 0.0, coth = 0.0;
    for (double wk : {0.5, 1.0, 2.0})
        for (double eta : {0.01, 0.1, 0.5}) {
            const auto ev = drude(eta, wk);
            for (double w : linspace(0.01, 10.0, 1000)) {
                const auto G = ev.greens(w);
                // Denominator as written in G = -1 / (w^2 - omega_k^2 (1 - chi)).
                const auto denom = w * w - wk * wk * (1.0 - ev.chi(w));
                lambda_printed = std::max(lambda_printed, std::abs(denom * G + 1.0));
                lambda_lib = std::max(lambda_lib, std::abs(ev.lambda(w) * G - 1.0));
                const double f = ev.coupling()(w);
                im_g = std::max(im_g, rel(G.imag(), pi * f * f / (2.0 * w) * std::norm(G)));
                const double im_back = pi * f * f / (2.0 * w * wk * wk);
                coupling = std::max(coupling, rel(im_back, ev.model().im_chi(w)));
            }
        }
    for (double T : {0.01, 0.2, 1.0, 5.0, 100.0}) {
        const ThermalState s(T);
        for (double w : linspace(0.01, 20.0, 500))
            coth = std::max(coth, rel(2.0 * bose_occupation(s, w) + 1.0, s.coth_half(w)));
    }
    Outcome o;
    o.pass = lambda_printed <= 1e-10 && lambda_lib <= 1e-10 && im_g <= 1e-10 && coupling <= 4.0 * std::numeric_limits<double>::epsilon() && coth <= 1e-12;
    o.detail = "|D G + 1| = " + num(lambda_printed) + ", |Lambda G - 1| = " + num(lambda_lib) +
               ", ImG rel = " + num(im_g) + ", f^2 round trip rel = " + num(coupling) +
               ", 2N+1 vs coth rel = " + num(coth);
    return o;
}

// 4. Free-oscillator limit
Outcome free_limit() {
    Outcome o;
    const auto ev = drude(0.001, 1.0);
    const SeparationGrid origin{{0.0}, {0.0}};
    const double vac = thermal_corr_phi(ev, ThermalState::vacuum(), origin)[0].value;
    const double vac_dev = rel(vac, 0.5);
    o.pass = vac_dev <= 2e-3;
    o.detail = "vacuum <phi^2> rel=" + num(vac_dev) + "; ";
    for (double T : {0.2, 1.0, 5.0}) {
        const ThermalState s(T);
        const double x = 0.5 / T;
        const double U_free = 0.5 / std::tanh(x);
        const double F_free = T * std::log(2.0 * std::sinh(x));
        const auto r = thermo_point(ev, s);
        const double phi2 = thermal_corr_phi(ev, s, origin)[0].value;
        const double du = rel(r.U_star, U_free), df = rel(r.F_star, F_free), dp = rel(phi2, U_free);
        o.pass = o.pass && du <= 2e-3 && df <= 2e-3 && dp <= 2e-3;
        o.detail += "T=" + num(T) + " U*=" + num(du) + " F*=" + num(df) + " <phi^2>=" + num(dp) + "; ";
    }
    return o;
}

// 5. Gibbs-Helmholtz consistency
Outcome gibbs_helmholtz() {
    Outcome o;
    const int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    double worst = 0.0, s_gap = 0.0, s_gap_alt = 0.0;
    for (double eta : {0.01, 0.1}) {
        const auto ev = drude(eta, 1.0);
        for (const auto& r : thermo_sweep(ev, linspace(0.2, 5.0, 9), 1.0, {}, threads)) {
            if (r.error) {
                o.pass = false;
                o.detail += "error at T=" + num(r.T) + ": " + *r.error + "; ";
                continue;
            }
            worst = std::max(worst, r.consistency.max_rel_dev);
            s_gap = std::max(s_gap, std::abs(r.S_closed - r.S_star));
            s_gap_alt = std::max(s_gap_alt, std::abs(r.S_closed_alt - r.S_star));
        }
    }
    o.pass = o.pass && worst <= 1e-2;
    o.detail += "max consistency dev = " + num(worst) + " (asserted); reported only: max |S_closed - S_fd| = " +
                num(s_gap) + ", with kB ln2 variant = " + num(s_gap_alt);
    return o;
}

// 6. Classical fluctuation-dissipation closure
Outcome fdt_closure() {
    LangevinConfig cfg;
    cfg.T = 10.0;
    cfg.dt = 0.05;
    cfg.t_max = 200.0 / 0.1;
    cfg.burn_in = 200.0;
    cfg.n_traj = 10000;
    cfg.seed = 12345;
    cfg.acf_max_lag = 50.0;
    cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const auto ev = drude(0.1, 1.0);
    const auto st = run_ensemble(ev, cfg);
    const auto cmp = fdt_compare(ev, cfg, st);
    Outcome o;
    o.pass = cmp.pass && st.failures == 0;
    int failed = 0;
    double worst = 0.0;
    for (const auto& c : cmp.checks) {
        if (!c.pass) ++failed;
        if (c.stderr_) worst = std::max(worst, std::abs(c.simulated - c.predicted) / *c.stderr_);
    }
    o.detail = "var_phi " + num(cmp.checks[0].simulated) + " vs " + num(cmp.checks[0].predicted) + ", var_pi " +
               num(cmp.checks[1].simulated) + " vs " + num(cmp.checks[1].predicted) + ", " +
               std::to_string(cmp.checks.size()) + " checks, " + std::to_string(failed) +
               " outside 3 sigma, worst " + num(worst) + " sigma";
    return o;
}

// 7. Coherent-state reductions
Outcome coherent() {
    const auto ev = drude(0.1, 1.0);
    const SeparationGrid grid{{0.0, 0.5, 1.0, 3.0}, {0.0, 0.5, 2.0}};
    double red = 0.0;
    for (const auto& state : {ThermalState::vacuum(), ThermalState(1e-3)}) {
        const auto tp = thermal_corr_phi(ev, state, grid), tq = thermal_corr_pi(ev, state, grid);
        const auto cp = coherent_corr_phi(ev, CoherentAmplitude::zero(), grid);
        const auto cq = coherent_corr_pi(ev, CoherentAmplitude::zero(), grid);
        for (std::size_t i = 0; i < tp.size(); ++i) {
            red = std::max(red, std::abs(cp[i].value - tp[i].value) / std::abs(tp[0].value));
            red = std::max(red, std::abs(cq[i].value - tq[i].value) / std::abs(tq[0].value));
        }
    }
    const std::complex<double> c1{0.3, -0.2}, c2{-0.7, 0.45}, a{1.7, 0.4}, b{-0.6, 2.1};
    const CoherentAmplitude A(CoherentAmplitude::Constant{c1}), B(CoherentAmplitude::Constant{c2}),
        AB(CoherentAmplitude::Constant{a * c1 + b * c2});
    const CoherentAmplitude packet(CoherentAmplitude::GaussianPacket{0.8, 1.0, 0.2, 0.3});
    double lin = 0.0;
    for (double w : linspace(0.05, 5.0, 200)) {
        for (auto expect : {coherent_expectation_phi, coherent_expectation_pi}) {
            const double s = 2.5;
            const double sl = expect(ev, packet.scaled(s), w), sr = s * expect(ev, packet, w);
            lin = std::max(lin, std::abs(sl - sr) / (std::abs(sr) + 1e-300));
        }
        // <phi> + i <pi> / w is proportional to f G C, hence complex-linear in C.
        auto pair = [&](const CoherentAmplitude& amp) {
            return std::complex<double>(coherent_expectation_phi(ev, amp, w), coherent_expectation_pi(ev, amp, w) / w);
        };
        const auto lhs = pair(AB), rhs = a * pair(A) + b * pair(B);
        lin = std::max(lin, std::abs(lhs - rhs) / (std::abs(a * pair(A)) + std::abs(b * pair(B))));
    }
    Outcome o;
    o.pass = red <= 1e-6 && lin <= 1e-12;
    o.detail = "C=0 vs T->0 thermal rel = " + num(red) + ", linearity rel = " + num(lin);
    return o;
}

// 8. Determinism of CLI outputs
std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() == "run_report.json") continue;
        std::ifstream in(e.path(), std::ios::binary);
        files[e.path().filename().string()] = {std::istreambuf_iterator<char>(in), {}};
    }
    return files;
}

Outcome determinism() {
    const fs::path work = fs::current_path() / "acceptance_determinism";
    fs::remove_all(work);
    fs::create_directories(work);
    const fs::path langevin = work / "langevin.ini";
    std::ofstream(langevin) << "[model]\nkind = drude_lorentz\neta = 0.1\nomega0 = 1\ngamma = 0.1\n[mode]\nk = 1\n"
                               "[langevin]\nT = 10\nt_max = 400\nburn_in = 50\nn_traj = 16\nseed = 7\n"
                               "acf_max_lag = 10\ndump_trajectories = 2\n[threads]\ncount = 3\n";
    const std::vector<std::pair<std::string, fs::path>> runs{
        {"kk-check", fs::path(DISSFIELD_CONFIGS) / "kk_drude.ini"},
        {"greens", fs::path(DISSFIELD_CONFIGS) / "greens_drude.ini"},
        {"thermo", fs::path(DISSFIELD_CONFIGS) / "thermo_weak.ini"},
        {"correlate", fs::path(DISSFIELD_CONFIGS) / "correlate_coherent.ini"},
        {"langevin", langevin},
    };
    Outcome o;
    std::size_t compared = 0;
    for (const auto& [cmd, cfg] : runs) {
        std::map<std::string, std::string> first;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = work / (cmd + "_" + std::to_string(rep));
            const std::string line = std::string(DISSFIELD_CLI) + " " + cmd + " --config " + cfg.string() +
                                     " --out " + out.string() + " >/dev/null 2>&1";
            const int rc = std::system(line.c_str());
            if (!WIFEXITED(rc) || WEXITSTATUS(rc) >= 2) {
                o.pass = false;
                o.detail += cmd + " exited with " + std::to_string(WEXITSTATUS(rc)) + "; ";
                break;
            }
            auto files = snapshot(out);
            if (rep == 0) {
                first = std::move(files);
            } else if (files != first || first.empty()) {
                o.pass = false;
                o.detail += cmd + " outputs differ; ";
            } else {
                compared += files.size();
            }
        }
    }
    o.detail += std::to_string(compared) + " files byte-identical across repeated runs (run_report.json excluded)";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Kramers-Kronig closure (max rel dev <= 1e-3)", kk_closure},
        {"commutator sum rule (1 +- 1e-3)", sum_rule},
        {"algebraic identities (1e-10 / exact to 4 ulp / 1e-12)", identities},
        {"free-oscillator limit (0.2%)", free_limit},
        {"Gibbs-Helmholtz consistency (1%)", gibbs_helmholtz},
        {"classical fluctuation-dissipation closure (3 sigma)", fdt_closure},
        {"coherent-state reductions (1e-6 / machine precision)", coherent},
        {"CLI determinism (byte-identical)", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s criterion %zu: %s | %s | %.1f s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
