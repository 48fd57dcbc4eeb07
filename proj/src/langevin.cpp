// langevin.cpp — spectral noise synthesis, GLE integrators and ensemble statistics

#include "dissfield/langevin.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "dissfield/error.hpp"
#include "dissfield/rng.hpp"

namespace dissfield {

using std::numbers::pi;

std::int64_t LangevinConfig::n_steps() const { return std::llround(t_max / dt); }

void LangevinConfig::validate(const ResponseEvaluator& ev) const {
    if (!(T > 0.0) || !(kB > 0.0)) throw Error(ErrorKind::InvalidInput, "langevin: T and kB must be positive");
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidInput, "langevin: dt must be positive");
    if (!(burn_in > 0.0) || !(t_max > burn_in))
        throw Error(ErrorKind::InvalidInput, "langevin: requires t_max > burn_in > 0");
    if (n_traj < 1) throw Error(ErrorKind::InvalidInput, "langevin: n_traj must be >= 1");
    if (dt * ev.mode().omega_k > 0.1 + 1e-12)
        throw Error(ErrorKind::InvalidInput, "langevin: dt * omega_k must not exceed 0.1");
    if (!(acf_stride > 0.0) || acf_max_lag < 0.0)
        throw Error(ErrorKind::InvalidInput, "langevin: acf_stride must be positive and acf_max_lag non-negative");
    if (acf_max_lag > t_max - burn_in)
        throw Error(ErrorKind::InvalidInput, "langevin: acf_max_lag exceeds the post-burn-in window");
}

namespace {

// std::complex<double> is layout compatible with fftw_complex.
fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Plans are created once per size and shared; execution goes through the new-array
// interface, which is thread safe.
fftw_plan c2r_plan(int n) {
    static std::map<int, fftw_plan> plans;
    std::lock_guard lock(plan_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    std::vector<std::complex<double>> in(n / 2 + 1);
    std::vector<double> out(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(n, as_fftw(in.data()), out.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(n, p);
    return p;
}

std::int64_t next_pow2(std::int64_t n) {
    std::int64_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Mode amplitudes A_j = sqrt(S(w_j) dw / pi) on w_j = j dw; j = 0 carries half weight.
class NoiseSynthesizer {
public:
    NoiseSynthesizer(const ResponseEvaluator& ev, const LangevinConfig& cfg)
        : n_steps_(cfg.n_steps()), seed_(cfg.seed), dt_(cfg.dt) {
        const auto& model = ev.model();
        const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
        free_ = ev.is_free();
        target_variance_ = free_ ? 0.0 : cfg.kT() * wk2 * model.static_chi();
        if (free_) return;
        const double width = model.spectral_width();
        if (cfg.t_max < 10.0 / width)
            throw Error(ErrorKind::SpectrumUnresolvable,
                        "noise spectrum feature of width " + std::to_string(width) +
                            " needs t_max >= " + std::to_string(10.0 / width));
        n_fft_ = next_pow2(2 * (n_steps_ + 1));
        if (n_fft_ > (std::int64_t{1} << 30)) throw Error(ErrorKind::InvalidInput, "langevin: horizon too long");
        const double dw = 2.0 * pi / (static_cast<double>(n_fft_) * dt_);
        amplitude_.resize(n_fft_ / 2);
        for (std::int64_t j = 0; j < n_fft_ / 2; ++j) {
            double s;
            if (j == 0) {
                const double h = 1e-6 * dw;
                s = 2.0 * cfg.kT() * wk2 * model.im_chi(h) / h;
            } else {
                const double w = j * dw;
                s = 2.0 * cfg.kT() * wk2 * model.im_chi(w) / w;
            }
            if (s < 0.0) throw Error(ErrorKind::NegativeImChi, "noise spectrum is negative");
            amplitude_[j] = std::sqrt(s * dw / pi * (j == 0 ? 0.5 : 1.0));
        }
        plan_ = c2r_plan(static_cast<int>(n_fft_));
    }

    NoiseRealization sample(std::uint64_t traj) const {
        NoiseRealization out;
        out.dt = dt_;
        out.samples.assign(n_steps_ + 1, 0.0);
        out.spectrum_check.target_variance = target_variance_;
        if (free_) return out;

        const rng::Stream stream(seed_, traj);
        std::vector<std::complex<double>> spec(n_fft_ / 2 + 1);
        for (std::int64_t j = 0; j < n_fft_ / 2; ++j) {
            const auto [a, b] = stream.normal_pair(static_cast<std::uint32_t>(j));
            spec[j] = j == 0 ? std::complex<double>(amplitude_[0] * a, 0.0)
                             : std::complex<double>(0.5 * amplitude_[j] * a, -0.5 * amplitude_[j] * b);
        }
        std::vector<double> series(n_fft_);
        fftw_execute_dft_c2r(plan_, as_fftw(spec.data()), series.data());

        double sum2 = 0.0;
        for (std::int64_t n = 0; n <= n_steps_; ++n) {
            out.samples[n] = series[n];
            sum2 += series[n] * series[n];
        }
        out.spectrum_check.sample_variance = sum2 / static_cast<double>(n_steps_ + 1);
        return out;
    }

private:
    std::int64_t n_steps_;
    std::uint64_t seed_;
    double dt_;
    bool free_{false};
    double target_variance_{0.0};
    std::int64_t n_fft_{0};
    std::vector<double> amplitude_;
    fftw_plan plan_{nullptr};
};

// Kernel ODE  m'' + gamma m' + w0^2 m = eta w0^2 phi  whose impulse response is chi(t).
struct AuxParameters {
    double eta;
    double omega0;
    double gamma;
};

std::optional<AuxParameters> aux_parameters(const SusceptibilityModel& model) {
    if (const auto* d = std::get_if<DrudeLorentz>(&model.kind())) return AuxParameters{d->eta, d->omega0, d->gamma};
    // (eta/2)/(1 - i w/wc)^2 is the critically damped Drude-Lorentz kernel.
    if (const auto* o = std::get_if<Ohmic>(&model.kind()))
        return AuxParameters{0.5 * o->eta, o->omega_c, 2.0 * o->omega_c};
    return std::nullopt;
}

// exp(M dt) for the augmented state (m, m', phi(t_n + s), phi_{n+1} - phi_n); phi is
// linear across the step, so the propagation is exact.
Eigen::Matrix4d aux_propagator(const AuxParameters& p, double dt) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    M(0, 1) = 1.0;
    M(1, 0) = -p.omega0 * p.omega0;
    M(1, 1) = -p.gamma;
    M(1, 2) = p.eta * p.omega0 * p.omega0;
    M(2, 3) = 1.0 / dt;
    return (M * dt).exp();
}

class InstabilityGuard {
public:
    InstabilityGuard(double wk2, double kT, InitialData init, double dt)
        : wk2_(wk2), dt_(dt), limit_(1e6 * std::max(kT, energy(init.phi, init.phidot))) {}
    void check(double phi, double v, std::int64_t step) const {
        const double e = energy(phi, v);
        if (!(e <= limit_))
            throw Error(ErrorKind::Instability, "energy exceeded 1e6 * max(kT, E0) at step " + std::to_string(step) +
                                                    " with dt = " + std::to_string(dt_) + "; reduce dt");
    }

private:
    double energy(double phi, double v) const { return 0.5 * v * v + 0.5 * wk2_ * phi * phi; }
    double wk2_;
    double dt_;
    double limit_;
};

} // namespace

NoiseRealization sample_noise(const ResponseEvaluator& ev, const LangevinConfig& cfg, std::uint64_t traj_index) {
    cfg.validate(ev);
    return NoiseSynthesizer(ev, cfg).sample(traj_index);
}

Trajectory integrate_gle(const ResponseEvaluator& ev, const LangevinConfig& cfg, const NoiseRealization& noise,
                         MemoryMethod method, InitialData init) {
    const std::int64_t n = cfg.n_steps();
    if (static_cast<std::int64_t>(noise.samples.size()) < n + 1 || noise.dt != cfg.dt)
        throw Error(ErrorKind::InvalidInput, "integrate_gle: noise does not cover [0, t_max] at step dt");
    const double dt = cfg.dt;
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    const auto aux = ev.is_free() ? std::nullopt : aux_parameters(ev.model());
    if (method == MemoryMethod::automatic) method = aux || ev.is_free() ? MemoryMethod::auxiliary : MemoryMethod::convolution;
    if (method == MemoryMethod::auxiliary && !aux && !ev.is_free())
        throw Error(ErrorKind::InvalidInput, "integrate_gle: model " + ev.model().name() + " has no auxiliary form");

    Trajectory tr;
    tr.dt = dt;
    tr.phi.resize(n + 1);
    tr.phidot.resize(n + 1);
    tr.phi[0] = init.phi;
    tr.phidot[0] = init.phidot;
    const InstabilityGuard guard(wk2, cfg.kT(), init, dt);
    const auto& zeta = noise.samples;

    if (method == MemoryMethod::auxiliary) {
        Eigen::Matrix4d E = Eigen::Matrix4d::Zero();
        if (aux) E = aux_propagator(*aux, dt);
        const bool coupled = aux.has_value();
        double m = 0.0, mdot = 0.0;
        double phi = init.phi, v = init.phidot;
        double a = -wk2 * phi + zeta[0];
        for (std::int64_t i = 0; i < n; ++i) {
            const double phi_next = phi + v * dt + 0.5 * a * dt * dt;
            if (coupled) {
                const double dphi = phi_next - phi;
                const double m_next = E(0, 0) * m + E(0, 1) * mdot + E(0, 2) * phi + E(0, 3) * dphi;
                const double mdot_next = E(1, 0) * m + E(1, 1) * mdot + E(1, 2) * phi + E(1, 3) * dphi;
                m = m_next;
                mdot = mdot_next;
            }
            const double a_next = -wk2 * phi_next + wk2 * m + zeta[i + 1];
            v += 0.5 * (a + a_next) * dt;
            phi = phi_next;
            a = a_next;
            tr.phi[i + 1] = phi;
            tr.phidot[i + 1] = v;
            guard.check(phi, v, i + 1);
        }
        return tr;
    }

    // Trapezoidal memory with chi(0) = 0: m_n = dt [chi(t_n) phi_0 / 2 + sum_{0<j<n} chi(t_n - t_j) phi_j].
    std::vector<double> kernel(n + 1, 0.0);
    if (!ev.is_free()) {
        const bool closed = ev.model().has_closed_form();
        for (std::int64_t i = 1; i <= n; ++i)
            kernel[i] = closed ? chi_time_closed(ev.model(), i * dt) : chi_time(ev.coupling(), i * dt).value;
    }
    double phi = init.phi, v = init.phidot;
    double a = -wk2 * phi + zeta[0];
    for (std::int64_t i = 0; i < n; ++i) {
        const double phi_next = phi + v * dt + 0.5 * a * dt * dt;
        tr.phi[i + 1] = phi_next;
        const std::int64_t k = i + 1;
        double m = 0.5 * kernel[k] * tr.phi[0];
        for (std::int64_t j = 1; j < k; ++j) m += kernel[k - j] * tr.phi[j];
        m *= dt;
        const double a_next = -wk2 * phi_next + wk2 * m + zeta[k];
        v += 0.5 * (a + a_next) * dt;
        phi = phi_next;
        a = a_next;
        tr.phidot[k] = v;
        guard.check(phi, v, k);
    }
    return tr;
}

namespace {

struct TrajectoryRecord {
    bool ok{false};
    std::string error;
    double mean_phi{0.0};
    double phi2{0.0};
    double v2{0.0};
    double half1{0.0};
    double half2{0.0};
    std::vector<double> acf;
};

TrajectoryRecord reduce_trajectory(const Trajectory& tr, std::int64_t first, std::int64_t stride,
                                   std::int64_t n_lags) {
    TrajectoryRecord r;
    const std::int64_t last = static_cast<std::int64_t>(tr.phi.size()) - 1;
    const std::int64_t count = last - first + 1;
    const std::int64_t mid = first + count / 2;
    double s = 0.0, s2 = 0.0, v2 = 0.0, h1 = 0.0, h2 = 0.0;
    for (std::int64_t i = first; i <= last; ++i) {
        const double p = tr.phi[i];
        s += p;
        s2 += p * p;
        v2 += tr.phidot[i] * tr.phidot[i];
        (i < mid ? h1 : h2) += p * p;
    }
    r.mean_phi = s / count;
    r.phi2 = s2 / count;
    r.v2 = v2 / count;
    r.half1 = h1 / (mid - first);
    r.half2 = h2 / (last - mid + 1);
    r.acf.resize(n_lags);
    for (std::int64_t l = 0; l < n_lags; ++l) {
        const std::int64_t lag = l * stride;
        double acc = 0.0;
        for (std::int64_t i = first; i + lag <= last; ++i) acc += tr.phi[i] * tr.phi[i + lag];
        r.acf[l] = acc / static_cast<double>(count - lag);
    }
    r.ok = true;
    return r;
}

struct Moments {
    double mean{0.0};
    std::optional<double> stderr_;
};

template <class Get>
Moments moments(const std::vector<TrajectoryRecord>& recs, Get get) {
    double sum = 0.0;
    std::int64_t n = 0;
    for (const auto& r : recs)
        if (r.ok) {
            sum += get(r);
            ++n;
        }
    Moments m;
    if (n == 0) return m;
    m.mean = sum / n;
    if (n >= 2) {
        double ss = 0.0;
        for (const auto& r : recs)
            if (r.ok) {
                const double d = get(r) - m.mean;
                ss += d * d;
            }
        m.stderr_ = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
    }
    return m;
}

} // namespace

EnsembleStats run_ensemble(const ResponseEvaluator& ev, const LangevinConfig& cfg) {
    cfg.validate(ev);
    const NoiseSynthesizer synth(ev, cfg);
    const std::int64_t first = static_cast<std::int64_t>(std::ceil(cfg.burn_in / cfg.dt - 1e-9));
    const std::int64_t stride = std::max<std::int64_t>(1, std::llround(cfg.acf_stride / cfg.dt));
    const std::int64_t n_lags = static_cast<std::int64_t>(std::floor(cfg.acf_max_lag / (stride * cfg.dt) + 1e-9)) + 1;

    std::vector<TrajectoryRecord> recs(cfg.n_traj);
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= cfg.n_traj) return;
            try {
                const auto noise = synth.sample(static_cast<std::uint64_t>(i));
                const auto tr = integrate_gle(ev, cfg, noise, cfg.method);
                recs[i] = reduce_trajectory(tr, first, stride, n_lags);
            } catch (const Error& e) {
                recs[i].ok = false;
                recs[i].error = e.what();
            }
        }
    };
    const int n_threads = static_cast<int>(std::clamp<std::int64_t>(cfg.threads, 1, cfg.n_traj));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    EnsembleStats st;
    for (const auto& r : recs) {
        if (r.ok) {
            ++st.n_traj;
        } else {
            if (st.failures == 0) st.warnings.push_back("trajectory failed: " + r.error);
            ++st.failures;
        }
    }
    if (st.n_traj == 0) throw Error(ErrorKind::Instability, "all trajectories failed; first: " + recs[0].error);
    if (st.failures > 0) st.warnings.push_back(std::to_string(st.failures) + " trajectories failed and were excluded");
    if (st.n_traj < 2) st.warnings.push_back("fewer than two trajectories: standard errors unavailable");

    const auto mean_phi = moments(recs, [](const auto& r) { return r.mean_phi; });
    const auto var_phi = moments(recs, [](const auto& r) { return r.phi2; });
    const auto var_pi = moments(recs, [](const auto& r) { return r.v2; });
    const auto h1 = moments(recs, [](const auto& r) { return r.half1; });
    const auto h2 = moments(recs, [](const auto& r) { return r.half2; });
    const auto hd = moments(recs, [](const auto& r) { return r.half1 - r.half2; });
    st.mean_phi = mean_phi.mean;
    st.stderr_mean_phi = mean_phi.stderr_;
    st.var_phi = var_phi.mean;
    st.stderr_var_phi = var_phi.stderr_;
    st.var_pi = var_pi.mean;
    st.stderr_var_pi = var_pi.stderr_;
    st.var_phi_first_half = h1.mean;
    st.var_phi_second_half = h2.mean;
    st.stderr_half_difference = hd.stderr_;
    for (std::int64_t l = 0; l < n_lags; ++l) {
        const auto m = moments(recs, [l](const auto& r) { return r.acf[l]; });
        st.acf_phi.push_back({static_cast<double>(l * stride) * cfg.dt, m.mean, m.stderr_});
    }
    return st;
}

FdtComparison fdt_compare(const ResponseEvaluator& ev, const LangevinConfig& cfg, const EnsembleStats& stats) {
    FdtComparison out;
    const double kT = cfg.kT();
    auto judge = [](FdtCheck& c) {
        if (!c.stderr_) {
            c.pass = false;
            return;
        }
        const double sigma = std::sqrt(*c.stderr_ * *c.stderr_ + c.quadrature_error * c.quadrature_error);
        c.pass = std::abs(c.simulated - c.predicted) <= 3.0 * sigma;
    };
    auto inv_w = [](double w) { return 1.0 / w; };

    {
        const auto q = ev.integrate_im_greens(inv_w);
        FdtCheck c{"var_phi", 0.0, stats.var_phi, 2.0 * kT / pi * q.value, stats.stderr_var_phi,
                   2.0 * kT / pi * q.error, false};
        judge(c);
        out.checks.push_back(c);
    }
    {
        FdtCheck c{"var_pi", 0.0, stats.var_pi, kT, stats.stderr_var_pi, 0.0, false};
        judge(c);
        out.checks.push_back(c);
    }
    for (const auto& p : stats.acf_phi) {
        const auto q = p.lag == 0.0 ? ev.integrate_im_greens(inv_w)
                                    : ev.oscillatory_im_greens(inv_w, p.lag, numerics::Trig::cosine);
        FdtCheck c{"acf_phi", p.lag, p.value, 2.0 * kT / pi * q.value, p.stderr_, 2.0 * kT / pi * q.error, false};
        judge(c);
        out.checks.push_back(c);
    }
    out.stationary = stats.stderr_half_difference &&
                     std::abs(stats.var_phi_first_half - stats.var_phi_second_half) <=
                         3.0 * *stats.stderr_half_difference;
    out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const auto& c) { return c.pass; });
    return out;
}

} // namespace dissfield
