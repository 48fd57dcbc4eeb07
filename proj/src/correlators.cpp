// correlators.cpp — thermal and coherent correlators on separation grids

#include "dissfield/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "dissfield/error.hpp"

namespace dissfield {

using numerics::QuadResult;
using numerics::Trig;
using std::numbers::pi;

CoherentAmplitude::CoherentAmplitude(Representation rep) : rep_(std::move(rep)) {
    if (const auto* g = std::get_if<GaussianPacket>(&rep_)) {
        if (!(g->width > 0.0) || !(g->center > 0.0))
            throw Error(ErrorKind::InvalidInput, "gaussian_packet needs center > 0 and width > 0");
    }
    if (const auto* t = std::get_if<Table>(&rep_)) {
        if (t->omega.size() != t->values.size() || t->omega.size() < 2)
            throw Error(ErrorKind::InvalidInput, "tabulated amplitude needs matching omega/value lists of length >= 2");
        for (std::size_t i = 1; i < t->omega.size(); ++i)
            if (!(t->omega[i] > t->omega[i - 1]))
                throw Error(ErrorKind::InvalidInput, "tabulated amplitude grid must be strictly increasing");
        for (const auto& v : t->values)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Error(ErrorKind::InvalidInput, "tabulated amplitude values must be finite");
    }
}

std::complex<double> CoherentAmplitude::operator()(double w) const {
    return std::visit(
        [w](const auto& r) -> std::complex<double> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return r.value;
            } else if constexpr (std::is_same_v<T, GaussianPacket>) {
                const double z = (w - r.center) / r.width;
                return std::polar(r.amplitude * std::exp(-0.5 * z * z), r.phase);
            } else {
                if (w < r.omega.front() || w > r.omega.back()) return {};
                const auto it = std::upper_bound(r.omega.begin(), r.omega.end(), w);
                const std::size_t i = std::min<std::size_t>(it - r.omega.begin(), r.omega.size() - 1);
                const double t = (w - r.omega[i - 1]) / (r.omega[i] - r.omega[i - 1]);
                return (1.0 - t) * r.values[i - 1] + t * r.values[i];
            }
        },
        rep_);
}

CoherentAmplitude CoherentAmplitude::scaled(std::complex<double> factor) const {
    return std::visit(
        [factor](const auto& r) -> CoherentAmplitude {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return CoherentAmplitude(Constant{r.value * factor});
            } else if constexpr (std::is_same_v<T, GaussianPacket>) {
                GaussianPacket g = r;
                g.amplitude *= std::abs(factor);
                g.phase += std::arg(factor);
                return CoherentAmplitude(g);
            } else {
                Table t = r;
                for (auto& v : t.values) v *= factor;
                return CoherentAmplitude(t);
            }
        },
        rep_);
}

std::string CoherentAmplitude::name() const {
    switch (rep_.index()) {
    case 0: return "constant";
    case 1: return "gaussian_packet";
    default: return "tabulated";
    }
}

std::vector<double> CoherentAmplitude::feature_points() const {
    if (const auto* g = std::get_if<GaussianPacket>(&rep_)) {
        std::vector<double> pts;
        for (int j = -6; j <= 6; ++j) {
            const double w = g->center + j * g->width;
            if (w > 0.0) pts.push_back(w);
        }
        return pts;
    }
    if (const auto* t = std::get_if<Table>(&rep_)) return t->omega;
    return {};
}

bool CoherentAmplitude::is_zero() const {
    if (const auto* c = std::get_if<Constant>(&rep_)) return c->value == std::complex<double>{};
    if (const auto* g = std::get_if<GaussianPacket>(&rep_)) return g->amplitude == 0.0;
    const auto& t = std::get<Table>(rep_);
    return std::all_of(t.values.begin(), t.values.end(), [](auto v) { return v == std::complex<double>{}; });
}

namespace {

struct Pair {
    QuadResult c;
    QuadResult s;
};

// cos(w dt - k dr) = cos(w dt) cos(k dr) + sin(w dt) sin(k dr): one cosine and one
// sine transform per distinct dt.
template <class Transform>
CorrelatorTable assemble(const SeparationGrid& grid, double k, double prefactor, Transform transform) {
    std::map<double, Pair> cache;
    CorrelatorTable out;
    out.reserve(grid.dt_values.size() * grid.dr_values.size());
    for (double dt : grid.dt_values) {
        if (!std::isfinite(dt)) throw Error(ErrorKind::InvalidInput, "separation grid values must be finite");
        auto it = cache.find(dt);
        if (it == cache.end()) it = cache.emplace(dt, Pair{transform(dt, Trig::cosine), transform(dt, Trig::sine)}).first;
        const Pair& p = it->second;
        for (double dr : grid.dr_values) {
            if (!std::isfinite(dr)) throw Error(ErrorKind::InvalidInput, "separation grid values must be finite");
            const double ck = std::cos(k * dr);
            const double sk = std::sin(k * dr);
            out.push_back({dt, dr, prefactor * (ck * p.c.value + sk * p.s.value),
                           std::abs(prefactor) * (std::abs(ck) * p.c.error + std::abs(sk) * p.s.error)});
        }
    }
    return out;
}

QuadResult greens_transform(const ResponseEvaluator& ev, const numerics::RealFn& weight, double dt, Trig kind) {
    if (dt == 0.0) {
        if (kind == Trig::sine) return {};
        return ev.integrate_im_greens(weight);
    }
    return ev.oscillatory_im_greens(weight, dt, kind);
}

CorrelatorTable thermal_corr(const ResponseEvaluator& ev, const ThermalState& state, const SeparationGrid& grid,
                             bool momentum) {
    if (ev.hbar() != state.hbar())
        throw Error(ErrorKind::InvalidInput, "thermal state and response evaluator use different hbar");
    auto weight = [&state, momentum](double w) { return (momentum ? w * w : 1.0) * state.coth_half(w); };
    return assemble(grid, ev.mode().k, ev.hbar() / pi,
                    [&](double dt, Trig kind) { return greens_transform(ev, weight, dt, kind); });
}

CorrelatorTable mean_term(const ResponseEvaluator& ev, const CoherentAmplitude& amp, const SeparationGrid& grid,
                          bool momentum, double sign) {
    std::vector<double> bps = ev.breakpoints();
    for (double p : amp.feature_points()) bps.push_back(p);
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());

    auto envelope = [&](double w) {
        if (!(w > 0.0)) return 0.0;
        const double m = momentum ? coherent_expectation_pi(ev, amp, w) : coherent_expectation_phi(ev, amp, w);
        return m * m;
    };
    const double upper = ev.spectral_upper();
    const auto& quad = ev.quadrature();
    return assemble(grid, ev.mode().k, sign / (4.0 * pi * pi), [&](double dt, Trig kind) -> QuadResult {
        if (ev.is_free() || amp.is_zero()) return {};
        if (dt == 0.0) {
            if (kind == Trig::sine) return {};
            return numerics::integrate(envelope, 0.0, upper, quad, bps);
        }
        return numerics::oscillatory_integrate(envelope, dt, kind, 0.0, upper, quad, bps);
    });
}

CorrelatorTable add(CorrelatorTable a, const CorrelatorTable& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i].value += b[i].value;
        a[i].est_error += b[i].est_error;
    }
    return a;
}

} // namespace

CorrelatorTable thermal_corr_phi(const ResponseEvaluator& ev, const ThermalState& state, const SeparationGrid& grid) {
    return thermal_corr(ev, state, grid, false);
}

CorrelatorTable thermal_corr_pi(const ResponseEvaluator& ev, const ThermalState& state, const SeparationGrid& grid) {
    return thermal_corr(ev, state, grid, true);
}

double coherent_expectation_phi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, double w) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "coherent expectation requires omega > 0");
    const double f = ev.coupling()(w);
    const std::complex<double> c = amp(w);
    if (f == 0.0 || c == std::complex<double>{}) return 0.0;
    return 4.0 * pi * std::sqrt(ev.hbar() / (2.0 * w)) * (f * ev.greens(w) * c).real();
}

double coherent_expectation_pi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, double w) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "coherent expectation requires omega > 0");
    const double f = ev.coupling()(w);
    const std::complex<double> c = amp(w);
    if (f == 0.0 || c == std::complex<double>{}) return 0.0;
    return 4.0 * pi * std::sqrt(ev.hbar() * w / 2.0) * (f * ev.greens(w) * c).imag();
}

CorrelatorTable coherent_corr_phi(const ResponseEvaluator& ev, const CoherentAmplitude& amp,
                                  const SeparationGrid& grid) {
    const auto vacuum = thermal_corr_phi(ev, ThermalState::vacuum(ev.hbar()), grid);
    return add(vacuum, mean_term(ev, amp, grid, false, 1.0));
}

CorrelatorTable coherent_corr_pi(const ResponseEvaluator& ev, const CoherentAmplitude& amp, const SeparationGrid& grid,
                                 PiMeanSign sign) {
    const auto vacuum = thermal_corr_pi(ev, ThermalState::vacuum(ev.hbar()), grid);
    return add(vacuum, mean_term(ev, amp, grid, true, sign == PiMeanSign::subtract ? -1.0 : 1.0));
}

} // namespace dissfield
