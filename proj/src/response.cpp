// response.cpp — Lambda_k, G_k, sum rule and Fano coefficients

#include "dissfield/response.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dissfield/error.hpp"

namespace dissfield {

using numerics::QuadResult;
using std::numbers::pi;

namespace {

std::vector<double> find_resonances(const ResponseEvaluator& ev, double hi) {
    const double wk2 = ev.mode().omega_k * ev.mode().omega_k;
    auto re_lambda = [&](double w) { return wk2 * (1.0 - ev.chi(w).real()) - w * w; };

    std::vector<double> grid;
    constexpr int kScan = 4000;
    for (int i = 1; i <= kScan; ++i) grid.push_back(hi * i / kScan);
    for (double p : ev.model().feature_points()) {
        const double width = std::max(ev.model().spectral_width(), 1e-6 * p);
        for (int i = -200; i <= 200; ++i) {
            const double w = p + width * i / 20.0;
            if (w > 0.0) grid.push_back(w);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> roots;
    double a = 0.0;
    double fa = re_lambda(0.0);
    for (double b : grid) {
        const double fb = re_lambda(b);
        if (fa == 0.0 && a > 0.0) roots.push_back(a);
        if (fa * fb < 0.0) {
            double lo = a, hi_ = b, flo = fa;
            for (int it = 0; it < 200 && hi_ - lo > 1e-15 * hi_; ++it) {
                const double mid = 0.5 * (lo + hi_);
                const double fm = re_lambda(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi_ = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi_));
        }
        a = b;
        fa = fb;
    }
    return roots;
}

} // namespace

ResponseEvaluator::ResponseEvaluator(SusceptibilityModel model, ModeContext mode, double hbar, double epsilon)
    : coupling_(std::move(model), mode), hbar_(hbar), epsilon_(epsilon) {
    if (!(mode.omega_k > 0.0)) throw Error(ErrorKind::InvalidInput, "ResponseEvaluator requires omega_k > 0");
    if (!(hbar > 0.0)) throw Error(ErrorKind::InvalidInput, "ResponseEvaluator requires hbar > 0");
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidInput, "ResponseEvaluator requires epsilon > 0");

    free_ = this->model().is_zero();
    upper_ = numerics::kInf;
    if (const auto* t = std::get_if<Tabulated>(&this->model().kind())) upper_ = t->last();
    if (free_) return;

    const double chi0 = this->model().static_chi();
    if (!(chi0 < 1.0))
        throw Error(ErrorKind::InvalidInput,
                    "static susceptibility chi(0) = " + std::to_string(chi0) + " >= 1: the mode has no stable equilibrium");

    const std::vector<double> features = this->model().feature_points();
    double hi = mode.omega_k;
    for (double p : features) hi = std::max(hi, p);
    hi *= 4.0;
    resonances_ = find_resonances(*this, hi);

    breakpoints_ = features;
    for (double r : resonances_) {
        breakpoints_.push_back(r);
        const double half_width = std::abs(lambda(r).imag()) / (2.0 * r);
        if (!(half_width > 0.0)) continue;
        double scale = half_width;
        for (int j = 0; j < 7; ++j, scale *= 4.0) {
            if (r - scale > 0.0) breakpoints_.push_back(r - scale);
            breakpoints_.push_back(r + scale);
        }
    }
    std::sort(breakpoints_.begin(), breakpoints_.end());
    breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

std::complex<double> ResponseEvaluator::lambda(double w) const {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "Lambda_k requires omega > 0");
    const double wk2 = mode().omega_k * mode().omega_k;
    const double dispersive = free_ ? 0.0 : wk2 * chi(w).real();
    const double absorptive = pi * coupling_.squared(w) / (2.0 * w);
    return {wk2 - w * w - dispersive, -absorptive};
}

std::complex<double> ResponseEvaluator::lambda_quadrature(double w) const {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "Lambda_k requires omega > 0");
    const double wk2 = mode().omega_k * mode().omega_k;
    double pv = 0.0;
    if (!free_) {
        auto f2 = [this](double xi) { return coupling_.squared(xi); };
        const double upper = std::isfinite(upper_) ? 2.0 * std::max(upper_, w) + 1.0 : upper_;
        pv = numerics::pv_integrate(f2, {w, 0.0}, 0.0, upper, quadrature(), model().feature_points()).value;
    }
    const double absorptive = pi * coupling_.squared(w) / (2.0 * w);
    return {wk2 - w * w - pv, -absorptive};
}

std::complex<double> ResponseEvaluator::greens(double w) const {
    const std::complex<double> l = lambda(w);
    const double wk2 = mode().omega_k * mode().omega_k;
    if (l.imag() == 0.0 && std::abs(l) < epsilon_ * wk2)
        throw Error(ErrorKind::PoleHit, "undamped pole of G_k at omega = " + std::to_string(w) +
                                            "; use the delta-function limit or greens_regularized");
    return 1.0 / l;
}

std::complex<double> ResponseEvaluator::greens_regularized(double w) const {
    const double wk2 = mode().omega_k * mode().omega_k;
    return 1.0 / (lambda(w) - std::complex<double>{0.0, epsilon_ * wk2});
}

double ResponseEvaluator::im_greens(double w) const { return greens(w).imag(); }

double ResponseEvaluator::static_frequency() const {
    const double chi0 = free_ ? 0.0 : model().static_chi();
    return mode().omega_k * std::sqrt(1.0 - chi0);
}

QuadResult ResponseEvaluator::integrate_im_greens(const numerics::RealFn& weight) const {
    const double wk = mode().omega_k;
    if (free_) return {pi / (2.0 * wk) * weight(wk), 0.0, 1, 0};
    auto integrand = [this, &weight](double w) {
        const double img = im_greens(w);
        return img == 0.0 ? 0.0 : weight(w) * img;
    };
    return numerics::integrate(integrand, 0.0, upper_, quadrature(), breakpoints_);
}

QuadResult ResponseEvaluator::oscillatory_im_greens(const numerics::RealFn& weight, double phase,
                                                    numerics::Trig kind) const {
    const double wk = mode().omega_k;
    if (free_) {
        const double trig = kind == numerics::Trig::sine ? std::sin(phase * wk) : std::cos(phase * wk);
        return {pi / (2.0 * wk) * weight(wk) * trig, 0.0, 1, 0};
    }
    auto envelope = [this, &weight](double w) {
        const double img = im_greens(w);
        return img == 0.0 ? 0.0 : weight(w) * img;
    };
    return numerics::oscillatory_integrate(envelope, phase, kind, 0.0, upper_, quadrature(), breakpoints_);
}

QuadResult ResponseEvaluator::integrate_spectral(const numerics::RealFn& integrand) const {
    return numerics::integrate(integrand, 0.0, upper_, quadrature(), breakpoints_);
}

std::complex<double> lambda_k(const ResponseEvaluator& ev, double w) { return ev.lambda(w); }
std::complex<double> greens(const ResponseEvaluator& ev, double w) { return ev.greens(w); }

QuadResult commutator_sum_rule(const ResponseEvaluator& ev) {
    QuadResult r = ev.integrate_im_greens([](double w) { return w; });
    r.value *= 2.0 / pi;
    r.error *= 2.0 / pi;
    return r;
}

FanoCoefficients fano_coefficients(const ResponseEvaluator& ev, double w) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "fano_coefficients requires omega > 0");
    FanoCoefficients c;
    c.omega = w;
    c.h2 = 0.0;
    c.h4 = std::sqrt(ev.hbar() / (2.0 * w));
    const double f = ev.coupling()(w);
    c.f2 = f == 0.0 ? std::complex<double>{} : f * c.h4 * ev.greens(w);
    c.delta_part = c.h4;
    c.pole_delta_weight = std::complex<double>{0.0, pi * f / (2.0 * w)} * c.f2;
    c.smooth_part = [coupling = ev.coupling(), w, f2 = c.f2](double wp) -> std::complex<double> {
        if (!(wp > 0.0) || wp == w)
            throw Error(ErrorKind::InvalidInput, "smooth part of f4 is evaluated off the pole, for w' > 0");
        return coupling(wp) / (2.0 * wp) * (1.0 / (wp - w) + 1.0 / (wp + w)) * f2;
    };
    return c;
}

std::complex<double> mode_amplitude_phi(const ResponseEvaluator& ev, double w) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "mode amplitude requires omega > 0");
    const double f = ev.coupling()(w);
    if (f == 0.0) return {};
    return 2.0 * pi * std::sqrt(ev.hbar() / (2.0 * w)) * f * ev.greens(w);
}

std::complex<double> mode_amplitude_pi(const ResponseEvaluator& ev, double w) {
    return std::complex<double>{0.0, -w} * mode_amplitude_phi(ev, w);
}

} // namespace dissfield
