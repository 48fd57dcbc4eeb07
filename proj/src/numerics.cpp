// numerics.cpp — adaptive Gauss-Kronrod, principal values, Filon panels, Richardson differences

#include "dissfield/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <queue>
#include <vector>

#include "dissfield/error.hpp"

namespace dissfield::numerics {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1)
        throw Error(ErrorKind::InvalidInput,
                    "QuadratureSpec requires rel_tol > 0, abs_tol > 0, max_subdivisions >= 1");
}

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kXgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208293713531, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rule {
    double value;
    double error;
};

template <class G>
Rule gauss_kronrod21(const G& g, double lo, double hi) {
    const double centr = 0.5 * (lo + hi);
    const double hlgth = 0.5 * (hi - lo);
    const double dhlgth = std::abs(hlgth);

    std::array<double, 10> fv1{}, fv2{};
    const double fc = g(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = g(centr - absc);
        const double f2 = g(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = g(centr - absc);
        const double f2 = g(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j)
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

    const double result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0)
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps))
        abserr = std::max(kEps * 50.0 * resabs, abserr);
    return {result, abserr};
}

std::vector<double> partition(double a, double b, std::span<const double> breakpoints) {
    std::vector<double> pts{a};
    std::vector<double> inner;
    for (double p : breakpoints)
        if (std::isfinite(p) && p > a && p < b) inner.push_back(p);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    pts.insert(pts.end(), inner.begin(), inner.end());
    if (std::isfinite(b)) pts.push_back(b);
    return pts;
}

struct Segment {
    double lo;
    double hi;
    bool tail;  // lo/hi are u-coordinates of the mapped [anchor, inf) piece
    double value;
    double error;
};

struct WorseFirst {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

} // namespace

QuadResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec,
                     std::span<const double> breakpoints) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b) || a == -kInf)
        throw Error(ErrorKind::InvalidInput, "integrate: domain must be [a, b] with finite a");
    if (a == b) return {};
    if (b < a) {
        QuadResult r = integrate(f, b, a, spec, breakpoints);
        r.value = -r.value;
        return r;
    }

    int evaluations = 0;
    auto checked = [&](double x) {
        ++evaluations;
        const double v = f(x);
        if (!std::isfinite(v))
            throw Error(ErrorKind::NonFinite, "integrand is not finite at x = " + std::to_string(x));
        return v;
    };

    const std::vector<double> pts = partition(a, b, breakpoints);
    const double anchor = pts.back();
    const TailMap map = spec.infinite_tail_map;
    auto tail_integrand = [&](double u) {
        if (map == TailMap::algebraic) {
            const double x = anchor + (1.0 - u) / u;
            return checked(x) / (u * u);
        }
        const double x = anchor - std::log(u);
        return checked(x) / u;
    };

    auto evaluate = [&](double lo, double hi, bool tail) {
        const Rule r = tail ? gauss_kronrod21(tail_integrand, lo, hi) : gauss_kronrod21(checked, lo, hi);
        return Segment{lo, hi, tail, r.value, r.error};
    };

    std::priority_queue<Segment, std::vector<Segment>, WorseFirst> heap;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) heap.push(evaluate(pts[i], pts[i + 1], false));
    if (!std::isfinite(b)) heap.push(evaluate(0.0, 1.0, true));

    auto totals = [&heap] {
        auto copy = heap;
        double v = 0.0, e = 0.0;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        return std::pair{v, e};
    };

    auto [value, error] = totals();
    int subdivisions = static_cast<int>(heap.size());
    while (error > std::max(spec.abs_tol, spec.rel_tol * std::abs(value))) {
        if (subdivisions >= spec.max_subdivisions)
            throw Error(ErrorKind::NonConvergence,
                        "integrate: subdivision budget exhausted (value " + std::to_string(value) +
                            ", error estimate " + std::to_string(error) + ")");
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi) ||
            (worst.hi - worst.lo) < 8.0 * kEps * std::max(std::abs(worst.lo), std::abs(worst.hi)))
            break;  // roundoff-limited: the estimate cannot be improved further
        heap.pop();
        const Segment left = evaluate(worst.lo, mid, worst.tail);
        const Segment right = evaluate(mid, worst.hi, worst.tail);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    const auto [v, e] = totals();
    return {v, e, evaluations, subdivisions};
}

QuadResult pv_integrate(const RealFn& f, const PVKernelSpec& pole, double a, double b,
                        const QuadratureSpec& spec, std::span<const double> breakpoints) {
    const double w = pole.pole_location;
    if (!(w >= 0.0) || pole.window_half_width < 0.0)
        throw Error(ErrorKind::InvalidInput, "pv_integrate: pole_location >= 0 and window >= 0 required");
    if (!(b > a)) throw Error(ErrorKind::InvalidInput, "pv_integrate: domain must satisfy a < b");

    auto kernel = [&f, w](double xi) { return f(xi) / ((xi - w) * (xi + w)); };
    if (w == 0.0 || w < a || w > b) return integrate(kernel, a, b, spec, breakpoints);
    if (w == a || w == b)
        throw Error(ErrorKind::PoleOnBoundary, "pv_integrate: pole coincides with a domain endpoint");

    double delta = pole.window_half_width;
    const double room = std::min({w - a, b - w, w});
    if (delta == 0.0) {
        delta = 0.5 * room;
    } else if (delta >= room) {
        throw Error(ErrorKind::PoleOnBoundary, "pv_integrate: pole lies within one window of an endpoint");
    }

    QuadratureSpec sub = spec;
    sub.abs_tol = spec.abs_tol / 3.0;

    const QuadResult left = integrate(kernel, a, w - delta, sub, breakpoints);
    const QuadResult right = integrate(kernel, w + delta, b, sub, breakpoints);

    // Odd part of g(xi) = f(xi)/(xi + w) about the pole.
    auto g = [&f, w](double xi) { return f(xi) / (xi + w); };
    auto folded = [&g, w](double s) { return (g(w + s) - g(w - s)) / s; };
    std::vector<double> inner;
    for (double p : breakpoints)
        if (std::abs(p - w) < delta && p != w) inner.push_back(std::abs(p - w));
    const QuadResult strip = integrate(folded, 0.0, delta, sub, inner);

    return {left.value + right.value + strip.value, left.error + right.error + strip.error,
            left.evaluations + right.evaluations + 2 * strip.evaluations,
            left.subdivisions + right.subdivisions + strip.subdivisions};
}

namespace {

constexpr int kLegendreOrder = 16;

struct LegendreTable {
    std::array<double, kLegendreOrder> nodes{};
    std::array<double, kLegendreOrder> weights{};
    // values[n][i] = P_n(nodes[i])
    std::array<std::array<double, kLegendreOrder>, kLegendreOrder> values{};

    LegendreTable() {
        const int n = kLegendreOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        for (int i = 0; i < n; ++i) {
            double p0 = 1.0, p1 = nodes[i];
            values[0][i] = 1.0;
            values[1][i] = p1;
            for (int k = 2; k < n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * nodes[i] * p1 - (k - 1.0) * p0) / k;
                values[k][i] = p2;
                p0 = p1;
                p1 = p2;
            }
        }
    }
};

const LegendreTable& legendre() {
    static const LegendreTable table;
    return table;
}

// Spherical Bessel j_0..j_{n-1}: upward recurrence above the turning point,
// Miller's downward recurrence normalised by j_0 below it.
template <std::size_t N>
std::array<double, N> spherical_bessel(double x) {
    std::array<double, N> j{};
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }
    const double j0 = std::sin(x) / x;
    if (x > static_cast<double>(N)) {
        j[0] = j0;
        if (N > 1) j[1] = std::sin(x) / (x * x) - std::cos(x) / x;
        for (std::size_t n = 2; n < N; ++n) j[n] = (2.0 * n - 1.0) / x * j[n - 1] - j[n - 2];
        return j;
    }
    const int start = static_cast<int>(N) + 20 + static_cast<int>(x);
    double up = 0.0, cur = 1e-300;
    for (int n = start; n >= 1; --n) {
        const double down = (2.0 * n + 1.0) / x * cur - up;
        up = cur;
        cur = down;
        if (n - 1 < static_cast<int>(N)) j[n - 1] = cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            up *= 1e-250;
            for (auto& v : j) v *= 1e-250;
        }
    }
    const double scale = j0 / j[0];
    for (auto& v : j) v *= scale;
    return j;
}

struct Panel {
    double lo;
    double hi;
    double value;
    double error;
    double l1;
};

struct PanelWorseFirst {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel filon_panel(const RealFn& env, double w, Trig kind, double lo, double hi, int& evaluations) {
    const LegendreTable& lt = legendre();
    const double c = 0.5 * (lo + hi);
    const double h2 = 0.5 * (hi - lo);

    std::array<double, kLegendreOrder> fv{};
    double l1 = 0.0;
    for (int i = 0; i < kLegendreOrder; ++i) {
        fv[i] = env(c + h2 * lt.nodes[i]);
        ++evaluations;
        if (!std::isfinite(fv[i]))
            throw Error(ErrorKind::NonFinite, "oscillatory_integrate: envelope is not finite");
        l1 += lt.weights[i] * std::abs(fv[i]);
    }

    const double kappa = w * h2;
    const double akappa = std::abs(kappa);
    std::complex<double> sum{0.0, 0.0};
    std::complex<double> ipow{1.0, 0.0};
    std::array<double, kLegendreOrder> coeff{};
    const auto bessel = spherical_bessel<kLegendreOrder>(akappa);
    for (int n = 0; n < kLegendreOrder; ++n) {
        double an = 0.0;
        for (int i = 0; i < kLegendreOrder; ++i) an += lt.weights[i] * fv[i] * lt.values[n][i];
        an *= 0.5 * (2.0 * n + 1.0);
        coeff[n] = an;
        double jn = bessel[n];
        if (kappa < 0.0 && (n % 2 == 1)) jn = -jn;
        sum += an * 2.0 * ipow * jn;
        ipow *= std::complex<double>{0.0, 1.0};
    }
    const std::complex<double> phase{std::cos(w * c), std::sin(w * c)};
    const std::complex<double> integral = h2 * phase * sum;
    const double value = kind == Trig::cosine ? integral.real() : integral.imag();
    const double tail = std::abs(coeff[kLegendreOrder - 1]) + std::abs(coeff[kLegendreOrder - 2]);
    const double error = 2.0 * std::abs(h2) * tail + 50.0 * kEps * std::abs(h2) * l1;
    return {lo, hi, value, error, std::abs(h2) * l1};
}

} // namespace

QuadResult oscillatory_integrate(const RealFn& envelope, double phase_frequency, Trig kind, double a,
                                 double b, const QuadratureSpec& spec, std::span<const double> breakpoints) {
    spec.validate();
    if (std::isnan(a) || std::isnan(b) || a == -kInf || std::isnan(phase_frequency))
        throw Error(ErrorKind::InvalidInput, "oscillatory_integrate: invalid domain or frequency");
    if (a == b) return {};
    if (b < a) {
        QuadResult r = oscillatory_integrate(envelope, phase_frequency, kind, b, a, spec, breakpoints);
        r.value = -r.value;
        return r;
    }

    int evaluations = 0;
    double upper = b;
    double tail_bound = 0.0;
    if (!std::isfinite(b)) {
        // Truncate where the remaining L1 mass of the envelope is negligible.
        auto absenv = [&envelope](double x) { return std::abs(envelope(x)); };
        QuadratureSpec loose = spec;
        loose.rel_tol = std::max(spec.rel_tol, 1e-6);
        const QuadResult total = integrate(absenv, a, kInf, loose, breakpoints);
        evaluations += total.evaluations;
        const double target = 0.1 * std::max(spec.abs_tol, spec.rel_tol * total.value);
        double last = a;
        for (double p : breakpoints)
            if (std::isfinite(p) && p > last) last = p;
        upper = std::max(a + 1.0, last + std::max(1.0, std::abs(last)));
        for (int doubling = 0;; ++doubling) {
            if (doubling > 200)
                throw Error(ErrorKind::NonConvergence, "oscillatory_integrate: envelope tail does not decay");
            const QuadResult tail = integrate(absenv, upper, kInf, loose);
            evaluations += tail.evaluations;
            if (tail.value <= target) {
                tail_bound = tail.value + tail.error;
                break;
            }
            upper = a + 2.0 * (upper - a);
        }
    }

    const std::vector<double> pts = partition(a, upper, breakpoints);
    std::vector<double> edges = pts;
    if (edges.back() != upper) edges.push_back(upper);

    std::priority_queue<Panel, std::vector<Panel>, PanelWorseFirst> heap;
    double value = 0.0, error = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const Panel p = filon_panel(envelope, phase_frequency, kind, edges[i], edges[i + 1], evaluations);
        value += p.value;
        error += p.error;
        l1 += p.l1;
        heap.push(p);
    }

    int subdivisions = static_cast<int>(heap.size());
    while (error > std::max(spec.abs_tol, spec.rel_tol * l1)) {
        if (subdivisions >= spec.max_subdivisions)
            throw Error(ErrorKind::NonConvergence, "oscillatory_integrate: subdivision budget exhausted");
        const Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;
        heap.pop();
        const Panel left = filon_panel(envelope, phase_frequency, kind, worst.lo, mid, evaluations);
        const Panel right = filon_panel(envelope, phase_frequency, kind, mid, worst.hi, evaluations);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {v, e + tail_bound, evaluations, subdivisions};
}

DiffResult differentiate(const RealFn& f, double x, const DiffSpec& spec) {
    if (!(spec.noise > 0.0) || !(spec.x_floor > 0.0))
        throw Error(ErrorKind::InvalidInput, "differentiate: noise and x_floor must be positive");
    const double h = std::cbrt(spec.noise) * std::max(std::abs(x), spec.x_floor);
    if (x - h < spec.domain_min)
        throw Error(ErrorKind::DomainEdge, "differentiate: stencil x - h leaves the domain");
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    const double d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
    const double richardson = d2 + (d2 - d1) / 3.0;
    return {richardson, std::abs(richardson - d2)};
}

} // namespace dissfield::numerics
