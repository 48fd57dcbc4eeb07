// bath.cpp — susceptibility models and Kramers-Kronig machinery

#include "dissfield/bath.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dissfield/error.hpp"

namespace dissfield {

using numerics::QuadResult;
using std::numbers::pi;

ModeContext ModeContext::make(double k, double m) {
    if (!(k >= 0.0) || !(m >= 0.0) || (k == 0.0 && m == 0.0) || !std::isfinite(k) || !std::isfinite(m))
        throw Error(ErrorKind::InvalidInput, "ModeContext requires k >= 0, m >= 0, not both zero");
    return {k, m, std::sqrt(m * m + k * k)};
}

ModeContext ModeContext::with_frequency(double omega_k) { return make(omega_k, 0.0); }

// ---------------------------------------------------------------- Tabulated

Tabulated::Tabulated(std::vector<double> omega, std::vector<double> im_chi) {
    const std::size_t n = omega.size();
    if (n < 2 || im_chi.size() != n)
        throw Error(ErrorKind::InvalidInput, "tabulated model needs at least two (omega, im_chi) rows");
    if (omega.front() != 0.0) throw Error(ErrorKind::InvalidInput, "tabulated grid must start at omega = 0");
    if (im_chi.front() != 0.0) throw Error(ErrorKind::InvalidInput, "tabulated Im chi must vanish at omega = 0");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(im_chi[i]))
            throw Error(ErrorKind::InvalidInput, "tabulated model contains non-finite values");
        if (i > 0 && !(omega[i] > omega[i - 1]))
            throw Error(ErrorKind::InvalidInput, "tabulated grid must be strictly increasing");
    }

    std::vector<double> h(n - 1), delta(n - 1), slope(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = omega[i + 1] - omega[i];
        delta[i] = (im_chi[i + 1] - im_chi[i]) / h[i];
    }
    if (n == 2) {
        slope[0] = slope[1] = delta[0];
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) continue;
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (std::signbit(d) != std::signbit(d0) || d0 == 0.0) return 0.0;
            if (std::signbit(d0) != std::signbit(d1) && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
            return d;
        };
        slope[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        slope[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
    data_ = std::make_shared<const Data>(Data{std::move(omega), std::move(im_chi), std::move(slope)});
}

Tabulated Tabulated::parse(std::istream& in) {
    std::string line;
    bool header = false;
    std::vector<double> omega, values;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::istringstream hs(line.substr(first + 1));
            std::string a, b;
            hs >> a >> b;
            if (!header && a == "omega" && b == "im_chi") header = true;
            continue;
        }
        if (!header) throw Error(ErrorKind::InvalidInput, "tabulated file must start with '# omega im_chi'");
        std::istringstream row(line);
        double w = 0.0, v = 0.0;
        std::string extra;
        if (!(row >> w >> v) || (row >> extra))
            throw Error(ErrorKind::InvalidInput, "tabulated row must hold exactly two numbers: '" + line + "'");
        omega.push_back(w);
        values.push_back(v);
    }
    if (!header) throw Error(ErrorKind::InvalidInput, "tabulated file must start with '# omega im_chi'");
    return Tabulated(std::move(omega), std::move(values));
}

Tabulated Tabulated::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open tabulated model '" + path + "'");
    return parse(in);
}

double Tabulated::operator()(double w) const {
    const auto& x = data_->omega;
    if (w <= 0.0) return 0.0;
    if (w > x.back()) return 0.0;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), w) - x.begin()) - 1, x.size() - 2);
    const double h = x[i + 1] - x[i];
    const double t = (w - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const auto& y = data_->im;
    const auto& d = data_->slope;
    return (2 * t3 - 3 * t2 + 1) * y[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * y[i + 1] +
           (t3 - t2) * h * d[i + 1];
}

double Tabulated::derivative(double w) const {
    const auto& x = data_->omega;
    if (w < 0.0 || w > x.back()) return 0.0;
    const std::size_t i = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), w) - x.begin()) - 1, x.size() - 2);
    const double h = x[i + 1] - x[i];
    const double t = (w - x[i]) / h;
    const double t2 = t * t;
    const auto& y = data_->im;
    const auto& d = data_->slope;
    return ((6 * t2 - 6 * t) * y[i] + (-6 * t2 + 6 * t) * y[i + 1]) / h + (3 * t2 - 4 * t + 1) * d[i] +
           (3 * t2 - 2 * t) * d[i + 1];
}

double Tabulated::hilbert(double c) const {
    // 6-point Gauss-Legendre nodes and weights on [-1, 1].
    static constexpr double gx[3] = {0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
    static constexpr double gw[3] = {0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    const auto& x = data_->omega;
    const auto& y = data_->im;
    const auto& d = data_->slope;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i], h = x[i + 1] - a;
        const double delta = (y[i + 1] - y[i]) / h;
        // p(a + s) = c0 + c1 s + c2 s^2 + c3 s^3
        const double c0 = y[i], c1 = d[i], c2 = (3.0 * delta - 2.0 * d[i] - d[i + 1]) / h,
                     c3 = (d[i] + d[i + 1] - 2.0 * delta) / (h * h);
        const double u = c - a;
        if (u > -4.0 * h && u < 5.0 * h) {
            // (p(s) - p(u)) / (s - u) is a quadratic in s; the remainder is p(u) log|(h - u) / u|.
            const double q0 = c1 + c2 * u + c3 * u * u, q1 = c2 + c3 * u, q2 = c3;
            sum += q0 * h + q1 * h * h / 2.0 + q2 * h * h * h / 3.0;
            const double pu = c0 + u * (c1 + u * (c2 + u * c3));
            // Interior nodes hit exactly cancel between neighbouring cells.
            const bool interior_hi = c == x[i + 1] && i + 2 < x.size();
            const bool interior_lo = c == a && i > 0;
            if (!interior_hi && pu != 0.0) sum += pu * std::log(std::abs(h - u));
            if (!interior_lo && pu != 0.0) sum -= pu * std::log(std::abs(u));
        } else {
            for (int k = 0; k < 3; ++k)
                for (double sgn : {-1.0, 1.0}) {
                    const double s = 0.5 * h * (1.0 + sgn * gx[k]);
                    const double p = c0 + s * (c1 + s * (c2 + s * c3));
                    sum += 0.5 * h * gw[k] * p / (s - u);
                }
        }
    }
    return sum;
}

std::vector<double> Tabulated::landmarks() const {
    const auto& x = data_->omega;
    const auto& y = data_->im;
    const std::size_t n = x.size();
    std::vector<std::pair<double, double>> peaks;  // (height, omega)
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (y[i] > 0.0 && y[i] >= y[i - 1] && y[i] > y[i + 1]) peaks.emplace_back(y[i], x[i]);
    std::sort(peaks.begin(), peaks.end(), std::greater<>());
    std::vector<double> out{x.back()};
    for (std::size_t i = 0; i < std::min<std::size_t>(peaks.size(), 16); ++i) out.push_back(peaks[i].second);
    std::vector<double> cumulative(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        cumulative[i] = cumulative[i - 1] + 0.5 * (std::abs(y[i]) + std::abs(y[i - 1])) * (x[i] - x[i - 1]);
    if (cumulative.back() > 0.0)
        for (int q = 1; q < 16; ++q) {
            const double target = cumulative.back() * q / 16.0;
            const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
            out.push_back(x[static_cast<std::size_t>(it - cumulative.begin())]);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.front() == 0.0) out.erase(out.begin());
    return out;
}

bool Tabulated::passive() const {
    return std::all_of(data_->im.begin(), data_->im.end(), [](double v) { return v >= 0.0; });
}

// ------------------------------------------------------ SusceptibilityModel

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_kind(const SusceptibilityModel::Kind& kind) {
    std::visit(overloaded{
                   [](const DrudeLorentz& m) {
                       if (!(m.eta >= 0.0) || !(m.omega0 > 0.0) || !(m.gamma > 0.0))
                           throw Error(ErrorKind::InvalidInput,
                                       "DrudeLorentz requires eta >= 0, omega0 > 0, gamma > 0");
                   },
                   [](const Ohmic& m) {
                       if (!(m.eta >= 0.0) || !(m.omega_c > 0.0))
                           throw Error(ErrorKind::InvalidInput, "Ohmic requires eta >= 0, omega_c > 0");
                   },
                   [](const Tabulated&) {},
               },
               kind);
}

std::complex<double> chi_drude(const DrudeLorentz& m, double w) {
    const std::complex<double> d{m.omega0 * m.omega0 - w * w, -m.gamma * w};
    return m.eta * m.omega0 * m.omega0 / d;
}

std::complex<double> chi_ohmic(const Ohmic& m, double w) {
    const std::complex<double> z{1.0, -w / m.omega_c};
    return 0.5 * m.eta / (z * z);
}

} // namespace

SusceptibilityModel::SusceptibilityModel(Kind kind, numerics::QuadratureSpec quad)
    : kind_(std::move(kind)), quad_(quad) {
    validate_kind(kind_);
    quad_.validate();
}

std::string SusceptibilityModel::name() const {
    return std::visit(overloaded{
                          [](const DrudeLorentz&) { return std::string("drude_lorentz"); },
                          [](const Ohmic&) { return std::string("ohmic"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      kind_);
}

bool SusceptibilityModel::has_closed_form() const { return !std::holds_alternative<Tabulated>(kind_); }

bool SusceptibilityModel::is_zero() const {
    return std::visit(overloaded{
                          [](const DrudeLorentz& m) { return m.eta == 0.0; },
                          [](const Ohmic& m) { return m.eta == 0.0; },
                          [](const Tabulated& t) {
                              return std::all_of(t.values().begin(), t.values().end(),
                                                 [](double v) { return v == 0.0; });
                          },
                      },
                      kind_);
}

double SusceptibilityModel::im_chi(double w) const {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidInput, "im_chi requires omega >= 0");
    return std::visit(overloaded{
                          [w](const DrudeLorentz& m) {
                              const double a = m.omega0 * m.omega0 - w * w;
                              const double gw = m.gamma * w;
                              return m.eta * m.omega0 * m.omega0 * gw / (a * a + gw * gw);
                          },
                          [w](const Ohmic& m) {
                              if (std::isinf(w)) return 0.0;
                              const double x = w / m.omega_c;
                              const double s = 1.0 + x * x;
                              return m.eta * x / (s * s);
                          },
                          [w](const Tabulated& t) { return t(w); },
                      },
                      kind_);
}

std::complex<double> SusceptibilityModel::chi(double w) const {
    return std::visit(overloaded{
                          [w](const DrudeLorentz& m) { return chi_drude(m, w); },
                          [w](const Ohmic& m) { return chi_ohmic(m, w); },
                          [this, w](const Tabulated& t) {
                              return std::complex<double>{re_chi_kk(*this, w).value, t(w)};
                          },
                      },
                      kind_);
}

std::complex<double> SusceptibilityModel::dchi(double w) const {
    return std::visit(
        overloaded{
            [w](const DrudeLorentz& m) {
                const std::complex<double> d{m.omega0 * m.omega0 - w * w, -m.gamma * w};
                return m.eta * m.omega0 * m.omega0 * std::complex<double>{2.0 * w, m.gamma} / (d * d);
            },
            [w](const Ohmic& m) {
                const std::complex<double> z{1.0, -w / m.omega_c};
                return std::complex<double>{0.0, m.eta / m.omega_c} / (z * z * z);
            },
            [this, w](const Tabulated& t) {
                numerics::DiffSpec ds;
                ds.noise = quad_.rel_tol;
                ds.x_floor = 1e-3 * t.last();
                ds.domain_min = 0.0;
                const auto re = numerics::differentiate([this](double x) { return re_chi_kk(*this, x).value; }, w, ds);
                return std::complex<double>{re.value, t.derivative(w)};
            },
        },
        kind_);
}

double SusceptibilityModel::static_chi() const {
    return std::visit(overloaded{
                          [](const DrudeLorentz& m) { return m.eta; },
                          [](const Ohmic& m) { return 0.5 * m.eta; },
                          [this](const Tabulated&) { return re_chi_kk(*this, 0.0).value; },
                      },
                      kind_);
}

double SusceptibilityModel::spectral_width() const {
    return std::visit(overloaded{
                          [](const DrudeLorentz& m) { return m.gamma; },
                          [](const Ohmic& m) { return m.omega_c; },
                          [](const Tabulated& t) {
                              double h = t.last();
                              for (std::size_t i = 0; i + 1 < t.omega().size(); ++i)
                                  h = std::min(h, t.omega()[i + 1] - t.omega()[i]);
                              return h;
                          },
                      },
                      kind_);
}

std::vector<double> SusceptibilityModel::feature_points() const {
    return std::visit(overloaded{
                          [](const DrudeLorentz& m) {
                              std::vector<double> p{m.omega0};
                              for (double s : {1.0, 4.0, 16.0}) {
                                  if (m.omega0 - s * m.gamma > 0.0) p.push_back(m.omega0 - s * m.gamma);
                                  p.push_back(m.omega0 + s * m.gamma);
                              }
                              std::sort(p.begin(), p.end());
                              return p;
                          },
                          [](const Ohmic& m) {
                              return std::vector<double>{0.25 * m.omega_c, m.omega_c, 4.0 * m.omega_c};
                          },
                          [](const Tabulated& t) { return t.landmarks(); },
                      },
                      kind_);
}

bool SusceptibilityModel::out_of_table(double w) const {
    if (const auto* t = std::get_if<Tabulated>(&kind_)) return w > t->last();
    return false;
}

double im_chi(const SusceptibilityModel& model, double w) { return model.im_chi(w); }

double re_chi_closed(const SusceptibilityModel& model, double w) {
    if (!model.has_closed_form())
        throw Error(ErrorKind::NoClosedForm, "tabulated models have no closed-form Re chi; use re_chi_kk");
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidInput, "re_chi_closed requires omega >= 0");
    if (std::isinf(w)) return 0.0;
    return model.chi(w).real();
}

QuadResult re_chi_kk(const SusceptibilityModel& model, double w) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidInput, "re_chi_kk requires omega >= 0");
    if (model.is_zero()) return {};
    if (const auto* t = std::get_if<Tabulated>(&model.kind())) {
        if (std::isinf(w)) return {};
        const double v = (t->hilbert(w) + t->hilbert(-w)) / pi;
        const double peak = *std::max_element(t->values().begin(), t->values().end());
        return {v, 1e-13 * (std::abs(v) + peak), 0, 0};
    }
    auto numerator = [&model](double xi) { return xi * model.im_chi(xi); };
    const std::vector<double> breaks = model.feature_points();
    double upper = numerics::kInf;
    if (const auto* t = std::get_if<Tabulated>(&model.kind()))
        upper = 2.0 * std::max(t->last(), w) + 1.0;
    QuadResult r = numerics::pv_integrate(numerator, {w, 0.0}, 0.0, upper, model.quadrature(), breaks);
    r.value *= 2.0 / pi;
    r.error *= 2.0 / pi;
    return r;
}

// ---------------------------------------------------------- CouplingFunction

double CouplingFunction::squared(double w) const {
    const double im = model_.im_chi(w);
    if (im < 0.0)
        throw Error(ErrorKind::NegativeImChi,
                    "Im chi(" + std::to_string(w) + ") = " + std::to_string(im) + " < 0 violates passivity");
    return 2.0 * w * mode_.omega_k * mode_.omega_k * im / pi;
}

double CouplingFunction::operator()(double w) const { return std::sqrt(squared(w)); }

double coupling_f(const CouplingFunction& c, double w) { return c(w); }

QuadResult chi_time(const CouplingFunction& c, double t, KernelRoute route) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "chi_time requires t >= 0");
    if (t == 0.0 || c.model().is_zero()) return {};
    const double wk2 = c.mode().omega_k * c.mode().omega_k;
    numerics::RealFn envelope;
    if (route == KernelRoute::coupling)
        envelope = [&c, wk2](double w) { return c.squared(w) / (w * wk2); };
    else
        envelope = [&c](double w) { return 2.0 / pi * c.model().im_chi(w); };
    double upper = numerics::kInf;
    if (const auto* tab = std::get_if<Tabulated>(&c.model().kind())) upper = tab->last();
    return numerics::oscillatory_integrate(envelope, t, numerics::Trig::sine, 0.0, upper, c.model().quadrature(),
                                           c.model().feature_points());
}

double chi_time_closed(const SusceptibilityModel& model, double t) {
    if (!(t >= 0.0)) throw Error(ErrorKind::InvalidInput, "chi_time_closed requires t >= 0");
    return std::visit(overloaded{
                          [t](const DrudeLorentz& m) {
                              const double w02 = m.omega0 * m.omega0;
                              const double disc = w02 - 0.25 * m.gamma * m.gamma;
                              const double decay = std::exp(-0.5 * m.gamma * t);
                              double osc = t;
                              if (disc > 0.0) {
                                  const double big = std::sqrt(disc);
                                  osc = std::sin(big * t) / big;
                              } else if (disc < 0.0) {
                                  const double big = std::sqrt(-disc);
                                  osc = std::sinh(big * t) / big;
                              }
                              return m.eta * w02 * decay * osc;
                          },
                          [t](const Ohmic& m) {
                              return 0.5 * m.eta * m.omega_c * m.omega_c * t * std::exp(-m.omega_c * t);
                          },
                          [](const Tabulated&) -> double {
                              throw Error(ErrorKind::NoClosedForm, "tabulated models have no closed-form chi(t)");
                          },
                      },
                      model.kind());
}

KKReport kk_report(const SusceptibilityModel& model, const std::vector<double>& grid) {
    if (grid.empty()) throw Error(ErrorKind::InvalidInput, "kk_report: frequency grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidInput, "kk_report: grid must be increasing");

    KKReport report;
    report.rows.reserve(grid.size());
    double scale = 0.0;
    for (double w : grid) {
        const double closed = re_chi_closed(model, w);
        const double kk = re_chi_kk(model, w).value;
        report.rows.push_back({w, closed, kk, std::abs(kk - closed), 0.0});
        scale = std::max(scale, std::abs(closed));
    }
    const double floor = 1e-6 * scale;
    for (auto& row : report.rows) {
        const double denom = std::max(std::abs(row.re_closed), floor);
        row.rel_dev = row.abs_dev == 0.0 ? 0.0 : row.abs_dev / denom;
        report.max_abs_dev = std::max(report.max_abs_dev, row.abs_dev);
        report.max_rel_dev = std::max(report.max_rel_dev, row.rel_dev);
    }
    return report;
}

} // namespace dissfield
