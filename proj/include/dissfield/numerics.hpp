// numerics.hpp — quadrature, principal-value, oscillatory and finite-difference primitives
//
// Everything here is a pure function of its arguments. Integrands are passed as
// std::function so the physics modules can hand in closures over evaluators.

#pragma once

#include <functional>
#include <limits>
#include <span>

namespace dissfield::numerics {

using RealFn = std::function<double(double)>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Map used for [A, inf): algebraic x = A + (1-u)/u, exponential x = A - ln(u).
enum class TailMap { algebraic, exponential };

struct QuadratureSpec {
    double rel_tol{1e-8};
    double abs_tol{1e-12};
    int max_subdivisions{2000};
    TailMap infinite_tail_map{TailMap::algebraic};

    void validate() const;
};

struct QuadResult {
    double value{0.0};
    double error{0.0};
    int evaluations{0};
    int subdivisions{0};
};

// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b]; b may be +inf.
// Breakpoints inside (a, b) seed the initial partition (peaks, kinks, resonances).
// Throws Error{NonConvergence} when the subdivision budget is exhausted and
// Error{NonFinite} when the integrand returns NaN/Inf.
QuadResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec = {},
                     std::span<const double> breakpoints = {});

// Symmetric excision window around the pole of 1/(xi^2 - w^2).
// window_half_width == 0 selects half the distance to the nearest endpoint.
struct PVKernelSpec {
    double pole_location{0.0};
    double window_half_width{0.0};
};

// Cauchy principal value of  P int_a^b f(xi) / (xi^2 - w^2) d xi  with w = pole_location.
// The excised strip is folded onto its odd part, [g(w+s) - g(w-s)]/s with
// g = f/(xi + w), which is regular and integrated directly. A pole at w = 0 is
// treated as an ordinary integral (the caller's numerator must vanish like xi^2).
QuadResult pv_integrate(const RealFn& f, const PVKernelSpec& pole, double a, double b,
                        const QuadratureSpec& spec = {}, std::span<const double> breakpoints = {});

enum class Trig { sine, cosine };

// Filon-type integral  int_a^b envelope(x) * trig(w x) dx.  Each panel projects the
// envelope onto Legendre polynomials (16-point Gauss-Legendre) and integrates
// P_n(t) e^{i k t} exactly through spherical Bessel functions, so panels resolve the
// envelope only, never the oscillation. The error target is measured against the L1
// norm of the envelope: max(abs_tol, rel_tol * int |envelope|).
QuadResult oscillatory_integrate(const RealFn& envelope, double phase_frequency, Trig kind,
                                 double a, double b, const QuadratureSpec& spec = {},
                                 std::span<const double> breakpoints = {});

struct DiffSpec {
    double x_floor{1.0};
    double domain_min{-kInf};
    // Relative noise level of f; the step is noise^(1/3) * max(|x|, x_floor).
    double noise{std::numeric_limits<double>::epsilon()};
};

struct DiffResult {
    double value{0.0};
    double error{0.0};
};

// Central difference with one Richardson extrapolation step (h, h/2).
// Throws Error{DomainEdge} when x - h < domain_min.
DiffResult differentiate(const RealFn& f, double x, const DiffSpec& spec = {});

} // namespace dissfield::numerics
