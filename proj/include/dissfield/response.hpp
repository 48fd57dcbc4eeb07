// response.hpp — dressed Green's function, dispersion function and Fano coefficients
//
//   Lambda_k(w) = (omega_k^2 - w^2) - P int f^2(xi)/(xi^2 - w^2) dxi - i pi f^2(w)/(2w)
//               = omega_k^2 [1 - chi(w)] - w^2
//   G_k(w)      = -1 / (w^2 - omega_k^2 [1 - chi(w)]) = 1 / Lambda_k(w)
//
// Im G_k >= 0 on (0, inf) for passive models.

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dissfield/bath.hpp"
#include "dissfield/numerics.hpp"

namespace dissfield {

class ResponseEvaluator {
public:
    ResponseEvaluator(SusceptibilityModel model, ModeContext mode, double hbar = 1.0, double epsilon = 1e-9);

    const SusceptibilityModel& model() const { return coupling_.model(); }
    const ModeContext& mode() const { return coupling_.mode(); }
    const CouplingFunction& coupling() const { return coupling_; }
    const numerics::QuadratureSpec& quadrature() const { return model().quadrature(); }
    double hbar() const { return hbar_; }
    double epsilon() const { return epsilon_; }

    // Im chi vanishes identically: Im G collapses to (pi / 2 omega_k) delta(w - omega_k).
    bool is_free() const { return free_; }

    std::complex<double> chi(double w) const { return model().chi(w); }
    // Assembled from the closed-form (or Kramers-Kronig) Re chi plus the i pi f^2/2w term.
    std::complex<double> lambda(double w) const;
    // Same quantity with the principal-value integral over f^2(xi) done by quadrature.
    std::complex<double> lambda_quadrature(double w) const;
    // Throws Error{PoleHit} on an undamped pole; see greens_regularized.
    std::complex<double> greens(double w) const;
    // 1 / (Lambda + ... - i epsilon omega_k^2): the free-field limit with a finite width.
    std::complex<double> greens_regularized(double w) const;
    double im_greens(double w) const;

    // Renormalised static frequency omega_k sqrt(1 - chi(0)).
    double static_frequency() const;
    // Zeros of Re Lambda on (0, inf): dressed resonances.
    const std::vector<double>& resonances() const { return resonances_; }
    // Resonances, their widths at several scales and model feature points.
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    // Upper end of the spectral support: +inf, or the last sample of a tabulated model.
    double spectral_upper() const { return upper_; }

    // int_0^inf weight(w) Im G(w) dw, with the delta-function limit for free models.
    numerics::QuadResult integrate_im_greens(const numerics::RealFn& weight) const;
    // int_0^inf weight(w) Im G(w) trig(phase w) dw.
    numerics::QuadResult oscillatory_im_greens(const numerics::RealFn& weight, double phase,
                                               numerics::Trig kind) const;
    // Plain int_0^inf integrand(w) dw with the evaluator's breakpoints (no delta handling).
    numerics::QuadResult integrate_spectral(const numerics::RealFn& integrand) const;

private:
    CouplingFunction coupling_;
    double hbar_;
    double epsilon_;
    bool free_;
    double upper_;
    std::vector<double> resonances_;
    std::vector<double> breakpoints_;
};

std::complex<double> lambda_k(const ResponseEvaluator& ev, double w);
std::complex<double> greens(const ResponseEvaluator& ev, double w);

// (2/pi) int_0^inf w Im G_k(w) dw; equals 1 when [phi, pi] = i hbar is preserved.
numerics::QuadResult commutator_sum_rule(const ResponseEvaluator& ev);

struct FanoCoefficients {
    double omega{0.0};
    double h2{0.0};  // identically zero
    double h4{0.0};  // sqrt(hbar / 2w)
    std::complex<double> f2;
    // f4(w, w') = delta_part * delta(w - w') + smooth_part(w').
    double delta_part{0.0};
    // (f(w')/2w') [1/(w' - w - i0+) + 1/(w' + w)] f2, evaluated off the pole.
    // The -i0+ prescription adds i pi f(w)/(2w) f2 to the delta weight (pole_delta_weight).
    std::function<std::complex<double>(double)> smooth_part;
    std::complex<double> pole_delta_weight;
};

FanoCoefficients fano_coefficients(const ResponseEvaluator& ev, double w);

// Coefficient of the annihilation operator in phi(k, w): 2 pi sqrt(hbar/2w) f(w) G_k(w).
std::complex<double> mode_amplitude_phi(const ResponseEvaluator& ev, double w);
// pi(k, w) = -i w phi(k, w).
std::complex<double> mode_amplitude_pi(const ResponseEvaluator& ev, double w);

} // namespace dissfield
