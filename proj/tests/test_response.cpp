// Dispersion function, Green's function, sum rule and mode amplitudes.

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "dissfield/error.hpp"
#include "dissfield/response.hpp"

using namespace dissfield;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::InvalidInput;
}

ResponseEvaluator reference() {
    return {SusceptibilityModel(DrudeLorentz{0.1, 1.0, 0.1}), ModeContext::with_frequency(1.0)};
}

} // namespace

TEST(Response, PointValues) {
    const auto ev = reference();
    EXPECT_NEAR(std::abs(ev.lambda(1.0) - std::complex<double>(0.0, -1.0)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(ev.greens(1.0) - std::complex<double>(0.0, 1.0)), 0.0, 1e-13);
    EXPECT_NEAR(std::abs(lambda_k(ev, 1.0) * greens(ev, 1.0) - 1.0), 0.0, 1e-13);
    EXPECT_NEAR(ev.static_frequency(), std::sqrt(0.9), 1e-15);
}

TEST(Response, QuadratureLambdaMatchesClosedForm) {
    for (const SusceptibilityModel m : {SusceptibilityModel(DrudeLorentz{0.1, 1.0, 0.1}),
                                        SusceptibilityModel(Ohmic{0.2, 5.0})}) {
        const ResponseEvaluator ev(m, ModeContext::with_frequency(1.3));
        for (double w : {0.2, 0.9, 1.0, 1.3, 4.0}) {
            EXPECT_NEAR(std::abs(ev.lambda_quadrature(w) - ev.lambda(w)), 0.0, 1e-6 * std::abs(ev.lambda(w)))
                << m.name() << " " << w;
        }
    }
}

TEST(Response, ImGreensNonNegative) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 3.0), uw(1e-3, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double eta = 0.9 * u(rng) / 3.0;
        const ResponseEvaluator ev(SusceptibilityModel(DrudeLorentz{eta, u(rng), u(rng)}),
                                   ModeContext::with_frequency(u(rng)));
        for (int i = 0; i < 40; ++i) EXPECT_GE(ev.im_greens(uw(rng)), 0.0);
    }
}

TEST(Response, SumRule) {
    for (const SusceptibilityModel m : {SusceptibilityModel(DrudeLorentz{0.1, 1.0, 0.1}),
                                        SusceptibilityModel(DrudeLorentz{0.5, 2.0, 0.02}),
                                        SusceptibilityModel(Ohmic{0.2, 5.0}),
                                        SusceptibilityModel(Ohmic{1.5, 0.5})}) {
        for (double wk : {0.3, 1.0, 4.0}) {
            const ResponseEvaluator ev(m, ModeContext::with_frequency(wk));
            EXPECT_NEAR(commutator_sum_rule(ev).value, 1.0, 1e-6) << m.name() << " wk=" << wk;
        }
    }
}

TEST(Response, FreeFieldDeltaLimit) {
    const ResponseEvaluator ev(SusceptibilityModel(DrudeLorentz{0.0, 1.0, 0.1}), ModeContext::with_frequency(2.0));
    EXPECT_TRUE(ev.is_free());
    EXPECT_DOUBLE_EQ(commutator_sum_rule(ev).value, 1.0);
    EXPECT_EQ(kind_of([&] { ev.greens(2.0); }), ErrorKind::PoleHit);
    EXPECT_TRUE(std::isfinite(std::abs(ev.greens_regularized(2.0))));
}

TEST(Response, ResonancesAndStability) {
    const auto ev = reference();
    ASSERT_FALSE(ev.resonances().empty());
    for (double r : ev.resonances()) EXPECT_NEAR(ev.lambda(r).real(), 0.0, 1e-10);
    EXPECT_EQ(kind_of([] {
                  ResponseEvaluator(SusceptibilityModel(DrudeLorentz{1.2, 1.0, 0.1}), ModeContext::with_frequency(1.0));
              }),
              ErrorKind::InvalidInput);
}

TEST(Response, ModeAmplitudeNormalisation) {
    const auto ev = reference();
    const double at1 = std::norm(mode_amplitude_phi(ev, 1.0));
    EXPECT_NEAR(at1, 4.0 * pi * ev.im_greens(1.0), 1e-12);
    const auto r = ev.integrate_spectral([&](double w) { return w * std::norm(mode_amplitude_phi(ev, w)); });
    EXPECT_NEAR(r.value / (2.0 * pi * pi), 1.0, 1e-6);
    EXPECT_NEAR(std::abs(mode_amplitude_pi(ev, 2.0)), 2.0 * std::abs(mode_amplitude_phi(ev, 2.0)), 1e-14);
}

TEST(Response, FanoCoefficients) {
    const auto ev = reference();
    const auto c = fano_coefficients(ev, 1.0);
    EXPECT_EQ(c.h2, 0.0);
    EXPECT_NEAR(c.h4, std::sqrt(0.5), 1e-15);
    EXPECT_NEAR(std::norm(c.f2), 1.0 / pi, 1e-13);
    EXPECT_EQ(kind_of([&] { c.smooth_part(1.0); }), ErrorKind::InvalidInput);
    EXPECT_TRUE(std::isfinite(std::abs(c.smooth_part(1.5))));
}
