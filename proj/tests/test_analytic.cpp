// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oufpt/analytic.hpp"
#include "test_util.hpp"

using namespace oufpt;
using testutil::rel_err;

namespace {

const OUParams kFig1(1.0, 0.5, 2.0, 1.0);

// Independent oracle for g2: composite Simpson on a fixed uniform grid of the
// exponentially shifted integrand, sharing no code with the adaptive path.
double g2_fixed_grid_oracle(const OUParams& p, double s_prime, int n_panels) {
    const SqrtBoundary bdy(p);
    const auto frame = build_frame(bdy, s_prime);
    const auto log_f = [&](double s) {
        const double l1 = frame.a1 + frame.b1 * s;
        const double d = l1 - frame.a2;
        if (d <= 0.0 || s <= 0.0 || s >= s_prime) {
            return -std::numeric_limits<double>::infinity();
        }
        const double two_pi = 2.0 * M_PI;
        return std::log(-frame.a1) - 0.5 * std::log(two_pi * s * s * s) -
               l1 * l1 / (2.0 * s) + std::log(d) -
               0.5 * std::log(two_pi * std::pow(s_prime - s, 3.0)) -
               d * d / (2.0 * (s_prime - s));
    };
    const double lo = frame.s_star;
    const double hi = frame.s_prime;
    const double h = (hi - lo) / n_panels;
    double shift = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < n_panels; ++i) {
        shift = std::max(shift, log_f(lo + i * h));
    }
    double acc = 0.0;  // endpoint limits are both 0
    for (int i = 1; i < n_panels; ++i) {
        acc += std::exp(log_f(lo + i * h) - shift) * (i % 2 ? 4.0 : 2.0);
    }
    return shift + std::log(acc * h / 3.0);
}

}  // namespace

TEST_CASE("g01 closed form and domain errors") {
    // exponent vanishes at s = -a1/b1
    CHECK(rel_err(g01(2.0, -2.0 * std::sqrt(2.0), std::sqrt(2.0)),
                  1.0 / std::sqrt(2.0 * M_PI)) < 1e-14);
    CHECK(rel_err(g01(1.0, -1.0, 1.0), 1.0 / std::sqrt(2.0 * M_PI)) < 1e-14);
    CHECK(g01(1e-6, -1.0, 1.0) == 0.0);  // essential singularity dominates

    CHECK_THROWS_AS(g01(0.0, -1.0, 1.0), NonPositiveTime);
    CHECK_THROWS_AS(g01(-1.0, -1.0, 1.0), NonPositiveTime);
    CHECK_THROWS_AS(g01(1.0, 0.0, 1.0), InvalidLine);
    CHECK_THROWS_AS(g01(1.0, 0.5, 1.0), InvalidLine);
    CHECK_THROWS_AS(g01(1.0, -1.0, 0.0), InvalidLine);
}

TEST_CASE("g01 integrates to 1 over (0, inf)") {
    // composite Simpson; the horizon is far enough out that the inverse
    // Gaussian tail is below 1e-10
    const auto integrate = [](double a1, double b1, double s_max) {
        const int n = 400000;
        const double h = s_max / n;
        double acc = 0.0;
        for (int i = 1; i < n; ++i) {
            acc += g01(i * h, a1, b1) * (i % 2 ? 4.0 : 2.0);
        }
        return acc * h / 3.0;
    };
    CHECK(std::abs(integrate(-2.0 * std::sqrt(2.0), std::sqrt(2.0), 80.0) - 1.0) <
          1e-6);
    CHECK(std::abs(integrate(-1.0, 1.0, 60.0) - 1.0) < 1e-6);
    CHECK(std::abs(testutil::line_crossing_cdf(80.0, -2.0 * std::sqrt(2.0),
                                               std::sqrt(2.0)) -
                   1.0) < 1e-10);
}

TEST_CASE("g12 closed form and degenerate cases") {
    const double expected =
        std::sqrt(2.0) / std::sqrt(2.0 * M_PI * 8.0) * std::exp(-0.5);
    CHECK(rel_err(g12(3.0, 1.0, 0.0, std::sqrt(2.0)), expected) < 1e-14);
    CHECK(rel_err(expected, 0.1210) < 1e-3);

    CHECK(g12(3.0, 1.0, 1.5, 1.5) == 0.0);  // zero distance
    // s' - s = (start - a2)^2 with unit distance
    CHECK(rel_err(g12(2.0, 1.0, 1.0, 0.0),
                  std::exp(-0.5) / std::sqrt(2.0 * M_PI)) < 1e-14);

    CHECK_THROWS_AS(g12(1.0, 1.0, 0.0, 1.0), TimeOrderViolation);
    CHECK_THROWS_AS(g12(0.5, 1.0, 0.0, 1.0), TimeOrderViolation);
    CHECK_THROWS_AS(g12(1.0, 0.0, 0.0, 1.0), TimeOrderViolation);
}

TEST_CASE("g2 quadrature agrees with the fixed-grid oracle") {
    const SqrtBoundary bdy(kFig1);
    const auto quad = g2_quadrature(bdy, 10.0, 1e-8);
    CHECK(quad.value > 0.0);
    CHECK(quad.rel_error <= 1e-8);

    const double oracle = g2_fixed_grid_oracle(kFig1, 10.0, 1'000'000);
    CHECK(rel_err(std::exp(quad.log_value), std::exp(oracle)) < 1e-6);

    // a couple of other regimes against the same oracle
    for (double sp : {9.0, 25.0}) {
        const auto q = g2_quadrature(bdy, sp);
        CHECK(rel_err(q.log_value, g2_fixed_grid_oracle(kFig1, sp, 1'000'000)) <
              1e-7);
    }
}

TEST_CASE("g2 quadrature error paths") {
    const SqrtBoundary bdy(kFig1);
    CHECK_THROWS_AS(g2_quadrature(bdy, 10.0, 1e-8, 300),
                    QuadratureNonConvergence);
    CHECK_THROWS_AS(g2_quadrature(bdy, 0.0), NonPositiveSPrime);
}

TEST_CASE("M optimization witness") {
    const auto w = mmax(1.5);
    const double c_expected = std::sqrt(5.25) - 1.5;
    CHECK(rel_err(w.c_value, c_expected) < 1e-14);
    CHECK(rel_err(w.m_max,
                  (1.0 - c_expected) / 4.0 * std::exp(-3.0 / c_expected)) <
          1e-14);
    CHECK(rel_err(w.m_max, 1.177e-3) < 1e-3);
    CHECK(w.nu_plus == 2.0 * w.eta_plus);
    CHECK(w.eta_plus > 0.0);
    CHECK(w.nu_plus < 1.0);

    // the witness is the stationary point: M(eta+, nu+) equals the closed form
    const auto m_of = [&](double eta, double nu) {
        return eta * (nu - eta) * std::exp(-2.0 * w.b_value / (1.0 - nu * nu));
    };
    CHECK(rel_err(m_of(w.eta_plus, w.nu_plus), w.m_max) < 1e-13);

    // B = 1 boundary case of the 1 - C > 1/(4B) chain
    const auto w1 = mmax(1.0);
    CHECK(rel_err(1.0 - w1.c_value, 2.0 - std::sqrt(3.0)) < 1e-13);
    CHECK(1.0 - w1.c_value > 0.25);

    // C -> 1 from below as B -> infinity, monotonically
    double prev = 0.0;
    for (double b = 0.01; b < 1e8; b *= 10.0) {
        const double c = mmax(b).c_value;
        CHECK(c > prev);
        CHECK(c < 1.0);
        prev = c;
    }
    CHECK(mmax(1e8).c_value > 1.0 - 1e-7);

    CHECK_THROWS_AS(mmax(0.0), NonPositiveB);
    CHECK_THROWS_AS(mmax(-2.0), NonPositiveB);
}

TEST_CASE("mmax dominates a local grid search") {
    for (double b : {0.4, 1.5, 6.0}) {
        const auto w = mmax(b);
        double grid_max = 0.0;
        const double step = 2e-3;
        for (double nu = step; nu < 1.0; nu += step) {
            const double expo = std::exp(-2.0 * b / (1.0 - nu * nu));
            for (double eta = step; eta < nu; eta += step) {
                grid_max = std::max(grid_max, eta * (nu - eta) * expo);
            }
        }
        CHECK(w.m_max >= grid_max - 1e-9);
        CHECK(std::abs(w.m_max - grid_max) <= 1e-4);
    }
}

TEST_CASE("C inequality chain over random B") {
    auto gen = testutil::rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double b_half = 0.25 + u(gen) * 200.0;
        CHECK(mmax(b_half).c_value > 0.5);
        const double b_quarter = 1.0 + u(gen) * 200.0;
        const auto w = mmax(b_quarter);
        CHECK(1.0 - w.c_value > 1.0 / (4.0 * b_quarter));
    }
}

TEST_CASE("explicit lower bound for g2") {
    const double expected = std::log(512.0 / (9.0 * M_PI)) -
                            6.0 * std::log(10.0) - 125.0;
    CHECK(rel_err(lemma4_log_bound(kFig1, 10.0), expected) < 1e-14);
    CHECK(rel_err(expected, -135.92) < 1e-4);

    CHECK_THROWS_AS(lemma4_log_bound(kFig1, 8.0), HypothesisNotMet);
    try {
        lemma4_log_bound(kFig1, 8.0);
    } catch (const HypothesisNotMet& err) {
        CHECK(err.threshold() == 8.0);
    }

    // prefactor degeneracy: bound heads to -inf as x0/theta -> 1+
    const OUParams near(1.0, 0.5, 1.0 + 1e-9, 1.0);
    CHECK(lemma4_log_bound(near, 10.0) < expected - 20.0);

    // threshold branches
    const OUParams wide(1.0, 0.5, 10.0, 1.0);
    CHECK(lemma4_threshold(wide) == 101.0);
    const OUParams noisy(0.25, 2.0, 2.0, 1.0);
    CHECK(lemma4_threshold(noisy) == 128.0);
}

TEST_CASE("remark constants for the Figure-1 parameters") {
    const auto cert = remark_constants(kFig1);
    CHECK(rel_err(cert.k, 1024.0 / (9.0 * M_PI)) < 1e-14);
    CHECK(cert.p == 1.125);
    CHECK(rel_err(cert.u, std::log(3.0)) < 1e-14);
    CHECK(rel_err(cert.cap_k, 512.0 / (9.0 * M_PI)) < 1e-14);
    CHECK(cert.cap_h == 0.125);
    CHECK(rel_err(cert.k, 2.0 * kFig1.beta * cert.cap_k) < 1e-15);
}

TEST_CASE("certified log bound") {
    const auto cert = remark_constants(kFig1);
    const double expected =
        std::log(1024.0 / (9.0 * M_PI)) - 1.125 * std::exp(7.2);
    CHECK(rel_err(theorem_log_bound(cert, 1.2), expected) < 1e-13);
    CHECK(rel_err(expected, -1503.3) < 1e-4);

    CHECK_THROWS_AS(theorem_log_bound(cert, cert.u), BelowOnset);
    CHECK_THROWS_AS(theorem_log_bound(cert, 0.5), BelowOnset);

    double prev = theorem_log_bound(cert, cert.u + 1e-6);
    for (double t = 1.2; t < 3.0; t += 0.2) {
        const double v = theorem_log_bound(cert, t);
        CHECK(v < prev);
        CHECK(std::isfinite(v));
        prev = v;
    }
}

TEST_CASE("density transport back to the original clock") {
    CHECK(rho_b_to_rho_x(kFig1, [](double) { return 0.7; }, 0.0) == doctest::Approx(1.4));
    for (double t : {0.0, 0.3, 1.7}) {
        CHECK(rel_err(rho_b_to_rho_x(kFig1, [](double s) { return 1.0 / (s + 1.0); }, t),
                      2.0) < 1e-13);
    }
    CHECK_THROWS_AS(rho_b_to_rho_x(kFig1, [](double) { return 1.0; }, -0.1),
                    NegativeTime);
}

TEST_CASE("bound chain: lemma bound < quadrature, certified bound < transported") {
    auto gen = testutil::rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double beta = 0.25 + u(gen) * 3.75;
        const double sigma = 0.1 + u(gen) * 1.9;
        const double theta = 0.3 + u(gen) * 1.7;
        const double x0 = theta * (1.05 + u(gen) * 4.0);
        const OUParams p(beta, sigma, x0, theta);
        const SqrtBoundary bdy(p);
        const double sp = lemma4_threshold(p) * (1.05 + u(gen));
        const double bound = lemma4_log_bound(p, sp);
        const auto quad = g2_quadrature(bdy, sp);
        CHECK(bound < quad.log_value);
    }

    const auto cert = remark_constants(kFig1);
    for (double dt : {0.05, 0.3, 0.6}) {
        const double t = cert.u + dt;
        const double s = std::expm1(2.0 * kFig1.beta * t);
        const auto quad = g2_quadrature(SqrtBoundary(kFig1), s);
        const double transported =
            std::log(2.0 * kFig1.beta) + 2.0 * kFig1.beta * t + quad.log_value;
        CHECK(theorem_log_bound(cert, t) < transported);
    }
}

TEST_CASE("exponential ladder e^{-10 beta t} > exp(-e^{6 beta t}) for beta t > 1") {
    auto gen = testutil::rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double bt = 1.0 + u(gen) * 40.0;
        CHECK(-10.0 * bt > -std::exp(6.0 * bt));
    }
}
