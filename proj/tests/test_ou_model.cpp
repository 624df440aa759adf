// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "oufpt/ou_model.hpp"
#include "test_util.hpp"

using namespace oufpt;
using testutil::rel_err;

TEST_CASE("parameter validation enforces the suprathreshold ordering") {
    CHECK_NOTHROW(validate(1.0, 0.5, 2.0, 1.0));
    CHECK_THROWS_AS(validate(1.0, 0.5, 1.0, 1.0), SubthresholdInitialCondition);
    CHECK_THROWS_AS(validate(1.0, 0.5, 0.5, 1.0), SubthresholdInitialCondition);
    CHECK_THROWS_AS(validate(0.0, 0.5, 2.0, 1.0), NonPositiveParameter);
    CHECK_THROWS_AS(validate(-1.0, 0.5, 2.0, 1.0), NonPositiveParameter);
    CHECK_THROWS_AS(validate(1.0, 0.0, 2.0, 1.0), NonPositiveParameter);
    CHECK_THROWS_AS(validate(1.0, 0.5, 2.0, 0.0), NonPositiveParameter);
    CHECK_THROWS_AS(validate(1.0, 0.5, 2.0, -1.0), NonPositiveParameter);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate(inf, 0.5, 2.0, 1.0), NonPositiveParameter);
    CHECK_THROWS_AS(validate(1.0, 0.5, inf, 1.0), SubthresholdInitialCondition);
}

TEST_CASE("time rescaling s = e^{2 beta t} - 1") {
    CHECK(time_to_s(0.0, 1.0) == 0.0);
    CHECK(rel_err(time_to_s(std::log(3.0) / 2.0, 1.0), 2.0) < 1e-14);
    CHECK(rel_err(time_to_s(1.0, 0.5), std::expm1(1.0)) < 1e-14);

    CHECK(s_to_time(0.0, 1.0) == 0.0);
    CHECK(rel_err(s_to_time(2.0, 1.0), std::log(3.0) / 2.0) < 1e-14);
    CHECK(rel_err(s_to_time(8.0, 1.0), std::log(9.0) / 2.0) < 1e-14);

    CHECK_THROWS_AS(time_to_s(-1e-9, 1.0), NegativeTime);
    CHECK_THROWS_AS(s_to_time(-1.0, 1.0), NegativeTime);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(time_to_s(inf, 1.0), NegativeTime);
    CHECK_THROWS_AS(s_to_time(inf, 1.0), NegativeTime);
}

TEST_CASE("time rescaling round trip over random (t, beta)") {
    auto gen = testutil::rng(42);
    std::uniform_real_distribution<double> beta_draw(0.05, 10.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double beta = beta_draw(gen);
        const double t = u(gen) * 140.0 / beta;  // keeps e^{2 beta t} finite
        const double s = time_to_s(t, beta);
        CHECK(s >= 0.0);
        if (t > 0.0) {
            CHECK(rel_err(s_to_time(s, beta), t) < 1e-12);
        }
    }
    // strictly increasing in t
    CHECK(time_to_s(1.0, 2.0) < time_to_s(1.0 + 1e-9, 2.0));

    const auto pair = time_pair_from_t(0.7, 1.3);
    CHECK(pair.t == 0.7);
    CHECK(pair.s == time_to_s(0.7, 1.3));
}

TEST_CASE("pathwise representation X(t) in terms of B") {
    const OUParams p(1.0, 0.5, 2.0, 1.0);
    const auto zero = [](double) { return 0.0; };
    CHECK(ou_from_brownian_path(p, zero, 0.0) == 2.0);
    // deterministic decay toward the asymptotic mean 0
    CHECK(std::abs(ou_from_brownian_path(p, zero, 300.0)) < 1e-12);

    const auto sqrt_path = [](double s) { return std::sqrt(s); };
    const double got = ou_from_brownian_path(p, sqrt_path, std::log(3.0) / 2.0);
    CHECK(rel_err(got, 2.5 / std::sqrt(3.0)) < 1e-14);

    CHECK_THROWS_AS(ou_from_brownian_path(p, zero, -0.5), NegativeTime);
    CHECK_THROWS_AS(
        ou_from_brownian_path(p, zero, std::numeric_limits<double>::infinity()),
        NegativeTime);
}

TEST_CASE("pathwise threshold equivalence on a shared grid") {
    // X(t) > theta iff B(s) > b(s) evaluated with the same discretized path.
    const OUParams p(1.0, 0.5, 2.0, 1.0);
    const double dt = 0.01;
    const int n_steps = 250;
    auto gen = testutil::rng(7);
    std::normal_distribution<double> z(0.0, 1.0);

    const double c = std::sqrt(2.0 * p.beta) / p.sigma;
    int crossings_seen = 0;
    for (int path = 0; path < 200; ++path) {
        double b = 0.0;
        double s_prev = 0.0;
        bool crossed = false;
        for (int k = 0; k <= n_steps; ++k) {
            const double t = k * dt;
            const double s = std::expm1(2.0 * p.beta * t);
            if (k > 0) {
                b += std::sqrt(s - s_prev) * z(gen);
            }
            s_prev = s;
            const double b_here = b;
            const double x =
                ou_from_brownian_path(p, [b_here](double) { return b_here; }, t);
            const double boundary = c * (p.theta * std::sqrt(s + 1.0) - p.x0);
            const bool x_above = x > p.theta;
            const bool b_above = b > boundary;
            REQUIRE(x_above == b_above);
            if (!x_above) {
                crossed = true;
                break;
            }
        }
        if (crossed) ++crossings_seen;
    }
    CHECK(crossings_seen > 0);
}
