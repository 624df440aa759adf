// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oufpt/mc.hpp"
#include "oufpt/phase_map.hpp"
#include "test_util.hpp"

using namespace oufpt;

namespace {

const OUParams kFig1(1.0, 0.5, 2.0, 1.0);

ForcedLIFParams forced(double amplitude, double period, const OUParams& base = kFig1) {
    return ForcedLIFParams{base, Forcing::sinusoid(amplitude, period)};
}

SimConfig phase_cfg(std::uint64_t seed, double dt = 1e-3) {
    SimConfig cfg;
    cfg.n_paths = 1;
    cfg.dt = dt;
    cfg.t_max = 50.0;  // generous per-interval cap
    cfg.seed = seed;
    return cfg;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return 0.5 * acc;
}

}  // namespace

TEST_CASE("forcing validation") {
    CHECK_NOTHROW(validate_forced(forced(0.5, 1.0)));
    CHECK_NOTHROW(validate_forced({kFig1, Forcing::zero(2.0)}));

    // nonzero mean is rejected
    const ForcedLIFParams biased{kFig1,
                                 Forcing::generic([](double) { return 0.3; }, 1.0)};
    CHECK_THROWS_AS(validate_forced(biased), InvalidConfig);
    const ForcedLIFParams bad_period{kFig1, Forcing::sinusoid(1.0, 0.0)};
    CHECK_THROWS_AS(validate_forced(bad_period), InvalidConfig);
}

TEST_CASE("sinusoid decay convolution matches quadrature") {
    const auto f = Forcing::sinusoid(0.8, 1.3);
    const double beta = 1.7, t0 = 0.4, t1 = 0.43;
    // fine midpoint quadrature of int e^{-beta(t1-r)} h(r) dr
    const int n = 20000;
    double acc = 0.0;
    const double h = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) {
        const double r = t0 + (i + 0.5) * h;
        acc += std::exp(-beta * (t1 - r)) * f.h(r) * h;
    }
    CHECK(std::abs(f.decay_integral(beta, t0, t1) - acc) < 1e-10);
}

TEST_CASE("phase sequences live on the circle and are reproducible") {
    const auto p = forced(0.5, 1.0);
    const auto cfg = phase_cfg(7);
    const auto phases = simulate_phase_sequence(p, cfg, 200, 0.25);
    CHECK(phases.size() == 200);
    for (double phi : phases) {
        CHECK(phi >= 0.0);
        CHECK(phi < 1.0);
    }
    CHECK(simulate_phase_sequence(p, cfg, 200, 0.25) == phases);
    // arbitrary phi0 is wrapped
    CHECK_NOTHROW(simulate_phase_sequence(p, cfg, 3, 7.8));
}

TEST_CASE("unforced phase increments follow the first passage law") {
    // with h = 0 the phase advances by (fpt mod T)/T; compare increments
    // against first passage samples from the plain engine
    const ForcedLIFParams p{kFig1, Forcing::zero(1.0)};
    const auto cfg = phase_cfg(11, 2e-3);
    const std::size_t n = 4000;
    const auto phases = simulate_phase_sequence(p, cfg, n, 0.0);

    SimConfig mc_cfg;
    mc_cfg.n_paths = n;
    mc_cfg.dt = 2e-3;
    mc_cfg.t_max = 50.0;
    mc_cfg.seed = 1234;
    mc_cfg.bridge_correction = false;  // grid-crossing convention, as above
    const auto fpts = sample_fpt_ou(kFig1, mc_cfg);
    REQUIRE(fpts.n_censored() == 0);

    constexpr int kBins = 8;
    std::array<double, kBins> inc_hist{}, fpt_hist{};
    double prev = 0.0;
    for (double phi : phases) {
        const double inc = phi - prev;
        prev = phi;
        const double wrapped = inc - std::floor(inc);
        inc_hist[std::min<int>(kBins - 1, int(wrapped * kBins))] += 1.0 / n;
    }
    for (double t : fpts.times) {
        const double wrapped = t - std::floor(t);
        fpt_hist[std::min<int>(kBins - 1, int(wrapped * kBins))] += 1.0 / n;
    }
    for (int j = 0; j < kBins; ++j) {
        const double se = std::sqrt(2.0 * 0.125 * 0.875 / n);
        CHECK(std::abs(inc_hist[j] - fpt_hist[j]) < 4.0 * se);
    }
}

TEST_CASE("vanishing noise mode-locks onto the deterministic orbit") {
    const double amp = 0.05, period = 1.0;
    const OUParams quiet(1.0, 1e-8, 2.0, 1.0);
    const auto p = forced(amp, period, quiet);
    const auto cfg = phase_cfg(3, 1e-4);
    const auto phases = simulate_phase_sequence(p, cfg, 40, 0.3);

    // noiseless oracle: X(t) = x0 e^{-beta(t-tau)} + int_tau^t e^{-beta(t-r)} h(r) dr,
    // crossing times found by bisection on the closed form
    const double beta = quiet.beta;
    const double omega = 2.0 * M_PI / period;
    const auto drift_x = [&](double tau, double t) {
        const double denom = beta * beta + omega * omega;
        const auto anti = [&](double r) {
            return (beta * std::sin(omega * r) - omega * std::cos(omega * r)) /
                   denom;
        };
        return quiet.x0 * std::exp(-beta * (t - tau)) +
               amp * (anti(t) - std::exp(-beta * (t - tau)) * anti(tau));
    };
    double tau = 0.3 * period;
    for (std::size_t k = 0; k < phases.size(); ++k) {
        double lo = tau, hi = tau + 5.0;
        REQUIRE(drift_x(tau, hi) < quiet.theta);
        for (int iter = 0; iter < 80; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (drift_x(tau, mid) > quiet.theta ? lo : hi) = mid;
        }
        tau = 0.5 * (lo + hi);
        const double expected = tau / period - std::floor(tau / period);
        const double diff = std::abs(phases[k] - expected);
        CHECK(std::min(diff, 1.0 - diff) < 1e-3);
    }
}

TEST_CASE("phase histogram forgets the initial phase after burn-in") {
    const auto p = forced(0.5, 1.0, OUParams(1.0, 1.5, 2.0, 1.0));
    const auto cfg = phase_cfg(21, 2e-3);
    constexpr std::size_t kBurn = 100, kKeep = 4000;
    constexpr int kBins = 8;
    const auto histogram = [&](double phi0, std::uint64_t seed) {
        auto c = cfg;
        c.seed = seed;
        const auto phases = simulate_phase_sequence(p, c, kBurn + kKeep, phi0);
        std::vector<double> hist(kBins, 0.0);
        for (std::size_t k = kBurn; k < phases.size(); ++k) {
            hist[std::min<int>(kBins - 1, int(phases[k] * kBins))] += 1.0 / kKeep;
        }
        return hist;
    };
    const auto ha = histogram(0.1, 501);
    const auto hb = histogram(0.7, 502);
    for (int j = 0; j < kBins; ++j) {
        const double se = std::sqrt(2.0 * ha[j] * (1.0 - ha[j]) / kKeep + 1e-12);
        CHECK(std::abs(ha[j] - hb[j]) < 4.0 * se + 0.01);
    }
}

TEST_CASE("kernel estimation basics") {
    const auto p = forced(0.5, 1.0);
    SimConfig cfg = phase_cfg(31, 2e-3);
    const auto kernel = estimate_kernel(p, cfg, 16, 500);
    CHECK(kernel.n_bins == 16);
    for (std::size_t i = 0; i < 16; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 16; ++j) sum += kernel.at(i, j);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        CHECK(kernel.counts_per_row[i] == 500);
    }
    // bit-identical rerun
    const auto again = estimate_kernel(p, cfg, 16, 500);
    CHECK(again.matrix == kernel.matrix);

    CHECK_THROWS_AS(estimate_kernel(p, cfg, 1, 100), InvalidConfig);
    CHECK_THROWS_AS(estimate_kernel(p, cfg, 16, 0), InvalidConfig);
}

TEST_CASE("unforced kernel rows are circular shifts in distribution") {
    const ForcedLIFParams p{OUParams(1.0, 1.0, 2.0, 1.0), Forcing::zero(1.0)};
    SimConfig cfg = phase_cfg(41, 2e-3);
    constexpr std::size_t kBins = 16;
    const auto kernel = estimate_kernel(p, cfg, kBins, 2000);
    std::vector<double> row0(kBins), shifted(kBins);
    for (std::size_t j = 0; j < kBins; ++j) row0[j] = kernel.at(0, j);
    for (std::size_t i = 1; i < kBins; ++i) {
        for (std::size_t j = 0; j < kBins; ++j) {
            shifted[(j + i) % kBins] = row0[j];
        }
        std::vector<double> row(kBins);
        for (std::size_t j = 0; j < kBins; ++j) row[j] = kernel.at(i, j);
        CHECK(tv_distance(row, shifted) < 0.12);
    }
}

TEST_CASE("invariant density fixed points") {
    SUBCASE("rank-one kernel returns its row") {
        PhaseKernel k;
        k.n_bins = 4;
        const std::vector<double> v{0.1, 0.2, 0.3, 0.4};
        for (int i = 0; i < 4; ++i) {
            k.matrix.insert(k.matrix.end(), v.begin(), v.end());
        }
        const auto f = invariant_density(k, 1e-14);
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(f[j] - v[j]) < 1e-14);
        }
    }

    SUBCASE("identity kernel: every density is invariant, uniform returned") {
        PhaseKernel k;
        k.n_bins = 3;
        k.matrix = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        const auto f = invariant_density(k, 1e-14);
        for (double x : f) CHECK(x == doctest::Approx(1.0 / 3.0));
    }

    SUBCASE("iteration budget exhaustion reports the residual") {
        PhaseKernel k;
        k.n_bins = 2;
        k.matrix = {0.9, 0.1, 0.5, 0.5};
        try {
            invariant_density(k, 1e-15, 2);
            FAIL("expected NonConvergence");
        } catch (const NonConvergence& err) {
            CHECK(err.residual() > 0.0);
        }
        // with a budget it converges to (5/6, 1/6)
        const auto f = invariant_density(k, 1e-13);
        CHECK(std::abs(f[0] - 5.0 / 6.0) < 1e-10);
    }

    SUBCASE("malformed kernels are rejected") {
        PhaseKernel k;
        k.n_bins = 2;
        k.matrix = {0.7, 0.7, 0.5, 0.5};
        CHECK_THROWS_AS(invariant_density(k, 1e-10), InvalidConfig);
        k.matrix = {1.2, -0.2, 0.5, 0.5};
        CHECK_THROWS_AS(invariant_density(k, 1e-10), InvalidConfig);
    }
}

TEST_CASE("matrix powers stay row-stochastic") {
    const auto p = forced(0.5, 1.0);
    SimConfig cfg = phase_cfg(51, 2e-3);
    const auto kernel = estimate_kernel(p, cfg, 8, 400);
    // m-step criterion uses internal powers; validate with a manual square
    std::vector<double> square(64, 0.0);
    for (int i = 0; i < 8; ++i) {
        for (int k = 0; k < 8; ++k) {
            for (int j = 0; j < 8; ++j) {
                square[i * 8 + j] += kernel.at(i, k) * kernel.at(k, j);
            }
        }
    }
    for (int i = 0; i < 8; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 8; ++j) sum += square[i * 8 + j];
        CHECK(std::abs(sum - 1.0) < 1e-10);
    }
}

TEST_CASE("infimum criterion") {
    SUBCASE("rank-one positive kernel integrates its row") {
        PhaseKernel k;
        k.n_bins = 4;
        const std::vector<double> v{0.1, 0.2, 0.3, 0.4};
        for (int i = 0; i < 4; ++i) {
            k.matrix.insert(k.matrix.end(), v.begin(), v.end());
        }
        CHECK(std::abs(infimum_criterion(k, 1) - 1.0) < 1e-12);
    }

    SUBCASE("identity permutation gives zero") {
        PhaseKernel k;
        k.n_bins = 3;
        k.matrix = {1, 0, 0, 0, 1, 0, 0, 0, 1};
        CHECK(infimum_criterion(k, 1) == 0.0);
    }

    SUBCASE("monotone non-decreasing in m on an estimated kernel") {
        const auto p = forced(0.5, 1.0, OUParams(1.0, 1.0, 2.0, 1.0));
        SimConfig cfg = phase_cfg(61, 2e-3);
        const auto kernel = estimate_kernel(p, cfg, 8, 2000);
        const double c1 = infimum_criterion(kernel, 1);
        const double c2 = infimum_criterion(kernel, 2);
        const double c3 = infimum_criterion(kernel, 3);
        CHECK(c1 > 0.0);
        // not a theorem; holds on this instance and is pinned by the seed
        CHECK(c2 >= c1 - 1e-12);
        CHECK(c3 >= c2 - 1e-12);
    }
}
