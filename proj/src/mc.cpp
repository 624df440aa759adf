// SPDX-License-Identifier: Apache-2.0
#include "oufpt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "oufpt/rng.hpp"

namespace oufpt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Bridge crossing probabilities below exp(-45) ~ 3e-20 are treated as zero;
// skipping the draw is safe because every draw is keyed by (path, step).
constexpr double kBridgeExpCutoff = 45.0;

std::size_t step_count(const SimConfig& cfg) {
    return static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.dt - 1e-12));
}

// Runs fn(path_index) over contiguous chunks; results land in per-path slots,
// so the outcome does not depend on the thread count.
template <class PathFn>
void run_paths(std::size_t n_paths, unsigned n_threads, const PathFn& fn) {
    unsigned hw = n_threads ? n_threads : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(hw, n_paths));
    if (workers <= 1) {
        for (std::size_t p = 0; p < n_paths; ++p) fn(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n_paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t p = begin; p < end; ++p) fn(p);
        });
    }
    for (auto& th : pool) th.join();
}

double interpolated_fraction(double d_above, double d_below) {
    // d_above > 0 >= d_below are signed distances to the boundary at the two
    // step ends; return the chord-crossing fraction, kept strictly inside the
    // step so binning on step-aligned edges stays exact.
    double frac = d_above / (d_above - d_below);
    return std::clamp(frac, 1e-9, 1.0 - 1e-9);
}

}  // namespace

void validate_config(const SimConfig& cfg) {
    if (cfg.n_paths < 1) {
        throw InvalidConfig("n_paths must be >= 1");
    }
    if (!(std::isfinite(cfg.dt) && cfg.dt > 0.0)) {
        throw InvalidConfig("dt must be finite and > 0");
    }
    if (!(std::isfinite(cfg.t_max) && cfg.t_max > cfg.dt)) {
        throw InvalidConfig("t_max must be finite and > dt");
    }
    if (step_count(cfg) >= (std::size_t{1} << 32)) {
        throw InvalidConfig("t_max/dt exceeds the 2^32 per-path step budget");
    }
}

std::size_t FptSamples::n_captured() const {
    return static_cast<std::size_t>(
        std::count_if(times.begin(), times.end(),
                      [](double t) { return std::isfinite(t); }));
}

FptSamples sample_fpt_ou(const OUParams& params, const SimConfig& cfg) {
    validate_config(cfg);
    const std::size_t n_steps = step_count(cfg);
    const double dt = cfg.dt;
    const double decay = std::exp(-params.beta * dt);
    const double noise_sd =
        params.sigma * std::sqrt(-std::expm1(-2.0 * params.beta * dt) /
                                 (2.0 * params.beta));
    // exp(-2 d_k d_{k+1} / ds) written in the original clock:
    // ds = e^{2 beta t_{k+1}} - e^{2 beta t_k} and d = (X - theta) e^{beta t}
    // sqrt(2 beta)/sigma collapse to a step-independent coefficient.
    const double bridge_coef =
        2.0 * params.beta /
        (params.sigma * params.sigma * std::sinh(params.beta * dt));
    const bool bridge = cfg.bridge_correction;
    const double theta = params.theta;

    FptSamples out;
    out.times.assign(cfg.n_paths, kInf);
    out.horizon = static_cast<double>(n_steps) * dt;
    out.coordinate = Coordinate::OriginalT;

    run_paths(cfg.n_paths, cfg.n_threads, [&](std::size_t p) {
        const rng::Stream stream{cfg.seed, p};
        double x = params.x0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const std::uint32_t step = static_cast<std::uint32_t>(k);
            const double xn =
                x * decay + noise_sd * stream.normal(step, 0);
            const double t0 = static_cast<double>(k) * dt;
            if (xn <= theta) {
                const double frac = interpolated_fraction(x - theta, xn - theta);
                out.times[p] = t0 + dt * frac;
                return;
            }
            if (bridge) {
                const double e = bridge_coef * (x - theta) * (xn - theta);
                if (e < kBridgeExpCutoff &&
                    stream.uniform(step, 1) < std::exp(-e)) {
                    out.times[p] = t0 + 0.5 * dt;
                    return;
                }
            }
            x = xn;
        }
    });
    return out;
}

namespace {

// Common Brownian driver: the boundary and the (possibly non-uniform) time
// grid are supplied as per-step vectors.
FptSamples sample_fpt_in_s(const std::vector<double>& s_grid,
                           const std::vector<double>& boundary_values,
                           const SimConfig& cfg) {
    const std::size_t n_steps = boundary_values.size() - 1;
    const bool bridge = cfg.bridge_correction;

    if (!(boundary_values.front() < 0.0)) {
        throw InvalidConfig("boundary must start strictly below B(0) = 0");
    }

    std::vector<double> ds(n_steps), sqrt_ds(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        ds[k] = s_grid[k + 1] - s_grid[k];
        if (!(ds[k] > 0.0)) {
            throw InvalidConfig("s grid must be strictly increasing");
        }
        sqrt_ds[k] = std::sqrt(ds[k]);
    }

    FptSamples out;
    out.times.assign(cfg.n_paths, kInf);
    out.horizon = s_grid.back();
    out.coordinate = Coordinate::RescaledS;

    run_paths(cfg.n_paths, cfg.n_threads, [&](std::size_t p) {
        const rng::Stream stream{cfg.seed, p};
        double b = 0.0;
        double d = -boundary_values[0];
        for (std::size_t k = 0; k < n_steps; ++k) {
            const std::uint32_t step = static_cast<std::uint32_t>(k);
            const double bn = b + sqrt_ds[k] * stream.normal(step, 0);
            const double dn = bn - boundary_values[k + 1];
            if (dn <= 0.0) {
                out.times[p] = s_grid[k] + ds[k] * interpolated_fraction(d, dn);
                return;
            }
            if (bridge) {
                const double e = 2.0 * d * dn / ds[k];
                if (e < kBridgeExpCutoff &&
                    stream.uniform(step, 1) < std::exp(-e)) {
                    out.times[p] = s_grid[k] + 0.5 * ds[k];
                    return;
                }
            }
            b = bn;
            d = dn;
        }
    });
    return out;
}

std::vector<double> uniform_grid(std::size_t n_steps, double ds) {
    std::vector<double> grid(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        grid[k] = static_cast<double>(k) * ds;
    }
    return grid;
}

}  // namespace

FptSamples sample_fpt_brownian(const SqrtBoundary& bdy, const SimConfig& cfg) {
    validate_config(cfg);
    const std::size_t n_steps = step_count(cfg);
    const auto grid = uniform_grid(n_steps, cfg.dt);
    std::vector<double> bvals(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        bvals[k] = bdy.value(grid[k]);
    }
    return sample_fpt_in_s(grid, bvals, cfg);
}

FptSamples sample_fpt_brownian_line(double a1, double b1,
                                    const SimConfig& cfg) {
    validate_config(cfg);
    if (!(std::isfinite(a1) && a1 < 0.0) || !(std::isfinite(b1) && b1 > 0.0)) {
        throw InvalidLine("line must have a1 < 0 and b1 > 0");
    }
    const std::size_t n_steps = step_count(cfg);
    const auto grid = uniform_grid(n_steps, cfg.dt);
    std::vector<double> bvals(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        bvals[k] = a1 + b1 * grid[k];
    }
    return sample_fpt_in_s(grid, bvals, cfg);
}

FptSamples sample_fpt_brownian_grid(const SqrtBoundary& bdy,
                                    const std::vector<double>& s_grid,
                                    const SimConfig& cfg) {
    if (cfg.n_paths < 1) {
        throw InvalidConfig("n_paths must be >= 1");
    }
    if (s_grid.size() < 2 || s_grid.front() != 0.0) {
        throw InvalidConfig("s grid must start at 0 and contain >= 2 points");
    }
    if (s_grid.size() - 1 >= (std::size_t{1} << 32)) {
        throw InvalidConfig("s grid exceeds the 2^32 per-path step budget");
    }
    std::vector<double> bvals(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        bvals[k] = bdy.value(s_grid[k]);
    }
    return sample_fpt_in_s(s_grid, bvals, cfg);
}

DensityEstimate estimate_density(const FptSamples& samples,
                                 const std::vector<double>& edges) {
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw InvalidConfig("bin edges must be strictly increasing, size >= 2");
    }
    const std::size_t n_bins = edges.size() - 1;
    const double n = static_cast<double>(samples.times.size());

    std::vector<std::size_t> counts(n_bins, 0);
    std::size_t captured = 0;
    for (double t : samples.times) {
        if (!std::isfinite(t) || t < edges.front() || t >= edges.back()) {
            continue;
        }
        const auto it = std::upper_bound(edges.begin(), edges.end(), t);
        ++counts[static_cast<std::size_t>(it - edges.begin()) - 1];
        ++captured;
    }
    if (captured == 0) {
        throw NoCapturedPaths("no first passage time falls inside the bins");
    }

    DensityEstimate est;
    est.bin_edges = edges;
    est.bin_density.resize(n_bins);
    est.bin_std_err.resize(n_bins);
    est.n_captured = captured;
    est.n_censored = samples.times.size() - captured;
    est.coordinate = samples.coordinate;
    for (std::size_t j = 0; j < n_bins; ++j) {
        const double width = edges[j + 1] - edges[j];
        const double phat = static_cast<double>(counts[j]) / n;
        est.bin_density[j] = phat / width;
        est.bin_std_err[j] = std::sqrt(phat * (1.0 - phat) / n) / width;
    }
    return est;
}

TailEstimate log_tail_from_samples(const FptSamples& samples, double t) {
    if (!(std::isfinite(t) && t >= 0.0 && t < samples.horizon)) {
        throw InsufficientTailData("t must lie in [0, horizon)");
    }
    std::vector<double> sorted;
    sorted.reserve(samples.times.size());
    for (double x : samples.times) {
        if (std::isfinite(x)) sorted.push_back(x);
    }
    std::sort(sorted.begin(), sorted.end());

    const double n = static_cast<double>(samples.times.size());
    double half = std::max(samples.horizon * 1e-3,
                           samples.horizon / static_cast<double>(
                               std::max<std::size_t>(sorted.size(), 1)));
    constexpr std::size_t kMinEvents = 50;
    for (;;) {
        const double lo = std::max(0.0, t - half);
        const double hi = std::min(samples.horizon, t + half);
        const auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
        const auto last = std::lower_bound(sorted.begin(), sorted.end(), hi);
        const std::size_t count = static_cast<std::size_t>(last - first);
        if (count >= kMinEvents) {
            const double window = hi - lo;
            const double phat = static_cast<double>(count) / n;
            constexpr double z = 1.959963984540054;  // 95% Wilson interval
            const double z2n = z * z / n;
            const double denom = 1.0 + z2n;
            const double center = (phat + 0.5 * z2n) / denom;
            const double hw =
                z * std::sqrt(phat * (1.0 - phat) / n + 0.25 * z2n * z2n / n) /
                denom;
            TailEstimate est{};
            est.log_density = std::log(phat) - std::log(window);
            est.log_lo = std::log(std::max(center - hw,
                                           std::numeric_limits<double>::min())) -
                         std::log(window);
            est.log_hi = std::log(std::min(center + hw, 1.0)) - std::log(window);
            est.count = count;
            est.window = window;
            return est;
        }
        if (lo == 0.0 && hi == samples.horizon) {
            throw InsufficientTailData(
                "fewer than 50 events available around the requested time");
        }
        half *= 1.6;
    }
}

TailEstimate estimate_log_tail(const OUParams& params, const SimConfig& cfg,
                               double t) {
    validate_config(cfg);
    if (!(t < cfg.t_max)) {
        throw InsufficientTailData("t must be below the simulation horizon");
    }
    return log_tail_from_samples(sample_fpt_ou(params, cfg), t);
}

}  // namespace oufpt
