// SPDX-License-Identifier: Apache-2.0
#include "oufpt/phase_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "oufpt/rng.hpp"

namespace oufpt {

namespace {

double wrap_unit(double x) { return x - std::floor(x); }

// One inter-spike interval: exact OU decay + per-step forcing convolution +
// exact Gaussian increment; crossing time interpolated inside the step.
struct IsiStepper {
    const ForcedLIFParams& p;
    double dt;
    double decay;
    double noise_sd;
    double max_interval;

    IsiStepper(const ForcedLIFParams& params, const SimConfig& cfg)
        : p(params),
          dt(cfg.dt),
          decay(std::exp(-params.base.beta * cfg.dt)),
          noise_sd(params.base.sigma *
                   std::sqrt(-std::expm1(-2.0 * params.base.beta * cfg.dt) /
                             (2.0 * params.base.beta))),
          max_interval(cfg.t_max) {}

    double drive(double t0, double t1) const {
        if (p.forcing.decay_integral) {
            return p.forcing.decay_integral(p.base.beta, t0, t1);
        }
        // midpoint rule for general forcing
        return p.forcing.h(0.5 * (t0 + t1)) *
               (-std::expm1(-p.base.beta * (t1 - t0)) / p.base.beta);
    }

    // Advances from absolute time t_start with X = x0 until X <= theta.
    // Returns the crossing time; steps consume (stream, step_counter).
    double run(const rng::Stream& stream, double t_start,
               std::uint64_t& step_counter) const {
        double t = t_start;
        double x = p.base.x0;
        const double theta = p.base.theta;
        while (t - t_start < max_interval) {
            if (step_counter > std::numeric_limits<std::uint32_t>::max()) {
                throw InvalidConfig("per-trajectory step budget (2^32) exceeded");
            }
            const std::uint32_t step = static_cast<std::uint32_t>(step_counter++);
            const double t1 = t + dt;
            const double xn =
                x * decay + drive(t, t1) + noise_sd * stream.normal(step, 0);
            if (xn <= theta) {
                double frac = (x - theta) / (x - xn);
                frac = std::clamp(frac, 1e-9, 1.0 - 1e-9);
                return t + dt * frac;
            }
            x = xn;
            t = t1;
        }
        throw InvalidConfig(
            "inter-reset interval exceeded t_max; raise t_max or check drive");
    }
};

}  // namespace

Forcing Forcing::zero(double period) {
    Forcing f;
    f.period = period;
    f.h = [](double) { return 0.0; };
    f.decay_integral = [](double, double, double) { return 0.0; };
    return f;
}

Forcing Forcing::sinusoid(double amplitude, double period) {
    const double omega = 2.0 * M_PI / period;
    Forcing f;
    f.period = period;
    f.h = [amplitude, omega](double t) { return amplitude * std::sin(omega * t); };
    // int e^{beta r} sin(omega r) dr = e^{beta r}(beta sin - omega cos)/(beta^2+omega^2)
    f.decay_integral = [amplitude, omega](double beta, double t0, double t1) {
        const double denom = beta * beta + omega * omega;
        const auto anti = [&](double r) {
            return (beta * std::sin(omega * r) - omega * std::cos(omega * r)) /
                   denom;
        };
        return amplitude * (anti(t1) - std::exp(-beta * (t1 - t0)) * anti(t0));
    };
    return f;
}

Forcing Forcing::generic(std::function<double(double)> h, double period) {
    Forcing f;
    f.period = period;
    f.h = std::move(h);
    return f;
}

void validate_forced(const ForcedLIFParams& params) {
    if (!(std::isfinite(params.forcing.period) && params.forcing.period > 0.0)) {
        throw InvalidConfig("forcing period must be finite and > 0");
    }
    if (!params.forcing.h) {
        throw InvalidConfig("forcing function is empty");
    }
    // composite Simpson check of the zero-mean requirement
    constexpr int kPanels = 4096;
    const double T = params.forcing.period;
    const double h = T / kPanels;
    double acc = params.forcing.h(0.0) + params.forcing.h(T);
    for (int i = 1; i < kPanels; ++i) {
        acc += params.forcing.h(i * h) * (i % 2 ? 4.0 : 2.0);
    }
    const double mean = acc * h / 3.0 / T;
    if (!(std::abs(mean) <= 1e-8)) {
        throw InvalidConfig("forcing must have zero mean over one period");
    }
}

std::vector<double> simulate_phase_sequence(const ForcedLIFParams& params,
                                            const SimConfig& cfg,
                                            std::size_t n_resets, double phi0) {
    validate_forced(params);
    validate_config(cfg);
    const IsiStepper stepper(params, cfg);
    const rng::Stream stream{cfg.seed, 0};
    const double T = params.forcing.period;

    std::vector<double> phases;
    phases.reserve(n_resets);
    double t = wrap_unit(phi0) * T;
    std::uint64_t step_counter = 0;
    for (std::size_t r = 0; r < n_resets; ++r) {
        t = stepper.run(stream, t, step_counter);
        phases.push_back(wrap_unit(t / T));
    }
    return phases;
}

PhaseKernel estimate_kernel(const ForcedLIFParams& params, const SimConfig& cfg,
                            std::size_t n_bins, std::size_t samples_per_bin) {
    validate_forced(params);
    validate_config(cfg);
    if (n_bins < 2) {
        throw InvalidConfig("n_bins must be >= 2");
    }
    if (samples_per_bin < 1) {
        throw InvalidConfig("samples_per_bin must be >= 1");
    }
    const IsiStepper stepper(params, cfg);
    const double T = params.forcing.period;

    PhaseKernel kernel;
    kernel.n_bins = n_bins;
    kernel.matrix.assign(n_bins * n_bins, 0.0);
    kernel.counts_per_row.assign(n_bins, samples_per_bin);

    std::vector<std::vector<std::size_t>> counts(
        n_bins, std::vector<std::size_t>(n_bins, 0));

    // Rows are independent; each sample owns the stream keyed by its global
    // index, so the estimate is identical for any thread count.
    unsigned hw = cfg.n_threads ? cfg.n_threads : std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, n_bins));
    const auto run_row = [&](std::size_t row) {
        const double start_phase = (static_cast<double>(row) + 0.5) /
                                   static_cast<double>(n_bins);
        for (std::size_t j = 0; j < samples_per_bin; ++j) {
            const rng::Stream stream{cfg.seed, row * samples_per_bin + j};
            std::uint64_t step_counter = 0;
            const double tau = stepper.run(stream, start_phase * T, step_counter);
            const double phi = wrap_unit(tau / T);
            const std::size_t bin = std::min(
                n_bins - 1,
                static_cast<std::size_t>(phi * static_cast<double>(n_bins)));
            ++counts[row][bin];
        }
    };
    if (workers <= 1) {
        for (std::size_t row = 0; row < n_bins; ++row) run_row(row);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_bins + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min<std::size_t>(n_bins, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([begin, end, &run_row] {
                for (std::size_t row = begin; row < end; ++row) run_row(row);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < n_bins; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n_bins; ++j) {
            total += static_cast<double>(counts[i][j]);
        }
        for (std::size_t j = 0; j < n_bins; ++j) {
            kernel.matrix[i * n_bins + j] =
                static_cast<double>(counts[i][j]) / total;
        }
    }
    return kernel;
}

namespace {

void require_row_stochastic(const PhaseKernel& kernel) {
    if (kernel.n_bins < 1 ||
        kernel.matrix.size() != kernel.n_bins * kernel.n_bins) {
        throw InvalidConfig("kernel matrix has inconsistent dimensions");
    }
    for (std::size_t i = 0; i < kernel.n_bins; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < kernel.n_bins; ++j) {
            const double v = kernel.at(i, j);
            if (!(v >= 0.0)) {
                throw InvalidConfig("kernel entries must be nonnegative");
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw InvalidConfig("kernel rows must sum to 1");
        }
    }
}

}  // namespace

std::vector<double> invariant_density(const PhaseKernel& kernel, double tol,
                                      std::size_t max_iterations) {
    require_row_stochastic(kernel);
    const std::size_t n = kernel.n_bins;
    std::vector<double> f(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double fi = f[i];
            const double* row = kernel.matrix.data() + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                next[j] += fi * row[j];
            }
        }
        double total = 0.0;
        for (double v : next) total += v;
        for (double& v : next) v /= total;
        residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            residual += std::abs(next[j] - f[j]);
        }
        residual *= 0.5;  // total variation between probability vectors
        f.swap(next);
        if (residual <= tol) {
            return f;
        }
    }
    throw NonConvergence("power iteration budget exhausted", residual);
}

double infimum_criterion(const PhaseKernel& kernel, std::size_t m) {
    require_row_stochastic(kernel);
    if (m < 1) {
        throw InvalidConfig("kernel power m must be >= 1");
    }
    const std::size_t n = kernel.n_bins;
    std::vector<double> power = kernel.matrix;
    std::vector<double> next(n * n, 0.0);
    for (std::size_t step = 1; step < m; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                const double v = power[i * n + k];
                if (v == 0.0) continue;
                const double* row = kernel.matrix.data() + k * n;
                for (std::size_t j = 0; j < n; ++j) {
                    next[i * n + j] += v * row[j];
                }
            }
        }
        power.swap(next);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col_min = power[j];
        for (std::size_t i = 1; i < n; ++i) {
            col_min = std::min(col_min, power[i * n + j]);
        }
        total += col_min;
    }
    return total;
}

}  // namespace oufpt
