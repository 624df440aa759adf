// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "oufpt/boundary.hpp"
#include "oufpt/ou_model.hpp"

namespace oufpt {

enum class Coordinate { OriginalT, RescaledS };

// Shared simulation configuration.  For the Brownian samplers dt and t_max
// are read in rescaled time (a step ds and a horizon s_max).
struct SimConfig {
    std::size_t n_paths = 1;
    double dt = 1e-3;
    double t_max = 1.0;
    std::uint64_t seed = 0;
    bool bridge_correction = true;
    unsigned n_threads = 0;  // 0 = hardware concurrency
};

void validate_config(const SimConfig& cfg);

// First passage times, one entry per path; +inf marks a path still alive at
// the horizon (censoring is reported, never dropped).
struct FptSamples {
    std::vector<double> times;
    double horizon = 0.0;
    Coordinate coordinate = Coordinate::OriginalT;

    std::size_t n_captured() const;
    std::size_t n_censored() const { return times.size() - n_captured(); }
};

// Exact-transition sampling of the OU first passage to theta.  Within-step
// crossings are detected, when bridge_correction is on, with the exact
// linear-boundary bridge probability applied in the rescaled coordinate
// where the process is a standard Brownian motion.
FptSamples sample_fpt_ou(const OUParams& params, const SimConfig& cfg);

// Brownian first passage to the square-root boundary, stepped in rescaled
// time with increments N(0, ds).
FptSamples sample_fpt_brownian(const SqrtBoundary& bdy, const SimConfig& cfg);

// Brownian first passage to the line a1 + b1 s; the bridge correction is
// exact here, which makes this the engine's validation target against g01.
FptSamples sample_fpt_brownian_line(double a1, double b1, const SimConfig& cfg);

// Variant on a caller-supplied strictly increasing s-grid (s_grid[0] = 0).
// Increments are N(0, s_{k+1} - s_k); cfg.dt/t_max are ignored.  Used to step
// the rescaled problem on the exact image of a uniform original-time grid.
FptSamples sample_fpt_brownian_grid(const SqrtBoundary& bdy,
                                    const std::vector<double>& s_grid,
                                    const SimConfig& cfg);

struct DensityEstimate {
    std::vector<double> bin_edges;
    std::vector<double> bin_density;
    std::vector<double> bin_std_err;
    std::size_t n_captured = 0;
    std::size_t n_censored = 0;
    Coordinate coordinate = Coordinate::OriginalT;
};

// Histogram density of the sub-distribution on [edges.front(), edges.back());
// samples outside that window (including censored ones) count as censored
// mass, so sum(density * width) + censored_fraction = 1.
DensityEstimate estimate_density(const FptSamples& samples,
                                 const std::vector<double>& edges);

struct TailEstimate {
    double log_density;
    double log_lo;   // Wilson 95% interval, transported to log densities
    double log_hi;
    std::size_t count;
    double window;
};

// Kernel-free local density estimate at time t: count / (n * window) with a
// window grown symmetrically around t until it holds >= 50 events.
TailEstimate log_tail_from_samples(const FptSamples& samples, double t);
TailEstimate estimate_log_tail(const OUParams& params, const SimConfig& cfg,
                               double t);

}  // namespace oufpt
