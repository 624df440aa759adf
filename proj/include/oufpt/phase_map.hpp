// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "oufpt/mc.hpp"
#include "oufpt/ou_model.hpp"

namespace oufpt {

// Periodic drive h(t) for the forced integrate-and-fire model
//   dX = (-beta X + h(t)) dt + sigma dW,  reset to x0 at each threshold hit.
// h must be bounded, measurable and of zero mean over one period.  When the
// closed-form decay convolution int_{t0}^{t1} e^{-beta (t1 - r)} h(r) dr is
// known (sinusoids, zero) it is used per step; otherwise a midpoint rule.
struct Forcing {
    double period = 1.0;
    std::function<double(double)> h;
    std::function<double(double, double, double)> decay_integral;  // (beta,t0,t1)

    static Forcing zero(double period);
    static Forcing sinusoid(double amplitude, double period);
    static Forcing generic(std::function<double(double)> h, double period);
};

struct ForcedLIFParams {
    OUParams base;
    Forcing forcing;
};

// Checks the period and the zero-mean invariant (|mean| <= 1e-8 numerically).
void validate_forced(const ForcedLIFParams& params);

// Phases of successive resets, normalized to the circle [0, 1).
// cfg.dt is the step, cfg.t_max caps any single inter-reset interval.
std::vector<double> simulate_phase_sequence(const ForcedLIFParams& params,
                                            const SimConfig& cfg,
                                            std::size_t n_resets, double phi0);

// Row-stochastic estimate of the phase transition kernel: row i holds the
// distribution of the next reset phase for trajectories launched at the
// center of phase bin i.  Entries are bin probabilities; the kernel density
// is matrix(i, j) * n_bins.
struct PhaseKernel {
    std::size_t n_bins = 0;
    std::vector<double> matrix;  // row-major, n_bins x n_bins
    std::vector<std::size_t> counts_per_row;

    double at(std::size_t row, std::size_t col) const {
        return matrix[row * n_bins + col];
    }
};

PhaseKernel estimate_kernel(const ForcedLIFParams& params, const SimConfig& cfg,
                            std::size_t n_bins, std::size_t samples_per_bin);

// Fixed point of f -> f K by power iteration, returned as bin probabilities
// summing to 1; throws NonConvergence with the final total-variation residual
// if the budget runs out.
std::vector<double> invariant_density(const PhaseKernel& kernel, double tol,
                                      std::size_t max_iterations = 200'000);

// Riemann-sum version of int inf_y K_m(x, y) dx for the m-step kernel: the
// bin width cancels against the probability/density conversion, leaving the
// sum over columns of the column minima of the m-step matrix.
double infimum_criterion(const PhaseKernel& kernel, std::size_t m);

}  // namespace oufpt
