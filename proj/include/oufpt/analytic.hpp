// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

#include "oufpt/boundary.hpp"
#include "oufpt/ou_model.hpp"

namespace oufpt {

// First passage density of standard Brownian motion from B(0) = 0 to the
// line a1 + b1 s at time s (inverse-Gaussian form, a1 < 0, b1 > 0):
//   g01(s) = |a1| / sqrt(2 pi s^3) * exp(-(a1 + b1 s)^2 / (2 s)).
double g01(double s, double a1, double b1);

// Density of first passage from height `start` at time s to the horizontal
// line a2 at time s' > s.
double g12(double s_prime, double s, double start, double a2);

// Convolution density g2(s') = int_{s*}^{s'} g01(s) g12(s'|s) ds for the
// restricted trajectory class (above L1 until s*, then first passage to L2
// in [s', s'+ds)).  A lower bound for rho_B(s').
//
// The integrand vanishes at both endpoints and its scale can be far below
// the double-precision floor, so the integral is carried out on the
// exponentially shifted log-integrand; log_value is always meaningful,
// value = exp(log_value) may underflow to 0 for extreme s'.
struct QuadratureResult {
    double log_value;
    double value;
    double rel_error;
    std::size_t evaluations;
};

QuadratureResult g2_quadrature(const SqrtBoundary& bdy, double s_prime,
                               double rel_tol = 1e-8,
                               std::size_t max_evaluations = 1'000'000);

// Maximizer of M(eta, nu) = eta (nu - eta) exp(-2B / (1 - nu^2)) over the
// triangle 0 < eta < nu < 1.  Stationarity gives nu = 2 eta and
// 1 - nu^2 = C with C = sqrt(B^2 + 2B) - B, hence
//   M_max = (1 - C)/4 * exp(-2B / C).
struct OptimizationWitness {
    double b_value;
    double c_value;
    double eta_plus;
    double nu_plus;
    double m_max;
};

OptimizationWitness mmax(double b_value);

// Hypothesis threshold of the restricted-density lower bound:
// max(8, 1 + x0^2/theta^2, 8 sigma^2 / (beta theta^2)).
double lemma4_threshold(const OUParams& params);

// log of the explicit lower bound
//   g2(s') > 512/(9 pi) (x0/theta - 1) (s')^{-6} exp(-beta/32 (theta/sigma)^2 (s')^3)
// valid for s' above lemma4_threshold.
double lemma4_log_bound(const OUParams& params, double s_prime);

// Certificate for the final density bound rho_X(t) > k exp(-p e^{6 beta t}),
// valid for t > u.  All bound values are handled as logs.
struct BoundCertificate {
    double beta;
    double k;
    double p;
    double u;
    double cap_k;  // k = 2 beta cap_k
    double cap_h;  // p = 1 + cap_h

    double log_bound_at(double t) const;  // throws BelowOnset unless t > u
};

BoundCertificate remark_constants(const OUParams& params);

double theorem_log_bound(const BoundCertificate& cert, double t);

// Transport of a density in rescaled time back to the original clock:
//   rho_X(t) = 2 beta e^{2 beta t} rho_B(e^{2 beta t} - 1).
double rho_b_to_rho_x(const OUParams& params,
                      const std::function<double(double)>& rho_b_at, double t);

}  // namespace oufpt
