// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "oufpt/ou_model.hpp"

namespace oufpt {

// Square-root boundary b(s) = sqrt(2 beta)/sigma * (theta sqrt(s+1) - x0) in
// rescaled time.  b(0) < 0, b is strictly increasing and strictly concave.
class SqrtBoundary {
  public:
    explicit SqrtBoundary(OUParams params) : params_(params) {}

    const OUParams& params() const { return params_; }

    double value(double s) const;
    double slope(double s) const;

  private:
    OUParams params_;
};

// Piecewise-linear frame for a target crossing time s':
//   L1: tangent to b at s = 0, L1(s) = a1 + b1 s
//   L2: horizontal chord at height a2 = b(s')
//   s*: abscissa of the L1/L2 intersection, delta = s' - s*.
// The quadratics q1/q2 are the ones the restricted-density bound manipulates;
// q1 is evaluated in the expanded polynomial form and cross-checked against
// the definitional form ((s'-s) l1^2 + s (l1-a2)^2) * 2 sigma^2 / beta.
struct PiecewiseLinearFrame {
    OUParams params;
    double a1;
    double b1;
    double s_prime;
    double a2;
    double s_star;
    double delta;

    double line1(double s) const { return a1 + b1 * s; }

    double q1(double s) const;
    double q1_definitional(double s) const;
    double q2(double s) const;
};

PiecewiseLinearFrame build_frame(const SqrtBoundary& bdy, double s_prime);

}  // namespace oufpt
