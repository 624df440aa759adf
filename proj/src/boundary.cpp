// SPDX-License-Identifier: Apache-2.0
#include "oufpt/boundary.hpp"

#include <cassert>
#include <cmath>

namespace oufpt {

namespace {

void require_rescaled_time(double s) {
    if (!std::isfinite(s) || s < 0.0) {
        throw NegativeTime("rescaled time must be finite and >= 0");
    }
}

void require_in_interval(double s, double s_prime) {
    if (!std::isfinite(s) || s < 0.0 || s > s_prime) {
        throw OutOfInterval("s must lie in [0, s']");
    }
}

}  // namespace

double SqrtBoundary::value(double s) const {
    require_rescaled_time(s);
    const auto& p = params_;
    return std::sqrt(2.0 * p.beta) / p.sigma * (p.theta * std::sqrt(s + 1.0) - p.x0);
}

double SqrtBoundary::slope(double s) const {
    require_rescaled_time(s);
    const auto& p = params_;
    return p.theta / p.sigma * std::sqrt(p.beta / 2.0) / std::sqrt(s + 1.0);
}

PiecewiseLinearFrame build_frame(const SqrtBoundary& bdy, double s_prime) {
    if (!std::isfinite(s_prime) || s_prime <= 0.0) {
        throw NonPositiveSPrime("s' must be finite and > 0");
    }
    PiecewiseLinearFrame f{bdy.params(), bdy.value(0.0), bdy.slope(0.0),
                           s_prime,      bdy.value(s_prime),
                           0.0,          0.0};
    f.s_star = 2.0 * (std::sqrt(s_prime + 1.0) - 1.0);
    // delta = s' - s* directly; the identity delta + 2 sqrt(delta) = s' is a test.
    f.delta = s_prime - f.s_star;
    return f;
}

double PiecewiseLinearFrame::q1(double s) const {
    require_in_interval(s, s_prime);
    const double theta = params.theta;
    const double x0 = params.x0;
    const double root = std::sqrt(1.0 + s_prime);
    const double value =
        s * s * theta * (4.0 * x0 + theta * (s_prime - 4.0 * root)) +
        4.0 * s_prime * (x0 - theta) * (x0 - theta) -
        4.0 * s *
            (x0 * x0 + (s_prime - 2.0) * x0 * theta +
             (-1.0 - 2.0 * s_prime + 2.0 * root) * theta * theta);
    assert(std::abs(value - q1_definitional(s)) <=
           1e-9 * (1.0 + std::abs(value)));
    return value;
}

double PiecewiseLinearFrame::q1_definitional(double s) const {
    require_in_interval(s, s_prime);
    const double l1 = line1(s);
    const double d = l1 - a2;
    const double scale = 2.0 * params.sigma * params.sigma / params.beta;
    return ((s_prime - s) * l1 * l1 + s * d * d) * scale;
}

double PiecewiseLinearFrame::q2(double s) const {
    require_in_interval(s, s_prime);
    return s * (s_prime - s);
}

}  // namespace oufpt
