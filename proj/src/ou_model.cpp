// SPDX-License-Identifier: Apache-2.0
#include "oufpt/ou_model.hpp"

#include <cmath>

namespace oufpt {

namespace {

void require_finite_nonnegative_time(double t) {
    if (!std::isfinite(t) || t < 0.0) {
        throw NegativeTime("time must be finite and >= 0");
    }
}

}  // namespace

OUParams::OUParams(double beta_, double sigma_, double x0_, double theta_)
    : beta(beta_), sigma(sigma_), x0(x0_), theta(theta_) {
    if (!(std::isfinite(beta) && beta > 0.0)) {
        throw NonPositiveParameter("beta must be finite and > 0");
    }
    if (!(std::isfinite(sigma) && sigma > 0.0)) {
        throw NonPositiveParameter("sigma must be finite and > 0");
    }
    if (!(std::isfinite(theta) && theta > 0.0)) {
        throw NonPositiveParameter("theta must be finite and > 0");
    }
    if (!(std::isfinite(x0) && x0 > theta)) {
        throw SubthresholdInitialCondition("x0 must satisfy x0 > theta");
    }
}

OUParams validate(double beta, double sigma, double x0, double theta) {
    return OUParams(beta, sigma, x0, theta);
}

double time_to_s(double t, double beta) {
    require_finite_nonnegative_time(t);
    return std::expm1(2.0 * beta * t);
}

double s_to_time(double s, double beta) {
    require_finite_nonnegative_time(s);
    return std::log1p(s) / (2.0 * beta);
}

TimePair time_pair_from_t(double t, double beta) {
    return TimePair{t, time_to_s(t, beta)};
}

double ou_from_brownian_path(const OUParams& params,
                             const std::function<double(double)>& brownian,
                             double t) {
    require_finite_nonnegative_time(t);
    const double decay = std::exp(-params.beta * t);
    const double s = std::expm1(2.0 * params.beta * t);
    return params.x0 * decay +
           params.sigma * decay / std::sqrt(2.0 * params.beta) * brownian(s);
}

}  // namespace oufpt
