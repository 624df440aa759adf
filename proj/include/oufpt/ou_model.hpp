// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "oufpt/errors.hpp"

namespace oufpt {

// Parameters of the mean-reverting diffusion dX = -beta X dt + sigma dW with
// X(0) = x0 and absorbing threshold theta.  The constructor enforces the
// suprathreshold ordering x0 > theta > 0; the rest of the library assumes it.
struct OUParams {
    double beta;
    double sigma;
    double x0;
    double theta;

    OUParams(double beta, double sigma, double x0, double theta);
};

// Validating factory; identical to the constructor, convenient at call sites
// that hold a raw quadruple.
OUParams validate(double beta, double sigma, double x0, double theta);

// Exponentially rescaled time s = e^{2 beta t} - 1 and its inverse.
double time_to_s(double t, double beta);
double s_to_time(double s, double beta);

struct TimePair {
    double t;
    double s;
};

// Convenience for carrying both clocks of the same instant.
TimePair time_pair_from_t(double t, double beta);

// X(t) = x0 e^{-beta t} + sigma e^{-beta t} / sqrt(2 beta) * B(e^{2 beta t} - 1)
// for a Brownian trajectory supplied as a function of rescaled time.
double ou_from_brownian_path(const OUParams& params,
                             const std::function<double(double)>& brownian,
                             double t);

}  // namespace oufpt
