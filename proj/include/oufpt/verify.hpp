// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oufpt/ou_model.hpp"

namespace oufpt {

enum class CheckStatus { Pass, Fail, SkippedHypothesis };

std::string to_string(CheckStatus status);

// One check at one grid point.  margin is the signed slack of the check in
// its natural scale (log-space for bound comparisons, SE units for the
// Monte Carlo backed checks); pass implies margin >= 0, fail margin < 0.
struct CheckReport {
    std::string check_id;
    std::string param_set;
    CheckStatus status;
    double margin;
    std::string detail;
};

struct ParamPoint {
    double beta;
    double sigma;
    double x0;
    double theta;
};

// Sweep definition.  The analytic checks run on the full cartesian grid; the
// Monte Carlo backed checks (tail vs. theorem, coordinate consistency,
// pathwise equivalence, density containment) run on mc_points only.
struct GridSpec {
    std::vector<double> betas{0.25, 1.0, 4.0};
    std::vector<double> sigmas{0.1, 0.5, 2.0};
    std::vector<std::pair<double, double>> x0_theta{{2.0, 1.0},
                                                    {1.1, 1.0},
                                                    {10.0, 1.0}};
    std::vector<double> s_primes{8.5, 10.0, 20.0, 100.0};
    std::vector<ParamPoint> mc_points{{1.0, 0.5, 2.0, 1.0}};
    std::size_t mc_paths = 1'000'000;
    double mc_dt = 2e-3;
    std::size_t random_samples = 1000;
};

struct SuiteOptions {
    // Empty runs everything; otherwise a check runs iff its id starts with
    // one of these prefixes.
    std::vector<std::string> only;
};

std::vector<CheckReport> run_suite(const GridSpec& grid, std::uint64_t seed,
                                   const SuiteOptions& options = {});

std::string reports_to_json(const std::vector<CheckReport>& reports);
std::string reports_to_csv(const std::vector<CheckReport>& reports);

struct SuiteSummary {
    std::size_t n_pass = 0;
    std::size_t n_skip = 0;
    std::size_t n_fail = 0;
};

SuiteSummary summarize(const std::vector<CheckReport>& reports);

}  // namespace oufpt
