// SPDX-License-Identifier: Apache-2.0
#include "oufpt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oufpt/analytic.hpp"
#include "oufpt/boundary.hpp"
#include "oufpt/mc.hpp"
#include "oufpt/rng.hpp"

namespace oufpt {

namespace {

using nlohmann::json;

std::string param_json(const OUParams& p, double s_prime = -1.0) {
    json j{{"beta", p.beta}, {"sigma", p.sigma}, {"x0", p.x0}, {"theta", p.theta}};
    if (s_prime > 0.0) j["s_prime"] = s_prime;
    return j.dump();
}

CheckReport make_report(std::string check_id, std::string param_set,
                        double margin, std::string detail) {
    return CheckReport{std::move(check_id), std::move(param_set),
                       margin >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail,
                       margin, std::move(detail)};
}

CheckReport make_skipped(std::string check_id, std::string param_set,
                         std::string detail) {
    return CheckReport{std::move(check_id), std::move(param_set),
                       CheckStatus::SkippedHypothesis, 0.0, std::move(detail)};
}

bool enabled(const SuiteOptions& options, const std::string& check_id) {
    if (options.only.empty()) return true;
    return std::any_of(options.only.begin(), options.only.end(),
                       [&](const std::string& prefix) {
                           return check_id.rfind(prefix, 0) == 0;
                       });
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// ---- analytic checks ------------------------------------------------------

void check_delta_identity(const GridSpec& grid,
                          const std::vector<OUParams>& points,
                          std::vector<CheckReport>& out) {
    for (const auto& p : points) {
        const SqrtBoundary bdy(p);
        for (double sp : grid.s_primes) {
            const auto frame = build_frame(bdy, sp);
            const double err =
                std::abs(frame.delta + 2.0 * std::sqrt(frame.delta) - sp);
            const double tol = 1e-10 * std::max(1.0, sp);
            out.push_back(make_report(
                "delta-identity", param_json(p, sp), tol - err,
                "|delta + 2 sqrt(delta) - s'| = " + fmt(err)));
        }
    }
}

void check_lemma2_convexity(const GridSpec& grid,
                            const std::vector<OUParams>& points,
                            std::vector<CheckReport>& out) {
    for (const auto& p : points) {
        for (double sp : grid.s_primes) {
            if (!(sp > 8.0)) {
                out.push_back(make_skipped("lemma2-convexity", param_json(p, sp),
                                           "requires s' > 8"));
                continue;
            }
            const double d2 =
                2.0 * p.theta *
                (4.0 * p.x0 + p.theta * (sp - 4.0 * std::sqrt(1.0 + sp)));
            out.push_back(make_report("lemma2-convexity", param_json(p, sp), d2,
                                      "d2Q1/ds2 = " + fmt(d2)));
        }
    }
}

struct EtaNu {
    double eta;
    double nu;
};

EtaNu draw_eta_nu(const rng::Stream& stream, std::uint32_t index) {
    const double u1 = stream.uniform(index, 0);
    const double u2 = stream.uniform(index, 1);
    double eta = std::clamp(u1, 1e-6, 1.0 - 2e-6);
    double nu = eta + (1.0 - eta) * std::clamp(u2, 1e-6, 1.0 - 1e-6);
    nu = std::min(nu, 1.0 - 1e-9);
    return {eta, nu};
}

void check_lemma3_q1(const GridSpec& grid, const std::vector<OUParams>& points,
                     std::uint64_t seed, std::vector<CheckReport>& out) {
    const rng::Stream stream{seed, 0x4c33};  // check-local stream
    std::uint32_t draw = 0;
    for (const auto& p : points) {
        const SqrtBoundary bdy(p);
        for (double sp : grid.s_primes) {
            const double ratio = p.x0 / p.theta;
            const double threshold = std::max(8.0, 1.0 + ratio * ratio);
            const auto [eta, nu] = draw_eta_nu(stream, draw++);
            if (!(sp > threshold)) {
                out.push_back(make_skipped(
                    "lemma3-q1-bound", param_json(p, sp),
                    "requires s' > max(8, 1 + x0^2/theta^2) = " + fmt(threshold)));
                continue;
            }
            const auto frame = build_frame(bdy, sp);
            const double s1 = frame.s_star + eta * frame.delta;
            const double s2 = frame.s_star + nu * frame.delta;
            const double lhs = std::max(frame.q1(s1), frame.q1(s2));
            const double rhs =
                frame.delta * frame.delta * p.theta * p.theta * sp;
            out.push_back(make_report(
                "lemma3-q1-bound", param_json(p, sp),
                std::log(rhs) - std::log(lhs),
                "eta=" + fmt(eta) + " nu=" + fmt(nu) + " max Q1=" + fmt(lhs) +
                    " <= Delta^2 theta^2 s' = " + fmt(rhs)));
        }
    }
}

void check_q2_interior(const GridSpec& grid, const std::vector<OUParams>& points,
                       std::uint64_t seed, std::vector<CheckReport>& out) {
    const rng::Stream stream{seed, 0x5132};
    std::uint32_t draw = 0;
    for (const auto& p : points) {
        const SqrtBoundary bdy(p);
        for (double sp : grid.s_primes) {
            const auto [eta, nu] = draw_eta_nu(stream, draw++);
            if (!(sp > 8.0)) {
                out.push_back(make_skipped("q2-interior-bound", param_json(p, sp),
                                           "requires s' > 8"));
                continue;
            }
            const auto frame = build_frame(bdy, sp);
            const double s1 = frame.s_star + eta * frame.delta;
            const double s2 = frame.s_star + nu * frame.delta;
            const double lhs = std::min(frame.q2(s1), frame.q2(s2));
            const double rhs = 16.0 * (1.0 - nu * nu);
            out.push_back(make_report(
                "q2-interior-bound", param_json(p, sp),
                std::log(lhs) - std::log(rhs),
                "min Q2 = " + fmt(lhs) + " >= 16(1 - nu^2) = " + fmt(rhs) +
                    "; equality only at s' = 8"));
        }
    }
}

void check_delta_ordering(const GridSpec& grid,
                          const std::vector<OUParams>& points,
                          std::vector<CheckReport>& out) {
    for (const auto& p : points) {
        const SqrtBoundary bdy(p);
        for (double sp : grid.s_primes) {
            if (!(sp > 8.0)) {
                out.push_back(make_skipped("delta-ordering", param_json(p, sp),
                                           "requires s' > 8"));
                continue;
            }
            const auto frame = build_frame(bdy, sp);
            const double mid = 2.0 / 3.0 * (sp - 2.0);
            const double margin = std::min(
                {frame.delta - mid, mid - 4.0, frame.s_star - 4.0});
            out.push_back(make_report(
                "delta-ordering", param_json(p, sp), margin,
                "Delta > (2/3)(s'-2) > 4 and s* > 4"));
        }
    }
}

void check_c_inequalities(const GridSpec& grid, std::uint64_t seed,
                          std::vector<CheckReport>& out) {
    const rng::Stream stream{seed, 0xc1};
    const std::size_t n = grid.random_samples;

    double margin_range = std::numeric_limits<double>::infinity();
    double margin_half = std::numeric_limits<double>::infinity();
    double margin_quarter = std::numeric_limits<double>::infinity();
    double prev_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t idx = static_cast<std::uint32_t>(i);
        // increasing B sequence for the monotonicity part of the range check
        const double b_sorted =
            1e-3 + (static_cast<double>(i) + stream.uniform(idx, 0)) /
                       static_cast<double>(n) * 1000.0;
        const auto wr = mmax(b_sorted);
        margin_range = std::min({margin_range, wr.c_value, 1.0 - wr.c_value,
                                 i == 0 ? margin_range : wr.c_value - prev_c});
        prev_c = wr.c_value;

        const double b_half = 0.25 + stream.uniform(idx, 1) * 99.75;
        margin_half = std::min(margin_half, mmax(b_half).c_value - 0.5);

        const double b_quarter = 1.0 + stream.uniform(idx, 2) * 99.0;
        const auto wq = mmax(b_quarter);
        margin_quarter = std::min(
            margin_quarter, (1.0 - wq.c_value) - 1.0 / (4.0 * b_quarter));
    }
    const std::string params =
        json{{"samples", n}}.dump();
    out.push_back(make_report("c-inequality/range", params, margin_range,
                              "0 < C < 1 and C increasing over B in (0, 1000]"));
    out.push_back(make_report("c-inequality/half", params, margin_half,
                              "C > 1/2 for B > 1/4"));
    out.push_back(make_report("c-inequality/quarter-bound", params,
                              margin_quarter, "1 - C > 1/(4B) for B >= 1"));
}

void check_ineq_ladder(const GridSpec& grid, std::uint64_t seed,
                       std::vector<CheckReport>& out) {
    const rng::Stream stream{seed, 0x1ad};
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.random_samples; ++i) {
        const double bt =
            1.0 + stream.uniform(static_cast<std::uint32_t>(i), 0) * 29.0;
        // e^{-10 beta t} > exp(-e^{6 beta t}), compared entirely in log space
        margin = std::min(margin, 6.0 * bt - std::log(10.0 * bt));
    }
    out.push_back(make_report("ineq-ladder",
                              json{{"samples", grid.random_samples},
                                   {"beta_t_range", {1.0, 30.0}}}
                                  .dump(),
                              margin,
                              "min over samples of log(e^{6bt}) - log(10bt)"));
}

void check_m_grid(std::vector<CheckReport>& out) {
    const std::vector<double> b_values{0.3, 0.5, 1.0, 2.0, 5.0, 20.0};
    constexpr double kStep = 1e-3;
    for (double b : b_values) {
        const auto witness = mmax(b);
        double grid_max = 0.0;
        for (int j = 1; j < 1000; ++j) {
            const double nu = j * kStep;
            const double expo = std::exp(-2.0 * b / (1.0 - nu * nu));
            for (int i = 1; i < j; ++i) {
                const double eta = i * kStep;
                grid_max = std::max(grid_max, eta * (nu - eta) * expo);
            }
        }
        const double margin =
            std::min(witness.m_max - grid_max + 1e-9,
                     1e-5 - std::abs(witness.m_max - grid_max));
        out.push_back(make_report(
            "m-grid-oracle", json{{"B", b}}.dump(), margin,
            "analytic M_max = " + fmt(witness.m_max) +
                ", grid max = " + fmt(grid_max)));
    }
}

void check_lemma4_quadrature(const GridSpec& grid,
                             const std::vector<OUParams>& points,
                             std::vector<CheckReport>& out) {
    for (const auto& p : points) {
        const SqrtBoundary bdy(p);
        const double threshold = lemma4_threshold(p);
        for (double sp : grid.s_primes) {
            if (!(sp > threshold)) {
                out.push_back(make_skipped(
                    "lemma4-quadrature", param_json(p, sp),
                    "requires s' > " + fmt(threshold)));
                continue;
            }
            const double bound = lemma4_log_bound(p, sp);
            try {
                const auto quad = g2_quadrature(bdy, sp);
                out.push_back(make_report(
                    "lemma4-quadrature", param_json(p, sp),
                    quad.log_value - bound,
                    "log g2 = " + fmt(quad.log_value) +
                        " > bound = " + fmt(bound)));
            } catch (const QuadratureNonConvergence& err) {
                out.push_back(make_report("lemma4-quadrature", param_json(p, sp),
                                          -1.0,
                                          std::string("quadrature failed: ") +
                                              err.what()));
            }
        }
    }
}

// ---- Monte Carlo backed checks --------------------------------------------

void check_lemma1_equivalence(const GridSpec& grid, std::uint64_t seed,
                              std::vector<CheckReport>& out) {
    for (const auto& point : grid.mc_points) {
        const OUParams p(point.beta, point.sigma, point.x0, point.theta);
        const SqrtBoundary bdy(p);
        const double dt = 1e-3;
        const double t_max = (std::log(p.x0 / p.theta) + 2.0) / p.beta;
        const std::size_t n_steps =
            static_cast<std::size_t>(std::ceil(t_max / dt));
        const std::size_t n_paths = 10'000;

        std::vector<double> s_grid(n_steps + 1);
        std::vector<double> b_bound(n_steps + 1);
        for (std::size_t k = 0; k <= n_steps; ++k) {
            s_grid[k] = std::expm1(2.0 * p.beta * static_cast<double>(k) * dt);
            b_bound[k] = bdy.value(s_grid[k]);
        }

        std::size_t mismatches = 0;
        for (std::size_t path = 0; path < n_paths; ++path) {
            const rng::Stream stream{seed, path};
            double b = 0.0;
            std::size_t cross_x = n_steps + 1;
            std::size_t cross_b = n_steps + 1;
            for (std::size_t k = 0; k <= n_steps; ++k) {
                if (k > 0) {
                    const double ds = s_grid[k] - s_grid[k - 1];
                    b += std::sqrt(ds) *
                         stream.normal(static_cast<std::uint32_t>(k - 1), 0);
                }
                const double b_here = b;
                const double x = ou_from_brownian_path(
                    p, [b_here](double) { return b_here; },
                    static_cast<double>(k) * dt);
                if (cross_x > n_steps && x <= p.theta) cross_x = k;
                if (cross_b > n_steps && b <= b_bound[k]) cross_b = k;
                if (cross_x <= n_steps && cross_b <= n_steps) break;
            }
            if (cross_x != cross_b) ++mismatches;
        }
        out.push_back(make_report(
            "lemma1-equivalence", param_json(p),
            mismatches == 0 ? 0.0 : -static_cast<double>(mismatches),
            "shared-noise crossing indicators over " + fmt(double(n_paths)) +
                " paths, mismatches = " + fmt(double(mismatches))));
    }
}

void check_theorem_mc_tail(const GridSpec& grid, std::uint64_t seed,
                           std::vector<CheckReport>& out) {
    for (const auto& point : grid.mc_points) {
        const OUParams p(point.beta, point.sigma, point.x0, point.theta);
        const auto cert = remark_constants(p);
        const double t_test = cert.u + 0.15 / p.beta;
        SimConfig cfg;
        cfg.n_paths = grid.mc_paths;
        cfg.dt = grid.mc_dt;
        cfg.t_max = cert.u + 0.5 / p.beta;
        cfg.seed = seed;
        try {
            const auto tail = estimate_log_tail(p, cfg, t_test);
            const double bound = cert.log_bound_at(t_test);
            out.push_back(make_report(
                "theorem-mc-tail", param_json(p), tail.log_lo - bound,
                "t = " + fmt(t_test) + ", MC lower CI " + fmt(tail.log_lo) +
                    " > log bound " + fmt(bound)));
        } catch (const InsufficientTailData& err) {
            out.push_back(make_report("theorem-mc-tail", param_json(p), -1.0,
                                      std::string("tail estimate failed: ") +
                                          err.what()));
        }
    }
}

void check_corollary1(const GridSpec& grid, std::uint64_t seed,
                      std::vector<CheckReport>& out) {
    for (const auto& point : grid.mc_points) {
        const OUParams p(point.beta, point.sigma, point.x0, point.theta);
        const SqrtBoundary bdy(p);
        const double dt = grid.mc_dt;
        const double t_max = (std::log(p.x0 / p.theta) + 1.2) / p.beta;
        const std::size_t n_steps =
            static_cast<std::size_t>(std::ceil(t_max / dt));

        SimConfig cfg;
        cfg.n_paths = grid.mc_paths;
        cfg.dt = dt;
        cfg.t_max = static_cast<double>(n_steps) * dt;
        cfg.seed = seed;
        const auto t_samples = sample_fpt_ou(p, cfg);

        std::vector<double> s_grid(n_steps + 1);
        for (std::size_t k = 0; k <= n_steps; ++k) {
            s_grid[k] = std::expm1(2.0 * p.beta * static_cast<double>(k) * dt);
        }
        SimConfig cfg_s = cfg;
        cfg_s.seed = seed + 1;  // independent run in the rescaled clock
        const auto s_samples = sample_fpt_brownian_grid(bdy, s_grid, cfg_s);

        // Bin edges at shared grid indices: the rescaled-time edges are the
        // exact images of the original-time edges, so the transported bin
        // masses estimate identical probabilities.
        const std::size_t stride = std::max<std::size_t>(1, n_steps / 28);
        std::vector<double> t_edges, s_edges;
        for (std::size_t k = 0; k <= n_steps; k += stride) {
            t_edges.push_back(static_cast<double>(k) * dt);
            s_edges.push_back(s_grid[k]);
        }
        const auto t_est = estimate_density(t_samples, t_edges);
        const auto s_est = estimate_density(s_samples, s_edges);

        const double n = static_cast<double>(grid.mc_paths);
        double max_z = 0.0;
        std::size_t used = 0;
        for (std::size_t j = 0; j + 1 < t_edges.size(); ++j) {
            const double wt = t_edges[j + 1] - t_edges[j];
            const double ws = s_edges[j + 1] - s_edges[j];
            const double p1 = t_est.bin_density[j] * wt;
            const double p2 = s_est.bin_density[j] * ws;
            if (p1 * n < 100.0 || p2 * n < 100.0) continue;
            const double se = std::sqrt((p1 * (1.0 - p1) + p2 * (1.0 - p2)) / n);
            max_z = std::max(max_z, std::abs(p1 - p2) / se);
            ++used;
        }
        out.push_back(make_report(
            "corollary1-consistency", param_json(p),
            used == 0 ? -1.0 : 3.0 - max_z,
            "max |z| over " + fmt(double(used)) + " shared bins = " + fmt(max_z)));
    }
}

void check_g2_containment(const GridSpec& grid, std::uint64_t seed,
                          std::vector<CheckReport>& out) {
    for (const auto& point : grid.mc_points) {
        const OUParams p(point.beta, point.sigma, point.x0, point.theta);
        const SqrtBoundary bdy(p);
        const double threshold = lemma4_threshold(p);
        std::vector<double> targets;
        for (double sp : grid.s_primes) {
            if (sp > threshold && sp <= 25.0) targets.push_back(sp);
        }
        if (targets.empty()) {
            out.push_back(make_skipped("g2-containment", param_json(p),
                                       "no s' in (threshold, 25]"));
            continue;
        }
        SimConfig cfg;
        cfg.n_paths = grid.mc_paths;
        cfg.dt = 0.01;
        cfg.t_max = *std::max_element(targets.begin(), targets.end()) + 2.0;
        cfg.seed = seed;
        const auto samples = sample_fpt_brownian(bdy, cfg);

        for (double sp : targets) {
            const double width = std::max(1.0, sp / 10.0);
            const auto est = estimate_density(
                samples, {sp - 0.5 * width, sp + 0.5 * width});
            const double rho = est.bin_density[0];
            const double se = est.bin_std_err[0];
            const auto quad = g2_quadrature(bdy, sp);
            const double margin =
                se > 0.0 ? (rho + 3.0 * se - quad.value) / se : -1.0;
            out.push_back(make_report(
                "g2-containment", param_json(p, sp), margin,
                "g2 = " + fmt(quad.value) + " <= rho_B " + fmt(rho) + " + 3*" +
                    fmt(se)));
        }
    }
}

}  // namespace

std::string to_string(CheckStatus status) {
    switch (status) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::SkippedHypothesis: return "skipped-hypothesis";
    }
    return "unknown";
}

std::vector<CheckReport> run_suite(const GridSpec& grid, std::uint64_t seed,
                                   const SuiteOptions& options) {
    if (grid.betas.empty() || grid.sigmas.empty() || grid.x0_theta.empty() ||
        grid.s_primes.empty()) {
        throw EmptyGrid("grid must contain betas, sigmas, x0/theta pairs and s' values");
    }
    std::vector<OUParams> points;
    for (double beta : grid.betas) {
        for (double sigma : grid.sigmas) {
            for (const auto& [x0, theta] : grid.x0_theta) {
                points.emplace_back(beta, sigma, x0, theta);
            }
        }
    }

    std::vector<CheckReport> reports;
    if (enabled(options, "delta-identity")) {
        check_delta_identity(grid, points, reports);
    }
    if (enabled(options, "lemma2-convexity")) {
        check_lemma2_convexity(grid, points, reports);
    }
    if (enabled(options, "lemma3-q1-bound")) {
        check_lemma3_q1(grid, points, seed, reports);
    }
    if (enabled(options, "q2-interior-bound")) {
        check_q2_interior(grid, points, seed, reports);
    }
    if (enabled(options, "delta-ordering")) {
        check_delta_ordering(grid, points, reports);
    }
    if (enabled(options, "c-inequality")) {
        check_c_inequalities(grid, seed, reports);
    }
    if (enabled(options, "ineq-ladder")) {
        check_ineq_ladder(grid, seed, reports);
    }
    if (enabled(options, "m-grid-oracle")) {
        check_m_grid(reports);
    }
    if (enabled(options, "lemma4-quadrature")) {
        check_lemma4_quadrature(grid, points, reports);
    }
    if (enabled(options, "lemma1-equivalence")) {
        check_lemma1_equivalence(grid, seed, reports);
    }
    if (enabled(options, "theorem-mc-tail")) {
        check_theorem_mc_tail(grid, seed, reports);
    }
    if (enabled(options, "corollary1-consistency")) {
        check_corollary1(grid, seed, reports);
    }
    if (enabled(options, "g2-containment")) {
        check_g2_containment(grid, seed, reports);
    }

    std::stable_sort(reports.begin(), reports.end(),
                     [](const CheckReport& a, const CheckReport& b) {
                         return a.check_id < b.check_id;
                     });
    return reports;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        arr.push_back(json{{"check_id", r.check_id},
                           {"param_set", json::parse(r.param_set)},
                           {"status", to_string(r.status)},
                           {"margin", r.margin},
                           {"detail", r.detail}});
    }
    return arr.dump(2) + "\n";
}

namespace {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

}  // namespace

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream os;
    os << "check_id,status,margin,param_set,detail\n";
    os.precision(17);
    for (const auto& r : reports) {
        os << r.check_id << ',' << to_string(r.status) << ',' << r.margin << ','
           << csv_escape(r.param_set) << ',' << csv_escape(r.detail) << '\n';
    }
    return os.str();
}

SuiteSummary summarize(const std::vector<CheckReport>& reports) {
    SuiteSummary s;
    for (const auto& r : reports) {
        switch (r.status) {
            case CheckStatus::Pass: ++s.n_pass; break;
            case CheckStatus::SkippedHypothesis: ++s.n_skip; break;
            case CheckStatus::Fail: ++s.n_fail; break;
        }
    }
    return s;
}

}  // namespace oufpt
