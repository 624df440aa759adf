// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: bound / density / simulate / verify / phase.
// All outputs are data-only (CSV or JSON); identical flags and seed produce
// byte-identical files.  Exit codes: 0 success, 1 verification failure,
// 2 usage or validation error.

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oufpt/analytic.hpp"
#include "oufpt/boundary.hpp"
#include "oufpt/mc.hpp"
#include "oufpt/ou_model.hpp"
#include "oufpt/phase_map.hpp"
#include "oufpt/verify.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw oufpt::Error("cannot open output file: " + path);
    }
    out << content;
}

// Config file merge: values from --config apply wherever the flag was not
// given on the command line.  Flags override config, config overrides
// defaults.
class ConfigBinder {
  public:
    void bind(CLI::Option* opt, std::string key, std::function<void(const json&)> set) {
        entries_.push_back({opt, std::move(key), std::move(set)});
    }

    void apply(const json& cfg) const {
        for (const auto& e : entries_) {
            if (e.opt->count() == 0 && cfg.contains(e.key)) {
                e.set(cfg.at(e.key));
            }
        }
    }

  private:
    struct Entry {
        CLI::Option* opt;
        std::string key;
        std::function<void(const json&)> set;
    };
    std::vector<Entry> entries_;
};

struct CommonFlags {
    double beta = 1.0;
    double sigma = 0.5;
    double x0 = 2.0;
    double theta = 1.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::string config_path;

    oufpt::OUParams params() const {
        return oufpt::validate(beta, sigma, x0, theta);
    }
};

void add_common(CLI::App* cmd, CommonFlags& f, ConfigBinder& binder) {
    binder.bind(cmd->add_option("--beta", f.beta, "OU rate beta (> 0)"),
                "beta", [&f](const json& j) { f.beta = j.get<double>(); });
    binder.bind(cmd->add_option("--sigma", f.sigma, "noise amplitude (> 0)"),
                "sigma", [&f](const json& j) { f.sigma = j.get<double>(); });
    binder.bind(cmd->add_option("--x0", f.x0, "initial state (> theta)"),
                "x0", [&f](const json& j) { f.x0 = j.get<double>(); });
    binder.bind(cmd->add_option("--theta", f.theta, "threshold (> 0)"),
                "theta", [&f](const json& j) { f.theta = j.get<double>(); });
    binder.bind(cmd->add_option("--seed", f.seed, "RNG seed"),
                "seed", [&f](const json& j) { f.seed = j.get<std::uint64_t>(); });
    binder.bind(cmd->add_option("--out", f.out, "output path ('-' = stdout)"),
                "out", [&f](const json& j) { f.out = j.get<std::string>(); });
    binder.bind(cmd->add_option("--format", f.format, "csv or json")
                    ->check(CLI::IsMember({"csv", "json"})),
                "format", [&f](const json& j) { f.format = j.get<std::string>(); });
    cmd->add_option("--config", f.config_path, "JSON config file");
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) {
        throw oufpt::Error("cannot open config file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& err) {
        throw oufpt::Error(std::string("malformed config file: ") + err.what());
    }
}

// ---- bound -----------------------------------------------------------------

struct BoundFlags {
    CommonFlags common;
    double t_min = 1.1;
    double t_max = 2.0;
    std::size_t steps = 10;
};

int run_bound(const BoundFlags& f) {
    const auto params = f.common.params();
    const auto cert = oufpt::remark_constants(params);
    struct Row {
        double t;
        std::optional<double> log_bound;
    };
    std::vector<Row> rows;
    for (std::size_t j = 0; j < f.steps; ++j) {
        const double t =
            f.steps == 1
                ? f.t_min
                : f.t_min + (f.t_max - f.t_min) * static_cast<double>(j) /
                                static_cast<double>(f.steps - 1);
        Row row{t, std::nullopt};
        if (t > cert.u) {
            row.log_bound = cert.log_bound_at(t);
        }
        rows.push_back(row);
    }

    if (f.common.format == "json") {
        json out{{"certificate",
                  {{"k", cert.k},
                   {"p", cert.p},
                   {"u", cert.u},
                   {"cap_k", cert.cap_k},
                   {"cap_h", cert.cap_h}}},
                 {"rows", json::array()}};
        for (const auto& row : rows) {
            json r{{"t", row.t}};
            if (row.log_bound) {
                r["log_bound"] = *row.log_bound;
                r["status"] = "ok";
            } else {
                r["log_bound"] = nullptr;
                r["status"] = "below-onset";
            }
            out["rows"].push_back(r);
        }
        write_text(f.common.out, out.dump(2) + "\n");
    } else {
        std::string csv = "# certificate k=" + fmt(cert.k) + " p=" + fmt(cert.p) +
                          " u=" + fmt(cert.u) + "\n";
        csv += "t,log_bound,status\n";
        for (const auto& row : rows) {
            csv += fmt(row.t) + ",";
            if (row.log_bound) {
                csv += fmt(*row.log_bound) + ",ok\n";
            } else {
                csv += ",below-onset\n";
            }
        }
        write_text(f.common.out, csv);
    }
    return 0;
}

// ---- density ---------------------------------------------------------------

struct DensityFlags {
    CommonFlags common;
    std::string mode = "quadrature";
    std::vector<double> s_primes{10.0};
    double tol = 1e-8;
    std::size_t n_paths = 100'000;
    double dt = 1e-3;
    double t_max = 4.0;
    double ds = 0.01;
    double s_max = 0.0;  // 0 = auto
    std::size_t bins = 50;
};

int run_density(const DensityFlags& f) {
    const auto params = f.common.params();
    const oufpt::SqrtBoundary bdy(params);

    if (f.mode == "quadrature") {
        json arr = json::array();
        std::string csv = "s_prime,g2,log_g2,rel_error\n";
        for (double sp : f.s_primes) {
            const auto q = oufpt::g2_quadrature(bdy, sp, f.tol);
            arr.push_back(json{{"s_prime", sp},
                               {"g2", q.value},
                               {"log_g2", q.log_value},
                               {"rel_error", q.rel_error}});
            csv += fmt(sp) + "," + fmt(q.value) + "," + fmt(q.log_value) + "," +
                   fmt(q.rel_error) + "\n";
        }
        write_text(f.common.out, f.common.format == "json"
                                     ? json{{"rows", arr}}.dump(2) + "\n"
                                     : csv);
        return 0;
    }

    if (f.mode == "mc") {
        oufpt::SimConfig cfg;
        cfg.n_paths = f.n_paths;
        cfg.dt = f.dt;
        cfg.t_max = f.t_max;
        cfg.seed = f.common.seed;
        const auto samples = oufpt::sample_fpt_ou(params, cfg);
        std::vector<double> edges;
        for (std::size_t j = 0; j <= f.bins; ++j) {
            edges.push_back(samples.horizon * static_cast<double>(j) /
                            static_cast<double>(f.bins));
        }
        const auto est = oufpt::estimate_density(samples, edges);
        if (f.common.format == "json") {
            json rows = json::array();
            for (std::size_t j = 0; j < est.bin_density.size(); ++j) {
                rows.push_back(json{{"t_lo", est.bin_edges[j]},
                                    {"t_hi", est.bin_edges[j + 1]},
                                    {"density", est.bin_density[j]},
                                    {"stderr", est.bin_std_err[j]}});
            }
            write_text(f.common.out,
                       json{{"coordinate", "original-t"},
                            {"n_captured", est.n_captured},
                            {"n_censored", est.n_censored},
                            {"rows", rows}}
                               .dump(2) +
                           "\n");
        } else {
            std::string csv = "# n_captured=" + std::to_string(est.n_captured) +
                              " n_censored=" + std::to_string(est.n_censored) +
                              "\n";
            csv += "t_lo,t_hi,density,stderr\n";
            for (std::size_t j = 0; j < est.bin_density.size(); ++j) {
                csv += fmt(est.bin_edges[j]) + "," + fmt(est.bin_edges[j + 1]) +
                       "," + fmt(est.bin_density[j]) + "," +
                       fmt(est.bin_std_err[j]) + "\n";
            }
            write_text(f.common.out, csv);
        }
        return 0;
    }

    // both: quadrature against an MC estimate of rho_B around each s'
    double s_max = f.s_max;
    for (double sp : f.s_primes) s_max = std::max(s_max, sp + 5.0);
    oufpt::SimConfig cfg;
    cfg.n_paths = f.n_paths;
    cfg.dt = f.ds;
    cfg.t_max = s_max;
    cfg.seed = f.common.seed;
    const auto samples = oufpt::sample_fpt_brownian(bdy, cfg);

    json arr = json::array();
    std::string csv = "s_prime,g2,rho_b,rho_b_stderr\n";
    for (double sp : f.s_primes) {
        const double width = std::max(1.0, sp / 10.0);
        const auto est = oufpt::estimate_density(
            samples, {sp - 0.5 * width, sp + 0.5 * width});
        const auto q = oufpt::g2_quadrature(bdy, sp, f.tol);
        arr.push_back(json{{"s_prime", sp},
                           {"g2", q.value},
                           {"rho_b", est.bin_density[0]},
                           {"rho_b_stderr", est.bin_std_err[0]}});
        csv += fmt(sp) + "," + fmt(q.value) + "," + fmt(est.bin_density[0]) +
               "," + fmt(est.bin_std_err[0]) + "\n";
    }
    write_text(f.common.out, f.common.format == "json"
                                 ? json{{"rows", arr}}.dump(2) + "\n"
                                 : csv);
    return 0;
}

// ---- simulate ----------------------------------------------------------------

struct SimulateFlags {
    CommonFlags common;
    std::string coordinate = "t";
    std::size_t n_paths = 100'000;
    double dt = 1e-3;
    double t_max = 4.0;
    bool no_bridge = false;
    std::size_t bins = 50;
};

int run_simulate(const SimulateFlags& f) {
    const auto params = f.common.params();
    oufpt::SimConfig cfg;
    cfg.n_paths = f.n_paths;
    cfg.dt = f.dt;
    cfg.t_max = f.t_max;
    cfg.seed = f.common.seed;
    cfg.bridge_correction = !f.no_bridge;

    const auto samples = f.coordinate == "s"
                             ? oufpt::sample_fpt_brownian(
                                   oufpt::SqrtBoundary(params), cfg)
                             : oufpt::sample_fpt_ou(params, cfg);
    std::vector<double> edges;
    for (std::size_t j = 0; j <= f.bins; ++j) {
        edges.push_back(samples.horizon * static_cast<double>(j) /
                        static_cast<double>(f.bins));
    }
    const auto est = oufpt::estimate_density(samples, edges);
    const std::string coord =
        f.coordinate == "s" ? "rescaled-s" : "original-t";

    if (f.common.format == "json") {
        json rows = json::array();
        for (std::size_t j = 0; j < est.bin_density.size(); ++j) {
            rows.push_back(json{{"lo", est.bin_edges[j]},
                                {"hi", est.bin_edges[j + 1]},
                                {"density", est.bin_density[j]},
                                {"stderr", est.bin_std_err[j]}});
        }
        write_text(f.common.out, json{{"coordinate", coord},
                                      {"horizon", samples.horizon},
                                      {"n_captured", est.n_captured},
                                      {"n_censored", est.n_censored},
                                      {"rows", rows}}
                                         .dump(2) +
                                     "\n");
    } else {
        std::string csv = "# coordinate=" + coord +
                          " horizon=" + fmt(samples.horizon) +
                          " n_captured=" + std::to_string(est.n_captured) +
                          " n_censored=" + std::to_string(est.n_censored) + "\n";
        csv += "lo,hi,density,stderr\n";
        for (std::size_t j = 0; j < est.bin_density.size(); ++j) {
            csv += fmt(est.bin_edges[j]) + "," + fmt(est.bin_edges[j + 1]) + "," +
                   fmt(est.bin_density[j]) + "," + fmt(est.bin_std_err[j]) + "\n";
        }
        write_text(f.common.out, csv);
    }
    return 0;
}

// ---- verify ------------------------------------------------------------------

struct VerifyFlags {
    CommonFlags common;
    std::string grid_path;
    std::vector<std::string> only;
};

oufpt::GridSpec grid_from_json(const json& j) {
    oufpt::GridSpec grid;
    if (j.contains("betas")) grid.betas = j.at("betas").get<std::vector<double>>();
    if (j.contains("sigmas"))
        grid.sigmas = j.at("sigmas").get<std::vector<double>>();
    if (j.contains("x0_theta")) {
        grid.x0_theta.clear();
        for (const auto& pair : j.at("x0_theta")) {
            grid.x0_theta.emplace_back(pair.at(0).get<double>(),
                                       pair.at(1).get<double>());
        }
    }
    if (j.contains("s_primes"))
        grid.s_primes = j.at("s_primes").get<std::vector<double>>();
    if (j.contains("mc_points")) {
        grid.mc_points.clear();
        for (const auto& q : j.at("mc_points")) {
            grid.mc_points.push_back(oufpt::ParamPoint{
                q.at(0).get<double>(), q.at(1).get<double>(),
                q.at(2).get<double>(), q.at(3).get<double>()});
        }
    }
    if (j.contains("mc_paths")) grid.mc_paths = j.at("mc_paths").get<std::size_t>();
    if (j.contains("mc_dt")) grid.mc_dt = j.at("mc_dt").get<double>();
    if (j.contains("random_samples"))
        grid.random_samples = j.at("random_samples").get<std::size_t>();
    return grid;
}

int run_verify(const VerifyFlags& f) {
    oufpt::GridSpec grid;
    if (!f.grid_path.empty()) {
        std::ifstream in(f.grid_path);
        if (!in) {
            throw oufpt::Error("cannot open grid file: " + f.grid_path);
        }
        json j;
        try {
            j = json::parse(in);
            grid = grid_from_json(j);
        } catch (const json::exception& err) {
            throw oufpt::Error(std::string("malformed grid file: ") + err.what());
        }
    }
    oufpt::SuiteOptions options;
    options.only = f.only;
    const auto reports = oufpt::run_suite(grid, f.common.seed, options);

    const std::string base =
        f.common.out.empty() ? std::string("verify_report") : f.common.out;
    write_text(base + ".json", oufpt::reports_to_json(reports));
    write_text(base + ".csv", oufpt::reports_to_csv(reports));

    const auto summary = oufpt::summarize(reports);
    std::cout << summary.n_pass << " pass / " << summary.n_skip << " skip / "
              << summary.n_fail << " fail\n";
    return summary.n_fail == 0 ? 0 : 1;
}

// ---- phase -------------------------------------------------------------------

struct PhaseFlags {
    CommonFlags common;
    double amplitude = 0.5;
    double period = 1.0;
    std::size_t n_bins = 64;
    std::size_t samples_per_bin = 1000;
    std::size_t m = 1;
    double dt = 1e-3;
    double isi_cap = 50.0;
    double tol = 1e-12;
};

int run_phase(const PhaseFlags& f) {
    const auto base = f.common.params();
    const oufpt::ForcedLIFParams params{
        base, f.amplitude == 0.0 ? oufpt::Forcing::zero(f.period)
                                 : oufpt::Forcing::sinusoid(f.amplitude, f.period)};
    oufpt::SimConfig cfg;
    cfg.n_paths = 1;
    cfg.dt = f.dt;
    cfg.t_max = f.isi_cap;
    cfg.seed = f.common.seed;

    const auto kernel =
        oufpt::estimate_kernel(params, cfg, f.n_bins, f.samples_per_bin);
    const auto invariant = oufpt::invariant_density(kernel, f.tol);
    const double criterion = oufpt::infimum_criterion(kernel, f.m);

    if (f.common.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < kernel.n_bins; ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < kernel.n_bins; ++j) {
                row.push_back(kernel.at(i, j));
            }
            rows.push_back(row);
        }
        write_text(f.common.out, json{{"n_bins", kernel.n_bins},
                                      {"kernel", rows},
                                      {"invariant_density", invariant},
                                      {"infimum_criterion", criterion},
                                      {"m", f.m}}
                                         .dump(2) +
                                     "\n");
    } else {
        std::string csv = "# n_bins=" + std::to_string(f.n_bins) +
                          " samples_per_bin=" + std::to_string(f.samples_per_bin) +
                          " m=" + std::to_string(f.m) + "\n";
        csv += "# section=kernel\n";
        for (std::size_t i = 0; i < kernel.n_bins; ++i) {
            for (std::size_t j = 0; j < kernel.n_bins; ++j) {
                csv += fmt(kernel.at(i, j));
                csv += j + 1 < kernel.n_bins ? ',' : '\n';
            }
        }
        csv += "# section=invariant_density\n";
        for (std::size_t j = 0; j < invariant.size(); ++j) {
            csv += fmt(invariant[j]);
            csv += j + 1 < invariant.size() ? ',' : '\n';
        }
        csv += "# section=infimum_criterion\n" + fmt(criterion) + "\n";
        write_text(f.common.out, csv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"first passage bounds, densities and simulations for the "
                 "suprathreshold OU process"};
    app.set_version_flag("--version", "oufpt 0.1.0");
    app.require_subcommand(1);

    BoundFlags bound;
    DensityFlags density;
    SimulateFlags simulate;
    VerifyFlags verify;
    PhaseFlags phase;
    ConfigBinder binders[5];

    auto* bound_cmd = app.add_subcommand(
        "bound", "certified log lower bound of the FPT density over a t grid");
    add_common(bound_cmd, bound.common, binders[0]);
    binders[0].bind(bound_cmd->add_option("--tmin", bound.t_min, "grid start"),
                    "tmin", [&](const json& j) { bound.t_min = j.get<double>(); });
    binders[0].bind(bound_cmd->add_option("--tmax", bound.t_max, "grid end"),
                    "tmax", [&](const json& j) { bound.t_max = j.get<double>(); });
    binders[0].bind(bound_cmd->add_option("--steps", bound.steps, "grid size"),
                    "steps",
                    [&](const json& j) { bound.steps = j.get<std::size_t>(); });

    auto* density_cmd = app.add_subcommand(
        "density", "g2 by quadrature and/or FPT density by Monte Carlo");
    add_common(density_cmd, density.common, binders[1]);
    binders[1].bind(density_cmd
                        ->add_option("--mode", density.mode,
                                     "quadrature, mc, or both")
                        ->check(CLI::IsMember({"quadrature", "mc", "both"})),
                    "mode",
                    [&](const json& j) { density.mode = j.get<std::string>(); });
    binders[1].bind(density_cmd->add_option("--sprime", density.s_primes,
                                            "target crossing time(s) s'"),
                    "sprime", [&](const json& j) {
                        density.s_primes = j.get<std::vector<double>>();
                    });
    binders[1].bind(density_cmd->add_option("--tol", density.tol,
                                            "quadrature relative tolerance"),
                    "tol", [&](const json& j) { density.tol = j.get<double>(); });
    binders[1].bind(density_cmd->add_option("--npaths", density.n_paths,
                                            "Monte Carlo paths"),
                    "npaths", [&](const json& j) {
                        density.n_paths = j.get<std::size_t>();
                    });
    binders[1].bind(density_cmd->add_option("--dt", density.dt, "step in t"),
                    "dt", [&](const json& j) { density.dt = j.get<double>(); });
    binders[1].bind(density_cmd->add_option("--tmax", density.t_max, "horizon in t"),
                    "tmax", [&](const json& j) { density.t_max = j.get<double>(); });
    binders[1].bind(density_cmd->add_option("--ds", density.ds, "step in s (both mode)"),
                    "ds", [&](const json& j) { density.ds = j.get<double>(); });
    binders[1].bind(density_cmd->add_option("--smax", density.s_max,
                                            "horizon in s (0 = auto)"),
                    "smax", [&](const json& j) { density.s_max = j.get<double>(); });
    binders[1].bind(density_cmd->add_option("--bins", density.bins, "histogram bins"),
                    "bins", [&](const json& j) { density.bins = j.get<std::size_t>(); });

    auto* simulate_cmd = app.add_subcommand(
        "simulate", "first passage sampling and histogram estimation");
    add_common(simulate_cmd, simulate.common, binders[2]);
    binders[2].bind(simulate_cmd
                        ->add_option("--coordinate", simulate.coordinate,
                                     "t (OU) or s (Brownian to b(s))")
                        ->check(CLI::IsMember({"t", "s"})),
                    "coordinate", [&](const json& j) {
                        simulate.coordinate = j.get<std::string>();
                    });
    binders[2].bind(simulate_cmd->add_option("--npaths", simulate.n_paths, "paths"),
                    "npaths", [&](const json& j) {
                        simulate.n_paths = j.get<std::size_t>();
                    });
    binders[2].bind(simulate_cmd->add_option("--dt", simulate.dt, "step"),
                    "dt", [&](const json& j) { simulate.dt = j.get<double>(); });
    binders[2].bind(simulate_cmd->add_option("--tmax", simulate.t_max, "horizon"),
                    "tmax", [&](const json& j) { simulate.t_max = j.get<double>(); });
    binders[2].bind(simulate_cmd->add_flag("--no-bridge", simulate.no_bridge,
                                           "disable the bridge correction"),
                    "no_bridge",
                    [&](const json& j) { simulate.no_bridge = j.get<bool>(); });
    binders[2].bind(simulate_cmd->add_option("--bins", simulate.bins, "histogram bins"),
                    "bins", [&](const json& j) {
                        simulate.bins = j.get<std::size_t>();
                    });

    auto* verify_cmd = app.add_subcommand(
        "verify", "run the inequality suite; exit 1 on any failure");
    add_common(verify_cmd, verify.common, binders[3]);
    binders[3].bind(verify_cmd->add_option("--grid", verify.grid_path,
                                           "JSON grid specification"),
                    "grid", [&](const json& j) {
                        verify.grid_path = j.get<std::string>();
                    });
    binders[3].bind(verify_cmd->add_option("--only", verify.only,
                                           "check id prefixes to run"),
                    "only", [&](const json& j) {
                        verify.only = j.get<std::vector<std::string>>();
                    });

    auto* phase_cmd = app.add_subcommand(
        "phase", "phase kernel, invariant density and infimum criterion");
    add_common(phase_cmd, phase.common, binders[4]);
    binders[4].bind(phase_cmd->add_option("--amp", phase.amplitude,
                                          "sinusoidal forcing amplitude"),
                    "amp", [&](const json& j) { phase.amplitude = j.get<double>(); });
    binders[4].bind(phase_cmd->add_option("--period", phase.period, "forcing period"),
                    "period", [&](const json& j) { phase.period = j.get<double>(); });
    binders[4].bind(phase_cmd->add_option("--nbins", phase.n_bins, "circle bins (>= 2)"),
                    "nbins", [&](const json& j) { phase.n_bins = j.get<std::size_t>(); });
    binders[4].bind(phase_cmd->add_option("--samples-per-bin", phase.samples_per_bin,
                                          "resets launched per bin"),
                    "samples_per_bin", [&](const json& j) {
                        phase.samples_per_bin = j.get<std::size_t>();
                    });
    binders[4].bind(phase_cmd->add_option("--m", phase.m, "kernel power"),
                    "m", [&](const json& j) { phase.m = j.get<std::size_t>(); });
    binders[4].bind(phase_cmd->add_option("--dt", phase.dt, "SDE step"),
                    "dt", [&](const json& j) { phase.dt = j.get<double>(); });
    binders[4].bind(phase_cmd->add_option("--isi-cap", phase.isi_cap,
                                          "per-interval time cap"),
                    "isi_cap", [&](const json& j) { phase.isi_cap = j.get<double>(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (bound_cmd->parsed()) {
            binders[0].apply(load_config(bound.common.config_path));
            return run_bound(bound);
        }
        if (density_cmd->parsed()) {
            binders[1].apply(load_config(density.common.config_path));
            return run_density(density);
        }
        if (simulate_cmd->parsed()) {
            binders[2].apply(load_config(simulate.common.config_path));
            return run_simulate(simulate);
        }
        if (verify_cmd->parsed()) {
            binders[3].apply(load_config(verify.common.config_path));
            return run_verify(verify);
        }
        if (phase_cmd->parsed()) {
            binders[4].apply(load_config(phase.common.config_path));
            return run_phase(phase);
        }
    } catch (const oufpt::NonConvergence& err) {
        std::cerr << "error: " << err.what()
                  << " (residual " << err.residual() << ")\n";
        return 1;
    } catch (const oufpt::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
