// SPDX-License-Identifier: Apache-2.0
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oufpt/analytic.hpp"
#include "oufpt/boundary.hpp"
#include "oufpt/mc.hpp"
#include "oufpt/ou_model.hpp"
#include "oufpt/phase_map.hpp"
#include "oufpt/verify.hpp"

namespace py = pybind11;
using namespace oufpt;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> kernel_matrix(const PhaseKernel& k) {
    py::array_t<double> out({static_cast<py::ssize_t>(k.n_bins),
                             static_cast<py::ssize_t>(k.n_bins)});
    std::copy(k.matrix.begin(), k.matrix.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "first passage time bounds and simulation for the "
              "suprathreshold Ornstein-Uhlenbeck process";

    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

    // -- model ---------------------------------------------------------------
    py::class_<OUParams>(m, "OUParams")
        .def(py::init<double, double, double, double>(), py::arg("beta"),
             py::arg("sigma"), py::arg("x0"), py::arg("theta"))
        .def_readonly("beta", &OUParams::beta)
        .def_readonly("sigma", &OUParams::sigma)
        .def_readonly("x0", &OUParams::x0)
        .def_readonly("theta", &OUParams::theta)
        .def("__repr__", [](const OUParams& p) {
            return "OUParams(beta=" + std::to_string(p.beta) +
                   ", sigma=" + std::to_string(p.sigma) +
                   ", x0=" + std::to_string(p.x0) +
                   ", theta=" + std::to_string(p.theta) + ")";
        });

    m.def("validate", &validate, py::arg("beta"), py::arg("sigma"),
          py::arg("x0"), py::arg("theta"));
    m.def("time_to_s", &time_to_s, py::arg("t"), py::arg("beta"));
    m.def("s_to_time", &s_to_time, py::arg("s"), py::arg("beta"));
    m.def("ou_from_brownian_path", &ou_from_brownian_path, py::arg("params"),
          py::arg("brownian"), py::arg("t"));

    // -- boundary geometry ----------------------------------------------------
    py::class_<SqrtBoundary>(m, "SqrtBoundary")
        .def(py::init<OUParams>(), py::arg("params"))
        .def("value", &SqrtBoundary::value, py::arg("s"))
        .def("slope", &SqrtBoundary::slope, py::arg("s"));

    py::class_<PiecewiseLinearFrame>(m, "PiecewiseLinearFrame")
        .def_readonly("a1", &PiecewiseLinearFrame::a1)
        .def_readonly("b1", &PiecewiseLinearFrame::b1)
        .def_readonly("s_prime", &PiecewiseLinearFrame::s_prime)
        .def_readonly("a2", &PiecewiseLinearFrame::a2)
        .def_readonly("s_star", &PiecewiseLinearFrame::s_star)
        .def_readonly("delta", &PiecewiseLinearFrame::delta)
        .def("line1", &PiecewiseLinearFrame::line1, py::arg("s"))
        .def("q1", &PiecewiseLinearFrame::q1, py::arg("s"))
        .def("q1_definitional", &PiecewiseLinearFrame::q1_definitional,
             py::arg("s"))
        .def("q2", &PiecewiseLinearFrame::q2, py::arg("s"));

    m.def("build_frame", &build_frame, py::arg("boundary"), py::arg("s_prime"));

    // -- closed forms and bounds ----------------------------------------------
    m.def("g01", &g01, py::arg("s"), py::arg("a1"), py::arg("b1"));
    m.def("g12", &g12, py::arg("s_prime"), py::arg("s"), py::arg("start"),
          py::arg("a2"));

    py::class_<QuadratureResult>(m, "QuadratureResult")
        .def_readonly("log_value", &QuadratureResult::log_value)
        .def_readonly("value", &QuadratureResult::value)
        .def_readonly("rel_error", &QuadratureResult::rel_error)
        .def_readonly("evaluations", &QuadratureResult::evaluations);

    m.def("g2_quadrature", &g2_quadrature, py::arg("boundary"),
          py::arg("s_prime"), py::arg("rel_tol") = 1e-8,
          py::arg("max_evaluations") = std::size_t{1'000'000});

    py::class_<OptimizationWitness>(m, "OptimizationWitness")
        .def_readonly("b_value", &OptimizationWitness::b_value)
        .def_readonly("c_value", &OptimizationWitness::c_value)
        .def_readonly("eta_plus", &OptimizationWitness::eta_plus)
        .def_readonly("nu_plus", &OptimizationWitness::nu_plus)
        .def_readonly("m_max", &OptimizationWitness::m_max);

    m.def("mmax", &mmax, py::arg("b_value"));
    m.def("lemma4_threshold", &lemma4_threshold, py::arg("params"));
    m.def("lemma4_log_bound", &lemma4_log_bound, py::arg("params"),
          py::arg("s_prime"));

    py::class_<BoundCertificate>(m, "BoundCertificate")
        .def_readonly("beta", &BoundCertificate::beta)
        .def_readonly("k", &BoundCertificate::k)
        .def_readonly("p", &BoundCertificate::p)
        .def_readonly("u", &BoundCertificate::u)
        .def_readonly("cap_k", &BoundCertificate::cap_k)
        .def_readonly("cap_h", &BoundCertificate::cap_h)
        .def("log_bound_at", &BoundCertificate::log_bound_at, py::arg("t"));

    m.def("remark_constants", &remark_constants, py::arg("params"));
    m.def("theorem_log_bound", &theorem_log_bound, py::arg("certificate"),
          py::arg("t"));
    m.def("rho_b_to_rho_x", &rho_b_to_rho_x, py::arg("params"),
          py::arg("rho_b_at"), py::arg("t"));

    // -- Monte Carlo engine -----------------------------------------------------
    py::enum_<Coordinate>(m, "Coordinate")
        .value("ORIGINAL_T", Coordinate::OriginalT)
        .value("RESCALED_S", Coordinate::RescaledS);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init([](std::size_t n_paths, double dt, double t_max,
                         std::uint64_t seed, bool bridge_correction,
                         unsigned n_threads) {
                 SimConfig cfg;
                 cfg.n_paths = n_paths;
                 cfg.dt = dt;
                 cfg.t_max = t_max;
                 cfg.seed = seed;
                 cfg.bridge_correction = bridge_correction;
                 cfg.n_threads = n_threads;
                 return cfg;
             }),
             py::arg("n_paths") = 1, py::arg("dt") = 1e-3,
             py::arg("t_max") = 1.0, py::arg("seed") = 0,
             py::arg("bridge_correction") = true, py::arg("n_threads") = 0)
        .def_readwrite("n_paths", &SimConfig::n_paths)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("t_max", &SimConfig::t_max)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("bridge_correction", &SimConfig::bridge_correction)
        .def_readwrite("n_threads", &SimConfig::n_threads);

    py::class_<FptSamples>(m, "FptSamples")
        .def_property_readonly(
            "times", [](const FptSamples& s) { return to_array(s.times); })
        .def_readonly("horizon", &FptSamples::horizon)
        .def_readonly("coordinate", &FptSamples::coordinate)
        .def_property_readonly("n_captured", &FptSamples::n_captured)
        .def_property_readonly("n_censored", &FptSamples::n_censored);

    m.def("sample_fpt_ou", &sample_fpt_ou, py::arg("params"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("sample_fpt_brownian", &sample_fpt_brownian, py::arg("boundary"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("sample_fpt_brownian_line", &sample_fpt_brownian_line, py::arg("a1"),
          py::arg("b1"), py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<DensityEstimate>(m, "DensityEstimate")
        .def_property_readonly(
            "bin_edges",
            [](const DensityEstimate& e) { return to_array(e.bin_edges); })
        .def_property_readonly(
            "bin_density",
            [](const DensityEstimate& e) { return to_array(e.bin_density); })
        .def_property_readonly(
            "bin_std_err",
            [](const DensityEstimate& e) { return to_array(e.bin_std_err); })
        .def_readonly("n_captured", &DensityEstimate::n_captured)
        .def_readonly("n_censored", &DensityEstimate::n_censored)
        .def_readonly("coordinate", &DensityEstimate::coordinate);

    m.def("estimate_density", &estimate_density, py::arg("samples"),
          py::arg("edges"));

    py::class_<TailEstimate>(m, "TailEstimate")
        .def_readonly("log_density", &TailEstimate::log_density)
        .def_readonly("log_lo", &TailEstimate::log_lo)
        .def_readonly("log_hi", &TailEstimate::log_hi)
        .def_readonly("count", &TailEstimate::count)
        .def_readonly("window", &TailEstimate::window);

    m.def("estimate_log_tail", &estimate_log_tail, py::arg("params"),
          py::arg("config"), py::arg("t"),
          py::call_guard<py::gil_scoped_release>());
    m.def("log_tail_from_samples", &log_tail_from_samples, py::arg("samples"),
          py::arg("t"));

    // -- phase map -----------------------------------------------------------
    py::class_<Forcing>(m, "Forcing")
        .def_readonly("period", &Forcing::period)
        .def_static("zero", &Forcing::zero, py::arg("period"))
        .def_static("sinusoid", &Forcing::sinusoid, py::arg("amplitude"),
                    py::arg("period"))
        .def_static("generic", &Forcing::generic, py::arg("h"),
                    py::arg("period"))
        .def("h", [](const Forcing& f, double t) { return f.h(t); },
             py::arg("t"));

    py::class_<ForcedLIFParams>(m, "ForcedLIFParams")
        .def(py::init([](OUParams base, Forcing forcing) {
                 return ForcedLIFParams{base, std::move(forcing)};
             }),
             py::arg("base"), py::arg("forcing"))
        .def_readonly("base", &ForcedLIFParams::base)
        .def_readonly("forcing", &ForcedLIFParams::forcing);

    m.def("validate_forced", &validate_forced, py::arg("params"));
    m.def("simulate_phase_sequence", &simulate_phase_sequence,
          py::arg("params"), py::arg("config"), py::arg("n_resets"),
          py::arg("phi0"), py::call_guard<py::gil_scoped_release>());

    py::class_<PhaseKernel>(m, "PhaseKernel")
        .def_readonly("n_bins", &PhaseKernel::n_bins)
        .def_property_readonly("matrix", &kernel_matrix)
        .def_property_readonly("counts_per_row", [](const PhaseKernel& k) {
            return k.counts_per_row;
        });

    m.def("estimate_kernel", &estimate_kernel, py::arg("params"),
          py::arg("config"), py::arg("n_bins"), py::arg("samples_per_bin"),
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "invariant_density",
        [](const PhaseKernel& k, double tol, std::size_t max_iterations) {
            return to_array(invariant_density(k, tol, max_iterations));
        },
        py::arg("kernel"), py::arg("tol") = 1e-12,
        py::arg("max_iterations") = std::size_t{200'000});
    m.def("infimum_criterion", &infimum_criterion, py::arg("kernel"),
          py::arg("m") = std::size_t{1});

    // -- verification suite ----------------------------------------------------
    py::enum_<CheckStatus>(m, "CheckStatus")
        .value("PASS", CheckStatus::Pass)
        .value("FAIL", CheckStatus::Fail)
        .value("SKIPPED_HYPOTHESIS", CheckStatus::SkippedHypothesis);

    py::class_<CheckReport>(m, "CheckReport")
        .def_readonly("check_id", &CheckReport::check_id)
        .def_readonly("param_set", &CheckReport::param_set)
        .def_readonly("status", &CheckReport::status)
        .def_readonly("margin", &CheckReport::margin)
        .def_readonly("detail", &CheckReport::detail);

    py::class_<ParamPoint>(m, "ParamPoint")
        .def(py::init<double, double, double, double>(), py::arg("beta"),
             py::arg("sigma"), py::arg("x0"), py::arg("theta"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<>())
        .def_readwrite("betas", &GridSpec::betas)
        .def_readwrite("sigmas", &GridSpec::sigmas)
        .def_readwrite("x0_theta", &GridSpec::x0_theta)
        .def_readwrite("s_primes", &GridSpec::s_primes)
        .def_readwrite("mc_points", &GridSpec::mc_points)
        .def_readwrite("mc_paths", &GridSpec::mc_paths)
        .def_readwrite("mc_dt", &GridSpec::mc_dt)
        .def_readwrite("random_samples", &GridSpec::random_samples);

    m.def(
        "run_suite",
        [](const GridSpec& grid, std::uint64_t seed,
           const std::vector<std::string>& only) {
            SuiteOptions options;
            options.only = only;
            return run_suite(grid, seed, options);
        },
        py::arg("grid"), py::arg("seed") = 0,
        py::arg("only") = std::vector<std::string>{},
        py::call_guard<py::gil_scoped_release>());
    m.def("reports_to_json", &reports_to_json, py::arg("reports"));
    m.def("reports_to_csv", &reports_to_csv, py::arg("reports"));

#ifdef VERSION_INFO
#define OUFPT_STR(x) #x
#define OUFPT_XSTR(x) OUFPT_STR(x)
    m.attr("__version__") = OUFPT_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "0.1.0";
#endif
}
