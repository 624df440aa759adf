# SPDX-License-Identifier: Apache-2.0
"""First passage time bounds and simulation for the suprathreshold
Ornstein-Uhlenbeck process.

The heavy lifting lives in the compiled extension ``oufpt._core``; this
package re-exports its surface.
"""

from ._core import (  # noqa: F401
    BoundCertificate,
    CheckReport,
    CheckStatus,
    Coordinate,
    DensityEstimate,
    Error,
    ForcedLIFParams,
    Forcing,
    FptSamples,
    GridSpec,
    OptimizationWitness,
    OUParams,
    ParamPoint,
    PhaseKernel,
    PiecewiseLinearFrame,
    QuadratureResult,
    SimConfig,
    SqrtBoundary,
    TailEstimate,
    __version__,
    build_frame,
    estimate_density,
    estimate_kernel,
    estimate_log_tail,
    g01,
    g12,
    g2_quadrature,
    infimum_criterion,
    invariant_density,
    lemma4_log_bound,
    lemma4_threshold,
    log_tail_from_samples,
    mmax,
    ou_from_brownian_path,
    remark_constants,
    reports_to_csv,
    reports_to_json,
    rho_b_to_rho_x,
    run_suite,
    s_to_time,
    sample_fpt_brownian,
    sample_fpt_brownian_line,
    sample_fpt_ou,
    simulate_phase_sequence,
    theorem_log_bound,
    time_to_s,
    validate,
    validate_forced,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
