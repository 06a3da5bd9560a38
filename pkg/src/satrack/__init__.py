"""satrack: fixed-gain stochastic approximation under weakly dependent
signals -- simulation kernels, tracking-rate experiments, and mixing
diagnostics."""

__version__ = "0.1.0"

from ._backend import available_backends, backend_name
from .errors import ConfigError, DomainExitError, NonConvergenceError, SatrackError
from .fields import (
    AboveThreshold,
    BelowThreshold,
    Between,
    Box,
    Kohonen,
    MeanField,
    Piece,
    PiecewiseIndicator,
    QuantilePinball,
    closed_form_mean_field,
    custom_mean_field,
    eval_field,
    field_bound,
    mean_field,
    mean_field_with_stderr,
    monte_carlo_mean_field,
    nearest_cell,
)
from .numerics import (
    LineFit,
    fit_line,
    gauss_expectation,
    norm_cdf,
    norm_pdf,
    norm_quantile,
    solve_fixed_point_2d,
)
from .recursion import (
    RecursionConfig,
    Trajectory,
    discrete_flow,
    flow_sensitivity,
    ode_flow,
    run_averaged,
    run_fixed_gain,
    t0_threshold,
)
from .rng import RngState, gaussians, next_gaussian, uniforms
from .signals import (
    ArctanOf,
    Finite,
    Geometric,
    LinearProcessSpec,
    PowerDecay,
    RandomEnvChainSpec,
    SignalPath,
    Uniform01,
    gen_linear_path,
    gen_random_env_path,
    generate_path,
    stationary_cdf,
    tail_variance,
)
from .mixing import (
    ClcReport,
    ForgettingReport,
    MixingProfile,
    check_maximal_inequality,
    estimate_clc,
    forgetting_partial_sum,
    gamma_bound_linear,
    gamma_exact_linear,
    gamma_total,
)
from .experiments import (
    Analytic,
    ErrorCurve,
    ExperimentConfig,
    Fixed,
    GapCurve,
    PerGain,
    SelfReferential,
    kohonen_arctan_residual,
    reference_value,
    reference_value_with_stderr,
    run_error_curve,
    solve_kohonen_arctan_root,
    tracking_gap_curve,
)
from .config import config_to_dict, parse_config
