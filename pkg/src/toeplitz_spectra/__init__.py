"""Spectral representation of the three model commutative Toeplitz algebras
on weighted Bergman spaces: spectral functions of radial / vertical / angular
symbols (including distributional ones), the associated functional calculus,
algebra-membership classification, and independent desk-scale verification."""

__version__ = "0.1.0"

from .classify import (
    GridFunction,
    OscillationMetric,
    OscillationReport,
    builtin_calibration,
    oscillation_modulus,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    GridMismatchError,
    InsufficientSamplingError,
)
from .oracle import (
    CoherentState,
    FormComparison,
    ToeplitzMatrix,
    WavePacket,
    hyperbolic_form_direct,
    hyperbolic_form_spectral,
    normalization_probe,
    parabolic_form_direct,
    parabolic_form_spectral,
    resolution_apply_check,
    resolution_kernel_parabolic,
    toeplitz_matrix_disk,
    unitarity_check_parabolic,
)
from .quadrature import (
    IntegrationResult,
    QuadratureRule,
    adaptive_integrate,
    build_generalized_laguerre,
    build_jacobi01,
    build_legendre01,
    log_axis_integrate,
)
from .specfun import (
    WeightParameter,
    gamma_ratio_elliptic,
    gamma_star,
    ln_abs_gamma_sq,
    ln_gamma,
    ln_vartheta_sq,
    lower_incomplete_gamma,
    vartheta,
)
from .spectra import (
    CalculusVector,
    CompactnessReport,
    SpectralFunction,
    apply_calculus,
    compactness_estimate,
    default_grid,
    gamma_elliptic,
    gamma_hyperbolic,
    gamma_parabolic,
    sup_norm,
)
from .symbols import (
    DeltaTerm,
    Geometry,
    SymbolSpec,
    builtin,
    eval_function_part,
    format_symbol,
    parse_symbol,
    sum_symbols,
)
