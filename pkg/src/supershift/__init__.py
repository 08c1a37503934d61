"""Supershift of superoscillatory data under Schrodinger-type evolutions.

Modules: :mod:`~supershift.special_functions`, :mod:`~supershift.sequences`,
:mod:`~supershift.operators`, :mod:`~supershift.evolution`,
:mod:`~supershift.fresnel`, :mod:`~supershift.propagators`,
:mod:`~supershift.reference_oracles` and :mod:`~supershift.cli`.
"""

__version__ = "0.1.0"

from .errors import NumericalError, SupershiftError, ValidationError  # noqa: E402
from .sequences import FourierSum, SuperoscParams, coefficients, evaluate_product, evaluate_sum  # noqa: E402
from .operators import DispersionSpec, apply_operator, symbol_from_dispersion  # noqa: E402
from .evolution import GapReport, GridRect, psi, psi_points, supershift_gap  # noqa: E402
from .fresnel import (  # noqa: E402
    FresnelIntegrand,
    QuadratureConfig,
    angle_independence_check,
    epsilon_oracle,
    regularize_halfline,
    regularize_realline,
)
from .propagators import (  # noqa: E402
    CentrifugalSpec,
    HarmonicSpec,
    centrifugal_evolve,
    harmonic_evolve_closed,
    harmonic_evolve_kernel,
    singularity_probe,
)

__all__ = [
    "__version__",
    "SupershiftError",
    "ValidationError",
    "NumericalError",
    "SuperoscParams",
    "FourierSum",
    "coefficients",
    "evaluate_product",
    "evaluate_sum",
    "DispersionSpec",
    "symbol_from_dispersion",
    "apply_operator",
    "GridRect",
    "GapReport",
    "psi",
    "psi_points",
    "supershift_gap",
    "FresnelIntegrand",
    "QuadratureConfig",
    "regularize_halfline",
    "regularize_realline",
    "epsilon_oracle",
    "angle_independence_check",
    "CentrifugalSpec",
    "HarmonicSpec",
    "centrifugal_evolve",
    "harmonic_evolve_closed",
    "harmonic_evolve_kernel",
    "singularity_probe",
]
