"""Centre-manifold reduction of polynomial ODE systems.

Pipeline: parse -> shift equilibrium -> spectral split -> eigenbasis
transform -> invariance-equation solve -> reduced dynamics -> stability
classification, with fixed-step integration for empirical verification.
"""

from .errors import (
    CmtError,
    DefectiveSpectrumError,
    DimensionMismatchError,
    DivergenceError,
    DslError,
    DslSyntaxError,
    InconsistentSplitError,
    NonPolynomialError,
    NotAnEquilibriumError,
    NotShiftedError,
    ReductionScopeError,
    ResonanceError,
    UndeclaredNameError,
    UnsupportedSpectrumError,
)
from .manifold import (
    CentreManifoldMap,
    ParityReport,
    ReducedSystem,
    invariance_residual,
    parity_check,
    reduce,
    solve_centre_manifold,
)
from .poly import Polynomial, PolyMap, monomials_of_degree
from .sim import Trajectory, amplitude_series, integrate, manifold_residual
from .spectral import (
    Eigenvalue,
    LinearPart,
    SpectralSplit,
    TransformedSystem,
    eigen_split,
    linear_part,
    to_eigenbasis,
)
from .stability import (
    RadialAnalysis,
    RadialFixedPoint,
    RayAnalysis,
    StabilityVerdict,
    angular_dynamics,
    classify_1d,
    radial_dynamics,
    radial_fixed_points,
    tangential_dynamics,
)
from .sysdsl import SystemSpec, parse_system, render_system, shift_equilibrium

__version__ = "0.1.0"

__all__ = [
    "CmtError",
    "DimensionMismatchError",
    "DslError",
    "DslSyntaxError",
    "NonPolynomialError",
    "UndeclaredNameError",
    "NotAnEquilibriumError",
    "NotShiftedError",
    "UnsupportedSpectrumError",
    "DefectiveSpectrumError",
    "InconsistentSplitError",
    "ReductionScopeError",
    "ResonanceError",
    "DivergenceError",
    "Polynomial",
    "PolyMap",
    "monomials_of_degree",
    "SystemSpec",
    "parse_system",
    "render_system",
    "shift_equilibrium",
    "LinearPart",
    "Eigenvalue",
    "SpectralSplit",
    "TransformedSystem",
    "linear_part",
    "eigen_split",
    "to_eigenbasis",
    "CentreManifoldMap",
    "ReducedSystem",
    "ParityReport",
    "solve_centre_manifold",
    "invariance_residual",
    "reduce",
    "parity_check",
    "StabilityVerdict",
    "RadialFixedPoint",
    "RayAnalysis",
    "RadialAnalysis",
    "classify_1d",
    "radial_dynamics",
    "tangential_dynamics",
    "angular_dynamics",
    "radial_fixed_points",
    "Trajectory",
    "integrate",
    "manifold_residual",
    "amplitude_series",
    "__version__",
]
