"""Joint spectral radius and Barabanov norms for sets of real 2x2 matrices."""

from .linalg import (
    Irreducibility,
    IrreducibilityVerdict,
    MatrixSet,
    ReducibleSetError,
    induced_two_norm,
    irreducibility_check,
    product_chain,
    rotation,
    spectral_radius,
)
from .oracle import BoundsBracket, CapExceededError, bracket, lower_bound, trace_estimate, upper_bound
from .polar import PolarNorm, TransformTables, build_transform_tables
from .relaxation import Averaging, IterationReport, IterationStep, RelaxationConfig, barabanov_residual, run

__version__ = "0.1.0"
