"""Principal eigenvalue curves and maximum/comparison-principle probes for
coupled fractional (p, q)-Laplacian systems on one-dimensional intervals."""

from .backend import BACKEND
from .domain import (Grid, SystemParams, WeightField, build_grid,
                     sample_weight, validate_params, weight_from_spec)
from .fracop import KernelMatrix, apply_operator, assemble, energy
from .solvers import (ConvergenceError, SolveReport, TorsionConstant,
                      solve_dirichlet, solve_subhomogeneous, torsion_constant,
                      torsion_constant_cached)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "Grid",
    "KernelMatrix",
    "SolveReport",
    "SystemParams",
    "TorsionConstant",
    "WeightField",
    "apply_operator",
    "assemble",
    "build_grid",
    "energy",
    "sample_weight",
    "solve_dirichlet",
    "solve_subhomogeneous",
    "torsion_constant",
    "torsion_constant_cached",
    "validate_params",
    "weight_from_spec",
    "__version__",
]
