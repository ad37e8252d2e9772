"""Low-rank approximation of antisymmetric order-3 tensors.

The main entry points are :func:`antisym_cp` for fully antisymmetric
tensors, :func:`pantisym_cp` for tensors antisymmetric in the first two
modes, and :func:`cp_als` as the unstructured baseline.
"""
from .antisym import (
    A6Repr,
    C2Repr,
    a6_materialize,
    antisymmetrize,
    antisymmetrize_partial,
    c2_materialize,
    is_antisymmetric,
    is_partially_antisymmetric,
    levi_civita,
)
from .antisym_als import antisym_cp, objective_f, relative_error
from .config import ConvergenceReport, SolveConfig
from .cp_als import CPFactors, cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial
from .errors import SolverError, ValidationError
from .hopm_equiv import equivalence_report, hopm_rank1, partial_equivalence_report
from .partial_als import objective_g, pantisym_cp
from .tensor_core import read_atns, write_atns

__version__ = "0.1.0"

__all__ = [
    "A6Repr",
    "C2Repr",
    "CPFactors",
    "ConvergenceReport",
    "SolveConfig",
    "SolverError",
    "ValidationError",
    "a6_materialize",
    "antisym_cp",
    "antisymmetrize",
    "antisymmetrize_partial",
    "c2_materialize",
    "cp_als",
    "cp_reconstruct",
    "cp_then_antisymmetrize",
    "cp_then_antisymmetrize_partial",
    "equivalence_report",
    "hopm_rank1",
    "is_antisymmetric",
    "is_partially_antisymmetric",
    "levi_civita",
    "objective_f",
    "objective_g",
    "pantisym_cp",
    "partial_equivalence_report",
    "read_atns",
    "relative_error",
    "write_atns",
]
