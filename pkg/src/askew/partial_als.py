"""Structure-preserving rank-2 approximation of tensors antisymmetric in modes 1-2.

For ``C`` of shape ``(n, n, m)`` and ``g = 2 ||C - C2(x, y, z)||^2`` with
``d = 2 ||C||^2``:

    g = d + b1ᵀx + ½ xᵀ Qp(y, z) x,   b1 = -4 C ×₂ yᵀ ×₃ zᵀ
      = d + b2ᵀy + ½ yᵀ Qp(x, z) y,   b2 = -4 C ×₁ xᵀ ×₃ zᵀ
      = d + b3ᵀz + ½ q3 zᵀz,          b3 = -2 (C ×₁ xᵀ ×₂ yᵀ - C ×₁ yᵀ ×₂ xᵀ)

with ``Qp(u, z) = 2 |z|² (|u|² I - u uᵀ)`` and ``q3 = ||x yᵀ - y xᵀ||_F²``.
Note ``C ×₁ xᵀ ×₃ zᵀ = -(C ×₂ xᵀ ×₃ zᵀ)`` by the antisymmetry of the slices.
"""
from __future__ import annotations

import numpy as np

from .antisym import C2Repr, c2_materialize, require_partially_antisymmetric
from .config import ConvergenceReport, SolveConfig
from .errors import ValidationError
from .tensor_core import as_tensor3, contract, leading_left_singular_vectors, matricize, pinv

__all__ = [
    "build_qp",
    "build_b1",
    "build_b2",
    "build_b3",
    "q3_scalar",
    "partial_quadratic_form",
    "objective_g",
    "pantisym_cp",
]

_Q3_GUARD = 1e-300


def build_qp(u, z) -> np.ndarray:
    """``2 |u|²|z|² I - 2 u uᵀ |z|²``; annihilates ``u``."""
    u = np.asarray(u, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    zz = z @ z
    return 2.0 * zz * ((u @ u) * np.eye(u.size) - np.outer(u, u))


def build_b1(c, y, z) -> np.ndarray:
    """``-4 C ×₂ yᵀ ×₃ zᵀ``, the linear term of the x block."""
    return -4.0 * contract(c, y, z, (2, 3))


def build_b2(c, x, z) -> np.ndarray:
    """``-4 C ×₁ xᵀ ×₃ zᵀ``, the linear term of the y block."""
    return -4.0 * contract(c, x, z, (1, 3))


def build_b3(c, x, y) -> np.ndarray:
    """``-2 (C ×₁ xᵀ ×₂ yᵀ - C ×₁ yᵀ ×₂ xᵀ)``, the linear term of the z block."""
    return -2.0 * (contract(c, x, y, (1, 2)) - contract(c, y, x, (1, 2)))


def q3_scalar(x, y) -> float:
    """``||x yᵀ - y xᵀ||_F² = 2 (|x|²|y|² - <x,y>²)``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValidationError(f"q3 needs equal-length vectors, got {x.shape} and {y.shape}")
    return float(np.sum((np.outer(x, y) - np.outer(y, x)) ** 2))


def partial_quadratic_form(c, r: C2Repr, block: int):
    """``(Q or q3, b, d)`` of ``g`` restricted to block 1 (x), 2 (y) or 3 (z)."""
    c = as_tensor3(c)
    d = 2.0 * float(np.sum(c * c))
    if block == 1:
        return build_qp(r.y, r.z), build_b1(c, r.y, r.z), d
    if block == 2:
        return build_qp(r.x, r.z), build_b2(c, r.x, r.z), d
    if block == 3:
        return q3_scalar(r.x, r.y), build_b3(c, r.x, r.y), d
    raise ValidationError(f"block must be 1, 2 or 3, got {block!r}")


def objective_g(c, r: C2Repr) -> float:
    """``2 ||c - C2(r)||²`` evaluated directly."""
    c = as_tensor3(c)
    if c.shape != r.shape:
        raise ValidationError(f"tensor shape {c.shape} does not match representation {r.shape}")
    return 2.0 * float(np.sum((c - c2_materialize(r)) ** 2))


def _initial_vectors(c: np.ndarray, how: str, rng):
    n, _, m = c.shape
    if how == "svd":
        u = leading_left_singular_vectors(matricize(c, 1), 2)
        w = leading_left_singular_vectors(matricize(c, 3), 1)
        return [u[:, 0].copy(), u[:, 1].copy(), w[:, 0].copy()]
    return [rng.standard_normal(n), rng.standard_normal(n), rng.standard_normal(m)]


def pantisym_cp(c, cfg: SolveConfig | None = None) -> tuple[C2Repr, ConvergenceReport]:
    """Approximate a tensor antisymmetric in modes 1-2 by ``C2(x, y, z)``.

    Each sweep sets ``x = -Qp(y,z)⁺ b1``, ``y = -Qp(x,z)⁺ b2`` and
    ``z = -b3 / q3``, then applies the same stopping rule as
    :func:`askew.antisym_als.antisym_cp`.  A vanishing coefficient (zero
    ``y``/``z`` for the x block, zero ``x`` for the y block, ``x`` parallel
    to ``y`` for the z block) redraws the offending vector.
    """
    cfg = cfg or SolveConfig()
    c = require_partially_antisymmetric(c, 1e-10)
    n, _, m = c.shape
    if n < 2:
        raise ValidationError(f"need n >= 2, got n = {n}")
    c_norm = np.linalg.norm(c)
    if c_norm == 0.0:
        raise ValidationError("cannot approximate the zero tensor")

    rng = cfg.rng()
    x, y, z = _initial_vectors(c, cfg.init_or("random"), rng)
    report = ConvergenceReport()
    report.micro_objective.append(objective_g(c, C2Repr(x, y, z)))

    def redraw(size):
        report.reinitializations += 1
        return rng.standard_normal(size)

    for _ in range(cfg.max_iter):
        while z @ z == 0.0:
            z = redraw(m)
        while y @ y == 0.0:
            y = redraw(n)
        x = -pinv(build_qp(y, z)) @ build_b1(c, y, z)
        report.micro_objective.append(objective_g(c, C2Repr(x, y, z)))

        while x @ x == 0.0:
            x = redraw(n)
        y = -pinv(build_qp(x, z)) @ build_b2(c, x, z)
        report.micro_objective.append(objective_g(c, C2Repr(x, y, z)))

        q3 = q3_scalar(x, y)
        while q3 < _Q3_GUARD:
            y = redraw(n)
            q3 = q3_scalar(x, y)
        z = -build_b3(c, x, y) / q3
        g = objective_g(c, C2Repr(x, y, z))
        report.micro_objective.append(g)
        if report.record(np.sqrt(g / 2.0) / c_norm, cfg.tol):
            break
    return C2Repr(x, y, z), report
