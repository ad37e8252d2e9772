"""Antisymmetry-preserving ALS for the ``A6(x, y, z)`` format.

With ``f(x, y, z) = 6 ||A - A6(x, y, z)||^2`` and ``d = 6 ||A||^2`` the
objective is, in each block separately,

    f = d + c1ᵀx + ½ xᵀ Q(y, z) x,   c1 = -12 A ×₂ yᵀ ×₃ zᵀ
      = d + c2ᵀy + ½ yᵀ Q(z, x) y,   c2 = -12 A ×₂ zᵀ ×₃ xᵀ
      = d + c3ᵀz + ½ zᵀ Q(x, y) z,   c3 = -12 A ×₂ xᵀ ×₃ yᵀ

with ``Q(u, v) = 2((|u|²|v|² - <u,v>²) I + (uvᵀ - vuᵀ)²)``.  ``Q(u, v)`` is
singular (it annihilates ``u`` and ``v``) but each system ``Q w = -c`` is
consistent, so every block update is the minimum-norm solution
``w = -Q⁺ c``, which is orthogonal to the other two vectors.
"""
from __future__ import annotations

import numpy as np

from .antisym import A6Repr, a6_materialize, require_antisymmetric
from .config import ConvergenceReport, SolveConfig
from .errors import ValidationError
from .tensor_core import as_tensor3, contract, leading_left_singular_vectors, matricize, pinv

__all__ = [
    "build_q",
    "build_c",
    "quadratic_form",
    "objective_f",
    "antisym_cp",
    "orthonormal_basis_of",
    "det1_basis",
    "relative_error",
]

# mode pair contracted to obtain c for the x, y and z block respectively
_C_MODES = (2, 3)

# Gram determinant below this fraction of |u|^2 |v|^2 counts as dependent.
_DEGENERATE = 1e-24


def build_q(u, v) -> np.ndarray:
    """``Q(u, v) = 2((|u|²|v|² - <u,v>²) I + (uvᵀ - vuᵀ)²)``; symmetric PSD, ``Q u = Q v = 0``."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValidationError(f"build_q needs equal-length vectors, got {u.shape} and {v.shape}")
    uu, vv, uv = u @ u, v @ v, u @ v
    # (uvᵀ - vuᵀ)² expanded, which keeps the result exactly symmetric
    sq = uv * (np.outer(u, v) + np.outer(v, u)) - vv * np.outer(u, u) - uu * np.outer(v, v)
    return 2.0 * ((uu * vv - uv * uv) * np.eye(u.size) + sq)


def build_c(a, u, v, mode_pair: tuple[int, int] = _C_MODES) -> np.ndarray:
    """``-12 · a ×₂ uᵀ ×₃ vᵀ`` (for the default mode pair)."""
    return -12.0 * contract(a, u, v, mode_pair)


def quadratic_form(a, r: A6Repr, block: int) -> tuple[np.ndarray, np.ndarray, float]:
    """``(Q, c, d)`` of the objective restricted to block 1 (x), 2 (y) or 3 (z)."""
    a = as_tensor3(a)
    x, y, z = r.x, r.y, r.z
    others = {1: (y, z), 2: (z, x), 3: (x, y)}
    if block not in others:
        raise ValidationError(f"block must be 1, 2 or 3, got {block!r}")
    u, v = others[block]
    return build_q(u, v), build_c(a, u, v), 6.0 * float(np.sum(a * a))


def objective_f(a, r: A6Repr) -> float:
    """``6 ||a - A6(r)||²`` evaluated directly."""
    a = as_tensor3(a)
    if a.shape != (r.n,) * 3:
        raise ValidationError(f"tensor shape {a.shape} does not match vectors of length {r.n}")
    return 6.0 * float(np.sum((a - a6_materialize(r)) ** 2))


def relative_error(a, r) -> float:
    """``||a - approx|| / ||a||`` for an ``A6Repr`` or ``C2Repr``."""
    a = as_tensor3(a)
    return float(np.linalg.norm(a - r.materialize()) / np.linalg.norm(a))


def _dependent(u: np.ndarray, v: np.ndarray) -> bool:
    uu, vv, uv = u @ u, v @ v, u @ v
    return uu == 0.0 or vv == 0.0 or (uu * vv - uv * uv) <= _DEGENERATE * uu * vv


def _initial_vectors(a: np.ndarray, how: str, rng) -> list[np.ndarray]:
    n = a.shape[0]
    if how == "svd":
        u = leading_left_singular_vectors(matricize(a, 1), 3)
        return [u[:, 0].copy(), u[:, 1].copy(), u[:, 2].copy()]
    return [rng.standard_normal(n) for _ in range(3)]


def antisym_cp(a, cfg: SolveConfig | None = None) -> tuple[A6Repr, ConvergenceReport]:
    """Approximate an antisymmetric tensor by ``A6(x, y, z)``.

    Sweeps the three pseudoinverse block updates in the order x, y, z until
    the relative error or its change between sweeps falls below ``cfg.tol``.
    If the two vectors defining a block's ``Q`` become linearly dependent,
    the more recently updated one is redrawn at random and the event is
    counted in ``report.reinitializations``.

    Returns the final vectors and a report whose ``micro_objective`` lists
    ``f`` after each block update.
    """
    cfg = cfg or SolveConfig()
    a = require_antisymmetric(a, 1e-10)
    n = a.shape[0]
    if n < 3:
        raise ValidationError(f"need n >= 3, got n = {n} (every such tensor is zero)")
    a_norm = np.linalg.norm(a)
    if a_norm == 0.0:
        raise ValidationError("cannot approximate the zero tensor")

    rng = cfg.rng()
    vecs = _initial_vectors(a, cfg.init_or("random"), rng)
    report = ConvergenceReport()
    report.micro_objective.append(objective_f(a, A6Repr(*vecs)))

    for _ in range(cfg.max_iter):
        for block in range(3):
            # block 0 uses (y, z), block 1 uses (z, x), block 2 uses (x, y)
            iu, iv = (block + 1) % 3, (block + 2) % 3
            while _dependent(vecs[iu], vecs[iv]):
                # iv is the one updated most recently
                vecs[iv] = rng.standard_normal(n)
                report.reinitializations += 1
            q = build_q(vecs[iu], vecs[iv])
            c = build_c(a, vecs[iu], vecs[iv])
            vecs[block] = -pinv(q) @ c
            report.micro_objective.append(objective_f(a, A6Repr(*vecs)))
        err = np.sqrt(report.micro_objective[-1] / 6.0) / a_norm
        if report.record(err, cfg.tol):
            break
    return A6Repr(*vecs), report


def orthonormal_basis_of(r: A6Repr) -> np.ndarray:
    """Orthonormal ``n x 3`` basis of ``span{x, y, z}`` from a thin QR.

    Column signs are chosen so that ``V @ R = [x, y, z]`` with ``diag(R) > 0``;
    ``A6(r) == det(R) * A6(V[:, 0], V[:, 1], V[:, 2])``.
    """
    vmat = np.column_stack([r.x, r.y, r.z])
    if r.n < 3:
        raise ValidationError("three independent vectors need length >= 3")
    qmat, rmat = np.linalg.qr(vmat)
    diag = np.diag(rmat)
    scale = np.abs(diag).max() if diag.size else 0.0
    if scale == 0.0 or np.min(np.abs(diag)) <= 1e-12 * max(scale, np.linalg.norm(vmat)):
        raise ValidationError("x, y, z are linearly dependent")
    signs = np.sign(diag)
    return qmat * signs


def det1_basis(r: A6Repr) -> A6Repr:
    """Orthogonal vectors with ``A6`` equal to ``A6(r)``: the QR basis rescaled by ``det(R)``."""
    vmat = orthonormal_basis_of(r)
    rmat = vmat.T @ np.column_stack([r.x, r.y, r.z])
    return A6Repr(vmat[:, 0] * np.linalg.det(rmat), vmat[:, 1].copy(), vmat[:, 2].copy())
