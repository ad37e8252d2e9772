"""Unstructured CP-ALS and the two "approximate, then antisymmetrize" baselines."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .antisym import (
    A6Repr,
    C2Repr,
    require_antisymmetric,
    require_partially_antisymmetric,
)
from .config import ConvergenceReport, SolveConfig
from .errors import ValidationError
from .tensor_core import (
    as_tensor3,
    hadamard,
    khatri_rao,
    matricize,
    mode_product,
    pinv,
)

__all__ = [
    "CPFactors",
    "cp_als",
    "cp_reconstruct",
    "cp_then_antisymmetrize",
    "cp_then_antisymmetrize_partial",
]

_OVERFLOW_GUARD = 1e100


@dataclass(frozen=True)
class CPFactors:
    """Factor matrices of ``[[X, Y, Z]] = sum_i X[:, i] o Y[:, i] o Z[:, i]``."""

    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        mats = []
        for name in ("X", "Y", "Z"):
            m = np.asarray(getattr(self, name), dtype=np.float64)
            if m.ndim == 1:
                m = m[:, None]
            if m.ndim != 2:
                raise ValidationError(f"factor {name} must be a matrix, got shape {m.shape}")
            mats.append(m)
        if len({m.shape[1] for m in mats}) != 1:
            raise ValidationError(
                "factor matrices need a common column count, got "
                + ", ".join(str(m.shape[1]) for m in mats)
            )
        for name, m in zip(("X", "Y", "Z"), mats):
            object.__setattr__(self, name, m)

    @property
    def r(self) -> int:
        return self.X.shape[1]

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.X.shape[0], self.Y.shape[0], self.Z.shape[0])


def cp_reconstruct(f: CPFactors) -> np.ndarray:
    """Dense tensor ``[[X, Y, Z]]``."""
    unfolded = f.X @ khatri_rao(f.Z, f.Y).T
    return np.asfortranarray(unfolded.reshape(f.shape, order="F"))


def _leading_or_random(m: np.ndarray, r: int, rng) -> np.ndarray:
    """Leading left singular vectors of ``m``, padded with random columns up to ``r``.

    Singular vectors of zero singular values lie in the null space of the
    unfolding and get annihilated by the next update, so those (and any
    columns beyond ``m.shape[0]``) are drawn at random instead.
    """
    n = m.shape[0]
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(s > np.finfo(np.float64).eps * max(m.shape) * s[0])) if s[0] > 0 else 0
    k = min(r, rank)
    if k < r:
        return np.hstack([u[:, :k], rng.standard_normal((n, r - k))])
    return u[:, :k]


def svd_start(t: np.ndarray, r: int, rng) -> tuple[np.ndarray, np.ndarray]:
    """Starting ``Y`` and ``Z`` for a sweep that updates ``X`` first.

    ``Y`` holds leading singular vectors of the mode-2 unfolding.  ``Z`` is
    taken from the mode-3 unfolding of ``t ×₂ Yᵀ`` rather than of ``t``:
    for tensors antisymmetric in modes 2 and 3 the two unfoldings share
    their singular vectors, and ``Y == Z`` would make ``t ×₂ Y ×₃ Z``
    vanish identically.
    """
    y = _leading_or_random(matricize(t, 2), r, rng)
    z = _leading_or_random(matricize(mode_product(t, y.T, 2), 3), r, rng)
    return y, z


def _guard_overflow(X, Y, Z):
    big = max(np.abs(m).max() for m in (X, Y, Z))
    if big <= _OVERFLOW_GUARD:
        return X, Y, Z
    nx, ny, nz = (np.linalg.norm(m) for m in (X, Y, Z))
    # scale factors multiply to one, so the represented tensor is unchanged
    g = np.exp((np.log(nx) + np.log(ny) + np.log(nz)) / 3.0)
    return X * (g / nx), Y * (g / ny), Z * (g / nz)


def cp_als(t, r: int, cfg: SolveConfig | None = None) -> tuple[CPFactors, ConvergenceReport]:
    """Rank-``r`` CP approximation by alternating least squares.

    Each sweep applies, in order,

        X = A_(1) (Z ⊙ Y) (YᵀY ∗ ZᵀZ)⁺
        Y = A_(2) (Z ⊙ X) (XᵀX ∗ ZᵀZ)⁺
        Z = A_(3) (Y ⊙ X) (XᵀX ∗ YᵀY)⁺

    without normalizing columns.  The report's ``objective_trace`` holds the
    relative error ``||t - [[X,Y,Z]]|| / ||t||`` after every sweep and
    ``micro_objective`` the squared absolute error after every block update.

    Parameters
    ----------
    t : array_like, shape (n1, n2, n3)
    r : int
        Number of rank-1 terms.
    cfg : SolveConfig, optional
        ``init`` defaults to ``"svd"``.
    """
    cfg = cfg or SolveConfig()
    t = as_tensor3(t)
    max_r = min(t.shape[1] * t.shape[2], t.shape[0] * t.shape[2], t.shape[0] * t.shape[1])
    if not 1 <= r <= max_r:
        raise ValidationError(f"r must lie in [1, {max_r}] for shape {t.shape}, got {r}")
    t_norm = np.linalg.norm(t)
    if t_norm == 0.0:
        raise ValidationError("cannot approximate the zero tensor")

    rng = cfg.rng()
    how = cfg.init_or("svd")
    if how == "svd":
        Y, Z = svd_start(t, r, rng)
    else:
        Y, Z = rng.standard_normal((t.shape[1], r)), rng.standard_normal((t.shape[2], r))
    # X is overwritten by the first update; start it at the Y, Z least-squares fit
    X = matricize(t, 1) @ khatri_rao(Z, Y) @ pinv(hadamard(Y.T @ Y, Z.T @ Z))
    A1, A2, A3 = (matricize(t, mode) for mode in (1, 2, 3))

    report = ConvergenceReport()

    def sq_err(X, Y, Z):
        return float(np.sum((A1 - X @ khatri_rao(Z, Y).T) ** 2))

    report.micro_objective.append(sq_err(X, Y, Z))
    for _ in range(cfg.max_iter):
        X = A1 @ khatri_rao(Z, Y) @ pinv(hadamard(Y.T @ Y, Z.T @ Z))
        report.micro_objective.append(sq_err(X, Y, Z))
        Y = A2 @ khatri_rao(Z, X) @ pinv(hadamard(X.T @ X, Z.T @ Z))
        report.micro_objective.append(sq_err(X, Y, Z))
        Z = A3 @ khatri_rao(Y, X) @ pinv(hadamard(X.T @ X, Y.T @ Y))
        X, Y, Z = _guard_overflow(X, Y, Z)
        err2 = sq_err(X, Y, Z)
        report.micro_objective.append(err2)
        if report.record(np.sqrt(err2) / t_norm, cfg.tol):
            break
    return CPFactors(X, Y, Z), report


def cp_then_antisymmetrize(a, cfg: SolveConfig | None = None) -> tuple[A6Repr, ConvergenceReport]:
    """Rank-1 CP-ALS on an antisymmetric tensor, then read the factors as ``A6(x, y, z)``.

    ``A6(x, y, z)`` is the antisymmetrization of ``x∘y∘z``, so the rank-1
    tensor itself is never formed.  The report describes the rank-1 step.
    """
    a = require_antisymmetric(a, 1e-10)
    f, report = cp_als(a, 1, cfg)
    return A6Repr(f.X[:, 0], f.Y[:, 0], f.Z[:, 0]), report


def cp_then_antisymmetrize_partial(
    c, cfg: SolveConfig | None = None
) -> tuple[C2Repr, ConvergenceReport]:
    """Rank-1 CP-ALS on a tensor antisymmetric in modes 1-2, then antisymmetrize.

    The result is ``x∘y∘z - y∘x∘z = C2(2x, y, z)``, twice the partial
    antisymmetrization of the rank-1 tensor.  At a best rank-1 fit ``x ⊥ y``
    and this equals the best approximation along that ``C2`` direction.
    """
    c = require_partially_antisymmetric(c, 1e-10)
    f, report = cp_als(c, 1, cfg)
    return C2Repr(2.0 * f.X[:, 0], f.Y[:, 0], f.Z[:, 0]), report
