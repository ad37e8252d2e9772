"""Rank-1 HOPM reference solver and compressed-tensor diagnostics.

For ``V`` with orthonormal columns the compressed tensor
``A_c(V) = A ×₁ Vᵀ ×₂ Vᵀ ×₃ Vᵀ`` of an antisymmetric ``A`` is a multiple
of the Levi-Civita tensor, and

    |<A, E ×₁ V ×₂ V ×₃ V>| = 6 |A_c(V)[0,1,2]| = √6 ||A_c(V)||.

``E ×₁ V ×₂ V ×₃ V`` equals ``6 · A6(v1, v2, v3)``; every quantity here is
stated for that unnormalized tensor.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .antisym import A6Repr, C2Repr, levi_civita, require_antisymmetric, require_partially_antisymmetric
from .antisym_als import orthonormal_basis_of
from .config import ConvergenceReport, SolveConfig
from .cp_als import CPFactors, svd_start
from .errors import ValidationError
from .tensor_core import as_tensor3, contract, inner, mode_product

__all__ = [
    "hopm_rank1",
    "compressed_tensor",
    "compressed_matrix",
    "lambda_star",
    "EquivalenceReport",
    "equivalence_report",
    "PartialEquivalenceReport",
    "partial_equivalence_report",
]

_ORTHO_TOL = 1e-10


def hopm_rank1(t, cfg: SolveConfig | None = None) -> tuple[CPFactors, ConvergenceReport]:
    """Best rank-1 approximation by the higher-order power method.

    Factors ``x`` and ``y`` are kept at unit norm; the weight is carried by
    ``z``.  ``cfg.init`` defaults to ``"svd"``.
    """
    cfg = cfg or SolveConfig()
    t = as_tensor3(t)
    t_norm = np.linalg.norm(t)
    if t_norm == 0.0:
        raise ValidationError("cannot approximate the zero tensor")
    rng = cfg.rng()
    report = ConvergenceReport()

    def unit(v, size):
        nv = np.linalg.norm(v)
        while nv == 0.0:
            v = rng.standard_normal(size)
            nv = np.linalg.norm(v)
            report.reinitializations += 1
        return v / nv

    if cfg.init_or("svd") == "svd":
        y, z = (m[:, 0] for m in svd_start(t, 1, rng))
    else:
        y, z = rng.standard_normal(t.shape[1]), rng.standard_normal(t.shape[2])
    x = unit(contract(t, y, z, (2, 3)), t.shape[0])
    y = unit(y, t.shape[1])
    z = contract(t, x, y, (1, 2))
    report.micro_objective.append(float(np.sum((t - np.einsum("i,j,k->ijk", x, y, z)) ** 2)))
    for _ in range(cfg.max_iter):
        x = unit(contract(t, y, z, (2, 3)), t.shape[0])
        y = unit(contract(t, x, z, (1, 3)), t.shape[1])
        z = contract(t, x, y, (1, 2))
        err2 = float(np.sum((t - np.einsum("i,j,k->ijk", x, y, z)) ** 2))
        report.micro_objective.append(err2)
        if report.record(np.sqrt(err2) / t_norm, cfg.tol):
            break
    return CPFactors(x[:, None], y[:, None], z[:, None]), report


def _require_orthonormal(v, rows: int, cols: int, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        v = v[:, None]
    if v.shape != (rows, cols):
        raise ValidationError(f"{name} must have shape ({rows}, {cols}), got {v.shape}")
    if np.max(np.abs(v.T @ v - np.eye(cols))) > _ORTHO_TOL:
        raise ValidationError(f"{name} does not have orthonormal columns")
    return v


def compressed_tensor(a, v) -> np.ndarray:
    """``A ×₁ Vᵀ ×₂ Vᵀ ×₃ Vᵀ`` for antisymmetric ``a`` and ``n x 3`` orthonormal ``v``."""
    a = require_antisymmetric(a, 1e-10)
    v = _require_orthonormal(v, a.shape[0], 3, "V")
    return mode_product(mode_product(mode_product(a, v.T, 1), v.T, 2), v.T, 3)


def compressed_matrix(c, w, z) -> np.ndarray:
    """``C ×₁ Wᵀ ×₂ Wᵀ ×₃ zᵀ`` as a skew-symmetric 2x2 matrix."""
    c = require_partially_antisymmetric(c, 1e-10)
    n, _, m = c.shape
    w = _require_orthonormal(w, n, 2, "W")
    z = _require_orthonormal(z, m, 1, "z")
    out = mode_product(mode_product(mode_product(c, w.T, 1), w.T, 2), z.T, 3)
    return out[:, :, 0]


def lambda_star(a, v) -> float:
    """``<A, E ×₁ V ×₂ V ×₃ V> / 6``, which equals ``A_c(V)[0, 1, 2]``."""
    a = require_antisymmetric(a, 1e-10)
    v = _require_orthonormal(v, a.shape[0], 3, "V")
    lifted = mode_product(mode_product(mode_product(levi_civita(), v, 1), v, 2), v, 3)
    return inner(a, lifted) / 6.0


@dataclass
class EquivalenceReport:
    inner_abs: float
    six_ac123: float
    sqrt6_norm_ac: float
    agree: bool
    lambda_star: float
    structured_residual: float
    hopm_value: float
    hopm_residual: float
    normalization_note: str

    def to_dict(self) -> dict:
        return asdict(self)


_NORMALIZATION_NOTE = (
    "E x1 V x2 V x3 V equals 6*A6(v1,v2,v3); for orthonormal V, "
    "||A6(v1,v2,v3)||^2 = 1/6 while ||E x1 V x2 V x3 V||^2 = 6. "
    "lambda_star and the identities use the unnormalized tensor."
)


def equivalence_report(
    a, r: A6Repr, cfg: SolveConfig | None = None, rtol: float = 1e-10
) -> EquivalenceReport:
    """Compare the compressed-tensor identities and the HOPM optimum for ``a``.

    ``structured_residual`` is ``||a||² - 6 λ*²``, the squared error of the
    best multiple of ``E ×₁ V ×₂ V ×₃ V`` with ``V`` spanning ``r``;
    ``hopm_residual`` is ``||a||² - σ²`` for the HOPM rank-1 value ``σ``.
    At a structured optimum ``|λ*| == σ``.
    """
    a = require_antisymmetric(a, 1e-10)
    v = orthonormal_basis_of(r)
    ac = compressed_tensor(a, v)
    lam = lambda_star(a, v)
    inner_abs = abs(6.0 * lam)
    six = 6.0 * abs(ac[0, 1, 2])
    root = np.sqrt(6.0) * float(np.linalg.norm(ac))
    scale = max(inner_abs, six, root, np.finfo(float).tiny)
    agree = max(abs(inner_abs - six), abs(inner_abs - root), abs(six - root)) <= rtol * scale

    f, _ = hopm_rank1(a, cfg)
    # x and y are unit vectors, so the rank-1 value is the norm of z
    sigma = float(np.linalg.norm(f.Z[:, 0]))
    a2 = float(np.sum(a * a))
    return EquivalenceReport(
        inner_abs=inner_abs,
        six_ac123=six,
        sqrt6_norm_ac=root,
        agree=bool(agree),
        lambda_star=lam,
        structured_residual=a2 - 6.0 * lam**2,
        hopm_value=sigma,
        hopm_residual=a2 - sigma**2,
        normalization_note=_NORMALIZATION_NOTE,
    )


@dataclass
class PartialEquivalenceReport:
    compressed: list[list[float]]
    alpha: float
    norm_cc_sq: float
    two_alpha_sq: float
    agree: bool
    hopm_value: float

    def to_dict(self) -> dict:
        return asdict(self)


def partial_equivalence_report(
    c, r: C2Repr, cfg: SolveConfig | None = None, rtol: float = 1e-10
) -> PartialEquivalenceReport:
    """Compressed-matrix diagnostics for a ``C2`` approximation of ``c``.

    ``W`` is the orthonormal QR basis of ``[x, y]`` and ``z̃ = z / |z|``.
    Reports ``α = C ×₁ w1ᵀ ×₂ w2ᵀ ×₃ z̃ᵀ``, checks ``||C_c||_F² == 2α²`` and
    gives the HOPM rank-1 value of ``c`` for comparison with ``|α|``.
    """
    c = require_partially_antisymmetric(c, 1e-10)
    w, rmat = np.linalg.qr(np.column_stack([r.x, r.y]))
    if np.min(np.abs(np.diag(rmat))) <= 1e-12 * max(np.abs(np.diag(rmat)).max(), 1e-300):
        raise ValidationError("x and y are linearly dependent")
    zn = np.linalg.norm(r.z)
    if zn == 0.0:
        raise ValidationError("z is zero")
    z = r.z / zn
    cc = compressed_matrix(c, w, z)
    alpha = float(w[:, 0] @ contract(c, w[:, 1], z, (2, 3)))
    norm_sq = float(np.sum(cc**2))
    two_a2 = 2.0 * alpha**2
    f, _ = hopm_rank1(c, cfg)
    return PartialEquivalenceReport(
        compressed=cc.tolist(),
        alpha=alpha,
        norm_cc_sq=norm_sq,
        two_alpha_sq=two_a2,
        agree=bool(abs(norm_sq - two_a2) <= rtol * max(norm_sq, two_a2, np.finfo(float).tiny)),
        hopm_value=float(np.linalg.norm(f.Z[:, 0])),
    )
