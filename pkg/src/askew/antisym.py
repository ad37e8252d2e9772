"""Antisymmetrizers, the Levi-Civita tensor and the three-vector formats.

``A6Repr(x, y, z)`` stands for the fully antisymmetric tensor

    (x∘y∘z + y∘z∘x + z∘x∘y - x∘z∘y - y∘x∘z - z∘y∘x) / 6

and ``C2Repr(x, y, z)`` for the tensor ``(x∘y∘z - y∘x∘z) / 2`` that is
antisymmetric in its first two modes.  Neither representation normalizes
its vectors; solvers decide on canonical forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .tensor_core import as_tensor3, norm

__all__ = [
    "A6Repr",
    "C2Repr",
    "antisymmetrize",
    "antisymmetrize_partial",
    "levi_civita",
    "a6_materialize",
    "c2_materialize",
    "is_antisymmetric",
    "is_partially_antisymmetric",
    "require_antisymmetric",
    "require_partially_antisymmetric",
    "dumps_repr",
    "loads_repr",
]

# Axis orders of the six index permutations with their signs:
# b_ijk + b_jki + b_kij - b_ikj - b_jik - b_kji.
_PERMUTATIONS = (
    ((0, 1, 2), 1.0),
    ((1, 2, 0), 1.0),
    ((2, 0, 1), 1.0),
    ((0, 2, 1), -1.0),
    ((1, 0, 2), -1.0),
    ((2, 1, 0), -1.0),
)


def _vec(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError(f"{name} must be a non-empty vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class A6Repr:
    """Three vectors of common length standing for a fully antisymmetric tensor."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        x, y, z = (_vec(v, name) for v, name in ((self.x, "x"), (self.y, "y"), (self.z, "z")))
        if not x.size == y.size == z.size:
            raise ValidationError(
                f"A6 vectors need equal lengths, got {x.size}, {y.size}, {z.size}"
            )
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def n(self) -> int:
        return self.x.size

    def materialize(self) -> np.ndarray:
        return a6_materialize(self)


@dataclass(frozen=True)
class C2Repr:
    """Vectors ``x, y`` (length n) and ``z`` (length m) for a tensor antisymmetric in modes 1-2."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        x, y, z = (_vec(v, name) for v, name in ((self.x, "x"), (self.y, "y"), (self.z, "z")))
        if x.size != y.size:
            raise ValidationError(f"C2 vectors x and y need equal lengths, got {x.size}, {y.size}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.x.size, self.x.size, self.z.size)

    def materialize(self) -> np.ndarray:
        return c2_materialize(self)


def antisymmetrize(b) -> np.ndarray:
    """Orthogonal projection of a cubical tensor onto the antisymmetric subspace."""
    b = as_tensor3(b)
    if not b.shape[0] == b.shape[1] == b.shape[2]:
        raise ValidationError(f"antisymmetrize needs a cubical tensor, got shape {b.shape}")
    # a[i,j,k] collects b at permuted index positions; transpose(p) gives
    # out[i0,i1,i2] = b[i_{p^-1}] so use the inverse permutation.
    out = np.zeros_like(b)
    for perm, sign in _PERMUTATIONS:
        out += sign * b.transpose(np.argsort(perm))
    return np.asfortranarray(out / 6.0)


def antisymmetrize_partial(b) -> np.ndarray:
    """Projection onto tensors with ``c[i,j,k] == -c[j,i,k]``."""
    b = as_tensor3(b)
    if b.shape[0] != b.shape[1]:
        raise ValidationError(
            f"partial antisymmetrization needs equal first two dimensions, got {b.shape}"
        )
    return np.asfortranarray(0.5 * (b - b.transpose(1, 0, 2)))


def levi_civita() -> np.ndarray:
    """The 3x3x3 permutation-sign tensor."""
    e = np.zeros((3, 3, 3), order="F")
    for perm, sign in _PERMUTATIONS:
        e[perm] = sign
    return e


def a6_materialize(r: A6Repr) -> np.ndarray:
    """Dense tensor of an :class:`A6Repr`.

    The six terms are grouped as ``(x∘y - y∘x)∘z`` plus its cyclic shifts, so
    a repeated vector cancels exactly rather than to rounding level.
    """
    x, y, z = r.x, r.y, r.z

    def wedge(u, v):
        return np.outer(u, v) - np.outer(v, u)

    t = (
        np.einsum("ij,k->ijk", wedge(x, y), z)
        + np.einsum("ij,k->ijk", wedge(y, z), x)
        + np.einsum("ij,k->ijk", wedge(z, x), y)
    )
    return np.asfortranarray(t / 6.0)


def c2_materialize(r: C2Repr) -> np.ndarray:
    """Dense tensor of a :class:`C2Repr`."""
    skew = np.outer(r.x, r.y) - np.outer(r.y, r.x)
    return np.asfortranarray(0.5 * np.einsum("ij,k->ijk", skew, r.z))


def _scaled_tol(t: np.ndarray, tol: float) -> float:
    return tol * max(1.0, norm(t))


def is_antisymmetric(t, tol: float = 1e-12) -> bool:
    """True when every index transposition flips the sign of ``t`` within ``tol * max(1, ||t||)``."""
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3 or not t.shape[0] == t.shape[1] == t.shape[2] or t.shape[0] == 0:
        return False
    bound = _scaled_tol(t, tol)
    for perm, sign in _PERMUTATIONS[1:]:
        if np.max(np.abs(t - sign * t.transpose(perm))) > bound:
            return False
    return True


def is_partially_antisymmetric(t, tol: float = 1e-12) -> bool:
    """True when every frontal slice of ``t`` is skew-symmetric within tolerance."""
    t = np.asarray(t, dtype=np.float64)
    if t.ndim != 3 or t.shape[0] != t.shape[1] or t.size == 0:
        return False
    return bool(np.max(np.abs(t + t.transpose(1, 0, 2))) <= _scaled_tol(t, tol))


def require_antisymmetric(t, tol: float = 1e-10) -> np.ndarray:
    t = as_tensor3(t)
    if not is_antisymmetric(t, tol):
        raise ValidationError(f"tensor of shape {t.shape} is not antisymmetric (tol {tol:g})")
    return t


def require_partially_antisymmetric(t, tol: float = 1e-10) -> np.ndarray:
    t = as_tensor3(t)
    if not is_partially_antisymmetric(t, tol):
        raise ValidationError(
            f"tensor of shape {t.shape} is not antisymmetric in modes 1 and 2 (tol {tol:g})"
        )
    return t


# -- text form used by the CLI ------------------------------------------------

def dumps_repr(r: A6Repr | C2Repr) -> str:
    """``A6 n n n`` or ``C2 n n m`` header, then one line per vector."""
    tag = "A6" if isinstance(r, A6Repr) else "C2"
    vecs = (r.x, r.y, r.z)
    lines = [f"{tag} " + " ".join(str(v.size) for v in vecs)]
    lines += [" ".join(f"{val:.17g}" for val in v) for v in vecs]
    return "\n".join(lines) + "\n"


def loads_repr(text: str) -> A6Repr | C2Repr:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 4:
        raise ValidationError("expected a header line and three vector lines")
    head = lines[0].split()
    if len(head) != 4 or head[0] not in ("A6", "C2"):
        raise ValidationError(f"bad representation header {lines[0]!r}")
    sizes = [int(s) for s in head[1:]]
    vecs = [np.array([float(tok) for tok in ln.split()]) for ln in lines[1:]]
    if [v.size for v in vecs] != sizes:
        raise ValidationError("vector lengths do not match the header")
    cls = A6Repr if head[0] == "A6" else C2Repr
    return cls(*vecs)
