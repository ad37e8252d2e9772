"""Dense order-3 tensors and the multilinear algebra the solvers are built on.

Tensors are plain ``numpy`` arrays with ``ndim == 3`` held in Fortran order,
so mode-1 fibers are contiguous and the mode-1 unfolding is a reshape.

Unfolding convention: ``matricize(t, m)`` has ``t.shape[m-1]`` rows and the
two remaining indices enumerate the columns with the lower mode varying
fastest.  With this ordering the CP identity reads
``matricize([[X, Y, Z]], 1) == X @ khatri_rao(Z, Y).T``.
"""
from __future__ import annotations

from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import ValidationError

__all__ = [
    "as_tensor3",
    "matricize",
    "fold",
    "mode_product",
    "contract",
    "inner",
    "norm",
    "outer3",
    "khatri_rao",
    "hadamard",
    "pinv",
    "leading_left_singular_vectors",
    "read_atns",
    "write_atns",
    "loads_atns",
    "dumps_atns",
]

_MODES = (1, 2, 3)


def as_tensor3(t) -> np.ndarray:
    """Validate ``t`` as a real order-3 tensor and return a Fortran-ordered float copy/view."""
    arr = np.asarray(t)
    if arr.ndim != 3:
        raise ValidationError(f"expected an order-3 tensor, got ndim={arr.ndim}")
    if min(arr.shape) == 0:
        raise ValidationError(f"tensor dimensions must be positive, got {arr.shape}")
    if np.iscomplexobj(arr):
        raise ValidationError("complex tensors are not supported")
    return np.asfortranarray(arr, dtype=np.float64)


def _check_mode(mode: int) -> int:
    if mode not in _MODES:
        raise ValidationError(f"mode must be one of 1, 2, 3, got {mode!r}")
    return mode - 1


def matricize(t, mode: int) -> np.ndarray:
    """Mode-``mode`` unfolding: the mode fibers of ``t`` become columns."""
    t = as_tensor3(t)
    ax = _check_mode(mode)
    # moveaxis keeps the two free axes in increasing order, and Fortran
    # flattening makes the first of them vary fastest.
    return np.moveaxis(t, ax, 0).reshape(t.shape[ax], -1, order="F")


def fold(m, mode: int, dims) -> np.ndarray:
    """Inverse of :func:`matricize` for a tensor of shape ``dims``."""
    ax = _check_mode(mode)
    dims = tuple(int(d) for d in dims)
    m = np.asarray(m, dtype=np.float64)
    rest = [d for i, d in enumerate(dims) if i != ax]
    if m.shape != (dims[ax], rest[0] * rest[1]):
        raise ValidationError(
            f"cannot fold a {m.shape} matrix along mode {mode} into shape {dims}"
        )
    t = m.reshape((dims[ax], rest[0], rest[1]), order="F")
    return np.asfortranarray(np.moveaxis(t, 0, ax))


def mode_product(t, m, mode: int) -> np.ndarray:
    """Mode-``mode`` product ``t x_mode m``, i.e. ``B_(mode) = m @ A_(mode)``.

    A 1-D ``m`` is treated as a row vector, leaving a singleton dimension.
    """
    t = as_tensor3(t)
    ax = _check_mode(mode)
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    if m.ndim != 2 or m.shape[1] != t.shape[ax]:
        raise ValidationError(
            f"mode-{mode} product needs a matrix with {t.shape[ax]} columns, "
            f"got {m.shape[-1]} (matrix shape {m.shape})"
        )
    dims = list(t.shape)
    dims[ax] = m.shape[0]
    return fold(m @ matricize(t, mode), mode, dims)


def contract(t, u, v, modes: tuple[int, int]) -> np.ndarray:
    """Contract ``t`` with vectors ``u`` and ``v`` in the two given modes.

    Returns the vector indexed by the remaining mode, e.g.
    ``contract(A, y, z, (2, 3))`` is ``A x_2 y^T x_3 z^T``.
    """
    t = as_tensor3(t)
    a, b = (_check_mode(mo) for mo in modes)
    if a == b:
        raise ValidationError(f"contraction modes must differ, got {modes}")
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    for vec, ax in ((u, a), (v, b)):
        if vec.shape != (t.shape[ax],):
            raise ValidationError(
                f"mode-{ax + 1} vector must have length {t.shape[ax]}, got shape {vec.shape}"
            )
    letters = "ijk"
    spec = f"ijk,{letters[a]},{letters[b]}->{letters[3 - a - b]}"
    return np.einsum(spec, t, u, v)


def _same_shape(a: np.ndarray, b: np.ndarray, what: str) -> None:
    if a.shape != b.shape:
        raise ValidationError(f"{what}: shape mismatch {a.shape} vs {b.shape}")


def inner(a, b) -> float:
    """Tensor inner product ``sum(a * b)``."""
    a, b = as_tensor3(a), as_tensor3(b)
    _same_shape(a, b, "inner")
    return float(np.dot(a.ravel(order="F"), b.ravel(order="F")))


def norm(a) -> float:
    """Frobenius norm of a tensor."""
    return float(np.linalg.norm(as_tensor3(a).ravel(order="F")))


def outer3(x, y, z) -> np.ndarray:
    """Rank-1 tensor ``x o y o z``."""
    x, y, z = (np.asarray(v, dtype=np.float64).ravel() for v in (x, y, z))
    return np.asfortranarray(np.einsum("i,j,k->ijk", x, y, z))


def khatri_rao(a, b) -> np.ndarray:
    """Column-wise Kronecker product; column ``k`` is ``kron(a[:, k], b[:, k])``."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape[1] != b.shape[1]:
        raise ValidationError(
            f"khatri_rao needs equal column counts, got {a.shape[1]} and {b.shape[1]}"
        )
    return np.einsum("ir,jr->ijr", a, b).reshape(a.shape[0] * b.shape[0], a.shape[1])


def hadamard(a, b) -> np.ndarray:
    """Element-wise product of equally shaped matrices."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _same_shape(a, b, "hadamard")
    return a * b


def pinv(m, rank_tol: float = 0.0) -> np.ndarray:
    """Moore-Penrose pseudoinverse via the SVD.

    Singular values ``s <= rank_tol * s_max`` are treated as zero.  With
    ``rank_tol == 0`` the cutoff is ``eps * max(rows, cols) * s_max``.
    """
    if rank_tol < 0:
        raise ValidationError(f"rank_tol must be non-negative, got {rank_tol}")
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(m.shape[::-1])
    rel = rank_tol if rank_tol > 0 else np.finfo(np.float64).eps * max(m.shape)
    keep = s > rel * s[0]
    return (vt[keep].T / s[keep]) @ u[:, keep].T


def leading_left_singular_vectors(m, r: int) -> np.ndarray:
    """The ``r`` dominant left singular vectors of ``m`` as orthonormal columns."""
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    if not 1 <= r <= min(m.shape):
        raise ValidationError(f"r must lie in [1, {min(m.shape)}], got {r}")
    u, _, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, :r]


# -- ATNS v1 text format -------------------------------------------------------

_ATNS_MAGIC = "ATNS 1"


def dumps_atns(t) -> str:
    """Serialize a tensor; values follow mode-1 unfolding order, one fiber per line."""
    t = as_tensor3(t)
    lines = [_ATNS_MAGIC, "{} {} {}".format(*t.shape)]
    flat = t.ravel(order="F")
    n1 = t.shape[0]
    for start in range(0, flat.size, n1):
        lines.append(" ".join(f"{v:.17g}" for v in flat[start : start + n1]))
    return "\n".join(lines) + "\n"


def loads_atns(text: str) -> np.ndarray:
    tokens = text.split()
    if tokens[:2] != _ATNS_MAGIC.split():
        raise ValidationError("not an ATNS v1 file (missing 'ATNS 1' header)")
    try:
        dims = tuple(int(tok) for tok in tokens[2:5])
    except ValueError as exc:
        raise ValidationError(f"bad ATNS dimension line: {exc}") from None
    if len(dims) != 3 or min(dims) <= 0:
        raise ValidationError(f"bad ATNS dimensions {dims}")
    values = tokens[5:]
    expected = dims[0] * dims[1] * dims[2]
    if len(values) != expected:
        raise ValidationError(f"ATNS body has {len(values)} values, expected {expected}")
    try:
        data = np.array([float(v) for v in values])
    except ValueError as exc:
        raise ValidationError(f"bad ATNS value: {exc}") from None
    return np.asfortranarray(data.reshape(dims, order="F"))


def write_atns(t, dest: str | Path | TextIO) -> None:
    text = dumps_atns(t)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        Path(dest).write_text(text)


def read_atns(src: str | Path | TextIO) -> np.ndarray:
    if hasattr(src, "read"):
        return loads_atns(src.read())
    return loads_atns(Path(src).read_text())
