"""Example tensor families and the benchmark runner behind ``askew bench``."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .antisym import (
    A6Repr,
    C2Repr,
    a6_materialize,
    antisymmetrize,
    antisymmetrize_partial,
    c2_materialize,
)
from .antisym_als import antisym_cp, relative_error
from .config import SolveConfig
from .cp_als import cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial
from .errors import ValidationError
from .partial_als import pantisym_cp

__all__ = [
    "EXAMPLES",
    "FULL_ALGORITHMS",
    "PARTIAL_ALGORITHMS",
    "PARTIAL_VARIANTS",
    "ExperimentSpec",
    "ResultRow",
    "gen_rank6_random",
    "gen_sine",
    "gen_exp_grid",
    "gen_random_antisym",
    "gen_partial",
    "generate",
    "grid_function",
    "run",
    "run_algorithm",
    "format_rows",
]

EXAMPLES = ("rank6_random", "sine", "exp_grid", "random_antisym", "partial_suite")
FULL_ALGORITHMS = ("cp_als_r6", "cp_anti", "antisym_cp")
PARTIAL_ALGORITHMS = ("cp_als_r2", "cp_panti", "pantisym_cp")
PARTIAL_VARIANTS = ("A1", "A2", "A3")
COLUMNS = ("example", "n", "algorithm", "rel_error", "iterations", "time_s")


def grid_function(x, y, z):
    """``exp(-sqrt(x² + 2y² + 3z²))``, sampled on a uniform grid for the function examples."""
    return np.exp(-np.sqrt(x**2 + 2.0 * y**2 + 3.0 * z**2))


def _grid_tensor(func, gx, gy, gz) -> np.ndarray:
    return np.asfortranarray(func(gx[:, None, None], gy[None, :, None], gz[None, None, :]))


def gen_rank6_random(n: int, seed: int = 0) -> np.ndarray:
    """``6 · A6(x, y, z)`` with standard normal ``x, y, z``."""
    if n < 3:
        raise ValidationError(f"rank6_random needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    x, y, z = (rng.standard_normal(n) for _ in range(3))
    return 6.0 * a6_materialize(A6Repr(x, y, z))


def gen_sine(n: int) -> np.ndarray:
    """Alternating six-term sum of ``sin(x_i) sin(y_j) sin(z_k)``.

    ``x, y, z`` are ``n`` equispaced points on ``[0, 1]``, ``[2, 10]`` and
    ``[1, 3]``.  The result equals ``6 · A6(sin x, sin y, sin z)``.
    """
    if n < 2:
        raise ValidationError(f"sine needs n >= 2, got {n}")
    u = np.sin(np.linspace(0.0, 1.0, n))
    v = np.sin(np.linspace(2.0, 10.0, n))
    w = np.sin(np.linspace(1.0, 3.0, n))
    o = lambda a, b, c: np.einsum("i,j,k->ijk", a, b, c)  # noqa: E731
    t = o(u, v, w) + o(v, w, u) + o(w, u, v) - o(v, u, w) - o(u, w, v) - o(w, v, u)
    return np.asfortranarray(t)


def gen_exp_grid(n: int, func: Callable = grid_function) -> np.ndarray:
    """Antisymmetrized samples of ``func`` on the grid ``(i - 1) / (n - 1)``."""
    if n < 2:
        raise ValidationError(f"exp_grid needs n >= 2, got {n}")
    g = np.linspace(0.0, 1.0, n)
    return antisymmetrize(_grid_tensor(func, g, g, g))


def gen_random_antisym(n: int, seed: int = 0) -> np.ndarray:
    """Antisymmetrization of i.i.d. uniform(0, 1) entries."""
    if n < 3:
        raise ValidationError(f"random_antisym needs n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    return antisymmetrize(rng.random((n, n, n)))


def gen_partial(variant: str, seed: int = 0, func: Callable = grid_function) -> np.ndarray:
    """Tensors antisymmetric in modes 1-2.

    * ``A1``: ``2 · C2(x, y, z)``, 8x8x10, standard normal vectors.
    * ``A2``: ``func`` on the 7-point grid ``(i - 1) / 6``, modes 1-2
      restricted to the first 5 points (5x5x7), then partially antisymmetrized.
    * ``A3``: partial antisymmetrization of uniform(0, 1) entries, 5x5x4.
    """
    rng = np.random.default_rng(seed)
    if variant == "A1":
        x, y, z = rng.standard_normal(8), rng.standard_normal(8), rng.standard_normal(10)
        return 2.0 * c2_materialize(C2Repr(x, y, z))
    if variant == "A2":
        g = np.arange(7) / 6.0
        return antisymmetrize_partial(_grid_tensor(func, g[:5], g[:5], g))
    if variant == "A3":
        return antisymmetrize_partial(rng.random((5, 5, 4)))
    raise ValidationError(f"unknown partial variant {variant!r}; expected one of {PARTIAL_VARIANTS}")


def generate(example: str, n: int | None = None, seed: int = 0, variant: str | None = None) -> np.ndarray:
    """Dispatch to the generator for ``example``."""
    if example == "partial_suite":
        return gen_partial(variant or "A1", seed)
    if n is None:
        raise ValidationError(f"example {example!r} needs a size n")
    if example == "rank6_random":
        return gen_rank6_random(n, seed)
    if example == "sine":
        return gen_sine(n)
    if example == "exp_grid":
        return gen_exp_grid(n)
    if example == "random_antisym":
        return gen_random_antisym(n, seed)
    raise ValidationError(f"unknown example {example!r}; expected one of {EXAMPLES}")


@dataclass(frozen=True)
class ExperimentSpec:
    """One benchmark cell: an example at one size (or partial variant), several algorithms."""

    example: str
    n: int | None = None
    variant: str | None = None
    seed: int = 0
    algorithms: tuple[str, ...] = ()
    repeats: int = 1
    tol: float = 1e-8
    max_iter: int = 1000

    def __post_init__(self):
        if self.example not in EXAMPLES:
            raise ValidationError(f"unknown example {self.example!r}; expected one of {EXAMPLES}")
        if self.repeats < 1:
            raise ValidationError(f"repeats must be >= 1, got {self.repeats}")
        allowed = PARTIAL_ALGORITHMS if self.example == "partial_suite" else FULL_ALGORITHMS
        for alg in self.algorithms:
            if alg not in FULL_ALGORITHMS + PARTIAL_ALGORITHMS:
                raise ValidationError(f"unknown algorithm {alg!r}")
            if alg not in allowed:
                raise ValidationError(
                    f"algorithm {alg!r} does not apply to example {self.example!r}"
                )
        if self.example == "partial_suite":
            if self.variant not in PARTIAL_VARIANTS:
                raise ValidationError(f"partial_suite needs a variant in {PARTIAL_VARIANTS}")
        elif self.n is None:
            raise ValidationError(f"example {self.example!r} needs n")

    @property
    def size_label(self) -> str:
        return self.variant if self.example == "partial_suite" else str(self.n)


@dataclass
class ResultRow:
    example: str
    n: str
    algorithm: str
    rel_error: float
    iterations: int
    time_s: float
    repeat: int | None = field(default=None, compare=False)

    def as_record(self) -> dict:
        rec = asdict(self)
        rec.pop("repeat")
        return rec


def run_algorithm(alg: str, t: np.ndarray, cfg: SolveConfig) -> tuple[float, int]:
    """Run one algorithm on ``t`` and return ``(relative error, sweeps)``."""
    if alg in ("cp_als_r6", "cp_als_r2"):
        f, rep = cp_als(t, 6 if alg == "cp_als_r6" else 2, cfg)
        err = float(np.linalg.norm(t - cp_reconstruct(f)) / np.linalg.norm(t))
        return err, rep.iterations
    solver = {
        "cp_anti": cp_then_antisymmetrize,
        "antisym_cp": antisym_cp,
        "cp_panti": cp_then_antisymmetrize_partial,
        "pantisym_cp": pantisym_cp,
    }.get(alg)
    if solver is None:
        raise ValidationError(f"unknown algorithm {alg!r}")
    r, rep = solver(t, cfg)
    return relative_error(t, r), rep.iterations


def _repeat_seeds(seed: int, rep: int) -> tuple[int, int]:
    data, solver = np.random.SeedSequence([seed, rep]).generate_state(2)
    return int(data), int(solver)


def run(spec: ExperimentSpec, aggregate: bool = True) -> list[ResultRow]:
    """Run every algorithm of ``spec`` ``spec.repeats`` times.

    Repeat ``k`` draws its data and solver seeds from ``(spec.seed, k)``, so
    results are reproducible.  With ``aggregate`` one row per algorithm is
    returned holding the median error, iterations and wall time; otherwise
    one row per (algorithm, repeat), sorted by algorithm then repeat.
    """
    cells: list[ResultRow] = []
    for rep in range(spec.repeats):
        data_seed, solver_seed = _repeat_seeds(spec.seed, rep)
        t = generate(spec.example, spec.n, data_seed, spec.variant)
        cfg = SolveConfig(tol=spec.tol, max_iter=spec.max_iter, seed=solver_seed)
        for alg in spec.algorithms:
            start = time.perf_counter()
            err, iters = run_algorithm(alg, t, cfg)
            elapsed = time.perf_counter() - start
            cells.append(ResultRow(spec.example, spec.size_label, alg, err, iters, elapsed, rep))
    cells.sort(key=lambda row: (row.example, row.algorithm, row.repeat))
    if not aggregate:
        return cells

    rows = []
    for alg in sorted(set(spec.algorithms)):
        mine = [row for row in cells if row.algorithm == alg]
        rows.append(
            ResultRow(
                spec.example,
                spec.size_label,
                alg,
                float(np.median([row.rel_error for row in mine])),
                int(np.median([row.iterations for row in mine])),
                float(np.median([row.time_s for row in mine])),
            )
        )
    return rows


def format_rows(rows: list[ResultRow], fmt: str = "table") -> str:
    """Render rows as an aligned table, CSV, or a JSON list of records."""
    records = [row.as_record() for row in rows]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        writer.writeheader()
        for rec in records:
            writer.writerow({**rec, "rel_error": f"{rec['rel_error']:.6e}", "time_s": f"{rec['time_s']:.6f}"})
        return buf.getvalue()
    if fmt != "table":
        raise ValidationError(f"unknown output format {fmt!r}")
    cells = [list(COLUMNS)] + [
        [r["example"], r["n"], r["algorithm"], f"{r['rel_error']:.4e}", str(r["iterations"]), f"{r['time_s']:.4g}"]
        for r in records
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(COLUMNS))]
    lines = ["  ".join(val.ljust(w) for val, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"
