"""Command-line interface: ``askew gen``, ``askew approx`` and ``askew bench``.

Exit status is 0 on success, 2 on invalid input and 3 when a solver fails.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .antisym import A6Repr, C2Repr, dumps_repr
from .antisym_als import antisym_cp, relative_error
from .bench import (
    EXAMPLES,
    FULL_ALGORITHMS,
    PARTIAL_ALGORITHMS,
    PARTIAL_VARIANTS,
    ExperimentSpec,
    format_rows,
    generate,
    run,
)
from .config import SolveConfig
from .cp_als import cp_als, cp_reconstruct, cp_then_antisymmetrize, cp_then_antisymmetrize_partial
from .errors import SolverError, ValidationError
from .hopm_equiv import equivalence_report, hopm_rank1, partial_equivalence_report
from .partial_als import pantisym_cp
from .tensor_core import read_atns, write_atns

EXIT_VALIDATION = 2
EXIT_SOLVER = 3

APPROX_ALGORITHMS = ("antisym_cp", "cp_anti", "pantisym_cp", "cp_panti", "cp_als", "cp_als_r6", "cp_als_r2", "hopm")


def _csv_list(text: str) -> list[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="askew",
        description="Structure-preserving low-rank approximation of antisymmetric order-3 tensors.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write an example tensor in ATNS format")
    gen.add_argument("--example", required=True, choices=EXAMPLES)
    gen.add_argument("--n", type=int, help="tensor size (ignored for partial_suite)")
    gen.add_argument("--variant", choices=PARTIAL_VARIANTS, default="A1", help="partial_suite member")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("-o", "--output", required=True, help="destination .atns file ('-' for stdout)")

    approx = sub.add_parser("approx", help="approximate a tensor read from an ATNS file")
    approx.add_argument("--algorithm", required=True, choices=APPROX_ALGORITHMS)
    approx.add_argument("--r", type=int, default=None, help="rank for cp_als (default 6)")
    approx.add_argument("--tol", type=float, default=1e-8)
    approx.add_argument("--max-iter", type=int, default=1000)
    approx.add_argument("--seed", type=int, default=0)
    approx.add_argument("--init", choices=("svd", "random"), default=None)
    approx.add_argument("--diagnostics", action="store_true", help="print the equivalence record as JSON")
    approx.add_argument("-i", "--input", required=True, help="input .atns file ('-' for stdin)")
    approx.add_argument("-o", "--output", help="write the resulting representation here")

    bench = sub.add_parser("bench", help="run an example family against several algorithms")
    bench.add_argument("--example", required=True, choices=EXAMPLES)
    bench.add_argument("--n", type=_int_list, default=None, help="comma-separated sizes")
    bench.add_argument("--variant", type=_csv_list, default=list(PARTIAL_VARIANTS),
                       help="comma-separated partial_suite members")
    bench.add_argument("--algorithms", type=_csv_list, default=None,
                       help="comma-separated algorithm ids (default: all that apply)")
    bench.add_argument("--repeats", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--tol", type=float, default=1e-8)
    bench.add_argument("--max-iter", type=int, default=1000)
    fmt = bench.add_mutually_exclusive_group()
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    bench.set_defaults(fmt="table")
    return parser


def _cmd_gen(args) -> None:
    t = generate(args.example, args.n, args.seed, args.variant)
    write_atns(t, sys.stdout if args.output == "-" else args.output)


def _dumps_factors(f) -> str:
    lines = ["CP {} {} {} {}".format(f.r, *f.shape)]
    for mat in (f.X, f.Y, f.Z):
        lines += [" ".join(f"{v:.17g}" for v in col) for col in mat.T]
    return "\n".join(lines) + "\n"


def _cmd_approx(args, out) -> None:
    t = read_atns(sys.stdin if args.input == "-" else args.input)
    cfg = SolveConfig(tol=args.tol, max_iter=args.max_iter, seed=args.seed, init=args.init)
    alg = args.algorithm
    rank = {"cp_als_r6": 6, "cp_als_r2": 2}.get(alg, args.r if args.r is not None else 6)
    diagnostics = None
    if alg in ("cp_als", "cp_als_r6", "cp_als_r2", "hopm"):
        f, report = hopm_rank1(t, cfg) if alg == "hopm" else cp_als(t, rank, cfg)
        err = float(np.linalg.norm(t - cp_reconstruct(f)) / np.linalg.norm(t))
        text = _dumps_factors(f)
    else:
        solver = {
            "antisym_cp": antisym_cp,
            "cp_anti": cp_then_antisymmetrize,
            "pantisym_cp": pantisym_cp,
            "cp_panti": cp_then_antisymmetrize_partial,
        }[alg]
        r, report = solver(t, cfg)
        err = relative_error(t, r)
        text = dumps_repr(r)
        if args.diagnostics:
            if isinstance(r, A6Repr):
                diagnostics = equivalence_report(t, r, cfg).to_dict()
            elif isinstance(r, C2Repr):
                diagnostics = partial_equivalence_report(t, r, cfg).to_dict()
    if not np.isfinite(err):
        raise SolverError(f"{alg} produced a non-finite result")
    if args.diagnostics and diagnostics is None:
        raise ValidationError(f"--diagnostics is only available for structured algorithms, not {alg}")

    out.write(f"algorithm {alg}\n")
    out.write(f"rel_error {err:.17g}\n")
    out.write(f"iterations {report.iterations}\n")
    out.write(f"stop_reason {report.stop_reason}\n")
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    if diagnostics is not None:
        out.write(json.dumps(diagnostics, indent=2) + "\n")


def _cmd_bench(args, out) -> None:
    partial = args.example == "partial_suite"
    algorithms = tuple(args.algorithms or (PARTIAL_ALGORITHMS if partial else FULL_ALGORITHMS))
    if partial:
        specs = [dict(variant=v) for v in args.variant]
    else:
        if not args.n:
            raise ValidationError(f"--n is required for example {args.example!r}")
        specs = [dict(n=n) for n in args.n]
    rows = []
    for extra in specs:
        spec = ExperimentSpec(
            example=args.example,
            seed=args.seed,
            algorithms=algorithms,
            repeats=args.repeats,
            tol=args.tol,
            max_iter=args.max_iter,
            **extra,
        )
        rows += run(spec)
    out.write(format_rows(rows, args.fmt))


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            _cmd_gen(args)
        elif args.command == "approx":
            _cmd_approx(args, out)
        else:
            _cmd_bench(args, out)
    except ValidationError as exc:
        print(f"askew: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverError, np.linalg.LinAlgError) as exc:
        print(f"askew: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"askew: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return 0


if __name__ == "__main__":
    sys.exit(main())
