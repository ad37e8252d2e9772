import io
import json

import numpy as np
import pytest

from askew.antisym import loads_repr
from askew.cli import main
from askew.tensor_core import read_atns, write_atns


def run_cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def rank6_file(tmp_path):
    path = tmp_path / "a.atns"
    assert run_cli("gen", "--example", "rank6_random", "--n", "6", "--seed", "3", "-o", str(path))[0] == 0
    return path


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.atns", tmp_path / "b.atns"
    for p in (a, b):
        run_cli("gen", "--example", "sine", "--n", "5", "-o", str(p))
    assert a.read_text() == b.read_text()
    assert read_atns(a).shape == (5, 5, 5)


def test_gen_partial_variant(tmp_path):
    p = tmp_path / "c.atns"
    assert run_cli("gen", "--example", "partial_suite", "--variant", "A3", "-o", str(p))[0] == 0
    assert read_atns(p).shape == (5, 5, 4)


def test_approx_structured(rank6_file, tmp_path):
    out_file = tmp_path / "r.txt"
    code, text = run_cli("approx", "--algorithm", "antisym_cp", "-i", str(rank6_file), "-o", str(out_file))
    assert code == 0
    fields = dict(line.split(" ", 1) for line in text.splitlines())
    assert float(fields["rel_error"]) <= 1e-12
    assert fields["stop_reason"] == "tol_reached"
    assert loads_repr(out_file.read_text()).n == 6


def test_approx_diagnostics(rank6_file):
    code, text = run_cli("approx", "--algorithm", "antisym_cp", "--diagnostics", "-i", str(rank6_file))
    assert code == 0
    record = json.loads(text[text.index("{"):])
    assert record["agree"] is True


def test_approx_partial_diagnostics(tmp_path):
    p = tmp_path / "c.atns"
    run_cli("gen", "--example", "partial_suite", "--variant", "A2", "-o", str(p))
    code, text = run_cli("approx", "--algorithm", "pantisym_cp", "--diagnostics", "-i", str(p))
    assert code == 0
    record = json.loads(text[text.index("{"):])
    assert record["agree"] is True


@pytest.mark.parametrize("alg,extra", [("cp_als", ["--r", "6"]), ("cp_als_r6", []), ("hopm", []), ("cp_anti", [])])
def test_approx_other_algorithms(rank6_file, alg, extra):
    code, text = run_cli("approx", "--algorithm", alg, *extra, "-i", str(rank6_file))
    assert code == 0
    assert np.isfinite(float(text.splitlines()[1].split()[1]))


def test_validation_exit_code(tmp_path, capsys):
    p = tmp_path / "r.atns"
    write_atns(np.random.default_rng(0).standard_normal((3, 3, 3)), p)
    code, _ = run_cli("approx", "--algorithm", "antisym_cp", "-i", str(p))
    assert code == 2
    assert "not antisymmetric" in capsys.readouterr().err


def test_diagnostics_need_structured_algorithm(rank6_file):
    assert run_cli("approx", "--algorithm", "hopm", "--diagnostics", "-i", str(rank6_file))[0] == 2


def test_missing_file_and_bad_args(tmp_path):
    assert run_cli("approx", "--algorithm", "antisym_cp", "-i", str(tmp_path / "none.atns"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["approx", "--algorithm", "unknown", "-i", "x"])
    assert exc.value.code == 2


def test_solver_failure_exit_code(rank6_file, monkeypatch):
    from askew.errors import SolverError

    def boom(*args, **kwargs):
        raise SolverError("diverged")

    monkeypatch.setattr("askew.cli.antisym_cp", boom)
    assert run_cli("approx", "--algorithm", "antisym_cp", "-i", str(rank6_file))[0] == 3


def test_bench_csv():
    code, text = run_cli("bench", "--example", "rank6_random", "--n", "6,8", "--repeats", "1", "--csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "example,n,algorithm,rel_error,iterations,time_s"
    assert len(lines) == 1 + 2 * 3


def test_bench_json_partial():
    code, text = run_cli("bench", "--example", "partial_suite", "--variant", "A1", "--json")
    assert code == 0
    assert {r["algorithm"] for r in json.loads(text)} == {"cp_als_r2", "cp_panti", "pantisym_cp"}


def test_bench_requires_sizes():
    assert run_cli("bench", "--example", "sine")[0] == 2
    assert run_cli("bench", "--example", "sine", "--n", "5", "--algorithms", "pantisym_cp")[0] == 2
