import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from askew.antisym import C2Repr, c2_materialize
from askew.antisym_als import relative_error
from askew.bench import gen_partial
from askew.config import SolveConfig
from askew.errors import ValidationError
from askew.partial_als import (
    build_b1,
    build_b2,
    build_b3,
    build_qp,
    objective_g,
    pantisym_cp,
    partial_quadratic_form,
    q3_scalar,
)
from conftest import g_tensor, random_partial


def g_direct(c, r):
    return 2.0 * np.sum((c - c2_materialize(r)) ** 2)


class TestBuildQp:
    def test_unit_vectors(self):
        e = np.eye(2)
        z = np.array([0.6, 0.8])
        np.testing.assert_allclose(build_qp(e[0], z), 2.0 * np.outer(e[1], e[1]), atol=1e-15)

    def test_zero_z(self, rng):
        assert not build_qp(rng.standard_normal(3), np.zeros(4)).any()

    @pytest.mark.parametrize("n", [2, 5, 8])
    def test_rank_and_null_space(self, rng, n):
        u, z = rng.standard_normal(n), rng.standard_normal(3)
        q = build_qp(u, z)
        eig = np.linalg.eigvalsh(q)
        assert np.sum(np.abs(eig) <= 1e-11 * eig.max()) == 1
        np.testing.assert_allclose(q @ u, 0.0, atol=1e-12 * np.linalg.norm(q))


class TestLinearTerms:
    def test_b1_on_reference(self):
        e = np.eye(2)
        np.testing.assert_allclose(build_b1(g_tensor(1.0, 0.0), e[1], e[0]), [-4.0, 0.0])

    def test_b1_zero_z(self, rng):
        assert not build_b1(random_partial(rng, 3, 2), rng.standard_normal(3), np.zeros(2)).any()

    def test_b1_loop_oracle(self, rng):
        c = random_partial(rng, 3, 4)
        y, z = rng.standard_normal(3), rng.standard_normal(4)
        expected = np.zeros(3)
        for i, j, k in itertools.product(range(3), range(3), range(4)):
            expected[i] += -4.0 * c[i, j, k] * y[j] * z[k]
        np.testing.assert_allclose(build_b1(c, y, z), expected, atol=1e-13)

    def test_b2_loop_oracle(self, rng):
        c = random_partial(rng, 3, 4)
        x, z = rng.standard_normal(3), rng.standard_normal(4)
        expected = np.zeros(3)
        for i, j, k in itertools.product(range(3), range(3), range(4)):
            expected[j] += -4.0 * c[i, j, k] * x[i] * z[k]
        np.testing.assert_allclose(build_b2(c, x, z), expected, atol=1e-13)

    def test_b2_is_gradient_of_g(self, rng):
        # finite differences in y pin down the sign of the y-block linear term
        c = random_partial(rng, 4, 3)
        x, y, z = rng.standard_normal(4), rng.standard_normal(4), rng.standard_normal(3)
        q = build_qp(x, z)
        grad = build_b2(c, x, z) + q @ y
        h = 1e-6
        fd = np.array([
            (g_direct(c, C2Repr(x, y + h * e, z)) - g_direct(c, C2Repr(x, y - h * e, z))) / (2 * h)
            for e in np.eye(4)
        ])
        np.testing.assert_allclose(grad, fd, rtol=1e-6, atol=1e-6)

    def test_b3_on_reference(self):
        e = np.eye(2)
        np.testing.assert_allclose(build_b3(g_tensor(1.0, 2.0), e[0], e[1]), [-4.0, -8.0])

    def test_b3_repeated(self, rng):
        x = rng.standard_normal(3)
        np.testing.assert_allclose(build_b3(random_partial(rng, 3, 2), x, x), 0.0, atol=1e-14)

    def test_b3_loop_oracle(self, rng):
        c = random_partial(rng, 3, 4)
        x, y = rng.standard_normal((2, 3))
        expected = np.zeros(4)
        for i, j, k in itertools.product(range(3), range(3), range(4)):
            expected[k] += -2.0 * c[i, j, k] * (x[i] * y[j] - y[i] * x[j])
        np.testing.assert_allclose(build_b3(c, x, y), expected, atol=1e-13)

    def test_q3(self, rng):
        e = np.eye(3)
        assert q3_scalar(e[0], e[1]) == 2.0
        x = rng.standard_normal(3)
        assert q3_scalar(x, 3.0 * x) == pytest.approx(0.0, abs=1e-14)
        y = rng.standard_normal(3)
        loop = sum((x[i] * y[j] - y[i] * x[j]) ** 2 for i, j in itertools.product(range(3), repeat=2))
        assert q3_scalar(x, y) == pytest.approx(loop, rel=1e-13)
        with pytest.raises(ValidationError):
            q3_scalar(np.ones(2), np.ones(3))


class TestObjectiveG:
    def test_zero_format(self, rng):
        c = random_partial(rng, 3, 2)
        x = rng.standard_normal(3)
        assert objective_g(c, C2Repr(x, x, rng.standard_normal(2))) == pytest.approx(2.0 * np.sum(c * c))

    def test_exact(self, rng):
        r = C2Repr(rng.standard_normal(3), rng.standard_normal(3), rng.standard_normal(4))
        assert objective_g(c2_materialize(r), r) == pytest.approx(0.0, abs=1e-25)

    @settings(max_examples=30, deadline=None)
    @given(n=st.integers(2, 4), m=st.sampled_from([2, 5]), seed=st.integers(0, 2**32 - 1))
    def test_three_forms(self, n, m, seed):
        rng = np.random.default_rng(seed)
        c = random_partial(rng, n, m)
        r = C2Repr(rng.standard_normal(n), rng.standard_normal(n), rng.standard_normal(m))
        direct = g_direct(c, r)
        for block in (1, 2):
            q, b, d = partial_quadratic_form(c, r, block)
            w = (r.x, r.y)[block - 1]
            assert d + b @ w + 0.5 * w @ q @ w == pytest.approx(direct, rel=1e-10, abs=1e-12)
        q3, b3, d = partial_quadratic_form(c, r, 3)
        assert d + b3 @ r.z + 0.5 * q3 * (r.z @ r.z) == pytest.approx(direct, rel=1e-10, abs=1e-12)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ValidationError):
            objective_g(random_partial(rng, 3, 2), C2Repr(np.ones(3), np.ones(3), np.ones(4)))


class TestPantisymCP:
    def test_exact_format(self):
        c = gen_partial("A1", 3)
        r, rep = pantisym_cp(c)
        assert relative_error(c, r) <= 1e-12
        assert rep.stop_reason == "tol_reached"

    def test_grid_variant(self):
        c = gen_partial("A2")
        r, _ = pantisym_cp(c)
        assert relative_error(c, r) == pytest.approx(0.1001, abs=1e-3)

    @pytest.mark.parametrize("seed", range(4))
    def test_descent(self, seed):
        rng = np.random.default_rng(seed)
        c = random_partial(rng, 5, 3)
        _, rep = pantisym_cp(c, SolveConfig(seed=seed))
        mo = np.array(rep.micro_objective)
        assert np.all(np.diff(mo) <= 1e-10 * mo[0])

    def test_matches_best_rank1_value(self, rng):
        # the structured optimum and the best rank-1 fit leave the same residual
        from askew.hopm_equiv import hopm_rank1

        c = random_partial(rng, 4, 3)
        best = min(g_direct(c, pantisym_cp(c, SolveConfig(seed=s))[0]) / 2 for s in range(8))
        sigma = max(np.linalg.norm(hopm_rank1(c, SolveConfig(seed=s, init="random"))[0].Z) for s in range(8))
        assert best == pytest.approx(np.sum(c * c) - 2.0 * sigma**2, rel=1e-6, abs=1e-10)

    @pytest.mark.parametrize("bad", [np.ones((3, 3, 2)), np.zeros((3, 3, 2)), np.zeros((1, 1, 2))])
    def test_rejects(self, bad):
        with pytest.raises(ValidationError):
            pantisym_cp(bad)

    def test_svd_init(self):
        c = gen_partial("A2")
        r, _ = pantisym_cp(c, SolveConfig(init="svd"))
        assert relative_error(c, r) == pytest.approx(0.1001, abs=1e-3)
