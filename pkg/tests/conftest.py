"""Shared fixtures and slow, loop-based oracles used as independent references."""
import itertools

import numpy as np
import pytest


def perm_sign(p):
    """Sign of a permutation given as a tuple of 0..k-1, by counting inversions."""
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return -1.0 if inv % 2 else 1.0


def levi_civita_oracle():
    e = np.zeros((3, 3, 3))
    for p in itertools.permutations(range(3)):
        e[p] = perm_sign(p)
    return e


def antisymmetrize_oracle(b):
    """Entrywise signed average over the six index orders."""
    n = b.shape[0]
    out = np.zeros_like(b, dtype=float)
    for i, j, k in itertools.product(range(n), repeat=3):
        idx = (i, j, k)
        acc = 0.0
        for p in itertools.permutations(range(3)):
            acc += perm_sign(p) * b[idx[p[0]], idx[p[1]], idx[p[2]]]
        out[i, j, k] = acc / 6.0
    return out


def outer_oracle(x, y, z):
    out = np.zeros((len(x), len(y), len(z)))
    for i, j, k in itertools.product(range(len(x)), range(len(y)), range(len(z))):
        out[i, j, k] = x[i] * y[j] * z[k]
    return out


def g_tensor(alpha, beta):
    """The 2x2x2 reference tensor with g_121 = alpha, g_122 = beta and skew slices."""
    g = np.zeros((2, 2, 2))
    g[0, 1, 0], g[1, 0, 0] = alpha, -alpha
    g[0, 1, 1], g[1, 0, 1] = beta, -beta
    return g


def random_antisym(rng, n):
    b = rng.standard_normal((n, n, n))
    return np.asfortranarray(sum(s * b.transpose(p) for p, s in
                                 ((p, perm_sign(p)) for p in itertools.permutations(range(3)))) / 6.0)


def random_partial(rng, n, m):
    b = rng.standard_normal((n, n, m))
    return np.asfortranarray(0.5 * (b - b.transpose(1, 0, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[key])
