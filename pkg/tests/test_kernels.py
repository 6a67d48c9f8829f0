import os
import subprocess
import sys

import numpy as np
import pytest

from charsum import kernels
from charsum.arith import primes_upto, spf_table
from charsum.characters import build_group

compiled = kernels.compiled
python = kernels.python
needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _group_case(q, seed=0):
    G = build_group(q)
    rng = np.random.default_rng(seed)
    idx = rng.choice(G.size, size=min(G.size, 40), replace=False)
    E = G.exponent_matrix[idx]
    orders, _ = G.character_table
    W = G.weight_matrix(E, orders[idx])
    return G, W, np.ascontiguousarray(orders[idx])


@needs_ext
@pytest.mark.parametrize("q", [3, 8, 77, 256, 1009, 3600])
def test_level_kernels_agree(q):
    G, W, orders = _group_case(q)
    for x in [1, q // 3 + 1, q, 3 * q + 2]:
        for k in range(len(orders)):
            a = compiled.level_counts(G.log_matrix, W[k], orders[k], x)
            b = python.level_counts(G.log_matrix, W[k], orders[k], x)
            assert np.array_equal(a[0], b[0]) and a[1] == b[1]
        for u, v in zip(compiled.level_stats_batch(G.log_matrix, W, orders, x),
                        python.level_stats_batch(G.log_matrix, W, orders, x)):
            assert np.array_equal(u, v)
    assert np.array_equal(compiled.residue_exponents(G.log_matrix, W[0], orders[0]),
                          python.residue_exponents(G.log_matrix, W[0], orders[0]))


@needs_ext
@pytest.mark.parametrize("q", [5, 64, 211, 1000])
def test_prefix_kernels_agree(q):
    G, W, orders = _group_case(q, 1)
    Mc, tc = compiled.prefix_max_batch(G.log_matrix, W, orders, q)
    Mp, tp = python.prefix_max_batch(G.log_matrix, W, orders, q)
    assert np.allclose(Mc, Mp, rtol=0, atol=1e-9) and np.array_equal(tc, tp)
    chi = G.character(int(G.size // 2))
    a = np.ascontiguousarray(chi.residue_exponents[np.arange(1, q + 1) % q])
    ells = np.arange(-3, chi.order + 3, dtype=np.int64)
    for thr in (0.0, 3.0):
        rc = compiled.prefix_max_powers(a, chi.order, ells, thr)
        rp = python.prefix_max_powers(a, chi.order, ells, thr)
        assert np.allclose(rc[0], rp[0], atol=1e-9)
        assert np.array_equal(rc[1], rp[1]) and np.array_equal(rc[2], rp[2])


@needs_ext
def test_arithmetic_kernels_agree():
    N = 200_000
    spf = spf_table(N)
    p = primes_upto(N)
    rng = np.random.default_rng(3)
    pexp = np.full(N + 1, -1, dtype=np.int64)
    pexp[p] = rng.integers(-1, 12, size=len(p))
    assert np.array_equal(compiled.multiplicative_exponents(spf, pexp, 12, N),
                          python.multiplicative_exponents(spf, pexp, 12, N))
    flag = (rng.random(N + 1) < 0.3).astype(np.uint8)
    assert np.array_equal(compiled.additive_counts(spf, flag, N), python.additive_counts(spf, flag, N))
    x = rng.standard_normal(10_000)
    assert np.allclose(compiled.kahan_cumsum(x), python.kahan_cumsum(x), atol=1e-12)
    assert np.array_equal(compiled.power_table(3, 31, 30), python.power_table(3, 31, 30))


@pytest.mark.parametrize("impl", [k for k in (compiled, python) if k is not None])
def test_kernels_reject_short_tables(impl):
    spf = spf_table(100)
    with pytest.raises(ValueError):
        impl.multiplicative_exponents(spf, np.zeros(50, dtype=np.int64), 3, 100)
    with pytest.raises(ValueError):
        impl.additive_counts(spf, np.zeros(100, dtype=np.uint8), 100)


def test_pure_python_switch():
    env = dict(os.environ, CHARSUM_PURE_PYTHON="1")
    code = ("from charsum import kernels, BACKEND; from charsum.sums import maximal_sum;"
            "from charsum.characters import build_group;"
            "print(BACKEND, maximal_sum(build_group(31).principal())[0])")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "30.0"]
