import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from charsum.arith import divisors, rough_part, factorize
from charsum.bounds import (
    cor13_row,
    et_level_batch,
    et_level_check,
    gslog_check,
    hmt_check,
    loglog_ed,
    orthogonality_check,
    pair_count_identity,
    passto_pow_check,
    pv_check,
    thm1_row,
    thm2_row,
    thm4_row,
    z_grid,
)
from charsum.characters import UnimodularMultiplicative, build_group, enumerate_characters
from charsum.sums import maximal_sums
from oracles import brute_values


def quadratic(q):
    (chi,) = enumerate_characters(q, order=2, primitive_only=True)
    return chi


def _brute_pairs(chi, x):
    vals = brute_values(chi, x)
    nz = [v for v in vals[1:] if abs(v) > 1e-9]
    return sum(1 for a in nz for b in nz if abs(a - b) < 1e-9)


# -- exact checks -----------------------------------------------------------------

def test_pair_count_examples():
    chi = quadratic(3)
    row = pair_count_identity(chi, 3)
    assert row.rhs == 2 and row.lhs == pytest.approx(2) and row.passed
    row = pair_count_identity(chi, 1)
    assert row.rhs == 1 and row.lhs == pytest.approx(1)


@given(st.integers(3, 120), st.data())
@settings(max_examples=40)
def test_pair_count_matches_brute(q, data):
    G = build_group(q)
    chi = G.character(data.draw(st.integers(0, G.size - 1)))
    x = data.draw(st.integers(1, 150))
    row = pair_count_identity(chi, x)
    assert row.passed
    assert row.rhs == _brute_pairs(chi, x)


def test_et_level_order_two_trivial():
    chi = quadratic(5)
    for x in (1, 7, 100):
        row = et_level_check(chi, x, 1)
        assert row.rhs >= x >= row.lhs and row.passed


def test_et_level_q31():
    chi = build_group(31).character(1)
    assert chi.order == 30
    row = et_level_check(chi, 31, 5)
    assert row.passed and row.lhs == 1
    with pytest.raises(ValueError):
        et_level_check(chi, 31, 0)


@pytest.mark.parametrize("q", [5, 8, 24, 31, 45, 64, 97])
def test_et_level_batch_matches_single(q):
    G = build_group(q)
    for x in (q // 3 + 1, q, 2 * q + 5):
        batch = et_level_batch(q, x, (1, 5, 20))
        for n, i in enumerate(batch.indices.tolist()):
            chi = G.character(i)
            for m, K in enumerate(batch.K):
                row = et_level_check(chi, x, K)
                assert batch.lhs[n] == row.lhs
                assert batch.rhs[n, m] == pytest.approx(row.rhs, rel=1e-9, abs=1e-9)
        assert batch.passed.all()


def test_passto_pow_q31():
    chi = build_group(31).character(1)
    for x in (10, 15, 31):
        row = passto_pow_check(chi, x)
        assert row.passed
        assert row.params["r"] in divisors(30)


@given(st.integers(3, 150), st.integers(1, 300), st.data())
@settings(max_examples=40)
def test_passto_pow_always(q, x, data):
    G = build_group(q)
    chi = G.character(data.draw(st.integers(0, G.size - 1)))
    assert passto_pow_check(chi, x).passed


@pytest.mark.parametrize("q", [3, 8, 15, 16, 31, 36, 100])
def test_orthogonality(q):
    G = build_group(q)
    for i in range(G.size):
        assert orthogonality_check(G.character(i)).passed


def test_pv_check_matches_maximal_sums():
    for q in (7, 12, 31, 45):
        G = build_group(q)
        best = 0.0
        for chi in enumerate_characters(q, primitive_only=True):
            if chi.order > 1:
                best = max(best, float(maximal_sums(chi).values[1 % chi.order]))
        row = pv_check(q)
        assert row.lhs == pytest.approx(best, abs=1e-9)
        assert row.passed


def test_pv_no_primitive():
    # q = 6 has no primitive characters
    row = pv_check(6)
    assert row.params["n_characters"] == 0 and row.passed


# -- report-only checks ------------------------------------------------------------

def test_hmt_trivial():
    f = UnimodularMultiplicative.one(2000)
    row = hmt_check(f, 2000, 1.0)
    assert row.params["M"] == pytest.approx(0, abs=1e-12)
    assert row.rhs >= 1 >= row.lhs
    assert row.passed is None


def test_hmt_quadratic_small():
    row = hmt_check(quadratic(3), 10**4, 5.0)
    assert row.lhs < 1e-3 and row.ratio < 0.01


def test_gslog_trivial():
    x = 5000
    row = gslog_check(UnimodularMultiplicative.one(x), x)
    H = math.fsum(1 / n for n in range(1, x + 1))
    assert row.lhs == pytest.approx(H, rel=1e-12)
    assert 0.9 < row.ratio <= 1.0 + 1e-12


def test_gslog_quadratic():
    row = gslog_check(quadratic(3), 5000)
    # L(1) = 1 is the maximum
    assert row.lhs == 1.0 and row.params["argmax_N"] == 1 and row.rhs >= 1


# -- theorem rows --------------------------------------------------------------------

def test_thm1_rows_bounded():
    for chi in enumerate_characters(1009, primitive_only=True)[:40]:
        row = thm1_row(chi)
        p = row.params
        assert min(p["alt1"], p["alt2"]) <= 1 + 1e-12
        assert row.passed is None
        assert row.ratio == pytest.approx(row.lhs)


def test_thm1_quadratic_principal_term():
    q = 1009
    chi = quadratic(q)
    row = thm1_row(chi)
    x = row.params["x"]
    coprime = sum(1 for n in range(1, x + 1) if n % q)
    S1 = sum(complex(chi(n)) for n in range(1, x + 1))
    assert row.params["alt2_principal"] == pytest.approx((coprime / x) ** 2 / 2, rel=1e-12)
    assert row.params["alt2"] == pytest.approx((coprime / x) ** 2 / 2 + abs(S1) ** 2 / (2 * x * x), rel=1e-12)


def test_z_grid_and_rough_part():
    assert z_grid(2)[0] == 1.0
    g = z_grid(10**8)
    Z = loglog_ed(10**8)
    assert g[0] == 1.0 and g[-1] == pytest.approx(Z) and all(1 <= z <= Z for z in g)
    # d prime > z: d_z = d
    assert rough_part(factorize(101), 2.9) == 101
    assert rough_part(factorize(2**5 * 3 * 101), 2.9) == 3 * 101


def test_thm2_two_power_band():
    q = 257  # prime, (q-1) = 2^8
    for chi in enumerate_characters(q, primitive_only=True):
        if chi.order & (chi.order - 1) == 0 and chi.order > 1:
            row = thm2_row(chi)
            assert row.passed
            assert row.params["pow2_full_period"] <= 0.6


def test_thm2_grid_rows():
    chi = build_group(1009).character(1)
    row = thm2_row(chi)
    assert all(g["d_z"] == rough_part(factorize(chi.order), g["z"]) for g in row.params["z_grid"])
    assert row.passed is None
    if not row.params["empty_infimum"]:
        assert row.rhs == pytest.approx(1 / row.params["z_star"])


def test_cor13_row():
    chi = build_group(1009).character(1)
    row = cor13_row(chi)
    assert row.params["P_plus"] == 7  # 1008 = 2^4 3^2 7
    assert 0 <= row.lhs <= 1


def test_thm4_pv_band():
    for chi in enumerate_characters(997, primitive_only=True)[:12]:
        row = thm4_row(chi)
        assert 0 <= row.params["alt_i"] <= 1.2
        assert 0 <= row.params["alt_ii"] <= 1.2


def test_thm4_excludes_principal_power():
    chi = build_group(31).character(5)
    row = thm4_row(chi)
    M = maximal_sums(chi).values
    norm = math.sqrt(31) * math.log(31)
    assert row.params["alt_ii"] == pytest.approx(float(np.sum(M[1:])) / chi.order / norm)
