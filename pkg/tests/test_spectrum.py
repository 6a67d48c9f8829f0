import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charsum.characters import build_group, enumerate_characters
from charsum.spectrum import (
    discrepancy_count,
    iterated_sumset,
    spectrum_cesaro,
    spectrum_maximal,
    stabilize,
    structure_check,
    sumset,
)


def mask(elems, d):
    m = np.zeros(d, dtype=bool)
    m[np.asarray(elems, dtype=int) % d] = True
    return m


def brute_sumset(A, B, d):
    return sorted({(a + b) % d for a in A for b in B})


def test_spectrum_contains_zero_and_is_symmetric():
    chi = build_group(1009).character(40)
    spec = spectrum_cesaro(chi, 50, 0.2)
    assert 0 in spec
    assert all((chi.order - e) % chi.order in spec for e in spec.elements)
    big = spectrum_cesaro(chi, 50, 2.0)
    assert set(big.elements) <= {0}
    assert spectrum_maximal(chi, 2.0).elements == [0]  # only M(chi_0) = q - 1 clears 2 sqrt(q) log q


def test_maximal_spectrum_matches_full_scan():
    from charsum.sums import maximal_sums

    chi = build_group(211).character(11)
    eps = 0.3
    thr = eps * math.sqrt(211) * math.log(211)
    full = maximal_sums(chi).values
    assert spectrum_maximal(chi, eps).elements == np.flatnonzero(full >= thr).tolist()


def test_sumset_examples():
    assert np.flatnonzero(iterated_sumset([0], 5, 7)).tolist() == [0]
    H = mask([0, 3, 6, 9], 12)
    assert np.array_equal(iterated_sumset(H, 3), H)
    assert np.flatnonzero(iterated_sumset([1, 9], 2, 10)).tolist() == [0, 2, 8]


@given(st.integers(2, 512), st.data())
def test_iterated_sumset_associates(d, data):
    S = data.draw(st.lists(st.integers(0, d - 1), min_size=1, max_size=6))
    m1 = data.draw(st.integers(1, 3))
    m2 = data.draw(st.integers(1, 3))
    lhs = iterated_sumset(S, m1 + m2, d)
    rhs = sumset(iterated_sumset(S, m1, d), iterated_sumset(S, m2, d))
    assert np.array_equal(lhs, rhs)
    two = iterated_sumset(S, 2, d)
    assert np.flatnonzero(two).tolist() == brute_sumset(S, S, d)


def test_fft_sumset_path():
    d = 5000
    rng = np.random.default_rng(1)
    A = mask(rng.choice(d, 1200, replace=False), d)
    B = mask(rng.choice(d, 900, replace=False), d)
    ref = np.zeros(d, dtype=bool)
    for a in np.flatnonzero(A):
        ref |= np.roll(B, a)
    assert np.array_equal(sumset(A, B), ref)


def test_stabilize_examples():
    rep = stabilize(mask([0, 4, 8], 12))
    assert rep.m == 1 and rep.g == 4 and rep.H_size == 3
    rep = stabilize(mask([0, 3, 9], 12))
    assert np.flatnonzero(rep.H).tolist() == [0, 3, 6, 9] and rep.g == 3
    rep = stabilize(mask([0, 1, 6], 7))
    assert rep.g == 1 and rep.H_size == 7
    with pytest.raises(ValueError, match="symmetric"):
        stabilize(mask([0, 1], 7))
    with pytest.raises(ValueError):
        stabilize(mask([1, 6], 7))


@given(st.integers(2, 300), st.data())
def test_stabilized_set_is_subgroup(d, data):
    S = set(data.draw(st.lists(st.integers(0, d - 1), max_size=5))) | {0}
    S |= {(-s) % d for s in S}
    rep = stabilize(mask(sorted(S), d))
    H = rep.H
    assert rep.is_subgroup and rep.containment
    assert np.array_equal(sumset(H, H), H)
    assert np.array_equal(H, mask(range(0, d, rep.g), d))
    g = math.gcd(d, *S)
    assert rep.g == g


def test_discrepancy_examples():
    assert discrepancy_count(5, 10, 0) == 5
    assert discrepancy_count(1, 7, Fraction(1, 7)) == 3


@given(st.integers(1, 10_000), st.integers(0, 10**6), st.fractions(0, 1, max_denominator=500))
def test_discrepancy_against_loop(r, j0, theta):
    j0 %= r
    if r > 2000:
        r_small = r % 2000 + 1
    else:
        r_small = r
    brute = sum(1 for ell in range(1, r_small + 1)
                if min(Fraction(j0 * ell % r_small, r_small), 1 - Fraction(j0 * ell % r_small, r_small)) <= theta)
    assert discrepancy_count(j0, r_small, theta) == brute


@given(st.integers(1, 10_000), st.integers(0, 10**6), st.fractions(0, Fraction(1, 2), max_denominator=10**4))
def test_discrepancy_monotone_and_bounded(r, j0, theta):
    assert discrepancy_count(j0, r, Fraction(1, 2)) == r
    assert discrepancy_count(j0, r, theta) <= discrepancy_count(j0, r, theta + Fraction(1, 97))
    R = r // math.gcd(j0, r)
    if math.gcd(j0, r) <= theta * r and theta >= Fraction(1, R):
        assert discrepancy_count(j0, r, theta) <= 4 * theta * r


def test_structure_check_vacuous_when_sparse():
    chi = enumerate_characters(1009, order=1008)[0]
    row = structure_check(chi, 0.5, "maximal")
    assert not row.hypothesis_met and row.m is None


def test_structure_check_g_one_branch():
    # tiny x makes every partial sum large, so the spectrum is everything and g = 1
    chi = enumerate_characters(101, order=10)[0]
    row = structure_check(chi, 0.2, "cesaro", x=2)
    assert row.hypothesis_met and row.g == 1 and row.subset_ok and row.subgroup_ok
    assert row.m <= 0.2**-2
    assert row.bound_lhs <= row.bound_rhs


def test_structure_check_rows():
    for q in (103, 241, 307):
        for chi in enumerate_characters(q)[1:12]:
            for kind in ("cesaro", "maximal"):
                row = structure_check(chi, 0.2, kind, x=int(math.sqrt(q)))
                if row.hypothesis_met:
                    assert row.subset_ok and row.subgroup_ok
                    assert set(row.as_row()) >= {"q", "index", "kind", "epsilon", "members_count", "m", "g",
                                                 "H_size", "bound_lhs", "bound_rhs", "ratio"}
    with pytest.raises(ValueError):
        structure_check(chi, 0.2, "cesaro")
