import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charsum.arith import totient
from charsum.characters import UnimodularMultiplicative, build_group, enumerate_characters
from charsum.sums import (
    cutoff,
    harmonic,
    level_counts,
    level_set_max,
    log_partial_sums,
    log_sum_max,
    log_sums,
    max_rows,
    maximal_sum,
    maximal_sums,
    short_sum,
    short_sums,
    sums_rows,
)


def chi5():
    G = build_group(5)
    return next(G.character(i) for i in range(G.size) if G.character(i)(2).reduced() == (1, 4))


def quadratic(q):
    (chi,) = enumerate_characters(q, order=2, primitive_only=True)
    return chi


def test_level_count_examples():
    chi = chi5()
    lc = level_counts(chi, 1)
    assert lc.counts.tolist() == [1, 0, 0, 0]
    assert level_counts(chi, 5).counts.tolist() == [1, 1, 1, 1]
    assert level_counts(chi, 5).noncoprime_count == 1
    assert level_set_max(chi, 1) == (1, 0)
    assert level_set_max(chi, 4)[0] == 1


def test_full_period_equidistribution():
    for q in [7, 16, 45, 100, 101, 360]:
        for chi in enumerate_characters(q):
            assert set(level_counts(chi, q).counts.tolist()) == {totient(q) // chi.order}


def test_level_counts_against_brute():
    for q, i, x in [(77, 13, 500), (64, 5, 63), (101, 50, 1000), (9, 4, 2)]:
        chi = build_group(q).character(i)
        brute = np.zeros(chi.order, dtype=int)
        for n in range(1, x + 1):
            a = chi.exponent(n)
            if a >= 0:
                brute[a] += 1
        assert level_counts(chi, x).counts.tolist() == brute.tolist()


def test_short_sum_examples():
    chi = chi5()
    assert abs(short_sum(chi, 4)) < 1e-15
    S = short_sums(chi, 5)
    assert S[0] == 4
    assert np.abs(S.values[1:]).max() <= 1e-9


def test_x_outside_desk_range():
    with pytest.raises(ValueError):
        level_counts(chi5(), 0)


@given(st.integers(3, 3000), st.data())
def test_transform_matches_naive_sum(q, data):
    G = build_group(q)
    chi = G.character(data.draw(st.integers(0, G.size - 1)))
    x = data.draw(st.integers(1, 3 * q))
    S = short_sums(chi, x)
    a = chi.exponents_upto(x)[1:]
    a = a[a >= 0]
    for ell in data.draw(st.lists(st.integers(0, chi.order - 1), min_size=1, max_size=4)):
        z = np.exp(2j * np.pi * ((ell * a) % chi.order) / chi.order)
        naive = complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))
        assert abs(S[ell] - naive) <= 1e-9 * max(1.0, abs(naive))
    half = np.arange(1, chi.order)
    assert np.allclose(S.values[chi.order - half], np.conj(S.values[half]), atol=1e-12, rtol=0)


def test_large_order_uses_fft_path():
    chi = enumerate_characters(1031, order=1030)[0]
    S = short_sums(chi, 700)
    a = chi.exponents_upto(700)[1:]
    naive = np.exp(2j * np.pi * ((7 * a) % 1030) / 1030).sum()
    assert abs(S[7] - naive) < 1e-9


def test_maximal_sum_examples():
    # the principal character mod a prime q has M = q - 1
    assert maximal_sum(build_group(31).principal())[0] == 30
    assert maximal_sum(build_group(12).principal())[0] == 4  # phi(q) for composite q
    assert maximal_sum(quadratic(3)) == (1.0, 1)
    assert maximal_sum(quadratic(5)) == (1.0, 1)


def test_maximal_sums_against_prefix_scan():
    for q, i in [(31, 7), (97, 11), (64, 9), (105, 17)]:
        chi = build_group(q).character(i)
        tab = maximal_sums(chi)
        for ell in range(chi.order):
            vals = np.array([complex(chi.power(ell)(n)) for n in range(1, q + 1)])
            pref = np.abs(np.cumsum(vals))
            M = pref.max()
            assert abs(tab[ell] - M) < 1e-9
            assert tab.argmax[ell] == 1 + int(np.argmax(pref >= M - 1e-9 * max(1, M)))


def test_maximal_sums_threshold_is_lower_bound():
    chi = build_group(1009).character(5)
    full = maximal_sums(chi)
    cut = maximal_sums(chi, threshold=5.0)
    assert np.all(cut.values <= full.values + 1e-12)
    assert np.all(cut.values[~cut.early] == full.values[~cut.early])


def test_log_sum_examples():
    one = UnimodularMultiplicative.one(10)
    assert abs(log_partial_sums(one, 4)[-1] - 25 / 12) < 1e-15
    assert abs(log_partial_sums(quadratic(3), 3)[-1] - 0.5) < 1e-15
    L = log_partial_sums(build_group(7).principal(), 200).real
    assert np.all(np.diff(L) >= 0)
    assert abs(harmonic(4) - float(Fraction(25, 12))) < 1e-15


def test_log_sum_max_and_series():
    chi = quadratic(3)
    m, n = log_sum_max(chi, 100)
    assert (m, n) == (1.0, 1)
    ser = log_sums(chi, [3, 1, 10])
    assert ser.cutoffs.tolist() == [1, 3, 10]
    assert ser.argmax == 1


def test_cutoff_is_exact_floor():
    assert cutoff(1000, 0.6) == 63
    assert cutoff(10**4, 0.5) == 100
    assert cutoff(2**20, 0.25) == 32
    with pytest.raises(ValueError):
        cutoff(100, 0)


def test_csv_rows():
    chi = chi5()
    rows = sums_rows(chi, short_sums(chi, 5))
    assert list(rows[0]) == ["q", "index", "ell", "re", "im", "abs"]
    rows = max_rows(chi, maximal_sums(chi))
    assert list(rows[0]) == ["q", "index", "ell", "M", "argmax_t"]
