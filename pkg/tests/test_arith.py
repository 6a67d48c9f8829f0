import math
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charsum import arith
from oracles import brute_dlog, brute_order, trial_factor, trial_primes


def test_small_prime_lists():
    assert arith.primes_upto(10).tolist() == [2, 3, 5, 7]
    assert arith.primes_upto(1).tolist() == []
    assert len(arith.sieve_primes(100)) == len(trial_primes(100))


def test_prime_count_below_million():
    # frozen from a segmented trial-division count
    assert len(arith.sieve_primes(10**6)) == 78498
    assert 999983 in arith.sieve_primes(10**6)


def test_spf_table_matches_trial_division():
    spf = arith.spf_table(5000)
    for n in range(2, 5001):
        assert spf[n] == trial_factor(n)[0][0]


@pytest.mark.parametrize("n, expected", [(12, ((2, 2), (3, 1))), (1, ()), (1488, ((2, 4), (3, 1), (31, 1)))])
def test_factorize_examples(n, expected):
    assert arith.factorize(n).factors == expected


def test_factorize_random_large():
    rng = random.Random(7)
    for _ in range(1000):
        n = rng.randrange(2, 10**9)
        f = arith.factorize(n)
        assert math.prod(p**k for p, k in f.factors) == n
        assert all(arith.is_prime(p) for p in f.primes)


def test_factorize_semiprime_beyond_trial_range():
    p, q = 1_000_000_007, 998_244_353
    assert arith.factorize(p * q).factors == ((q, 1), (p, 1))


def test_is_prime_against_trial():
    small = set(trial_primes(3000))
    assert all(arith.is_prime(n) == (n in small) for n in range(3000))
    assert arith.is_prime(2**61 - 1)
    assert not arith.is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_factorize_rejects_nonpositive():
    with pytest.raises(ValueError):
        arith.factorize(0)


@pytest.mark.parametrize("a, m, k", [(1, 7, 1), (4, 5, 2), (3, 7, 6)])
def test_multiplicative_order_examples(a, m, k):
    assert arith.multiplicative_order(a, m) == k


def test_multiplicative_order_not_coprime():
    with pytest.raises(ValueError):
        arith.multiplicative_order(2, 4)


@given(st.integers(2, 3000), st.integers(1, 10**6))
def test_order_divides_totient(m, a):
    if math.gcd(a, m) != 1:
        return
    k = arith.multiplicative_order(a, m)
    assert arith.totient(m) % k == 0
    assert k == brute_order(a, m)


def test_primitive_root_generates():
    for m in [3, 4, 9, 25, 27, 50, 54, 101, 121, 2 * 343]:
        g = arith.primitive_root(m)
        assert arith.multiplicative_order(g, m) == arith.totient(m)
    with pytest.raises(ValueError):
        arith.primitive_root(8)


@pytest.mark.parametrize("g, h, m, e", [(3, 9, 31, 2), (3, 1, 31, 0), (2, 3, 101, 69)])
def test_discrete_log_examples(g, h, m, e):
    assert arith.discrete_log(g, h, m) == e


def test_discrete_log_oracle_value():
    assert brute_dlog(2, 3, 101) == 69


def _prime_powers_with_generator(limit):
    for p in trial_primes(limit):
        pk = p
        while pk <= limit:
            if p > 2 or pk <= 4:
                yield pk
            pk *= p


@given(st.sampled_from(list(_prime_powers_with_generator(10_000))), st.integers(0, 10**9))
def test_discrete_log_roundtrip(m, e):
    g = arith.primitive_root(m)
    n = arith.multiplicative_order(g, m)
    assert arith.discrete_log(g, pow(g, e, m), m) == e % n


def test_discrete_log_missing():
    with pytest.raises(ValueError):
        arith.discrete_log(4, 2, 7)  # 2 is not a power of 4 mod 7


def test_rough_part_examples():
    assert arith.rough_part(12, 2) == 3
    assert arith.rough_part(2**7, 2) == 1
    assert arith.rough_part(1488, 3) == 31


@given(st.integers(1, 10**5), st.sampled_from([1, 2, 3, 5, 10]))
def test_rough_times_smooth(d, z):
    assert arith.rough_part(d, z) * arith.smooth_part(d, z) == d


def test_divisor_functions():
    assert (arith.divisor_count(6), arith.totient(6)) == (4, 2)
    assert (arith.divisor_count(1), arith.totient(1)) == (1, 1)
    assert (arith.divisor_count(1488), arith.totient(1488)) == (20, 480)
    assert arith.divisors(1488) == [d for d in range(1, 1489) if 1488 % d == 0]


@given(st.integers(1, 5000))
def test_totient_and_mobius_against_oracles(n):
    assert arith.totient(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
    fs = trial_factor(n)
    mu = 0 if any(k > 1 for _, k in fs) else (-1) ** len(fs)
    assert arith.mobius(n) == mu


def test_dlog_table_covers_units():
    tab = arith.dlog_table(2**6)
    for r in range(64):
        e = tab.exponents_of(r)
        assert (e is None) == (r % 2 == 0)
    assert np.asarray(tab.tables[0]).shape[0] == 64
