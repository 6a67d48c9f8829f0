"""Exact integer arithmetic: sieves, factorization, orders, primitive roots, discrete logs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterator

import numpy as np

from . import kernels

# Deterministic for every n < 3.3e24, in particular all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Above this modulus, logs come from Pohlig-Hellman instead of a table.
DLOG_TABLE_LIMIT = 10**7


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes.tolist())

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)


def sieve_primes(limit: int) -> PrimeTable:
    """All primes <= limit, ascending."""
    return PrimeTable(int(limit), primes_upto(limit))


@lru_cache(maxsize=16)
def primes_upto(limit: int) -> np.ndarray:
    limit = int(limit)
    if limit < 2:
        out = np.array([], dtype=np.int64)
    else:
        is_p = np.ones(limit + 1, dtype=bool)
        is_p[:2] = False
        is_p[4::2] = False
        for p in range(3, math.isqrt(limit) + 1, 2):
            if is_p[p]:
                is_p[p * p :: 2 * p] = False
        out = np.flatnonzero(is_p).astype(np.int64)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=4)
def spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor of every n <= limit (spf[0] = 0, spf[1] = 1)."""
    limit = int(limit)
    spf = np.zeros(limit + 1, dtype=np.int32)
    if limit >= 1:
        spf[1] = 1
    for p in primes_upto(math.isqrt(limit)).tolist():
        seg = spf[p * p :: p]
        seg[seg == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf.flags.writeable = False
    return spf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __int__(self) -> int:
        return self.value

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, k in self.factors:
            divs = [dv * p**i for dv in divs for i in range(k + 1)]
        return sorted(divs)


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng: random.Random) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_brent(n, rng)
    _split(f, out, rng)
    _split(n // f, out, rng)


@lru_cache(maxsize=65536)
def factorize(n: int) -> FactoredInteger:
    """Canonical factorization of n >= 1 (trial division by small primes, then Pollard-Brent)."""
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    m = n
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    if m > 1:
        _split(m, out, random.Random(m))
    return FactoredInteger(n, tuple(sorted(out.items())))


def _as_factored(n: int | FactoredInteger) -> FactoredInteger:
    return n if isinstance(n, FactoredInteger) else factorize(int(n))


def divisors(n: int | FactoredInteger) -> list[int]:
    return _as_factored(n).divisors()


def divisor_count(t: int | FactoredInteger) -> int:
    return math.prod(k + 1 for _, k in _as_factored(t).factors)


def totient(t: int | FactoredInteger) -> int:
    return math.prod((p - 1) * p ** (k - 1) for p, k in _as_factored(t).factors)


def mobius(n: int) -> int:
    f = factorize(n).factors
    if any(k > 1 for _, k in f):
        return 0
    return -1 if len(f) % 2 else 1


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def largest_prime_factor(n: int) -> int:
    f = factorize(n).factors
    return f[-1][0] if f else 1


def multiplicative_order(a: int, m: int) -> int:
    """Least e >= 1 with a**e == 1 (mod m)."""
    if m < 1:
        raise ValueError("modulus must be positive")
    a %= m
    if math.gcd(a, m) != 1:
        raise ValueError(f"gcd({a}, {m}) > 1: no multiplicative order")
    if m == 1:
        return 1
    e = totient(m)
    for p, _ in factorize(e).factors:
        while e % p == 0 and pow(a, e // p, m) == 1:
            e //= p
    return e


def primitive_root(m: int) -> int:
    """A generator of (Z/mZ)* for m in {2, 4, p^k, 2p^k}; raises when the group is not cyclic."""
    if m in (2, 4):
        return m - 1
    f = factorize(m).factors
    if len(f) == 2 and f[0] == (2, 1):
        pk = m // 2
        g = primitive_root(pk)
        return g if g % 2 else g + pk
    if len(f) != 1 or f[0][0] == 2:
        raise ValueError(f"(Z/{m}Z)* is not cyclic")
    p, k = f[0]
    phi_p = p - 1
    qs = [r for r, _ in factorize(phi_p).factors]
    g = 2
    while any(pow(g, phi_p // r, p) == 1 for r in qs):
        g += 1
    if k >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _bsgs(g: int, h: int, m: int, n: int) -> int:
    """Solve g**e = h (mod m) with 0 <= e < n, where g has order dividing n."""
    s = math.isqrt(n) + 1
    table: dict[int, int] = {}
    cur = 1
    for j in range(s):
        table.setdefault(cur, j)
        cur = cur * g % m
    step = pow(g, -s, m)
    gamma = h % m
    for i in range(s + 1):
        if gamma in table:
            return i * s + table[gamma]
        gamma = gamma * step % m
    raise ValueError("no discrete logarithm exists")


def discrete_log(g: int, h: int, m: int) -> int:
    """Least e >= 0 with g**e == h (mod m); g must generate the cyclic group mod m.

    Pohlig-Hellman over the factored group order, baby-step giant-step per prime digit.
    """
    g %= m
    h %= m
    if math.gcd(h, m) != 1:
        raise ValueError(f"gcd({h}, {m}) > 1")
    n = totient(m)
    if multiplicative_order(g, m) != n:
        raise ValueError(f"{g} is not a generator modulo {m}")
    residues, moduli = [], []
    for p, k in factorize(n).factors:
        pk = p**k
        gp = pow(g, n // p, m)  # order p
        x = 0
        for i in range(k):
            hi = pow(h * pow(g, -x, m) % m, n // p ** (i + 1), m)
            x += _bsgs(gp, hi, m, p) * p**i
        residues.append(x)
        moduli.append(pk)
    e, mod = 0, 1
    for r, pk in zip(residues, moduli):
        # CRT merge
        t = (r - e) * pow(mod, -1, pk) % pk
        e += mod * t
        mod *= pk
    return e % n


@dataclass(frozen=True)
class DlogTable:
    """Exponent vectors for every residue coprime to a prime power.

    ``tables[i][r]`` is the exponent of generator i in r (or -1 when r is not a unit or
    not in the generated factor); the 2-adic case uses generators -1 and 5.
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    tables: tuple[np.ndarray, ...]

    def exponents_of(self, r: int) -> tuple[int, ...] | None:
        r %= self.modulus
        vec = tuple(int(t[r]) for t in self.tables)
        return None if any(v < 0 for v in vec) else vec


def dlog_table(m: int) -> DlogTable:
    """Build exponent tables for the prime power m (m = 2 yields no generators)."""
    f = factorize(m).factors
    if len(f) != 1:
        raise ValueError(f"{m} is not a prime power")
    p, k = f[0]
    if m == 2:
        return DlogTable(2, (), (), ())
    if p == 2 and k == 2:
        return DlogTable(4, (3,), (2,), (kernels.power_table(3, 4, 2),))
    if p == 2:
        five = kernels.power_table(5, m, m // 4)
        r = np.arange(m)
        sign = np.where(r % 4 == 1, 0, np.where(r % 4 == 3, 1, -1)).astype(np.int64)
        # r = (-1)**a * 5**b: look up 5-part of +-r
        five_part = np.full(m, -1, dtype=np.int64)
        odd = r % 2 == 1
        s = np.where(r % 4 == 1, r, (m - r) % m)
        five_part[odd] = five[s[odd]]
        return DlogTable(m, (m - 1, 5), (2, m // 4), (sign, five_part))
    g = primitive_root(m)
    return DlogTable(m, (g,), (m // p * (p - 1),), (kernels.power_table(g, m, m // p * (p - 1)),))


def rough_part(d: int | FactoredInteger, z: float) -> int:
    """Product of the prime-power parts p^k || d with p > z (strict)."""
    return math.prod(p**k for p, k in _as_factored(d).factors if p > z)


def smooth_part(d: int | FactoredInteger, z: float) -> int:
    return math.prod(p**k for p, k in _as_factored(d).factors if p <= z)
