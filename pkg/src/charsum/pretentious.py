"""Pretentious distances, prime level-set profiles and the archimedean twist search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import lcm, primes_upto
from .characters import DirichletCharacter, UnimodularMultiplicative
from .sums import DIRECT_TRANSFORM_MAX, roots_of_unity

Multiplicative = DirichletCharacter | UnimodularMultiplicative

GOLDEN = (math.sqrt(5) - 1) / 2

# cos(2 pi a / D) for the denominators where it is rational
_RATIONAL_COS = {
    (0, 1): Fraction(1),
    (1, 2): Fraction(-1),
    (1, 3): Fraction(-1, 2),
    (2, 3): Fraction(-1, 2),
    (1, 4): Fraction(0),
    (3, 4): Fraction(0),
    (1, 6): Fraction(1, 2),
    (5, 6): Fraction(1, 2),
}


def _prime_data(f: Multiplicative | None, y: float) -> tuple[np.ndarray, np.ndarray, int]:
    """(primes <= y, exponents of f at them, order); f = None means the constant 1."""
    p = primes_upto(int(math.floor(y)))
    if f is None:
        return p, np.zeros(len(p), dtype=np.int64), 1
    return p, f.prime_exponents(p), f.order


def _relative_exponents(f, g, y):
    p, a, Df = _prime_data(f, y)
    _, b, Dg = _prime_data(g, y)
    D = lcm(Df, Dg)
    k = (a * (D // Df) - b * (D // Dg)) % D
    zero = (a < 0) | (b < 0)
    return p, k, zero, D


def distance_sq(f: Multiplicative | None, g: Multiplicative | None, y: float) -> float:
    """D(f, g; y)^2 = sum_{p <= y} (1 - Re f(p) conj g(p)) / p."""
    p, k, zero, D = _relative_exponents(f, g, y)
    cos = roots_of_unity(D).real
    terms = np.where(zero, 1.0, 1.0 - cos[k]) / p
    return math.fsum(terms.tolist())


def distance_sq_exact(f: Multiplicative | None, g: Multiplicative | None, y: float) -> Fraction:
    """Exact D(f, g; y)^2 when every relative angle has a rational cosine."""
    p, k, zero, D = _relative_exponents(f, g, y)
    total = Fraction(0)
    for pi, ki, zi in zip(p.tolist(), k.tolist(), zero.tolist()):
        if zi:
            total += Fraction(1, pi)
            continue
        gcd = math.gcd(ki, D)
        c = _RATIONAL_COS.get((ki // gcd, D // gcd))
        if c is None:
            raise ValueError(f"cos(2 pi {ki}/{D}) is irrational")
        total += (1 - c) / pi
    return total


def distance_to_twist_sq(f: Multiplicative | None, t: float, y: float) -> float:
    """D(f, n^{it}; y)^2."""
    p, a, D = _prime_data(f, y)
    ang = 2 * np.pi * np.maximum(a, 0) / D - t * np.log(p)
    terms = np.where(a < 0, 1.0, 1.0 - np.cos(ang)) / p
    return math.fsum(terms.tolist())


@dataclass(frozen=True)
class SigmaProfile:
    """Reciprocal prime sums by value class: sigma[j] = sum_{p <= y, f(p) = e(j/d)} 1/p.

    sigma[0] (primes where f is 1) is kept but excluded from ``total``; primes where f
    vanishes contribute to ``zero_mass``.
    """

    d: int
    y: float
    sigma: np.ndarray
    zero_mass: float

    @property
    def total(self) -> float:
        return math.fsum(self.sigma[1:].tolist())

    @property
    def j_max(self) -> int:
        if self.d < 2:
            return 0
        s = self.sigma[1:]
        return int(np.argmax(s >= s.max())) + 1

    def __getitem__(self, j: int) -> float:
        return float(self.sigma[j % self.d])


_PROFILE_CACHE: dict[tuple, SigmaProfile] = {}


def sigma_profile(f: Multiplicative, y: float) -> SigmaProfile:
    key = (f.cache_key, float(y))
    hit = _PROFILE_CACHE.get(key)
    if hit is not None:
        return hit
    if y < 2:
        raise ValueError("y must be >= 2")
    p, a, D = _prime_data(f, y)
    recip = 1.0 / p
    order = np.argsort(a, kind="stable")
    a_s, r_s = a[order], recip[order]
    bounds = np.flatnonzero(np.diff(a_s)) + 1
    sigma = np.zeros(D)
    zero_mass = 0.0
    for grp_a, grp_r in zip(np.split(a_s, bounds), np.split(r_s, bounds)):
        if len(grp_a) == 0:
            continue
        s = math.fsum(grp_r.tolist())
        if grp_a[0] < 0:
            zero_mass = s
        else:
            sigma[grp_a[0]] = s
    sigma.flags.writeable = False
    prof = SigmaProfile(D, float(y), sigma, zero_mass)
    if len(_PROFILE_CACHE) > 4096:
        _PROFILE_CACHE.clear()
    _PROFILE_CACHE[key] = prof
    return prof


def distances_all_powers(f: Multiplicative, y: float) -> np.ndarray:
    """D(f^l, 1; y)^2 for l = 0..D-1 from the sigma profile."""
    prof = sigma_profile(f, y)
    D = prof.d
    s = np.asarray(prof.sigma)
    if D <= DIRECT_TRANSFORM_MAX:
        j = np.arange(D)
        cos_sum = roots_of_unity(D).real[np.outer(j, j) % D] @ s
    else:
        cos_sum = (np.fft.fft(s)).real
    return (s.sum() - cos_sum) + prof.zero_mass


def fe_lower_bound(prof: SigmaProfile, ell: int, r: int) -> float:
    """8 * sum_j ||j l / r||^2 sigma_j, the quadratic lower bound for 1 - cos."""
    j = np.arange(1, prof.d)
    t = (j * ell) % r / r
    dist = np.minimum(t, 1 - t)
    return 8.0 * math.fsum((dist**2 * prof.sigma[1:]).tolist())


def cos_form(prof: SigmaProfile, ell_g: int) -> float:
    """sum_j (1 - cos(2 pi j m / d)) sigma_j, i.e. the distance without primes where f vanishes."""
    j = np.arange(1, prof.d)
    return math.fsum(((1 - np.cos(2 * np.pi * ((j * ell_g) % prof.d) / prof.d)) * prof.sigma[1:]).tolist())


# -- twist search ------------------------------------------------------------

def log_abs_euler(f: Multiplicative | None, x: float, ys: np.ndarray) -> np.ndarray:
    """log |F(1 + iy)| with F(s) = prod_{p <= x} (1 - f(p) p^{-s})^{-1}, for each y."""
    p, a, D = _prime_data(f, x)
    keep = a >= 0
    p, a = p[keep].astype(np.float64), a[keep]
    theta = 2 * np.pi * a / D
    logp = np.log(p)
    ys = np.atleast_1d(np.asarray(ys, dtype=np.float64))
    out = np.empty(len(ys))
    chunk = max(1, 2_000_000 // max(1, len(p)))
    for s in range(0, len(ys), chunk):
        yy = ys[s : s + chunk, None]
        re = np.cos(theta[None, :] - yy * logp[None, :]) / p
        mod2 = 1.0 - 2.0 * re + 1.0 / (p * p)
        out[s : s + chunk] = -0.5 * np.log(mod2).sum(axis=1)
    return out


def _pick(ys: np.ndarray, vals: np.ndarray, tol: float = 1e-12) -> int:
    """Index of the maximum, ties toward smaller |y| then nonnegative y."""
    m = vals.max()
    cand = np.flatnonzero(vals >= m - tol * max(1.0, abs(m)))
    key = sorted(cand.tolist(), key=lambda i: (abs(ys[i]), ys[i] < 0))
    return key[0]


def golden_max(fun, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``fun`` on [lo, hi]."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class TwistResult:
    ell: int | None
    y: float  # after the zeroing rule
    y_raw: float  # maximizer before the zeroing rule
    objective: float  # |F(1 + i y)|
    window: float
    grid_step: float
    grid_points: int
    grid_best: float


def _grid_then_refine(obj, T: float, step: float):
    n = int(math.floor(T / step + 1e-12))
    ys = np.arange(-n, n + 1) * step
    vals = obj(ys)
    i = _pick(ys, vals)
    y0, v0 = float(ys[i]), float(vals[i])
    lo, hi = max(-T, y0 - step), min(T, y0 + step)
    if hi > lo:
        y1, v1 = golden_max(lambda t: float(obj(np.array([t]))[0]), lo, hi)
        if v1 > v0 + 1e-12 * max(1.0, abs(v0)):
            y0, v0 = y1, v1
    return y0, v0, len(ys), float(vals[i])


def twist_search(f: Multiplicative | None, x: float, T: float | None = None, ell: int | None = None) -> TwistResult:
    """Maximize |F(1 + iy)| over |y| <= T, then apply the zeroing rule |y| > log(x)/2 -> 0."""
    L = math.log(x)
    if T is None:
        T = 2 * L
    if T > 2 * L * (1 + 1e-12):
        raise ValueError(f"window {T} exceeds 2 log x = {2 * L}")
    step = math.pi / (8 * L)
    y0, v0, npts, vgrid = _grid_then_refine(lambda ys: log_abs_euler(f, x, ys), T, step)
    y = 0.0 if abs(y0) > 0.5 * L else y0
    obj = v0 if y == y0 else float(log_abs_euler(f, x, np.array([0.0]))[0])
    return TwistResult(ell, y, y0, math.exp(obj), T, step, npts, math.exp(vgrid))


def min_twist_distance(f: Multiplicative | None, x: float, T: float) -> tuple[float, float]:
    """(t, min_{|t| <= T} D(f, n^{it}; x)^2) by the same grid-and-refine scheme."""
    p, a, D = _prime_data(f, x)
    pf = p.astype(np.float64)
    theta = 2 * np.pi * np.maximum(a, 0) / D
    zero_mass = math.fsum((1.0 / pf[a < 0]).tolist())
    keep = a >= 0
    theta, pk = theta[keep], pf[keep]
    logp = np.log(pk)
    base = math.fsum((1.0 / pk).tolist())

    def neg_dist(ts):
        ts = np.atleast_1d(ts)
        out = np.empty(len(ts))
        chunk = max(1, 2_000_000 // max(1, len(pk)))
        for s in range(0, len(ts), chunk):
            c = np.cos(theta[None, :] - ts[s : s + chunk, None] * logp[None, :]) / pk
            out[s : s + chunk] = c.sum(axis=1)
        return out - base - zero_mass

    step = math.pi / (8 * math.log(x))
    t, v, _, _ = _grid_then_refine(neg_dist, T, step)
    return t, max(0.0, -v)
