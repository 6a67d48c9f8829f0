"""Exact and near-exact identities behind the structure arguments.

Covers the Fourier series of ||t||^2, the restricted variance of the quadratic form in the
prime level sums (direct and GCD-stratified), the mean-zero functions f_t and their
correlations, the sums A_{k,z} and Theta, and the additive function Omega with its moments.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from . import kernels
from .arith import divisor_count, divisors, factorize, lcm, mobius, primes_upto, spf_table, totient
from .characters import DirichletCharacter, UnimodularMultiplicative
from .pretentious import SigmaProfile, sigma_profile
from .sums import log_partial_sums, roots_of_unity

RHO = 1 - 2 / math.pi

Multiplicative = DirichletCharacter | UnimodularMultiplicative


# -- ||t||^2 ------------------------------------------------------------------

def norm_sq(t) -> np.ndarray | float:
    """||t||^2, the squared distance to the nearest integer."""
    t = np.asarray(t, dtype=np.float64)
    frac = t - np.floor(t)
    out = np.minimum(frac, 1 - frac) ** 2
    return float(out) if out.ndim == 0 else out


def fourier_tail_bound(V: int) -> float:
    return 1.0 / (math.pi**2 * V)


def fourier_normsq(t, V: int):
    """1/12 + (1/pi^2) sum_{v=1}^{V} (-1)^v cos(2 pi v t) / v^2 (the series truncated at |v| <= V)."""
    if V < 1:
        raise ValueError("V must be >= 1")
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = np.empty(len(ts))
    # smallest terms first
    v = np.arange(V, 0, -1, dtype=np.float64)
    coef = np.where(v % 2 == 0, 1.0, -1.0) / (v * v)
    if scalar:
        terms = coef * np.cos(2 * np.pi * v * ts[0])
        return 1 / 12 + math.fsum(terms.tolist()) / math.pi**2
    chunk = max(1, 4_000_000 // V)
    for s in range(0, len(ts), chunk):
        tt = ts[s : s + chunk, None]
        out[s : s + chunk] = (np.cos(2 * np.pi * v[None, :] * tt) * coef[None, :]).sum(axis=1)
    return 1 / 12 + out / math.pi**2


# -- restricted variance --------------------------------------------------------

def _sigma_array(sigma) -> np.ndarray:
    if isinstance(sigma, SigmaProfile):
        return np.asarray(sigma.sigma, dtype=np.float64)
    return np.asarray(sigma, dtype=np.float64)


def variance_direct(sigma, r: int) -> float:
    """(1/r) sum_{l=1}^{r} (sum_{j=1}^{d-1} (||jl/r||^2 - 1/12) sigma_j)^2."""
    s = _sigma_array(sigma)
    d = len(s)
    j = np.arange(1, d)
    total = []
    for ell in range(1, r + 1):
        w = norm_sq(((j * ell) % r) / r) - 1 / 12
        total.append(math.fsum((w * s[1:]).tolist()) ** 2)
    return math.fsum(total) / r


def _u_class_sums(R: int, M: int, odd_f: bool) -> np.ndarray:
    """B(w) = sum over 1 <= |u| <= M R, (u, R) = 1, u = w mod R of (-1)^{f u} / u^2."""
    U = M * R
    u = np.arange(1, U + 1)
    keep = np.gcd(u, R) == 1
    u = u[keep]
    sign = np.where((u % 2 == 1) & odd_f, -1.0, 1.0)
    val = sign / (u.astype(np.float64) ** 2)
    B = np.zeros(R)
    # u and -u: same weight, residues w and -w
    np.add.at(B, u % R, val)
    np.add.at(B, (-u) % R, val)
    return B


def variance_stratified(sigma, r: int, M: int = 1000) -> tuple[float, float]:
    """Delta through the GCD stratification with |u_i| <= M r / lambda; returns (value, Sigma^2/M).

    For each lambda | r and e_i f_i = lambda the u-sums depend on J_i only through
    J_i^{-1} c mod R (R = r / lambda), so the double sum over (J_1, u_1, J_2, u_2) becomes
    sum_c W_1(c) W_2(c) with W_i(c) = sum_J sigma_{J e_i} B_{f_i}(J^{-1} c).
    """
    s = _sigma_array(sigma)
    d = len(s)
    Sigma = math.fsum(s[1:].tolist())
    total = 0.0
    divs = divisors(r)
    for lam in divs:
        R = r // lam
        B = {par: _u_class_sums(R, M, par) for par in (False, True)}
        W = {}
        for e in divs:
            if lam % e:
                continue
            f = lam // e
            J = np.arange(1, (d - 1) // e + 1)
            J = J[np.gcd(J, r // e) == 1]
            w = np.zeros(R)
            if len(J):
                if R == 1:
                    w[0] = B[f % 2 == 1][0] * s[J * e].sum()
                else:
                    Jinv = np.array([pow(int(v), -1, R) for v in J % R])
                    c = np.arange(R)
                    idx = (Jinv[:, None] * c[None, :]) % R
                    w = (s[J * e][:, None] * B[f % 2 == 1][idx]).sum(axis=0)
            W[e] = (f, w)
        for e1, (f1, w1) in W.items():
            for e2, (f2, w2) in W.items():
                total += float(w1 @ w2) / (f1 * f2) ** 2
    return total / (4 * math.pi**4), Sigma**2 / M


def variance_delta(sigma, r: int, method: str = "direct", M: int = 1000):
    if method == "direct":
        return variance_direct(sigma, r)
    if method == "stratified":
        return variance_stratified(sigma, r, M)
    raise ValueError(f"unknown method {method!r}")


# -- mean-zero functions ------------------------------------------------------

def mean_zero_f(t: int, n: int) -> Fraction:
    """f_t(n) = sum_{ab = t} mu(b)/b * 1_{a | n}."""
    out = Fraction(0)
    for a in divisors(t):
        if n % a == 0:
            b = t // a
            mu = mobius(b)
            if mu:
                out += Fraction(mu, b)
    return out


@dataclass(frozen=True)
class Correlation:
    t1: int
    t2: int
    x: int
    exact: Fraction
    main: Fraction
    bound: int

    @property
    def error(self) -> Fraction:
        return abs(self.exact - self.main)

    @property
    def ok(self) -> bool:
        return self.error <= self.bound


def _mu_divisor_pairs(t: int) -> list[tuple[int, int]]:
    """(a, mu(t/a)) over divisors a of t with t/a squarefree."""
    return [(a, mobius(t // a)) for a in divisors(t) if mobius(t // a)]


def ft_correlation(t1: int, t2: int, x: int) -> Correlation:
    """sum_{n <= x} f_{t1}(n) f_{t2}(n) exactly, against x phi(t)/t^2 1_{t1 = t2} and d(t1) d(t2).

    Uses 1/(c1 c2) = a1 a2 / (t1 t2), so the sum is an integer over t1 t2.
    """
    num = 0
    P1, P2 = _mu_divisor_pairs(t1), _mu_divisor_pairs(t2)
    for a1, m1 in P1:
        for a2, m2 in P2:
            num += m1 * m2 * a1 * a2 * (x // lcm(a1, a2))
    exact = Fraction(num, t1 * t2)
    main = Fraction(x * totient(t1), t1 * t1) if t1 == t2 else Fraction(0)
    return Correlation(t1, t2, x, exact, main, divisor_count(t1) * divisor_count(t2))


# -- T_{k,z}, A_{k,z}, Theta ----------------------------------------------------

@dataclass(frozen=True)
class TkzSet:
    k: int
    z: float
    j0: int
    primes: tuple[int, ...]  # level-set primes <= z
    members: tuple[int, ...]  # products p_1 ... p_k, ascending

    def __len__(self) -> int:
        return len(self.members)

    def factored(self):
        return [factorize(t) for t in self.members]


def level_primes(f: Multiplicative, j0: int, z: float) -> np.ndarray:
    p = primes_upto(int(math.floor(z)))
    return p[f.prime_exponents(p) == j0 % f.order]


def tkz_set(f: Multiplicative, j0: int, k: int, z: float) -> TkzSet:
    """Products of k primes p <= z (with repetition) in the level set f(p) = e(j0/d)."""
    ps = level_primes(f, j0, z).tolist()
    members = sorted({math.prod(c) for c in combinations_with_replacement(ps, k)}) if k else [1]
    return TkzSet(k, z, j0, tuple(ps), tuple(members))


def theta_j0(f: Multiplicative, j0: int, z: float, y: float) -> complex:
    """(1/sigma_{j0}(z)) sum_{p <= z, level j0} p^{-iy} / p."""
    ps = level_primes(f, j0, z).astype(np.float64)
    if len(ps) == 0:
        raise ValueError("empty level set")
    sig = math.fsum((1 / ps).tolist())
    tw = np.exp(-1j * y * np.log(ps)) / ps
    return complex(math.fsum(tw.real.tolist()), math.fsum(tw.imag.tolist())) / sig


@dataclass(frozen=True)
class AkzTerms:
    k: int
    z: float
    x: int
    y: float
    A: complex
    M_sum: complex  # sum_t M_h(x; t)
    delta_sum: float  # sum_t delta_t(x)
    mean: complex  # (1/x) sum_{n <= x} h(n)
    size: int

    @property
    def residual(self) -> float:
        return abs(self.A * self.mean - self.M_sum)

    @property
    def ratio(self) -> float:
        return self.residual / self.delta_sum if self.delta_sum > 0 else math.inf


def _twisted_values(chi_pow: Multiplicative, N: int, y: float) -> np.ndarray:
    """h(n) = chi_pow(n) n^{-iy} for n = 0..N (h(0) = 0)."""
    a = chi_pow.exponents_upto(N)
    w = roots_of_unity(chi_pow.order)
    n = np.arange(N + 1, dtype=np.float64)
    n[0] = 1.0
    h = np.where(a >= 0, w[np.maximum(a, 0)], 0) * np.exp(-1j * y * np.log(n))
    h[0] = 0
    return h


def delta_t(t: int, x: float, rho: float = RHO) -> float:
    """(1/t) sum_{ac = t} mu(c)^2 (log 3a / log x)^rho log(log x / log 3a)^2."""
    lx = math.log(x)
    acc = []
    for a in divisors(t):
        if mobius(t // a) == 0:
            continue
        l3a = math.log(3 * a)
        acc.append((l3a / lx) ** rho * math.log(lx / l3a) ** 2)
    return math.fsum(acc) / t


def akz_terms(
    chi: DirichletCharacter, g: int, ell: int, j0: int, k: int, z: float, x: int, y: float, rho: float = RHO
) -> AkzTerms:
    """A_{k,z}, sum_t M_{h}(x; t) and sum_t delta_t(x) for h(n) = chi^{g l}(n) n^{-iy}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if z**k > x ** (1 / 3) * (1 + 1e-12):
        raise ValueError("constraint violated: z^k > x^(1/3)")
    T = tkz_set(chi, j0, k, z)
    h = _twisted_values(chi.power(g * ell), x, y)
    H = np.cumsum(h)
    A = 0j
    Msum = 0j
    dsum = []
    for t in T.members:
        inner = 0j
        m_t = 0j
        for a, mu in _mu_divisor_pairs(t):
            inner += mu * h[a]
            m_t += mu * h[a] * (a / x) * H[x // a]
        A += inner / t
        Msum += m_t / t
        dsum.append(delta_t(t, x, rho))
    return AkzTerms(k, z, x, y, A, Msum, math.fsum(dsum), H[x] / x, len(T))


def akz_split(chi: DirichletCharacter, g: int, ell: int, j0: int, k: int, z: float, y: float) -> complex:
    """A_{k,z} regrouped as sum_nu (sum_{c in T_{k-nu}} mu(c)/c)(sum_{a in T_nu} h(a)/a)."""
    ps = level_primes(chi, j0, z).tolist()
    power = chi.power(g * ell)

    def h(a: int) -> complex:
        e = power.exponent(a)
        return cmath.exp(2j * math.pi * e / power.order) * cmath.exp(-1j * y * math.log(a))

    total = 0j
    for nu in range(k + 1):
        cs = {math.prod(c) for c in combinations_with_replacement(ps, k - nu)} if k - nu else {1}
        as_ = {math.prod(c) for c in combinations_with_replacement(ps, nu)} if nu else {1}
        left = math.fsum(mobius(c) / c for c in cs)
        right = sum(h(a) / a for a in as_)
        total += left * right
    return total


# -- Omega and its moments ----------------------------------------------------

@dataclass(frozen=True)
class OmegaFunction:
    """Completely additive count of prime factors p (with multiplicity) where f(p) = e(j0/D)."""

    j0: int
    carrier: Multiplicative
    limit: int

    def flags(self) -> np.ndarray:
        fl = np.zeros(self.limit + 1, dtype=np.uint8)
        p = primes_upto(self.limit)
        fl[p[self.carrier.prime_exponents(p) == self.j0 % self.carrier.order]] = 1
        return fl

    def values(self, N: int | None = None) -> np.ndarray:
        N = self.limit if N is None else N
        if N > self.limit:
            raise ValueError("beyond evaluation limit")
        return kernels.additive_counts(spf_table(self.limit), self.flags(), N)

    def sigma(self, N: int) -> float:
        p = primes_upto(N)
        sel = p[self.flags()[p] == 1].astype(np.float64)
        return math.fsum((1 / sel).tolist())


@dataclass(frozen=True)
class OmegaMoments:
    weighting: str
    N: int
    sigma: float
    mean: float
    second: float  # centred second moment
    ratio: float  # second / sigma
    extra: dict = field(default_factory=dict)


def omega_moments(omega: OmegaFunction, N: int, weighting: str = "cesaro") -> OmegaMoments:
    om = omega.values(N)[1:].astype(np.float64)
    sig = omega.sigma(N)
    if weighting == "cesaro":
        mean = math.fsum(om.tolist()) / N
        second = math.fsum(((om - sig) ** 2).tolist()) / N
        extra = {}
    elif weighting == "logarithmic":
        n = np.arange(1, N + 1, dtype=np.float64)
        logN = math.log(N)
        mean = math.fsum((om / n).tolist()) / logN
        second = math.fsum(((om - sig) ** 2 / n).tolist()) / logN
        extra = {}
        if sig > 0:
            raw2 = math.fsum((om * om / n).tolist()) / sig**2
            extra["second_raw_normalized"] = raw2
            extra["o_constant"] = (raw2 / logN - 1) * sig
            extra["first_normalized"] = mean / sig
    else:
        raise ValueError(f"unknown weighting {weighting!r}")
    ratio = second / sig if sig > 0 else math.nan
    return OmegaMoments(weighting, N, sig, mean, second, ratio, extra)


def omega_mean_by_prime_powers(omega: OmegaFunction, N: int) -> float:
    """(1/N) sum_{p^k <= N, p flagged} floor(N / p^k): the Cesaro mean counted by prime powers."""
    fl = omega.flags()
    acc = 0
    for p in primes_upto(N).tolist():
        if not fl[p]:
            continue
        pk = p
        while pk <= N:
            acc += N // pk
            pk *= p
    return acc / N


# -- rotation identity for logarithmic sums ----------------------------------

@dataclass(frozen=True)
class RotationResult:
    ell: int
    j0: int
    N: int
    L: complex
    factor: float  # |1 - omega^{j0 l}|
    sigma_tilde: float
    budget: float  # log N / sqrt(sigma_tilde)

    @property
    def lhs(self) -> float:
        return self.factor * abs(self.L)

    @property
    def ratio(self) -> float:
        return self.lhs / self.budget if self.budget > 0 else math.inf


def rotation_residual(psi: Multiplicative, ell: int, j0: int, N: int) -> RotationResult:
    """|1 - omega^{j0 l}| |L_{psi^l}(N)| against log N / sqrt(sigma~_{j0}(N)), omega = e(1/r)."""
    r = psi.order
    k = (j0 * ell) % r
    factor = 0.0 if k == 0 else abs(1 - cmath.exp(2j * math.pi * k / r))
    L = complex(log_partial_sums(psi.power(ell), N)[-1])
    p = level_primes(psi, j0, N).astype(np.float64)
    sig = math.fsum((1 / p).tolist())
    if sig <= 0:
        raise ValueError("empty level set")
    return RotationResult(ell, j0, N, L, factor, sig, math.log(N) / math.sqrt(sig))
