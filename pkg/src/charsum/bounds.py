"""Inequality checks and theorem report rows built from the other modules.

Rows with explicit constants carry a hard pass flag; rows whose bounds involve unspecified
implied constants carry ``passed=None`` and only report lhs, rhs and their ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import divisors, factorize, largest_prime_factor, primes_upto, rough_part
from .characters import CharacterGroup, DirichletCharacter, UnimodularMultiplicative, build_group
from . import kernels
from .pretentious import distance_sq, min_twist_distance
from .sums import (
    cutoff,
    level_counts,
    level_set_max,
    log_sum_max,
    maximal_sums,
    short_sum,
    sums_all_powers,
)

Multiplicative = DirichletCharacter | UnimodularMultiplicative


@dataclass
class BoundRow:
    suite: str
    lhs: float
    rhs: float
    passed: bool | None = None
    q: int | None = None
    index: int | None = None
    d: int | None = None
    params: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def ratio(self) -> float | None:
        if self.rhs is None or self.lhs is None:
            return None
        if self.rhs > 0:
            return self.lhs / self.rhs
        return 0.0 if self.lhs == 0 else math.inf

    def as_row(self) -> dict:
        row = {"q": self.q, "index": self.index, "d": self.d}
        row.update(self.params)
        row.update({"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "pass": self.passed})
        if self.notes:
            row["notes"] = self.notes
        return row


def _ids(f) -> dict:
    if isinstance(f, DirichletCharacter):
        return {"q": f.modulus, "index": f.index, "d": f.order}
    return {"d": f.order}


def loglog_ed(d: int) -> float:
    return math.log(math.log(math.e * d))


# -- explicit / exact checks -----------------------------------------------

def pair_count_identity(chi: DirichletCharacter, x: int, rel_tol: float = 1e-6) -> BoundRow:
    """(1/d) sum_l |S_{chi^l}(x)|^2 against sum_j c_j^2 = #{n, m <= x : chi(n) = chi(m) != 0}."""
    lc = level_counts(chi, x)
    S = sums_all_powers(lc).values
    lhs = math.fsum((np.abs(S) ** 2).tolist()) / lc.d
    rhs = int((lc.counts.astype(object) ** 2).sum())
    ok = abs(lhs - rhs) <= rel_tol * max(1.0, rhs)
    return BoundRow("pair-count", lhs, float(rhs), ok, params={"x": x}, **_ids(chi))


def et_level_check(chi: DirichletCharacter, x: int, K: int) -> BoundRow:
    """M_{d,chi}(x) <= x (1/d + 1/(K+1) + (2/3) sum_{k <= K} |S_{chi^k}(x)| / (k x))."""
    if K < 1:
        raise ValueError("K must be >= 1")
    lc = level_counts(chi, x)
    S = sums_all_powers(lc)
    lhs = int(lc.counts.max())
    k = np.arange(1, K + 1)
    tail = math.fsum((np.abs(S.values[k % lc.d]) / k).tolist())
    rhs = x * (1 / lc.d + 1 / (K + 1)) + (2 / 3) * tail
    return BoundRow("et-level", float(lhs), rhs, lhs <= rhs * (1 + 1e-12), params={"x": x, "K": K}, **_ids(chi))


@dataclass(frozen=True)
class LevelBoundBatch:
    """Per-character Erdos-Turan data for a set of characters mod q at one cutoff."""

    q: int
    x: int
    K: tuple[int, ...]
    indices: np.ndarray
    orders: np.ndarray
    lhs: np.ndarray  # M_{d,chi}(x)
    rhs: np.ndarray  # shape (n, len(K))

    @property
    def passed(self) -> np.ndarray:
        return (self.lhs[:, None] <= self.rhs * (1 + 1e-12)).all(axis=1)


def group_sums(G: CharacterGroup, x: int) -> np.ndarray:
    """S_psi(x) for every character psi mod q, indexed like the group (one n-dimensional FFT)."""
    q = G.q
    full, rem = divmod(x, q)
    mult = np.full(q, full, dtype=np.float64)
    mult[1 : rem + 1] += 1
    logs = G.log_matrix
    ok = logs[:, 0] >= 0
    f = np.zeros(G.orders, dtype=np.float64)
    np.add.at(f, tuple(logs[ok].T), mult[ok])
    return (np.fft.ifftn(f) * f.size).ravel()


def conjugate_indices(G: CharacterGroup, E: np.ndarray) -> np.ndarray:
    o = np.asarray(G.orders, dtype=np.int64)
    return np.ravel_multi_index(tuple(((-E) % o).T), G.orders)


def et_level_batch(q: int, x: int, Ks, indices=None) -> LevelBoundBatch:
    """Erdos-Turan level bound for many characters mod q at once.

    Level-set maxima come from the batch counting kernel (one scan per conjugate pair);
    |S_{chi^k}(x)| is read from the group transform at the index of chi^k.
    """
    G = build_group(q)
    Ks = tuple(sorted(int(k) for k in Ks))
    if not Ks or Ks[0] < 1:
        raise ValueError("K must be >= 1")
    E_all = G.exponent_matrix
    orders_all, _ = G.character_table
    idx = np.arange(G.size) if indices is None else np.asarray(indices, dtype=np.int64)
    E, orders = E_all[idx], orders_all[idx]
    # chi and its conjugate share level-set maxima
    conj = conjugate_indices(G, E)
    need = np.unique(np.minimum(idx, conj))
    W = G.weight_matrix(E_all[need], orders_all[need])
    _, cmax, _ = kernels.level_stats_batch(G.log_matrix, W, orders_all[need], x)
    lhs = cmax[np.searchsorted(need, np.minimum(idx, conj))]
    S = np.abs(group_sums(G, x))
    o = np.asarray(G.orders, dtype=np.int64)
    Kmax = Ks[-1]
    terms = np.empty((len(idx), Kmax))
    for k in range(1, Kmax + 1):
        terms[:, k - 1] = S[np.ravel_multi_index(tuple(((k * E) % o).T), G.orders)] / k
    tail = np.cumsum(terms, axis=1)
    rhs = np.stack([x * (1 / orders + 1 / (K + 1)) + (2 / 3) * tail[:, K - 1] for K in Ks], axis=1)
    return LevelBoundBatch(q, x, Ks, idx, orders, lhs, rhs)


def pv_check(q: int) -> BoundRow:
    """max M(chi) over primitive non-principal chi mod q against sqrt(q) log q."""
    G = build_group(q)
    orders, conds = G.character_table
    idx = np.flatnonzero((conds == q) & (orders > 1))
    rhs = math.sqrt(q) * math.log(q)
    if len(idx) == 0:
        return BoundRow("pv", 0.0, rhs, True, q=q, params={"n_characters": 0})
    E = G.exponent_matrix
    rep = np.unique(np.minimum(idx, conjugate_indices(G, E[idx])))  # M(conj chi) = M(chi)
    W = G.weight_matrix(E[rep], orders[rep])
    M, _ = kernels.prefix_max_batch(G.log_matrix, W, orders[rep], q)
    j = int(np.argmax(M))
    return BoundRow("pv", float(M[j]), rhs, bool(M[j] <= rhs), q=q, index=int(rep[j]), d=int(orders[rep[j]]),
                    params={"n_characters": len(idx)})


def passto_pow_check(chi: DirichletCharacter, x: int) -> BoundRow:
    """M_{d,chi}(x) <= min_{r | d} M_{r, chi^{d/r}}(x), compared as integers."""
    d = chi.order
    lhs = level_set_max(chi, x)[0]
    best, best_r = None, None
    for r in divisors(d):
        v = level_set_max(chi.power(d // r), x)[0]
        if lhs > v:
            return BoundRow("passto-pow", float(lhs), float(v), False, params={"x": x, "r": r}, **_ids(chi))
        if best is None or v < best:
            best, best_r = v, r
    return BoundRow("passto-pow", float(lhs), float(best), True, params={"x": x, "r": best_r}, **_ids(chi))


def orthogonality_check(chi: DirichletCharacter) -> BoundRow:
    """Full-period level counts all equal phi(q)/d."""
    lc = level_counts(chi, chi.modulus)
    target = chi.group.size // chi.order
    worst = int(np.abs(lc.counts - target).max())
    return BoundRow("orthogonality", float(worst), 0.0, worst == 0, params={"x": chi.modulus}, **_ids(chi))


# -- report-only checks ---------------------------------------------------------

def hmt_check(f: Multiplicative, x: int, T: float) -> BoundRow:
    """|S_f(x)|/x against (M+1)e^{-M} + 1/T + loglog x / log x, M = min_{|t|<=T} D(f, n^{it}; x)^2."""
    lhs = abs(short_sum(f, x)) / x
    t, M = min_twist_distance(f, x, T)
    rhs = (M + 1) * math.exp(-M) + 1 / T + math.log(math.log(x)) / math.log(x)
    return BoundRow("hmt", lhs, rhs, None, params={"x": x, "T": T, "M": M, "t_min": t}, **_ids(f))


def gslog_check(f: Multiplicative, x: int) -> BoundRow:
    """max_{y <= x} |L_f(y)| against 1 + log(x) exp(-D(f, 1; x)^2 / 2)."""
    lhs, arg = log_sum_max(f, x)
    D2 = distance_sq(f, None, x)
    rhs = 1 + math.log(x) * math.exp(-D2 / 2)
    return BoundRow("gslog", lhs, rhs, None, params={"x": x, "D2": D2, "argmax_N": arg}, **_ids(f))


# -- theorem reports ------------------------------------------------------------

def delta_formula(d: int, q: int, c: float = 1.0) -> float:
    """max{(loglog(ed) / (c log(ed)))^{1/2}, (log q)^{-c}}."""
    ed = math.e * d
    return max(math.sqrt(math.log(math.log(ed)) / (c * math.log(ed))), math.log(q) ** (-c))


def thm1_cutoff(q: int, d: int, c: float = 1.0, delta_floor: float = 0.5, x_floor: int = 1000) -> tuple[float, int]:
    """delta = max(formula, floor); x is the least integer > q^delta, raised to min(x_floor, q)."""
    delta = min(1.0, max(delta_formula(d, q, c), delta_floor))
    x = cutoff(q, delta) + 1
    return delta, max(x, min(x_floor, q))


def thm1_row(chi: DirichletCharacter, tau: float = 0.1, c: float = 1.0, delta_floor: float = 0.5, x_floor: int = 1000) -> BoundRow:
    """alt1 = |S_chi(x)|/x, alt2 = (1/d) sum_{1 <= l <= d} |S_{chi^l}(x)/x|^2; lhs = min * (loglog ed)^{1/6 - tau}."""
    q, d = chi.modulus, chi.order
    delta, x = thm1_cutoff(q, d, c, delta_floor, x_floor)
    lc = level_counts(chi, x)
    S = np.abs(sums_all_powers(lc).values) / x
    alt1 = float(S[1 % d])
    principal = float(S[0] ** 2) / d  # the l = d term
    alt2 = math.fsum((S**2).tolist()) / d
    w = loglog_ed(d) ** (1 / 6 - tau)
    score = min(alt1, alt2) * w
    return BoundRow(
        "thm1", score, 1.0, None,
        params={"x": x, "delta": delta, "tau": tau, "alt1": alt1, "alt2": alt2,
                "alt2_principal": principal, "alt2_nonprincipal": alt2 - principal, "weight": w},
        **_ids(chi),
    )


def z_grid(d: int) -> list[float]:
    """z = 1, the primes up to loglog(ed), and loglog(ed) itself."""
    Z = loglog_ed(d)
    pts = [1.0] + [float(p) for p in primes_upto(int(Z)).tolist()]
    if Z >= 1:
        pts.append(Z)
    return sorted(set(pts))


def thm2_row(chi: DirichletCharacter, c1: float = 1.0, x: int | None = None, slack: float = 0.1) -> BoundRow:
    """M_{d,chi}(x)/x against inf over qualifying z of 1/z, with d_z and delta_z per grid point."""
    q, d = chi.modulus, chi.order
    fd = factorize(d)
    delta1 = delta_formula(d, q, c1)
    if x is None:
        x = max(cutoff(q, min(1.0, delta1)) + 1, min(1000, q))
    lhs = level_set_max(chi, x)[0] / x
    grid = []
    best = None
    for z in z_grid(d):
        dz = rough_part(fd, z)
        dlt = delta_formula(dz, q, c1)
        ok = x > q**dlt
        grid.append({"z": z, "d_z": dz, "delta_z": dlt, "qualifies": ok})
        if ok and (best is None or 1 / z < best[0]):
            best = (1 / z, z, dz, dlt)
    params = {"x": x, "delta_1": delta1, "z_grid": grid, "empty_infimum": best is None}
    rhs = None
    if best is not None:
        rhs = best[0]
        params.update({"z_star": best[1], "d_z_star": best[2], "delta_z_star": best[3]})
    passed = None
    if d & (d - 1) == 0:  # order a power of two: full-period sanity band
        full = level_set_max(chi, q)[0] / q
        params["pow2_full_period"] = full
        passed = full <= 0.5 + slack
    return BoundRow("thm2", lhs, rhs, passed, params=params, **_ids(chi))


def cor13_row(chi: DirichletCharacter, c1: float = 1.0, c2: float = 1.0) -> BoundRow:
    """M/x at x > q^delta(P^+(d)) against 1 / (loglog(e P^+(d)))^{c2}."""
    q, d = chi.modulus, chi.order
    P = largest_prime_factor(d)
    delta = delta_formula(P, q, c1)
    x = max(cutoff(q, min(1.0, delta)) + 1, min(1000, q))
    lhs = level_set_max(chi, x)[0] / x
    rhs = 1 / loglog_ed(P) ** c2
    return BoundRow("cor13", lhs, rhs, None, params={"x": x, "P_plus": P, "delta": delta, "c2": c2}, **_ids(chi))


def thm4_row(chi: DirichletCharacter) -> BoundRow:
    """alt(i) = M(chi)/(sqrt q log q), alt(ii) = (1/d) sum_{1 <= l <= d-1} M(chi^l)/(sqrt q log q)."""
    q, d = chi.modulus, chi.order
    norm = math.sqrt(q) * math.log(q)
    M = maximal_sums(chi).values
    alt_i = float(M[1 % d]) / norm
    alt_ii = math.fsum(M[1:].tolist()) / d / norm
    w = loglog_ed(d) ** (1 / 8)
    return BoundRow(
        "thm4", min(alt_i, alt_ii) * w, 1.0, None,
        params={"alt_i": alt_i, "alt_ii": alt_ii, "weight": w}, **_ids(chi),
    )
