"""Verification suites: character families, work units, and deterministic execution."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

import numpy as np

from .arith import divisors, is_prime, totient
from .bounds import (
    BoundRow,
    cor13_row,
    et_level_batch,
    gslog_check,
    hmt_check,
    pair_count_identity,
    thm1_row,
    thm2_row,
    thm4_row,
)
from .characters import DirichletCharacter, build_group
from .config import ExperimentConfig, build_config
from .identities import (
    OmegaFunction,
    fourier_normsq,
    fourier_tail_bound,
    ft_correlation,
    norm_sq,
    omega_moments,
    rotation_residual,
    tkz_set,
    variance_direct,
    variance_stratified,
)
from .pretentious import sigma_profile
from .report import build_report
from .spectrum import structure_check
from .sums import cutoff, level_counts, log_sum_max, sums_all_powers
from . import kernels


@dataclass(frozen=True)
class Suite:
    name: str
    statement: str
    defaults: dict
    units: Callable[[ExperimentConfig], list]
    run: Callable[[ExperimentConfig, object], list[dict]]
    hard: bool = False  # carries hard pass/fail rows


# -- families -------------------------------------------------------------------

def candidate_moduli(cfg: ExperimentConfig) -> list[int]:
    qs = list(cfg.moduli) if cfg.moduli else list(range(cfg.q_min, cfg.q_max + 1))
    if cfg.primes_only:
        qs = [q for q in qs if is_prime(q)]
    if cfg.n_moduli and len(qs) > cfg.n_moduli:
        rng = np.random.default_rng([cfg.seed, 0])
        qs = rng.choice(qs, size=cfg.n_moduli, replace=False).tolist()
    return sorted(int(q) for q in qs)


def _squarefree_mask(orders: np.ndarray) -> np.ndarray:
    out = np.ones(len(orders), dtype=bool)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        out &= orders % (p * p) != 0
    big = orders >= 37 * 37
    for i in np.flatnonzero(big):
        n = int(orders[i])
        out[i] = all(n % (k * k) for k in range(37, math.isqrt(n) + 1))
    return out


def characters_for(cfg: ExperimentConfig, q: int) -> list[DirichletCharacter]:
    """Characters mod q passing the order filters, sampled deterministically per (seed, q)."""
    G = build_group(q)
    orders, conds = G.character_table
    mask = orders >= cfg.d_min
    if cfg.d_max:
        mask &= orders <= cfg.d_max
    if cfg.two_power:
        mask &= (orders >= 2) & ((orders & (orders - 1)) == 0)
    if cfg.squarefree:
        mask &= _squarefree_mask(orders)
    if cfg.primitive_only:
        mask &= conds == q
    idx = np.flatnonzero(mask)
    if cfg.chars_per_q and len(idx) > cfg.chars_per_q:
        rng = np.random.default_rng([cfg.seed, q])
        idx = np.sort(rng.choice(idx, size=cfg.chars_per_q, replace=False))
    return [G.character(int(i)) for i in idx]


def family_units(cfg: ExperimentConfig) -> list[int]:
    return candidate_moduli(cfg)


def _rows(rows: list[BoundRow]) -> list[dict]:
    return [r.as_row() for r in rows]


def _x_for(cfg: ExperimentConfig, q: int, default: int) -> int:
    if cfg.x:
        return cfg.x
    if cfg.delta:
        return max(1, cutoff(q, cfg.delta))
    return default


# -- exact suites ---------------------------------------------------------------

def run_orthogonality(cfg, q):
    G = build_group(q)
    E = G.exponent_matrix
    orders, _ = G.character_table
    W = G.weight_matrix(E, orders)
    cmin, cmax, _ = kernels.level_stats_batch(G.log_matrix, W, orders, q)
    target = G.size // orders
    worst = int(max(np.abs(cmin - target).max(), np.abs(cmax - target).max()))
    return [{"q": q, "index": None, "d": None, "n_characters": int(G.size), "x": q,
             "lhs": worst, "rhs": 0, "ratio": None, "pass": worst == 0}]


def _brute_pairs(chi: DirichletCharacter, x: int) -> int:
    e = np.array([chi.exponent(n) for n in range(1, x + 1)])
    e = e[e >= 0]
    return int(np.equal.outer(e, e).sum())


def pair_units(cfg):
    return list(range(cfg.samples))


def run_pair_count(cfg, i):
    rng = np.random.default_rng([cfg.seed, 1, i])
    qs = candidate_moduli(cfg)
    q = int(qs[rng.integers(len(qs))])
    G = build_group(q)
    chi = G.character(int(rng.integers(G.size)))
    x = int(rng.integers(1, q + 1))
    row = pair_count_identity(chi, x)
    brute = _brute_pairs(chi, x)
    ok = bool(row.passed) and int(row.rhs) == brute
    row.params.update({"brute_pairs": brute})
    row.passed = ok
    return [row.as_row()]


def run_passto_pow(cfg, q):
    G = build_group(q)
    E = G.exponent_matrix
    orders, _ = G.character_table
    comp = np.asarray(G.orders, dtype=np.int64)
    owner, pow_E, pow_ord, is_self = [], [], [], []
    for i, d in enumerate(orders.tolist()):
        for r in divisors(d):
            owner.append(i)
            pow_E.append((E[i] * (d // r)) % comp)
            pow_ord.append(r)
            is_self.append(r == d)
    pow_E = np.ascontiguousarray(np.array(pow_E, dtype=np.int64).reshape(len(owner), len(comp)))
    pow_ord = np.array(pow_ord, dtype=np.int64)
    W = G.weight_matrix(pow_E, pow_ord)
    owner = np.array(owner)
    is_self = np.array(is_self)
    out = []
    for x in sorted({q // 2, q}):
        _, cmax, _ = kernels.level_stats_batch(G.log_matrix, W, pow_ord, x)
        lhs = np.zeros(G.size, dtype=np.int64)
        lhs[owner[is_self]] = cmax[is_self]
        rhs = np.full(G.size, np.iinfo(np.int64).max)
        np.minimum.at(rhs, owner, cmax)
        viol = int((lhs > rhs).sum())
        worst = float((lhs / np.maximum(rhs, 1)).max())
        out.append({"q": q, "index": None, "d": None, "x": x, "n_characters": int(G.size),
                    "n_checks": len(owner), "violations": viol,
                    "lhs": worst, "rhs": 1.0, "ratio": worst, "pass": viol == 0})
    return out


def run_et_level(cfg, q):
    xs = cfg.x_list or sorted({max(1, cutoff(q, cfg.delta or 0.6)), q})
    idx = [chi.index for chi in characters_for(cfg, q)]
    out = []
    for x in xs:
        b = et_level_batch(q, x, cfg.K, idx)
        ratio = b.lhs[:, None] / b.rhs
        i, k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
        viol = int((~b.passed).sum())
        out.append({"q": q, "index": int(b.indices[i]), "d": int(b.orders[i]), "x": x,
                    "K_star": b.K[k], "K": list(b.K), "n_characters": len(idx), "violations": viol,
                    "lhs": int(b.lhs[i]), "rhs": float(b.rhs[i, k]), "ratio": float(ratio[i, k]),
                    "pass": viol == 0})
    return out


def _level_j0(chi: DirichletCharacter, z: float) -> int:
    """Nonzero exponent class with the most primes <= z (smallest on ties)."""
    from .arith import primes_upto

    p = primes_upto(int(z))
    a = chi.prime_exponents(p)
    a = a[a > 0]
    if len(a) == 0:
        return 1
    cnt = np.bincount(a, minlength=chi.order)
    return int(np.argmax(cnt))


def ft_units(cfg):
    return [(q, chi.index) for q in candidate_moduli(cfg) for chi in characters_for(cfg, q)]


def run_ft(cfg, unit):
    q, index = unit
    chi = build_group(q).character(index)
    j0 = _level_j0(chi, cfg.z)
    xs = cfg.x_list or [1000, 100000]
    out = []
    for k in range(1, cfg.k_max + 1):
        T = tkz_set(chi, j0, k, cfg.z).members
        for x in xs:
            worst, viol = 0.0, 0
            for t1 in T:
                for t2 in T:
                    c = ft_correlation(t1, t2, x)
                    worst = max(worst, float(c.error / c.bound))
                    viol += not c.ok
            out.append({"q": q, "index": index, "d": chi.order, "j0": j0, "k": k, "z": cfg.z, "x": x,
                        "T_size": len(T), "pairs": len(T) ** 2, "violations": viol,
                        "lhs": worst, "rhs": 1.0, "ratio": worst, "pass": viol == 0})
    return out


def run_variance(cfg, i):
    if i == 0:
        s = np.array([0.0, 1.0])
        d, r = 2, 2
    else:
        rng = np.random.default_rng([cfg.seed, 2, i])
        d = int(rng.integers(2, 61))
        r = int(rng.choice(divisors(d)))
        s = rng.random(d) * float(rng.uniform(0.1, 3.0))
        s[0] = 0.0
    direct = variance_direct(s, r)
    strat, budget = variance_stratified(s, r, cfg.M)
    S2 = float(s[1:].sum()) ** 2
    tol = 1e-6 * max(1.0, S2) + budget
    err = abs(direct - strat)
    row = {"q": None, "index": None, "d": d, "r": r, "Sigma": math.sqrt(S2), "M": cfg.M,
           "direct": direct, "stratified": strat, "lhs": err, "rhs": tol, "ratio": err / tol,
           "pass": err <= tol}
    if i == 0:
        exact_err = abs(direct - 5 / 288)
        row.update({"exact_value": "5/288", "exact_error": exact_err})
        row["pass"] = row["pass"] and exact_err <= 1e-15
    return [row]


def fourier_units(cfg):
    units = ["grid"] + [("tail", V) for V in sorted({10, 100, 1000, cfg.V}) if V <= cfg.V]
    if cfg.V_point:
        units += [("point", 0.0), ("point", 0.5)]
    return units


def run_fourier(cfg, unit):
    ts = np.arange(cfg.grid_points) / cfg.grid_points
    if unit == "grid":
        err = float(np.abs(fourier_normsq(ts, cfg.V) - norm_sq(ts)).max())
        return [{"check": "grid", "V": cfg.V, "t_points": cfg.grid_points,
                 "lhs": err, "rhs": cfg.grid_tol, "ratio": err / cfg.grid_tol, "pass": err <= cfg.grid_tol}]
    kind, val = unit
    if kind == "tail":
        err = float(np.abs(fourier_normsq(ts, val) - norm_sq(ts)).max())
        bound = fourier_tail_bound(val)
        return [{"check": "tail", "V": val, "t_points": cfg.grid_points,
                 "lhs": err, "rhs": bound, "ratio": err / bound, "pass": err <= bound}]
    err = abs(fourier_normsq(val, cfg.V_point) - norm_sq(val))
    return [{"check": "point", "t": val, "V": cfg.V_point, "exact": norm_sq(val), "lhs": err,
             "rhs": cfg.point_tol, "ratio": err / cfg.point_tol, "pass": err <= cfg.point_tol,
             "tail_bound": fourier_tail_bound(cfg.V_point)}]


# -- report suites -------------------------------------------------------------

def run_hmt(cfg, q):
    x = _x_for(cfg, q, 10_000)
    return _rows([hmt_check(chi, x, cfg.T) for chi in characters_for(cfg, q)])


def run_gslog(cfg, q):
    x = _x_for(cfg, q, 10_000)
    return _rows([gslog_check(chi, x) for chi in characters_for(cfg, q)])


def run_tk(cfg, q):
    out = []
    N = _x_for(cfg, q, q)
    for chi in characters_for(cfg, q):
        prof = sigma_profile(chi, N)
        j0 = prof.j_max
        om = OmegaFunction(j0, chi, N)
        ces = omega_moments(om, N, "cesaro")
        log = omega_moments(om, N, "logarithmic")
        _, N1 = log_sum_max(chi, q)
        rot = rotation_residual(chi, 1, j0, max(N1, 2))
        out.append({"q": q, "index": chi.index, "d": chi.order, "N": N, "j0": j0,
                    "sigma": ces.sigma, "mean_cesaro": ces.mean, "ratio_cesaro": ces.ratio,
                    "ratio_log": log.ratio, "o_constant": log.extra.get("o_constant"),
                    "N1": N1, "rotation_lhs": rot.lhs, "rotation_budget": rot.budget,
                    "rotation_ratio": rot.ratio,
                    "lhs": ces.ratio, "rhs": 1.0, "ratio": ces.ratio, "pass": None})
    return out


def run_structure(cfg, q):
    out = []
    for chi in characters_for(cfg, q):
        x = _x_for(cfg, q, max(2, math.isqrt(q)))
        for kind in ("cesaro", "maximal"):
            row = structure_check(chi, cfg.epsilon, kind, x=x, conductor_bound=cfg.conductor_bound)
            r = row.as_row()
            r["d"] = chi.order
            r["x"] = x if kind == "cesaro" else q
            r["lhs"], r["rhs"] = row.bound_lhs, row.bound_rhs
            r["pass"] = bool(row.subset_ok and row.subgroup_ok) if row.hypothesis_met else True
            out.append(r)
    return out


def run_thm1(cfg, q):
    return _rows([thm1_row(chi, cfg.tau, cfg.c) for chi in characters_for(cfg, q)])


def run_thm2(cfg, q):
    rows = []
    for chi in characters_for(cfg, q):
        rows.append(thm2_row(chi, cfg.c, slack=cfg.slack))
        rows.append(cor13_row(chi, cfg.c, cfg.c2))
    out = []
    for r in rows:
        row = r.as_row()
        row["kind"] = r.suite
        out.append(row)
    return out


def run_thm4(cfg, q):
    return _rows([thm4_row(chi) for chi in characters_for(cfg, q)])


THM_FAMILY = {"q_min": 1000, "q_max": 10_000, "primes_only": True, "d_min": 30,
              "primitive_only": True, "n_moduli": 30, "chars_per_q": 2}
SMALL_FAMILY = {"q_min": 101, "q_max": 2000, "primes_only": True, "d_min": 2,
                "n_moduli": 20, "chars_per_q": 2}

SUITES: dict[str, Suite] = {
    s.name: s
    for s in [
        Suite("orthogonality", "full-period level counts equal phi(q)/d for every character",
              {"q_min": 3, "q_max": 300}, family_units, run_orthogonality, hard=True),
        Suite("pair-count", "(1/d) sum_l |S_{chi^l}(x)|^2 = #{n, m <= x : chi(n) = chi(m) != 0}",
              {"q_min": 3, "q_max": 500, "samples": 100}, pair_units, run_pair_count, hard=True),
        Suite("passto-pow", "M_{d,chi}(x) <= min_{r|d} M_{r,chi^{d/r}}(x) at x = q/2 and q",
              {"q_min": 3, "q_max": 200}, family_units, run_passto_pow, hard=True),
        Suite("et-level", "Erdos-Turan level-set bound with constants 1, 1, 2/3",
              {"q_min": 3, "q_max": 300}, family_units, run_et_level, hard=True),
        Suite("ft-correlation", "|sum f_t1 f_t2 - x phi(t)/t^2 1_{t1=t2}| <= d(t1) d(t2) on T_{k,z}",
              {"moduli": [5, 7, 13, 31, 37], "chars_per_q": 1, "d_min": 2, "k_max": 3, "z": 30.0},
              ft_units, run_ft, hard=True),
        Suite("variance-delta", "restricted variance: direct sum against the GCD-stratified expansion",
              {"samples": 200, "M": 1000}, lambda cfg: list(range(cfg.samples + 1)), run_variance, hard=True),
        Suite("fourier", "truncated Fourier series of ||t||^2 against the closed form",
              {"V": 10_000}, fourier_units, run_fourier, hard=True),
        Suite("hmt", "Halasz-Montgomery-Tenenbaum bracket (report only)",
              dict(SMALL_FAMILY, T=10.0), family_units, run_hmt),
        Suite("gslog", "logarithmic-sum bound 1 + log x exp(-D^2/2) (report only)",
              dict(SMALL_FAMILY), family_units, run_gslog),
        Suite("tk", "Turan-Kubilius moments of Omega_{j0} and the rotation residual (report only)",
              dict(THM_FAMILY, n_moduli=10, chars_per_q=1), family_units, run_tk),
        Suite("structure", "large spectrum: stabilization, subgroup containment, distance bound",
              {"q_min": 50, "q_max": 400, "primes_only": True, "d_min": 2, "n_moduli": 10,
               "d_max": 12, "chars_per_q": 2, "epsilon": 0.2}, family_units, run_structure, hard=True),
        Suite("thm1", "short-sum alternatives min(alt1, alt2) (loglog ed)^{1/6 - tau} (report only)",
              dict(THM_FAMILY), family_units, run_thm1),
        Suite("thm2", "level-set maxima against inf_z 1/z with d_z, delta_z (report only)",
              dict(THM_FAMILY), family_units, run_thm2),
        Suite("thm4", "maximal-sum alternatives min(alt i, alt ii) (loglog ed)^{1/8} (report only)",
              dict(THM_FAMILY, q_max=5000, n_moduli=20), family_units, run_thm4),
    ]
}


def make_config(suite: str, config_file: str | None = None, **overrides) -> ExperimentConfig:
    if suite not in SUITES:
        raise KeyError(suite)
    return build_config(suite, SUITES[suite].defaults, config_file, overrides)


def _run_unit(cfg: ExperimentConfig, unit) -> list[dict]:
    return SUITES[cfg.suite].run(cfg, unit)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CHARSUM_THREADS", "1")))
    except ValueError:
        return 1


def run_suite(cfg: ExperimentConfig, workers: int | None = None) -> dict:
    """Execute every unit of the suite (in parallel when allowed) and merge rows in unit order."""
    suite = SUITES[cfg.suite]
    units = suite.units(cfg)
    workers = worker_count() if workers is None else workers
    rows: list[dict] = []
    if workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(partial(_run_unit, cfg), units, chunksize=max(1, len(units) // (4 * workers))):
                rows.extend(part)
    else:
        for u in units:
            rows.extend(_run_unit(cfg, u))
    return build_report(cfg.suite, cfg.canonical(), rows)


__all__ = ["SUITES", "Suite", "candidate_moduli", "characters_for", "make_config", "run_suite", "totient"]
