"""Pure numpy versions of the compiled kernels (same signatures, same results)."""

from __future__ import annotations

import numpy as np


def power_table(g: int, m: int, order: int) -> np.ndarray:
    out = np.full(m, -1, dtype=np.int64)
    block = max(1, min(order, 1 << 16))
    powers = np.empty(block, dtype=np.int64)
    cur = 1 % m
    for i in range(block):
        powers[i] = cur
        cur = (cur * g) % m
    step = cur  # g**block mod m
    base = np.int64(1 % m)
    start = 0
    while start < order:
        n = min(block, order - start)
        vals = (powers[:n] * base) % m
        out[vals] = np.arange(start, start + n, dtype=np.int64)
        base = (base * step) % m
        start += n
    return out


def residue_exponents(logs: np.ndarray, weights: np.ndarray, d: int) -> np.ndarray:
    a = (logs % d) @ (np.asarray(weights, dtype=np.int64) % d) % d
    a[logs[:, 0] < 0] = -1
    return a.astype(np.int64)


def _residue_multiplicities(q: int, x: int) -> np.ndarray:
    full, rem = divmod(x, q)
    mult = np.full(q, full, dtype=np.int64)
    mult[1 : rem + 1] += 1
    return mult


def level_counts(logs: np.ndarray, weights: np.ndarray, d: int, x: int):
    q = logs.shape[0]
    mult = _residue_multiplicities(q, x)
    a = residue_exponents(logs, weights, d)
    cop = a >= 0
    counts = np.bincount(a[cop], weights=mult[cop], minlength=d).astype(np.int64)
    return counts, int(mult[~cop].sum())


def level_stats_batch(logs, weights, orders, x):
    n = weights.shape[0]
    cmin = np.empty(n, dtype=np.int64)
    cmax = np.empty(n, dtype=np.int64)
    amax = np.empty(n, dtype=np.int64)
    for k in range(n):
        counts, _ = level_counts(logs, weights[k], int(orders[k]), x)
        cmin[k] = counts.min()
        cmax[k] = counts.max()
        amax[k] = int(np.argmax(counts))
    return cmin, cmax, amax


def _first_within(mags2: np.ndarray, best2: float) -> int:
    m = np.sqrt(best2)
    tol = 1e-9 * max(1.0, m)
    floor2 = (m - tol) ** 2 if m > tol else 0.0
    return int(np.argmax(mags2 >= floor2)) + 1


def _scan(values: np.ndarray, threshold: float):
    # values: complex unit terms (0 where the function vanishes)
    run = np.cumsum(values)
    mags2 = run.real * run.real + run.imag * run.imag
    stop = len(mags2)
    early = False
    if threshold > 0:
        hit = np.nonzero(np.maximum.accumulate(mags2) >= threshold * threshold)[0]
        if len(hit):
            stop = int(hit[0]) + 1
            early = True
    mags2 = mags2[:stop]
    best2 = float(mags2.max()) if stop else 0.0
    best2 = max(best2, 0.0)
    return np.sqrt(best2), _first_within(mags2, best2) if stop else 0, early


def prefix_max_powers(a: np.ndarray, d: int, ells: np.ndarray, threshold: float):
    ang = np.cos(2.0 * np.pi * np.arange(d) / d) + 1j * np.sin(2.0 * np.pi * np.arange(d) / d)
    cop = a >= 0
    L = len(ells)
    M = np.zeros(L)
    arg = np.zeros(L, dtype=np.int64)
    early = np.zeros(L, dtype=bool)
    for k, ell in enumerate(ells):
        vals = np.zeros(len(a), dtype=np.complex128)
        vals[cop] = ang[(int(ell) % d) * a[cop] % d]
        M[k], arg[k], early[k] = _scan(vals, threshold)
    return M, arg, early


def prefix_max_batch(logs, weights, orders, T):
    q = logs.shape[0]
    n = weights.shape[0]
    M = np.zeros(n)
    arg = np.zeros(n, dtype=np.int64)
    idx = np.arange(1, T + 1) % q
    for k in range(n):
        d = int(orders[k])
        a = residue_exponents(logs, weights[k], d)[idx]
        m, t, _ = prefix_max_powers(a, d, np.array([1]), 0.0)
        M[k], arg[k] = m[0], t[0]
    return M, arg


def _doubling_blocks(N: int):
    lo = 2
    while lo <= N:
        hi = min(2 * lo, N + 1)
        yield lo, hi
        lo = hi


def multiplicative_exponents(spf: np.ndarray, prime_exp: np.ndarray, D: int, N: int) -> np.ndarray:
    if len(spf) <= N or len(prime_exp) <= N:
        raise ValueError("spf and prime_exp must cover 0..N")
    out = np.empty(N + 1, dtype=np.int64)
    out[0] = -1
    if N >= 1:
        out[1] = 0
    # n // spf(n) <= n // 2 lies in an earlier block
    for lo, hi in _doubling_blocks(N):
        n = np.arange(lo, hi)
        p = spf[lo:hi].astype(np.int64)
        is_p = p == n
        res = np.empty(hi - lo, dtype=np.int64)
        res[is_p] = prime_exp[n[is_p]]
        comp = ~is_p
        u = out[p[comp]]
        v = out[n[comp] // p[comp]]
        w = (u + v) % D
        w[(u < 0) | (v < 0)] = -1
        res[comp] = w
        out[lo:hi] = res
    return out


def additive_counts(spf: np.ndarray, flag: np.ndarray, N: int) -> np.ndarray:
    if len(spf) <= N or len(flag) <= N:
        raise ValueError("spf and flag must cover 0..N")
    out = np.zeros(N + 1, dtype=np.int64)
    for lo, hi in _doubling_blocks(N):
        n = np.arange(lo, hi)
        p = spf[lo:hi].astype(np.int64)
        out[lo:hi] = out[n // p] + flag[p]
    return out


def kahan_cumsum(x: np.ndarray) -> np.ndarray:
    out = np.empty(len(x))
    s = 0.0
    comp = 0.0
    for i, v in enumerate(x.tolist()):
        y = v - comp
        t = s + y
        comp = (t - s) - y
        s = t
        out[i] = s
    return out
