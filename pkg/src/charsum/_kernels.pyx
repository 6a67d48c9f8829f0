# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. ``_pykernels`` mirrors every function here."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, M_PI

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.uint8_t u8


def power_table(long long g, long long m, long long order):
    """Array ``t`` of length ``m`` with ``t[g**i % m] = i`` for ``0 <= i < order``, -1 elsewhere."""
    out = np.full(m, -1, dtype=np.int64)
    cdef i64[::1] t = out
    cdef long long cur = 1 % m
    cdef long long i
    with nogil:
        for i in range(order):
            t[cur] = i
            cur = (cur * g) % m
    return out


cdef _check_shapes(Py_ssize_t logs_cols, Py_ssize_t weight_cols, long long d):
    if logs_cols != weight_cols:
        raise ValueError("weights do not match the number of group components")
    if d < 1:
        raise ValueError("order must be positive")


def residue_exponents(const i64[:, ::1] logs, const i64[::1] weights, long long d):
    """Exponent of a character on every residue 0..q-1 (-1 where not coprime)."""
    _check_shapes(logs.shape[1], weights.shape[0], d)
    cdef Py_ssize_t q = logs.shape[0], c = logs.shape[1]
    out = np.empty(q, dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t r, i
    cdef long long a
    with nogil:
        for r in range(q):
            if logs[r, 0] < 0:
                o[r] = -1
                continue
            a = 0
            for i in range(c):
                a = (a + weights[i] * logs[r, i]) % d
            o[r] = a
    return out


cdef inline void _histogram(const i64[:, ::1] logs, const i64[:, ::1] weights, Py_ssize_t k,
                            long long d, long long x, i64[::1] counts, long long *noncoprime) noexcept nogil:
    cdef Py_ssize_t q = logs.shape[0], c = logs.shape[1]
    cdef long long full = x // q, rem = x % q, mult, a
    cdef Py_ssize_t r, i, rstart, rstop
    cdef long long nc = 0
    for i in range(d):
        counts[i] = 0
    if full == 0:
        rstart = 1
        rstop = rem + 1
    else:
        rstart = 0
        rstop = q
    for r in range(rstart, rstop):
        if r == 0:
            mult = full
        elif r <= rem:
            mult = full + 1
        else:
            mult = full
        if logs[r, 0] < 0:
            nc += mult
            continue
        a = 0
        for i in range(c):
            a = (a + weights[k, i] * logs[r, i]) % d
        counts[a] += mult
    noncoprime[0] = nc


def level_counts(const i64[:, ::1] logs, const i64[::1] weights, long long d, long long x):
    """Counts of n <= x by character exponent; returns (counts[d], noncoprime)."""
    cdef Py_ssize_t c = logs.shape[1]
    _check_shapes(c, weights.shape[0], d)
    w2 = np.ascontiguousarray(np.asarray(weights, dtype=np.int64).reshape(1, c))
    cdef const i64[:, ::1] wv = w2
    counts = np.zeros(d, dtype=np.int64)
    cdef i64[::1] cv = counts
    cdef long long nc = 0
    with nogil:
        _histogram(logs, wv, 0, d, x, cv, &nc)
    return counts, int(nc)


def level_stats_batch(const i64[:, ::1] logs, const i64[:, ::1] weights, const i64[::1] orders, long long x):
    """Per character row: (min count, max count, smallest argmax) over the d exponent classes."""
    cdef Py_ssize_t n = weights.shape[0], k, j
    cdef long long dmax = 1, d, lo, hi, arg, nc = 0
    if orders.shape[0] != n:
        raise ValueError("one order per weight row required")
    for k in range(n):
        _check_shapes(logs.shape[1], weights.shape[1], orders[k])
        if orders[k] > dmax:
            dmax = orders[k]
    buf = np.zeros(dmax, dtype=np.int64)
    cdef i64[::1] cv = buf
    cmin = np.empty(n, dtype=np.int64)
    cmax = np.empty(n, dtype=np.int64)
    amax = np.empty(n, dtype=np.int64)
    cdef i64[::1] mn = cmin, mx = cmax, am = amax
    with nogil:
        for k in range(n):
            d = orders[k]
            _histogram(logs, weights, k, d, x, cv, &nc)
            lo = cv[0]
            hi = cv[0]
            arg = 0
            for j in range(1, d):
                if cv[j] < lo:
                    lo = cv[j]
                if cv[j] > hi:
                    hi = cv[j]
                    arg = j
            mn[k] = lo
            mx[k] = hi
            am[k] = arg
    return cmin, cmax, amax


cdef inline void _argmax_within(double *mags, Py_ssize_t T, double best, long long *arg) noexcept nogil:
    cdef double m = sqrt(best)
    cdef double tol = 1e-9 * (m if m > 1.0 else 1.0)
    cdef double floor2 = (m - tol) * (m - tol) if m > tol else 0.0
    cdef Py_ssize_t t
    for t in range(T):
        if mags[t] >= floor2:
            arg[0] = t + 1
            return
    arg[0] = T


def prefix_max_powers(const i64[::1] a, long long d, const i64[::1] ells, double threshold):
    """Max over t of |sum_{n<=t} e(ell*a_n/d)| for each ell; a[t-1] is the exponent at n=t.

    With ``threshold > 0`` the scan for an ell stops once the running maximum reaches it.
    Returns (M, argmax_t, stopped_early).
    """
    cdef Py_ssize_t T = a.shape[0], L = ells.shape[0], k, t
    ctab = np.cos(2.0 * np.pi * np.arange(d) / d)
    stab = np.sin(2.0 * np.pi * np.arange(d) / d)
    cdef double[::1] ct = ctab, st = stab
    mags_arr = np.zeros(max(T, 1), dtype=np.float64)
    cdef double[::1] mags = mags_arr
    M = np.zeros(L, dtype=np.float64)
    arg = np.zeros(L, dtype=np.int64)
    early = np.zeros(L, dtype=np.uint8)
    cdef double[::1] Mv = M
    cdef i64[::1] av = arg
    cdef u8[::1] ev = early
    cdef double re, im, m2, best, thr2 = threshold * threshold
    cdef long long ell, idx, am
    cdef Py_ssize_t stop
    with nogil:
        for k in range(L):
            ell = ((ells[k] % d) + d) % d
            re = 0.0
            im = 0.0
            best = 0.0
            stop = T
            for t in range(T):
                if a[t] >= 0:
                    idx = (ell * a[t]) % d
                    re += ct[idx]
                    im += st[idx]
                m2 = re * re + im * im
                mags[t] = m2
                if m2 > best:
                    best = m2
                if threshold > 0 and best >= thr2:
                    stop = t + 1
                    ev[k] = 1
                    break
            Mv[k] = sqrt(best)
            _argmax_within(&mags[0], stop, best, &am)
            av[k] = am
    return M, arg, early.astype(bool)


def prefix_max_batch(const i64[:, ::1] logs, const i64[:, ::1] weights, const i64[::1] orders, long long T):
    """M(chi) = max_{t<=T} |sum_{n<=t} chi(n)| for each character row; returns (M, argmax_t)."""
    cdef Py_ssize_t q = logs.shape[0], c = logs.shape[1], n = weights.shape[0], k, t, i, j
    cdef long long dmax = 1, d, a, am, r
    if orders.shape[0] != n:
        raise ValueError("one order per weight row required")
    for k in range(n):
        _check_shapes(c, weights.shape[1], orders[k])
        if orders[k] > dmax:
            dmax = orders[k]
    ct_arr = np.empty(dmax, dtype=np.float64)
    st_arr = np.empty(dmax, dtype=np.float64)
    cdef double[::1] ct = ct_arr, st = st_arr
    mags_arr = np.zeros(max(T, 1), dtype=np.float64)
    cdef double[::1] mags = mags_arr
    M = np.zeros(n, dtype=np.float64)
    arg = np.zeros(n, dtype=np.int64)
    cdef double[::1] Mv = M
    cdef i64[::1] av = arg
    cdef double re, im, m2, best
    with nogil:
        for k in range(n):
            d = orders[k]
            for j in range(d):
                ct[j] = cos(2.0 * M_PI * j / d)
                st[j] = sin(2.0 * M_PI * j / d)
            re = 0.0
            im = 0.0
            best = 0.0
            r = 0
            for t in range(T):
                r += 1
                if r == q:
                    r = 0
                if logs[r, 0] >= 0:
                    a = 0
                    for i in range(c):
                        a = (a + weights[k, i] * logs[r, i]) % d
                    re += ct[a]
                    im += st[a]
                m2 = re * re + im * im
                mags[t] = m2
                if m2 > best:
                    best = m2
            Mv[k] = sqrt(best)
            _argmax_within(&mags[0], T, best, &am)
            av[k] = am
    return M, arg


def multiplicative_exponents(const i32[::1] spf, const i64[::1] prime_exp, long long D, long long N):
    """Exponents of a completely multiplicative root-of-unity function on 0..N (-1 = zero)."""
    if spf.shape[0] <= N or prime_exp.shape[0] <= N:
        raise ValueError("spf and prime_exp must cover 0..N")
    out = np.empty(N + 1, dtype=np.int64)
    cdef i64[::1] o = out
    cdef long long n, p, u, v
    with nogil:
        o[0] = -1
        if N >= 1:
            o[1] = 0
        for n in range(2, N + 1):
            p = spf[n]
            if p == n:
                o[n] = prime_exp[n]
            else:
                u = o[p]
                v = o[n // p]
                if u < 0 or v < 0:
                    o[n] = -1
                else:
                    o[n] = (u + v) % D
    return out


def additive_counts(const i32[::1] spf, const u8[::1] flag, long long N):
    """Completely additive count: out[n] = number of prime factors p of n (with multiplicity) with flag[p]."""
    if spf.shape[0] <= N or flag.shape[0] <= N:
        raise ValueError("spf and flag must cover 0..N")
    out = np.zeros(N + 1, dtype=np.int64)
    cdef i64[::1] o = out
    cdef long long n, p
    with nogil:
        for n in range(2, N + 1):
            p = spf[n]
            o[n] = o[n // p] + flag[p]
    return out


def kahan_cumsum(const double[::1] x):
    """Compensated running sum."""
    cdef Py_ssize_t n = x.shape[0], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double s = 0.0, comp = 0.0, y, t
    with nogil:
        for i in range(n):
            y = x[i] - comp
            t = s + y
            comp = (t - s) - y
            s = t
            o[i] = s
    return out
