"""Short, maximal and logarithmic character sums, all powers at once.

Short sums for every power come from one pass of level counts c_j = #{n <= x : chi(n) = e(j/d)}
followed by S_l = sum_j c_j e(jl/d). Maximal sums use a prefix scan of the exponent sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import kernels
from .characters import DirichletCharacter, UnimodularMultiplicative

DIRECT_TRANSFORM_MAX = 512
DESK_LIMIT = 10**8

Multiplicative = DirichletCharacter | UnimodularMultiplicative


@dataclass(frozen=True)
class LevelCounts:
    d: int
    x: int
    counts: np.ndarray
    noncoprime_count: int

    @property
    def coprime_count(self) -> int:
        return int(self.counts.sum())

    def argmax(self) -> tuple[int, int]:
        j = int(np.argmax(self.counts))
        return int(self.counts[j]), j


@dataclass(frozen=True)
class SumsTable:
    d: int
    x: int
    values: np.ndarray  # complex, index l = 0..d-1

    def __getitem__(self, ell: int) -> complex:
        return complex(self.values[ell % self.d])

    @property
    def abs(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class MaxTable:
    d: int
    q: int
    values: np.ndarray  # M_l for l = 0..d-1
    argmax: np.ndarray  # smallest t attaining M_l
    early: np.ndarray = field(default=None)  # True where a threshold scan stopped early

    def __getitem__(self, ell: int) -> float:
        return float(self.values[ell % self.d])


@dataclass(frozen=True)
class LogSumSeries:
    label: str
    cutoffs: np.ndarray
    values: np.ndarray  # complex L(N) at each cutoff
    max_abs: float
    argmax: int


def cutoff(q: int, delta: float) -> int:
    """floor(q**delta) computed with 50 significant digits."""
    if not 0 < delta <= 1:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    with mpmath.workdps(50):
        return int(mpmath.floor(mpmath.power(mpmath.mpf(q), mpmath.mpf(delta))))


def _check_x(x: int) -> int:
    x = int(x)
    if not 1 <= x <= DESK_LIMIT:
        raise ValueError(f"x must satisfy 1 <= x <= {DESK_LIMIT}, got {x}")
    return x


def level_counts(f: Multiplicative, x: int) -> LevelCounts:
    """Exact counts of n <= x in each exponent class of f."""
    x = _check_x(x)
    if isinstance(f, DirichletCharacter):
        counts, nc = kernels.level_counts(f.group.log_matrix, f.weights, f.order, x)
    else:
        a = f.exponents_upto(x)[1:]
        nc = int((a < 0).sum())
        counts = np.bincount(a[a >= 0], minlength=f.order).astype(np.int64)
    counts.flags.writeable = False
    return LevelCounts(f.order, x, counts, int(nc))


def roots_of_unity(d: int) -> np.ndarray:
    k = np.arange(d)
    return np.cos(2 * np.pi * k / d) + 1j * np.sin(2 * np.pi * k / d)


def sums_all_powers(lc: LevelCounts) -> SumsTable:
    """S_l = sum_j c_j e(jl/d) for every l (direct for small d, FFT otherwise)."""
    d = lc.d
    c = lc.counts.astype(np.float64)
    if d <= DIRECT_TRANSFORM_MAX:
        j = np.arange(d)
        S = roots_of_unity(d)[np.outer(j, j) % d] @ c
    else:
        S = np.fft.ifft(c) * d
    # exact symmetry and exact l = 0 entry
    half = np.arange(1, (d + 1) // 2)
    S[d - half] = np.conj(S[half])
    if d % 2 == 0:
        S[d // 2] = S[d // 2].real
    S[0] = lc.coprime_count
    return SumsTable(d, lc.x, S)


def short_sums(f: Multiplicative, x: int) -> SumsTable:
    return sums_all_powers(level_counts(f, x))


def short_sum(f: Multiplicative, x: int, ell: int = 1) -> complex:
    """S_{f^l}(x) for one power, from the level counts of f."""
    lc = level_counts(f, x)
    w = roots_of_unity(lc.d)[(np.arange(lc.d) * ell) % lc.d]
    return complex(w @ lc.counts.astype(np.float64))


def maximal_sums(
    chi: DirichletCharacter, ells=None, threshold: float = 0.0
) -> MaxTable:
    """M(chi^l) = max_{t <= q} |sum_{n <= t} chi^l(n)| for the requested l (default all).

    Only l <= d/2 is scanned; the rest follow from M_{d-l} = M_l. With a positive
    ``threshold`` a scan stops once the running maximum reaches it, so M is then only a
    lower bound (flagged in ``early``).
    """
    q, d = chi.modulus, chi.order
    if q > DESK_LIMIT:
        raise ValueError("modulus above desk limit")
    a = np.ascontiguousarray(chi.residue_exponents[np.arange(1, q + 1) % q])
    wanted = np.arange(d) if ells is None else np.unique(np.asarray(ells, dtype=np.int64) % d)
    reps = np.unique(np.minimum(wanted, (d - wanted) % d))
    M_r, t_r, e_r = kernels.prefix_max_powers(a, d, reps.astype(np.int64), float(threshold))
    M = np.full(d, np.nan)
    T = np.zeros(d, dtype=np.int64)
    E = np.zeros(d, dtype=bool)
    for ell, m, t, e in zip(reps.tolist(), M_r, t_r, e_r):
        for l2 in {ell, (d - ell) % d}:
            M[l2], T[l2], E[l2] = m, t, e
    return MaxTable(d, q, M, T, E)


def maximal_sum(chi: DirichletCharacter) -> tuple[float, int]:
    """(M(chi), smallest maximizing t)."""
    tab = maximal_sums(chi, [1])
    return tab[1], int(tab.argmax[1 % chi.order])


def log_partial_sums(f: Multiplicative, N: int) -> np.ndarray:
    """L_f(n) for n = 1..N (complex, compensated summation)."""
    a = f.exponents_upto(N)[1:]
    n = np.arange(1, N + 1, dtype=np.float64)
    w = roots_of_unity(f.order)
    vals = np.where(a >= 0, w[np.maximum(a, 0)], 0) / n
    re = kernels.kahan_cumsum(np.ascontiguousarray(vals.real))
    im = kernels.kahan_cumsum(np.ascontiguousarray(vals.imag))
    return re + 1j * im


def _first_max(mags: np.ndarray) -> int:
    if len(mags) == 0:
        return 0
    m = float(mags.max())
    return int(np.argmax(mags >= m - 1e-12 * max(1.0, m)))


def log_sums(f: Multiplicative, cutoffs) -> LogSumSeries:
    """L_f(N) at each requested N, with the smallest N maximizing |L_f(N)|."""
    Ns = np.unique(np.asarray(list(cutoffs), dtype=np.int64))
    if len(Ns) == 0 or Ns[0] < 1:
        raise ValueError("cutoffs must be positive integers")
    L = log_partial_sums(f, int(Ns[-1]))[Ns - 1]
    i = _first_max(np.abs(L))
    return LogSumSeries(getattr(f, "label", "f"), Ns, L, float(abs(L[i])), int(Ns[i]))


def log_sum_max(f: Multiplicative, N: int) -> tuple[float, int]:
    """max_{1 <= n <= N} |L_f(n)| and the smallest maximizer."""
    L = np.abs(log_partial_sums(f, N))
    i = _first_max(L)
    return float(L[i]), i + 1


def level_set_max(f: Multiplicative, x: int) -> tuple[int, int]:
    """M_{d,f}(x) = max_j c_j with the smallest witnessing j."""
    return level_counts(f, x).argmax()


def harmonic(N: int) -> float:
    return math.fsum(1.0 / n for n in range(1, N + 1))


def sums_rows(chi: DirichletCharacter, table: SumsTable) -> list[dict]:
    return [
        {"q": chi.modulus, "index": chi.index, "ell": ell,
         "re": float(v.real), "im": float(v.imag), "abs": float(abs(v))}
        for ell, v in enumerate(table.values)
    ]


def max_rows(chi: DirichletCharacter, table: MaxTable) -> list[dict]:
    return [
        {"q": chi.modulus, "index": chi.index, "ell": ell,
         "M": float(m), "argmax_t": int(t)}
        for ell, (m, t) in enumerate(zip(table.values, table.argmax))
    ]
