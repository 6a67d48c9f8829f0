"""Large spectra of character powers, sumsets in Z/dZ and subgroup stabilization."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import (
    DirichletCharacter,
    UnimodularMultiplicative,
    enumerate_characters,
    pointwise_product,
)
from .pretentious import distances_all_powers
from .sums import maximal_sums, short_sums


@dataclass(frozen=True)
class SpectrumSet:
    d: int
    kind: str  # "cesaro" or "maximal"
    epsilon: float
    members: np.ndarray  # bool mask over Z/dZ
    threshold: float

    def __len__(self) -> int:
        return int(self.members.sum())

    def __contains__(self, ell: int) -> bool:
        return bool(self.members[ell % self.d])

    @property
    def elements(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    @property
    def nonzero(self) -> list[int]:
        return [e for e in self.elements if e != 0]


@dataclass(frozen=True)
class StabilizationReport:
    m: int
    H: np.ndarray
    g: int | None
    is_subgroup: bool
    containment: bool
    stabilized: bool

    @property
    def H_size(self) -> int:
        return int(self.H.sum())


def _symmetrize(mask: np.ndarray) -> np.ndarray:
    d = len(mask)
    neg = (-np.arange(d)) % d
    return mask | mask[neg]


def spectrum_cesaro(chi: DirichletCharacter, x: int, epsilon: float) -> SpectrumSet:
    """{l mod d : |S_{chi^l}(x)| >= eps x}, equality included."""
    tab = short_sums(chi, x)
    thr = epsilon * x
    mask = tab.abs >= thr - 1e-12 * max(1.0, float(x))
    return SpectrumSet(chi.order, "cesaro", epsilon, _symmetrize(mask), thr)


def spectrum_maximal(chi: DirichletCharacter, epsilon: float) -> SpectrumSet:
    """{l mod d : M(chi^l) >= eps sqrt(q) log q}, scanning each power only until it qualifies."""
    q = chi.modulus
    thr = epsilon * math.sqrt(q) * math.log(q)
    tab = maximal_sums(chi, threshold=thr)
    mask = tab.values >= thr - 1e-12 * max(1.0, thr)
    return SpectrumSet(chi.order, "maximal", epsilon, _symmetrize(mask), thr)


def _as_mask(S, d: int | None = None) -> np.ndarray:
    if isinstance(S, SpectrumSet):
        return S.members.copy()
    S = np.asarray(S)
    if S.dtype == bool:
        return S.copy()
    if d is None:
        raise ValueError("modulus d required for an element list")
    mask = np.zeros(d, dtype=bool)
    mask[S % d] = True
    return mask


def sumset(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Support of A + B in Z/dZ for boolean masks."""
    d = len(A)
    if A.sum() > B.sum():
        A, B = B, A
    elems = np.flatnonzero(A)
    if len(elems) * d <= 4_000_000:
        out = np.zeros(d, dtype=bool)
        for a in elems.tolist():
            out |= np.roll(B, a)
        return out
    conv = np.fft.irfft(np.fft.rfft(A.astype(float)) * np.fft.rfft(B.astype(float)), n=d)
    return conv > 0.5


def iterated_sumset(S, m: int, d: int | None = None) -> np.ndarray:
    """m-fold sumset {a_1 + ... + a_m mod d}."""
    base = _as_mask(S, d)
    if not base.any():
        raise ValueError("set must be nonempty")
    if m < 1:
        raise ValueError("m must be >= 1")
    cur = base
    for _ in range(m - 1):
        cur = sumset(cur, base)
    return cur


def stabilize(S, d: int | None = None) -> StabilizationReport:
    """Smallest m with (m+1)S = mS; reports H = mS, g = d/|H| and whether H is a subgroup."""
    base = _as_mask(S, d)
    d = len(base)
    if not np.array_equal(base, base[(-np.arange(d)) % d]):
        raise ValueError("not symmetric")
    if not base[0]:
        raise ValueError("0 must belong to the set")
    cur = base
    stabilized = False
    m = 1
    while m <= d:
        nxt = sumset(cur, base)
        if np.array_equal(nxt, cur):
            stabilized = True
            break
        cur = nxt
        m += 1
    H = cur
    is_subgroup = stabilized and np.array_equal(sumset(H, H), H)
    g = None
    if is_subgroup:
        g = d // int(H.sum())
        multiples = np.zeros(d, dtype=bool)
        multiples[::g] = True
        is_subgroup = bool(np.array_equal(multiples, H))
    return StabilizationReport(min(m, d), H, g, bool(is_subgroup), bool(np.all(H[base])), stabilized)


def discrepancy_count(j0: int, r: int, theta) -> int:
    """#{1 <= l <= r : ||j0 l / r|| <= theta}, exactly.

    With R = r / gcd(j0, r), j0 l mod r runs r/R times over the multiples of r/R, so the
    count is (r/R) * #{u mod R : ||u/R|| <= theta}.
    """
    if r < 1:
        raise ValueError("r must be positive")
    th = theta if isinstance(theta, Fraction) else Fraction(theta).limit_denominator(10**12)
    if th < 0:
        return 0
    R = r // math.gcd(j0, r)
    K = math.floor(th * R)
    return (r // R) * min(R, 2 * K + 1)


@dataclass(frozen=True)
class StructureRow:
    q: int
    index: int
    kind: str
    epsilon: float
    members_count: int
    hypothesis_met: bool
    m: int | None
    g: int | None
    H_size: int | None
    subset_ok: bool | None
    subgroup_ok: bool | None
    m_within: bool | None  # m <= eps^-2
    bound_lhs: float | None
    bound_rhs: float | None
    xi: dict | None = None

    @property
    def ratio(self) -> float | None:
        if self.bound_lhs is None or not self.bound_rhs:
            return None
        return self.bound_lhs / self.bound_rhs

    def as_row(self) -> dict:
        return {
            "q": self.q, "index": self.index, "kind": self.kind, "epsilon": self.epsilon,
            "members_count": self.members_count, "m": self.m, "g": self.g, "H_size": self.H_size,
            "bound_lhs": self.bound_lhs, "bound_rhs": self.bound_rhs, "ratio": self.ratio,
            "hypothesis_met": self.hypothesis_met, "subset_ok": self.subset_ok,
            "subgroup_ok": self.subgroup_ok, "m_within": self.m_within, "xi": self.xi,
        }


def _xi_candidates(r: int, conductor_bound: int) -> list[DirichletCharacter | None]:
    out: list[DirichletCharacter | None] = [None]  # the trivial character, conductor 1
    for k in range(3, conductor_bound + 1):
        for xi in enumerate_characters(k, primitive_only=True):
            if r % xi.order == 0:
                out.append(xi)
    return out


def structure_check(
    chi: DirichletCharacter,
    epsilon: float,
    kind: str = "cesaro",
    x: int | None = None,
    conductor_bound: int = 40,
) -> StructureRow:
    """Check the spectrum against its subgroup structure and the distance bound.

    cesaro: lhs = max_{1 <= l <= r} D(chi^{gl}, 1; x)^2 against 200 m^2 log(1/eps).
    maximal: lhs = min over xi of max_l D(chi^{gl}, xi^l; q)^2 against m^2 log(1/eps).
    """
    q, d = chi.modulus, chi.order
    if kind == "cesaro":
        if x is None:
            raise ValueError("x is required for the cesaro spectrum")
        spec = spectrum_cesaro(chi, x, epsilon)
        y = x
    elif kind == "maximal":
        spec = spectrum_maximal(chi, epsilon)
        y = q
    else:
        raise ValueError(f"unknown spectrum kind {kind!r}")
    n = len(spec)
    if n < epsilon * d:
        return StructureRow(q, chi.index, kind, epsilon, n, False, None, None, None, None, None, None, None, None)
    st = stabilize(spec.members)
    g = st.g
    subset_ok = g is not None and all(e % g == 0 for e in spec.elements)
    log_inv = math.log(1 / epsilon) if epsilon < 1 else 0.0
    xi_desc = None
    lhs = None
    if g is not None:
        r = d // g
        ells = np.arange(1, r + 1)
        if kind == "cesaro":
            dist = distances_all_powers(chi, y)
            lhs = float(dist[(g * ells) % d].max())
            rhs = 200 * st.m**2 * log_inv
        else:
            chig = UnimodularMultiplicative.from_character(chi.power(g), y)
            best = None
            for xi in _xi_candidates(r, conductor_bound):
                psi = chig if xi is None else pointwise_product(chig, xi, y)
                dist = distances_all_powers(psi, y)
                val = float(dist[ells % psi.order].max())
                if best is None or val < best[0] - 1e-12:
                    best = (val, xi)
            lhs = best[0]
            xi_desc = {"q": 1, "index": 0} if best[1] is None else {"q": best[1].modulus, "index": best[1].index}
            rhs = st.m**2 * log_inv
    else:
        rhs = None
    return StructureRow(
        q, chi.index, kind, epsilon, n, True, st.m, g, st.H_size, subset_ok, st.is_subgroup,
        st.m <= epsilon**-2, lhs, rhs, xi_desc,
    )
