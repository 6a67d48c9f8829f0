"""Dirichlet characters mod q with exact root-of-unity values.

A character is an exponent vector over the CRT decomposition of (Z/qZ)*: odd p^k gives
one cyclic factor of order phi(p^k), 4 gives one of order 2, 2^k (k >= 3) gives the
factors generated by -1 and 5. Values are stored as exponents a meaning e(a/D).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .arith import (
    DLOG_TABLE_LIMIT,
    FactoredInteger,
    discrete_log,
    dlog_table,
    factorize,
    lcm,
    primes_upto,
    spf_table,
    totient,
)


@dataclass(frozen=True)
class CharValue:
    """Either zero (``exponent is None``) or e(exponent / order)."""

    exponent: int | None
    order: int

    @classmethod
    def zero(cls, order: int) -> CharValue:
        return cls(None, order)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: CharValue) -> CharValue:
        D = lcm(self.order, other.order)
        if self.is_zero or other.is_zero:
            return CharValue(None, D)
        a = self.exponent * (D // self.order) + other.exponent * (D // other.order)
        return CharValue(a % D, D)

    def __complex__(self) -> complex:
        if self.exponent is None:
            return 0j
        return cmath.exp(2j * math.pi * self.exponent / self.order)

    def reduced(self) -> tuple[int, int] | None:
        """(a, D) in lowest terms, so equal roots of unity compare equal."""
        if self.exponent is None:
            return None
        g = math.gcd(self.exponent, self.order)
        return self.exponent // g, self.order // g


@dataclass(frozen=True)
class Component:
    modulus: int  # the prime power this factor lives in
    prime: int
    generator: int
    order: int


class CharacterGroup:
    """Dual of (Z/qZ)* in exponent-vector coordinates."""

    def __init__(self, q: int):
        q = int(q)
        if q < 3:
            raise ValueError(f"modulus must be >= 3, got {q}")
        self.q = q
        self.factored: FactoredInteger = factorize(q)
        comps: list[Component] = []
        self._tables: list[tuple[int, np.ndarray] | None] = []
        for p, k in self.factored.factors:
            pk = p**k
            if pk == 2:
                continue
            tab = dlog_table(pk) if pk <= DLOG_TABLE_LIMIT else None
            if p == 2 and k >= 3:
                gens, ords = (pk - 1, 5), (2, pk // 4)
            elif pk == 4:
                gens, ords = (3,), (2,)
            else:
                gens, ords = (tab.generators[0] if tab else _odd_generator(pk),), (totient(pk),)
            for i, (g, o) in enumerate(zip(gens, ords)):
                comps.append(Component(pk, p, g, o))
                self._tables.append((pk, tab.tables[i]) if tab else None)
        self.components: tuple[Component, ...] = tuple(comps)
        self.orders: tuple[int, ...] = tuple(c.order for c in comps)
        self.size = math.prod(self.orders)
        assert self.size == totient(q)

    def __repr__(self) -> str:
        return f"CharacterGroup(q={self.q}, orders={self.orders})"

    def __eq__(self, other) -> bool:
        return isinstance(other, CharacterGroup) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("CharacterGroup", self.q))

    def __reduce__(self):
        return (build_group, (self.q,))

    # -- logarithms ------------------------------------------------------
    def logs_of(self, n: int) -> tuple[int, ...] | None:
        """Exponent vector of n, or None when gcd(n, q) > 1."""
        if math.gcd(n, self.q) != 1:
            return None
        out = []
        for comp, tab in zip(self.components, self._tables):
            r = n % comp.modulus
            if tab is not None:
                out.append(int(tab[1][r]))
            elif comp.prime == 2:  # pragma: no cover - 2-adic moduli above the table limit
                raise NotImplementedError("2-adic components above the table limit")
            else:
                out.append(discrete_log(comp.generator, r, comp.modulus))
        return tuple(out)

    @cached_property
    def log_matrix(self) -> np.ndarray:
        """(q, c) int64 array of exponent vectors of residues 0..q-1; rows of -1 where not coprime."""
        if any(t is None for t in self._tables):
            raise MemoryError("log matrix requires every prime-power factor within the table limit")
        r = np.arange(self.q)
        cols = [tab[1][r % tab[0]] for tab in self._tables]
        mat = np.stack(cols, axis=1).astype(np.int64)
        bad = np.gcd(r, self.q) != 1
        mat[bad] = -1
        mat.flags.writeable = False
        return np.ascontiguousarray(mat)

    # -- indexing --------------------------------------------------------
    def exponents_of_index(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(f"character index {index} out of range for q={self.q}")
        out = []
        for o in reversed(self.orders):
            index, e = divmod(index, o)
            out.append(e)
        return tuple(reversed(out))

    def index_of(self, exponents: tuple[int, ...]) -> int:
        idx = 0
        for e, o in zip(exponents, self.orders):
            idx = idx * o + e
        return idx

    def character(self, index: int) -> DirichletCharacter:
        return DirichletCharacter(self, self.exponents_of_index(index))

    def principal(self) -> DirichletCharacter:
        return DirichletCharacter(self, (0,) * len(self.orders))

    @cached_property
    def exponent_matrix(self) -> np.ndarray:
        """All exponent vectors in lexicographic (= index) order, shape (phi(q), c)."""
        grids = np.indices(self.orders).reshape(len(self.orders), -1).T
        return np.ascontiguousarray(grids.astype(np.int64))

    @cached_property
    def character_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(orders, conductors) for every character index."""
        E = self.exponent_matrix
        n = E.shape[0]
        orders = np.ones(n, dtype=np.int64)
        conductors = np.ones(n, dtype=np.int64)
        comp_orders = []
        for i, comp in enumerate(self.components):
            o = comp.order
            local = o // np.gcd(E[:, i], o)
            comp_orders.append(local)
            orders = np.lcm(orders, local)
        i = 0
        while i < len(self.components):
            comp = self.components[i]
            p = comp.prime
            if p == 2 and i + 1 < len(self.components) and self.components[i + 1].modulus == comp.modulus:
                sign, five = comp_orders[i], comp_orders[i + 1]
                s = np.log2(five).round().astype(np.int64)
                f = np.where(s >= 1, 2 ** (s + 2), np.where(sign > 1, 4, 1))
                i += 2
            else:
                local = comp_orders[i]
                if p == 2:  # modulus 4
                    f = np.where(local > 1, 4, 1)
                else:
                    vp = np.zeros(n, dtype=np.int64)
                    t = local.copy()
                    while True:
                        m = (t % p == 0) & (t > 1)
                        if not m.any():
                            break
                        vp[m] += 1
                        t[m] //= p
                    f = np.where(local > 1, p ** (1 + vp), 1)
                i += 1
            conductors *= f
        return orders, conductors

    def weight_matrix(self, exponents: np.ndarray, orders: np.ndarray) -> np.ndarray:
        """Rows w with chi(n) = e(sum_i w_i log_i(n) / d)."""
        comp = np.asarray(self.orders, dtype=np.int64)
        return np.ascontiguousarray((orders[:, None] * exponents) // comp[None, :])


def _odd_generator(pk: int) -> int:
    from .arith import primitive_root

    return primitive_root(pk)


_GROUPS: dict[int, CharacterGroup] = {}


def build_group(q: int) -> CharacterGroup:
    q = int(q)
    g = _GROUPS.get(q)
    if g is None:
        g = CharacterGroup(q)
        if len(_GROUPS) > 256:
            _GROUPS.clear()
        _GROUPS[q] = g
    return g


class DirichletCharacter:
    """A character mod q given by its exponent vector."""

    __slots__ = ("group", "exponents", "order", "__dict__")

    def __init__(self, group: CharacterGroup, exponents: tuple[int, ...]):
        if len(exponents) != len(group.orders):
            raise ValueError("exponent vector length does not match the group")
        self.group = group
        self.exponents = tuple(int(e) % o for e, o in zip(exponents, group.orders))
        self.order = lcm(*(o // math.gcd(o, e) for e, o in zip(self.exponents, group.orders)))

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, index={self.index}, order={self.order})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and other.group.q == self.group.q
            and other.exponents == self.exponents
        )

    def __hash__(self) -> int:
        return hash((self.group.q, self.exponents))

    def __reduce__(self):
        return (_rebuild_character, (self.group.q, self.exponents))

    @property
    def modulus(self) -> int:
        return self.group.q

    @property
    def index(self) -> int:
        return self.group.index_of(self.exponents)

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def conductor(self) -> int:
        f = 1
        comps = self.group.components
        i = 0
        while i < len(comps):
            c = comps[i]
            local = c.order // math.gcd(c.order, self.exponents[i])
            if c.prime == 2 and i + 1 < len(comps) and comps[i + 1].modulus == c.modulus:
                nxt = comps[i + 1]
                five = nxt.order // math.gcd(nxt.order, self.exponents[i + 1])
                s = five.bit_length() - 1
                f *= 2 ** (s + 2) if s >= 1 else (4 if local > 1 else 1)
                i += 2
                continue
            if local > 1:
                if c.prime == 2:
                    f *= 4
                else:
                    v = 0
                    while local % c.prime == 0:
                        local //= c.prime
                        v += 1
                    f *= c.prime ** (1 + v)
            i += 1
        return f

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @cached_property
    def weights(self) -> np.ndarray:
        return np.array(
            [self.order * e // o for e, o in zip(self.exponents, self.group.orders)], dtype=np.int64
        )

    def exponent(self, n: int) -> int:
        """Exponent a with chi(n) = e(a/d), or -1 when gcd(n, q) > 1."""
        logs = self.group.logs_of(int(n))
        if logs is None:
            return -1
        return int(sum(int(w) * l for w, l in zip(self.weights, logs)) % self.order)

    def __call__(self, n: int) -> CharValue:
        a = self.exponent(n)
        return CharValue(None if a < 0 else a, self.order)

    @cached_property
    def residue_exponents(self) -> np.ndarray:
        """Exponent on residues 0..q-1 (-1 where not coprime)."""
        out = kernels.residue_exponents(self.group.log_matrix, self.weights, self.order)
        out.flags.writeable = False
        return out

    def exponents_upto(self, N: int) -> np.ndarray:
        """Exponents at n = 0..N (index n), -1 at non-coprime n."""
        return self.residue_exponents[np.arange(N + 1) % self.modulus]

    def prime_exponents(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if self.modulus <= DLOG_TABLE_LIMIT:
            return self.residue_exponents[primes % self.modulus]
        return np.array([self.exponent(int(p)) for p in primes], dtype=np.int64)

    def power(self, ell: int) -> DirichletCharacter:
        return DirichletCharacter(self.group, tuple(e * ell for e in self.exponents))

    def conj(self) -> DirichletCharacter:
        return self.power(-1)

    def descriptor(self) -> dict:
        return {
            "q": self.modulus,
            "index": self.index,
            "exponent_vector": list(self.exponents),
            "order": self.order,
            "conductor": self.conductor,
        }

    @property
    def label(self) -> str:
        return f"chi[{self.modulus},{self.index}]"

    @property
    def cache_key(self) -> tuple:
        return ("chi", self.modulus, self.exponents)


def _rebuild_character(q: int, exponents: tuple[int, ...]) -> DirichletCharacter:
    return DirichletCharacter(build_group(q), exponents)


class UnimodularMultiplicative:
    """Completely multiplicative function with values 0 or D-th roots of unity.

    Prime values are stored up to ``limit``; ``prime_exp[p]`` is the exponent at the prime
    p (-1 for zero). Entries at composite indices are ignored.
    """

    def __init__(self, order: int, prime_exp: np.ndarray, label: str = "f"):
        self.order = int(order)
        self.prime_exp = np.asarray(prime_exp, dtype=np.int64)
        self.limit = len(self.prime_exp) - 1
        self.label = label

    def __repr__(self) -> str:
        return f"UnimodularMultiplicative({self.label}, D={self.order}, limit={self.limit})"

    @property
    def cache_key(self) -> tuple:
        return ("um", id(self))

    @classmethod
    def one(cls, limit: int) -> UnimodularMultiplicative:
        return cls(1, np.zeros(limit + 1, dtype=np.int64), "1")

    @classmethod
    def from_character(cls, chi: DirichletCharacter, limit: int) -> UnimodularMultiplicative:
        exp = np.full(limit + 1, -1, dtype=np.int64)
        p = primes_upto(limit)
        exp[p] = chi.prime_exponents(p)
        return cls(chi.order, exp, chi.label)

    def _check(self, N: int) -> None:
        if N > self.limit:
            raise ValueError(f"{self.label} is only defined up to {self.limit}, requested {N}")

    def prime_exponents(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if len(primes):
            self._check(int(primes.max()))
        return self.prime_exp[primes]

    def exponents_upto(self, N: int) -> np.ndarray:
        self._check(N)
        return kernels.multiplicative_exponents(spf_table(self.limit), self.prime_exp, self.order, N)

    def exponent(self, n: int) -> int:
        self._check(n)
        a = 0
        spf = spf_table(self.limit)
        while n > 1:
            p = int(spf[n])
            e = int(self.prime_exp[p])
            if e < 0:
                return -1
            a += e
            n //= p
        return a % self.order

    def __call__(self, n: int) -> CharValue:
        a = self.exponent(n)
        return CharValue(None if a < 0 else a, self.order)

    def power(self, ell: int) -> UnimodularMultiplicative:
        exp = np.where(self.prime_exp < 0, -1, (self.prime_exp * ell) % self.order)
        return UnimodularMultiplicative(self.order, exp, f"{self.label}^{ell}")


def enumerate_characters(q: int, order: int | None = None, primitive_only: bool = False) -> list[DirichletCharacter]:
    """All characters mod q matching the filters, in index order."""
    G = build_group(q)
    orders, conductors = G.character_table
    mask = np.ones(len(orders), dtype=bool)
    if order is not None:
        mask &= orders == order
    if primitive_only:
        mask &= conductors == q
    return [G.character(int(i)) for i in np.flatnonzero(mask)]


def evaluate(chi: DirichletCharacter | UnimodularMultiplicative, n: int) -> CharValue:
    return chi(n)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def power(chi, ell: int):
    return chi.power(ell)


def pointwise_product(
    chi: DirichletCharacter | UnimodularMultiplicative,
    xi: DirichletCharacter | UnimodularMultiplicative,
    limit: int,
    conjugate: bool = True,
) -> UnimodularMultiplicative:
    """chi * conj(xi) (or chi * xi) on primes <= limit, carrier order lcm of the two orders."""
    D = lcm(chi.order, xi.order)
    p = primes_upto(limit)
    a = chi.prime_exponents(p)
    b = xi.prime_exponents(p)
    sign = -1 if conjugate else 1
    val = (a * (D // chi.order) + sign * b * (D // xi.order)) % D
    val[(a < 0) | (b < 0)] = -1
    exp = np.full(limit + 1, -1, dtype=np.int64)
    exp[p] = val
    star = "conj " if conjugate else ""
    return UnimodularMultiplicative(D, exp, f"{chi.label}*{star}{xi.label}")
