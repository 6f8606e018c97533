"""Exact character theory of the symmetric groups.

Partitions index both irreducible characters and conjugacy classes (cycle
types).  They are listed in reverse lexicographic order, so ``(n,)`` comes
first and ``(1,)*n`` last.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import BoundExceeded, SizeMismatch

PARTITION_BOUND = 30

Partition = tuple  # weakly decreasing positive ints


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[Partition, ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int, bound: int = PARTITION_BOUND) -> list[Partition]:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > bound:
        raise BoundExceeded(f"n={n} exceeds partition bound {bound}")
    return list(_partitions(n, n))


def centralizer_size(mu: Partition) -> int:
    """``z_mu = prod i^{m_i} m_i!``; the class of type mu has n!/z_mu elements."""
    z = 1
    for part, mult in Counter(mu).items():
        z *= part ** mult * math.factorial(mult)
    return z


def hook_length_degree(lam: Partition) -> int:
    n = sum(lam)
    conj = conjugate(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // hooks


def conjugate(lam: Partition) -> Partition:
    return tuple(sum(1 for part in lam if part > j) for j in range(lam[0])) if lam else ()


# Murnaghan-Nakayama via beta-sets: removing a border strip of length r is
# moving one bead from position b to b - r; the height is the number of beads
# strictly between.


@lru_cache(maxsize=None)
def _mn(beads: frozenset, mu: tuple) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    total = 0
    for b in beads:
        target = b - r
        if target < 0 or target in beads:
            continue
        height = sum(1 for c in beads if target < c < b)
        total += (-1) ** height * _mn((beads - {b}) | {target}, rest)
    return total


def mn_character_value(lam: Partition, mu: Partition) -> int:
    """``chi_lam`` at a permutation of cycle type ``mu``."""
    lam, mu = tuple(lam), tuple(sorted(mu, reverse=True))
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|{lam}| != |{mu}|")
    k = len(lam)
    beads = frozenset(part + (k - 1 - i) for i, part in enumerate(lam))
    return _mn(beads, mu)


def power_cycle_type(mu: Partition, m: int) -> Partition:
    """Cycle type of ``x^m`` for ``x`` of type ``mu``: an l-cycle splits into gcd(l, m) cycles."""
    out = []
    for l in mu:
        d = math.gcd(l, m) if m else l
        out.extend([l // d] * d)
    return tuple(sorted(out, reverse=True))


@dataclass(frozen=True)
class CharacterTable:
    n: int
    partitions: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]  # values[lambda][mu]
    class_sizes: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.factorial(self.n)

    @property
    def degrees(self) -> tuple[int, ...]:
        ident = self.partitions.index((1,) * self.n) if self.n else 0
        return tuple(row[ident] for row in self.values)

    @property
    def identity_class(self) -> int:
        return self.partitions.index((1,) * self.n) if self.n else 0

    def class_index(self, mu: Partition) -> int:
        return self.partitions.index(tuple(sorted(mu, reverse=True)))

    def character(self, index: int) -> "ClassFunction":
        return ClassFunction(self.n, tuple(Fraction(v) for v in self.values[index]))

    def trivial(self) -> "ClassFunction":
        return self.character(self.partitions.index((self.n,)))

    def power_map(self, m: int) -> tuple[int, ...]:
        return tuple(self.class_index(power_cycle_type(mu, m)) for mu in self.partitions)


@lru_cache(maxsize=None)
def character_table(n: int, bound: int = PARTITION_BOUND) -> CharacterTable:
    parts = tuple(partitions(n, bound))
    values = tuple(tuple(mn_character_value(lam, mu) for mu in parts) for lam in parts)
    sizes = tuple(math.factorial(n) // centralizer_size(mu) for mu in parts)
    return CharacterTable(n, parts, values, sizes)


@dataclass(frozen=True)
class ClassFunction:
    """Exact rational values on the classes of S_n, in partition order."""

    n: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if len(self.values) != len(partitions(self.n)):
            raise SizeMismatch("class function length does not match the class count")

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values)


def adams_transform(m: int, chi: ClassFunction) -> ClassFunction:
    """``(Psi^m chi)(x) = chi(x^m)``."""
    table = character_table(chi.n)
    pmap = table.power_map(m)
    return ClassFunction(chi.n, tuple(chi.values[pmap[c]] for c in range(len(pmap))))


def inner_product(alpha: ClassFunction, beta: ClassFunction) -> Fraction:
    """``1/|G| sum_x alpha(x) beta(x)`` (values are rational, so no conjugation)."""
    if alpha.n != beta.n:
        raise SizeMismatch("class functions live on different groups")
    table = character_table(alpha.n)
    total = sum(s * a * b for s, a, b in zip(table.class_sizes, alpha.values, beta.values))
    return Fraction(total, table.order)


def class_function(n: int, values: Sequence) -> ClassFunction:
    return ClassFunction(n, tuple(values))
