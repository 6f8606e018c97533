"""Character-sum counting formulas and closed forms for special families.

All arithmetic is exact.  A "table" is either a symmetric-group
:class:`~homcount.symchar.CharacterTable` or a :class:`LoadedCharacterTable`;
both expose ``order``, ``class_sizes``, ``values`` and ``degrees``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from . import symchar
from .errors import BudgetExceeded, NonIntegerResult, TableLoadError
from .groups import FiniteGroup, is_prime, power_class_map, symmetric_group
from .homs import default_budget, evaluate_columns
from .presentations import Word, gen


def _require_count(value: Fraction, what: str) -> int:
    if value.denominator != 1 or value < 0:
        raise NonIntegerResult(f"{what} = {value} is not a non-negative integer")
    return int(value)


# tables -----------------------------------------------------------------------------


@dataclass(frozen=True)
class LoadedCharacterTable:
    order: int
    class_sizes: tuple[int, ...]
    representative_orders: tuple[int, ...]
    power_maps: dict
    values: tuple[tuple[int, ...], ...]

    @property
    def identity_class(self) -> int:
        return self.representative_orders.index(1)

    @property
    def degrees(self) -> tuple[int, ...]:
        e = self.identity_class
        return tuple(row[e] for row in self.values)

    def power_map(self, m: int) -> tuple[int, ...]:
        return tuple(self.power_maps[m])

    def validate(self) -> None:
        n = len(self.class_sizes)
        if sum(self.class_sizes) != self.order:
            raise TableLoadError("class sizes do not sum to the group order")
        if len(self.representative_orders) != n or len(self.values) != n:
            raise TableLoadError("table must be square with one entry per class")
        if any(len(row) != n for row in self.values):
            raise TableLoadError("ragged values matrix")
        if self.representative_orders.count(1) != 1 or self.class_sizes[self.identity_class] != 1:
            raise TableLoadError("exactly one class must be the identity")
        if sum(d * d for d in self.degrees) != self.order:
            raise TableLoadError("squared degrees do not sum to the group order")
        for i in range(n):
            for j in range(n):
                s = sum(c * a * b for c, a, b in zip(self.class_sizes, self.values[i], self.values[j]))
                if s != (self.order if i == j else 0):
                    raise TableLoadError(f"rows {i} and {j} violate orthogonality")
        for m, pm in self.power_maps.items():
            if len(pm) != n or any(not 0 <= c < n for c in pm):
                raise TableLoadError(f"power map {m} is malformed")


def load_character_table(path) -> LoadedCharacterTable:
    """Read a JSON table ``{order, class_sizes, representative_orders, power_maps, values}``."""
    try:
        doc = json.loads(Path(path).read_text())
        table = LoadedCharacterTable(
            order=_as_int(doc["order"]),
            class_sizes=tuple(_as_int(v) for v in doc["class_sizes"]),
            representative_orders=tuple(_as_int(v) for v in doc["representative_orders"]),
            power_maps={int(m): tuple(_as_int(c) for c in pm)
                        for m, pm in doc.get("power_maps", {}).items()},
            values=tuple(tuple(_as_int(v) for v in row) for row in doc["values"]),
        )
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise TableLoadError(f"cannot load character table {path}: {exc}") from exc
    table.validate()
    return table


def _as_int(v) -> int:
    if isinstance(v, bool) or isinstance(v, float):
        raise ValueError(f"{v!r} is not an integer")
    return int(v)


def table_document(table) -> dict:
    """Serialisable form of a table (integers as decimal strings)."""
    n = len(table.class_sizes)
    if isinstance(table, symchar.CharacterTable):
        rep_orders = [math.lcm(*mu) if mu else 1 for mu in table.partitions]
        maps = {str(m): list(table.power_map(m)) for m in (2, 3)}
    else:
        rep_orders = list(table.representative_orders)
        maps = {str(m): list(pm) for m, pm in table.power_maps.items()}
    return {
        "order": str(table.order),
        "class_sizes": [str(s) for s in table.class_sizes],
        "representative_orders": [str(o) for o in rep_orders],
        "power_maps": {m: [str(c) for c in pm] for m, pm in maps.items()},
        "values": [[str(v) for v in row] for row in table.values[:n]],
    }


# character sums ------------------------------------------------------------------------


def commutator_count(table, g: int, z_class: int) -> int:
    """Number of ``(x1, y1, ..., xg, yg)`` with ``[x1,y1]...[xg,yg] = z``, z in ``z_class``."""
    if g < 0:
        raise ValueError("g must be non-negative")
    total = Fraction(0)
    for row, d in zip(table.values, table.degrees):
        total += Fraction(table.order, d) ** (2 * g - 1) * row[z_class]
    return _require_count(total, "commutator count")


def surface_count(table, g: int) -> int:
    """``#Hom(pi_1(surface of genus g), G) = |G| sum_chi (|G|/chi(1))^(2g-2)``."""
    if g < 1:
        raise ValueError("g must be positive")
    total = table.order * sum(Fraction(table.order, d) ** (2 * g - 2) for d in table.degrees)
    return _require_count(total, "surface count")


def f_chi(table, chi_index: int, class_id: int) -> Fraction:
    value = Fraction(table.class_sizes[class_id] * table.values[chi_index][class_id],
                     table.degrees[chi_index])
    if value.denominator != 1:
        raise NonIntegerResult(f"f_chi = {value} for an integer-valued table")
    return value


def constrained_count(table, classes: Sequence[int]) -> int:
    """Tuples ``(z1..zk)`` with ``zi`` in ``classes[i]`` and ``z1 z2 ... zk = 1``."""
    if not classes:
        raise ValueError("need at least one class")
    total = Fraction(0)
    for i, d in enumerate(table.degrees):
        term = Fraction(d * d, table.order)
        for c in classes:
            term *= f_chi(table, i, c)
        total += term
    return _require_count(total, "constrained count")


def ncycle_ratio(n: int, k: int) -> Fraction:
    """Constrained n-cycle count over ``n!`` for k factors, in closed form."""
    total = sum(((-1) ** r * math.factorial(r) * math.factorial(n - r - 1)) ** (k - 2)
                for r in range(n))
    return Fraction(total, n * n)


# SL2 over a prime field ------------------------------------------------------------------


@dataclass(frozen=True)
class EigenvalueTuple:
    p: int
    lambdas: tuple[int, int, int, int]

    def __post_init__(self):
        if not (self.p > 2 and is_prime(self.p)):
            raise ValueError("p must be an odd prime")
        lam = tuple(int(x) % self.p for x in self.lambdas)
        if len(lam) != 4 or any(x in (0, 1, self.p - 1) for x in lam):
            raise ValueError("need four eigenvalues outside {0, 1, -1}")
        object.__setattr__(self, "lambdas", lam)


def sl2_four_class_ratio(e: EigenvalueTuple) -> tuple[Fraction, int]:
    """Closed form of the 4-class constrained count over ``|SL2(p)|``, with ``a``."""
    p = e.p
    hits = 0
    for signs in product((1, -1), repeat=4):
        x = 1
        for lam, s in zip(e.lambdas, signs):
            x = x * pow(lam, s, p) % p
        hits += x == 1
    a = hits // 2
    return Fraction(p * p + 4 * p + 1) + a * Fraction(p * p, p - 1), a


def diagonal_class(group: FiniteGroup, lam: int) -> int:
    """Class id of ``diag(lam, lam^-1)`` in SL2(p)."""
    p = group.degree
    lam %= p
    return int(group.class_of[group.element(f"[[{lam},0],[0,{pow(lam, -1, p)}]]")])


def is_square_mod(m: int, p: int) -> bool:
    m %= p
    return m != 0 and pow(m, (p - 1) // 2, p) == 1


def sl2_m_stable_closed_form(p: int, m: int) -> int:
    """Number of classes C of SL2(p) with C^m = C, for even m."""
    if m % 2:
        raise ValueError("closed form needs even m")
    delta = 2 if is_square_mod(m, p) else 0
    s = sum(math.gcd(p + e1, m + e2) - 1 for e1 in (1, -1) for e2 in (1, -1))
    if s % 2:
        raise NonIntegerResult("odd gcd sum")
    return 1 + delta + s // 2


# word statistics on G x G ----------------------------------------------------------------


def word_class_histogram(group: FiniteGroup, w: Word, budget: int | None = None) -> np.ndarray:
    """How many ``(x, y)`` have ``w(x, y)`` in each conjugacy class."""
    budget = default_budget() if budget is None else budget
    cost = group.order ** 2 * max(1, len(w))
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    ys = np.arange(group.order)
    hist = np.zeros(len(group.classes), dtype=np.int64)
    for x in range(group.order):
        vals = evaluate_columns(w, [x, ys], group, group.order)
        hist += np.bincount(group.class_of[vals], minlength=len(group.classes))
    return hist


def word_solution_count(group: FiniteGroup, w: Word, budget: int | None = None) -> int:
    """Pairs ``(x, y)`` with ``w(x, y) = 1``."""
    return int(word_class_histogram(group, w, budget)[group.class_of[0]])


def s_chi(group: FiniteGroup, w: Word, chi: Sequence, budget: int | None = None,
          histogram: np.ndarray | None = None) -> Fraction:
    """``|G|^-2 sum_{x,y} chi(w(x, y))``; ``chi`` is indexed by the group's classes."""
    hist = word_class_histogram(group, w, budget) if histogram is None else histogram
    total = sum(int(h) * Fraction(v) for h, v in zip(hist, chi))
    return total / group.order ** 2


def symmetric_class_values(group: FiniteGroup, table: symchar.CharacterTable, row: int) -> list:
    """Re-index a character of S_n from partition order to the group's class order."""
    return [table.values[row][table.class_index(group.cycle_type(c.representative))]
            for c in group.classes]


def baumslag_solitar_word(m: int, n: int) -> Word:
    """``x^-m y x^n y^-1``."""
    return gen(0) ** -m * gen(1) * gen(0) ** n * gen(1).inverse()


@dataclass(frozen=True)
class BSRow:
    partition: tuple[int, ...]
    degree_times_s: Fraction
    adams_inner: Fraction

    @property
    def equal(self) -> bool:
        return self.degree_times_s == self.adams_inner


@dataclass
class BSReport:
    n_sym: int
    m: int
    n: int
    rows: list[BSRow]
    hom_count: int
    group_order: int

    @property
    def passed(self) -> bool:
        return all(r.equal and r.adams_inner.denominator == 1 for r in self.rows)


def bs_identity_check(n_sym: int, m: int, n: int, budget: int | None = None) -> BSReport:
    """Compare ``chi(1) s_chi(x^-m y x^n y^-1)`` with ``<Psi^m chi, Psi^n chi>`` on S_{n_sym}.

    The left side comes from a brute-force histogram over G x G, the right
    side from cycle-type power maps on the character table.
    """
    group = symmetric_group(n_sym)
    table = symchar.character_table(n_sym)
    w = baumslag_solitar_word(m, n)
    hist = word_class_histogram(group, w, budget)
    rows = []
    for i, lam in enumerate(table.partitions):
        chi = symmetric_class_values(group, table, i)
        lhs = table.degrees[i] * s_chi(group, w, chi, histogram=hist)
        character = table.character(i)
        rhs = symchar.inner_product(symchar.adams_transform(m, character),
                                    symchar.adams_transform(n, character))
        rows.append(BSRow(lam, lhs, rhs))
    return BSReport(n_sym, m, n, rows, int(hist[group.class_of[0]]), group.order)


def m_stable_class_count(group: FiniteGroup, m: int, budget: int | None = None) -> int:
    """Classes C with C^m = C, cross-checked against pairs with ``y x y^-1 = x^m``."""
    pmap = power_class_map(group, m)
    stable = sum(1 for c, d in pmap.items() if c == d)
    budget = default_budget() if budget is None else budget
    cost = group.order ** 2 * (abs(m) + 3)
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    ys = np.arange(group.order)
    powers = group.power_vec(ys, m)
    pairs = 0
    for x in range(group.order):
        pairs += int((group.conjugate_vec(ys, x) == powers[x]).sum())
    if pairs != stable * group.order:
        raise AssertionError(f"{pairs} solutions but {stable} stable classes in {group.name}")
    return stable
