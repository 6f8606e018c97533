"""Brute-force enumeration of homomorphisms from a finitely presented group.

A homomorphism is stored as one image per generator.  Enumeration walks the
image tuples in lexicographic order: the leading generators are assigned in a
Python loop that prunes on relators already fully supported, the trailing
generators are handled as one numpy block.

Twisted-fixed membership uses ``phi(sigma(x)) = g phi(x) g^-1`` for all
generators.  Conjugating by ``g^-1`` turns this into ``phi(sigma^-1(y)) =
g^-1 phi(y) g``, the usual "fixed by sigma up to conjugation" condition, so
sigma never needs to be inverted.
"""

from __future__ import annotations

import multiprocessing
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, SigmaInconsistent, SizeMismatch
from .groups import FiniteGroup
from .presentations import AutomorphismData, Presentation, Word, semidirect_presentation

DEFAULT_BUDGET = 10**8
BLOCK_LIMIT = 1 << 16


def default_budget() -> int:
    env = os.environ.get("HOMCOUNT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class ClassConstraint:
    """Every word must map into conjugacy class ``class_id``."""

    words: tuple[Word, ...]
    class_id: int

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if not self.words:
            raise ValueError("a class constraint needs at least one word")


@dataclass
class HomSet:
    presentation: Presentation
    group: FiniteGroup
    count: int
    assignments: np.ndarray | None = None
    constraints: tuple[ClassConstraint, ...] = ()

    @property
    def stored(self) -> bool:
        return self.assignments is not None

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        if self.assignments is None:
            raise ValueError("count-only HomSet has no stored assignments")
        for row in self.assignments:
            yield tuple(int(v) for v in row)

    def __len__(self) -> int:
        return self.count

    def subset(self, mask: np.ndarray) -> "HomSet":
        rows = self.assignments[mask]
        return HomSet(self.presentation, self.group, len(rows), rows, self.constraints)


@dataclass(frozen=True)
class Orbit:
    representative: tuple[int, ...]
    size: int
    stabilizer_order: int


@dataclass
class OrbitDecomposition:
    orbits: list[Orbit]
    group_order: int

    @property
    def total(self) -> int:
        return sum(o.size for o in self.orbits)

    def __len__(self):
        return len(self.orbits)


@dataclass(frozen=True)
class Fiber:
    base: tuple[int, ...]
    size: int
    stabilizer_order: int
    twisted: bool


@dataclass
class TorsorReport:
    upstairs_count: int
    downstairs_count: int
    group_order: int
    fibers: list[Fiber]
    quotient: Fraction
    orbit_count: int
    fiber_sizes_match: bool
    support_matches_twisted: bool
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = (
            self.fiber_sizes_match
            and self.support_matches_twisted
            and self.quotient.denominator == 1
            and self.quotient == self.orbit_count
        )


# vectorised word evaluation ------------------------------------------------------


def evaluate_columns(word: Word, columns: Sequence, group: FiniteGroup, size: int | None = None) -> np.ndarray:
    """Evaluate ``word`` row-wise; ``columns[i]`` is an int or an index array."""
    acc = 0
    pending = 0  # product of a run of scalar letters, folded in lazily
    for a in word.letters:
        col = columns[abs(a) - 1]
        if isinstance(col, (int, np.integer)):
            val = int(col) if a > 0 else int(group.inverse[col])
            pending = group.mul(pending, val)
            continue
        if pending:
            acc = group.mul_vec(acc, pending)
            pending = 0
        acc = group.mul_vec(acc, col if a > 0 else group.inverse[col])
    if pending:
        acc = group.mul_vec(acc, pending) if not isinstance(acc, int) else group.mul(acc, pending)
    if isinstance(acc, int) and size is not None:
        return np.full(size, acc, dtype=np.int64)
    return acc


@dataclass(frozen=True)
class _Check:
    word: Word
    allowed: np.ndarray  # boolean mask over group elements
    level: int


def _checks(pres: Presentation, group: FiniteGroup, constraints: Sequence[ClassConstraint],
            skip: set[tuple[int, int]]):
    identity_only = np.zeros(group.order, dtype=bool)
    identity_only[0] = True
    out = []
    for r in pres.relators:
        out.append(_Check(r, identity_only, max(r.generators())))
    for ci, c in enumerate(constraints):
        in_class = group.class_of == c.class_id
        for wi, w in enumerate(c.words):
            if (ci, wi) in skip:
                continue
            if not len(w):
                out.append(_Check(w, in_class, -1))
            else:
                out.append(_Check(w, in_class, max(w.generators())))
    return out


def _domains(pres: Presentation, group: FiniteGroup, constraints: Sequence[ClassConstraint]):
    """Candidate images per generator; single-letter constraints shrink them."""
    k = pres.generator_count
    allowed = [np.ones(group.order, dtype=bool) for _ in range(k)]
    skip = set()
    for ci, c in enumerate(constraints):
        members = np.zeros(group.order, dtype=bool)
        members[list(group.classes[c.class_id].members)] = True
        for wi, w in enumerate(c.words):
            if len(w.letters) == 1:
                a = w.letters[0]
                mask = members if a > 0 else members[group.inverse]
                allowed[abs(a) - 1] &= mask
                skip.add((ci, wi))
    return [np.flatnonzero(m) for m in allowed], skip


def enumeration_cost(pres: Presentation, group: FiniteGroup,
                     constraints: Sequence[ClassConstraint] = ()) -> int:
    """Relator-letter evaluations: (search space size) x (total checked word length)."""
    domains, _ = _domains(pres, group, constraints)
    space = 1
    for d in domains:
        space *= len(d)
    letters = sum(len(r) for r in pres.relators)
    letters += sum(len(w) for c in constraints for w in c.words)
    return space * max(1, letters)


class _Enumerator:
    def __init__(self, pres, group, constraints, store):
        self.pres = pres
        self.group = group
        self.store = store
        self.k = pres.generator_count
        self.domains, skip = _domains(pres, group, constraints)
        checks = _checks(pres, group, constraints, skip)
        # vectorise the trailing generators while the block stays small
        split = self.k
        block = 1
        while split > 0 and (split == self.k or block * len(self.domains[split - 1]) <= BLOCK_LIMIT):
            block *= len(self.domains[split - 1])
            split -= 1
        self.split = split
        self.prefix_checks = [[c for c in checks if c.level == j] for j in range(split)]
        self.block_checks = [c for c in checks if c.level >= split]
        self.static_ok = all(c.allowed[0] for c in checks if c.level < 0)
        if self.k:
            grids = np.indices([len(d) for d in self.domains[split:]]).reshape(self.k - split, -1)
            self.block_cols = [self.domains[split + i][grids[i]] for i in range(self.k - split)]
            self.block_size = grids.shape[1]
        else:
            self.block_cols, self.block_size = [], 1

    def run(self, first_values=None):
        """Enumerate; ``first_values`` restricts generator 0 when it is a prefix generator."""
        count = 0
        chunks = []
        if not self.static_ok:
            return 0, chunks
        if self.k == 0:
            return 1, [np.zeros((1, 0), dtype=np.int64)]
        prefix = [0] * self.split

        def block():
            cols = list(prefix) + self.block_cols
            rows = np.arange(self.block_size)
            for c in self.block_checks:
                sub = [col if isinstance(col, int) else col[rows] for col in cols]
                val = evaluate_columns(c.word, sub, self.group, len(rows))
                rows = rows[c.allowed[val]]
                if not len(rows):
                    return 0, None
            if not self.store:
                return len(rows), None
            out = np.empty((len(rows), self.k), dtype=np.int64)
            out[:, :self.split] = prefix
            for i, col in enumerate(self.block_cols):
                out[:, self.split + i] = col[rows]
            return len(rows), out

        def walk(level):
            nonlocal count
            if level == self.split:
                n, rows = block()
                count += n
                if rows is not None:
                    chunks.append(rows)
                return
            values = self.domains[level]
            if level == 0 and first_values is not None:
                values = first_values
            for v in values:
                prefix[level] = int(v)
                if all(c.allowed[_eval_scalar(c.word, prefix, self.group)]
                       for c in self.prefix_checks[level]):
                    walk(level + 1)

        walk(0)
        return count, chunks


def _eval_scalar(word: Word, prefix, group: FiniteGroup) -> int:
    x = 0
    for a in word.letters:
        g = prefix[abs(a) - 1]
        x = group.mul(x, g if a > 0 else int(group.inverse[g]))
    return x


_WORKER_STATE: _Enumerator | None = None


def _worker(values):
    return _WORKER_STATE.run(values)


def _enumerate(pres, group, constraints, budget, store, workers) -> HomSet:
    budget = default_budget() if budget is None else budget
    cost = enumeration_cost(pres, group, constraints)
    if cost > budget:
        raise BudgetExceeded(cost, budget)
    enum = _Enumerator(pres, group, constraints, store)
    if workers > 1 and enum.split > 0 and len(enum.domains[0]) > 1:
        global _WORKER_STATE
        _WORKER_STATE = enum
        parts = np.array_split(enum.domains[0], min(workers, len(enum.domains[0])))
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(workers) as pool:
            results = pool.map(_worker, parts)
        _WORKER_STATE = None
    else:
        results = [enum.run()]
    count = sum(n for n, _ in results)
    assignments = None
    if store:
        chunks = [c for _, cs in results for c in cs]
        assignments = (np.concatenate(chunks) if chunks
                       else np.zeros((0, pres.generator_count), dtype=np.int64))
    return HomSet(pres, group, count, assignments, tuple(constraints))


def enumerate_homs(pres: Presentation, group: FiniteGroup, budget: int | None = None,
                   store: bool = True, workers: int = 1) -> HomSet:
    """All image tuples killing every relator, in lexicographic order."""
    return _enumerate(pres, group, (), budget, store, workers)


def enumerate_constrained(pres: Presentation, group: FiniteGroup,
                          constraints: Sequence[ClassConstraint], budget: int | None = None,
                          store: bool = True, workers: int = 1) -> HomSet:
    """Homomorphisms sending every constraint word into its prescribed class."""
    for c in constraints:
        if not 0 <= c.class_id < len(group.classes):
            raise ValueError(f"class id {c.class_id} out of range")
        for w in c.words:
            if any(abs(a) > pres.generator_count for a in w.letters):
                raise SizeMismatch("constraint word uses an unknown generator")
    return _enumerate(pres, group, tuple(constraints), budget, store, workers)


def count_homs(pres, group, budget=None, workers=1) -> int:
    return enumerate_homs(pres, group, budget, store=False, workers=workers).count


# orbits ---------------------------------------------------------------------------


def stabilizer_orders(rows: np.ndarray, group: FiniteGroup) -> np.ndarray:
    """``|{g : g phi g^-1 = phi}|`` for every row."""
    out = np.zeros(len(rows), dtype=np.int64)
    for g in range(group.order):
        out += (group.conjugate_vec(g, rows) == rows).all(axis=1)
    return out


def orbit_decomposition(homs: HomSet) -> OrbitDecomposition:
    """Orbits of pointwise conjugation, in order of first appearance."""
    if not homs.stored:
        raise ValueError("orbit decomposition needs stored assignments")
    group = homs.group
    rows = homs.assignments
    index = {tuple(r): i for i, r in enumerate(rows.tolist())}
    seen = np.zeros(len(rows), dtype=bool)
    everyone = np.arange(group.order)[:, None]
    orbits = []
    for i, row in enumerate(rows):
        if seen[i]:
            continue
        images = group.conjugate_vec(everyone, row[None, :]) if rows.shape[1] else np.zeros((group.order, 0), dtype=np.int64)
        stab = int((images == row).all(axis=1).sum())
        members = {tuple(r) for r in images.tolist()}
        for m in members:
            j = index.get(m)
            if j is None:
                raise ValueError("HomSet is not closed under conjugation")
            seen[j] = True
        if len(members) * stab != group.order:
            raise AssertionError("orbit-stabilizer identity failed")
        orbits.append(Orbit(tuple(int(v) for v in row), len(members), stab))
    return OrbitDecomposition(orbits, group.order)


# twisted fixed points and torsors ----------------------------------------------------


def sigma_images(rows: np.ndarray, sigma: AutomorphismData, group: FiniteGroup) -> np.ndarray:
    """Row-wise ``phi(sigma(x_i))`` for every generator ``x_i``."""
    cols = [rows[:, i] for i in range(rows.shape[1])]
    out = np.empty_like(rows)
    for i, w in enumerate(sigma.images):
        out[:, i] = evaluate_columns(w, cols, group, len(rows))
    return out


def _twisted_mask(rows, sigma, group) -> np.ndarray:
    if rows.shape[1] == 0:
        return np.ones(len(rows), dtype=bool)
    target = sigma_images(rows, sigma, group)
    hit = np.zeros(len(rows), dtype=bool)
    for g in range(group.order):
        todo = ~hit
        if not todo.any():
            break
        hit[todo] = (group.conjugate_vec(g, rows[todo]) == target[todo]).all(axis=1)
    return hit


def twisted_fixed_subset(homs: HomSet, sigma: AutomorphismData, group: FiniteGroup) -> HomSet:
    """Homs ``phi`` with some ``g`` satisfying ``phi(sigma(x)) = g phi(x) g^-1`` on generators."""
    if len(sigma.images) != homs.presentation.generator_count:
        raise SizeMismatch("sigma does not match the presentation")
    return homs.subset(_twisted_mask(homs.assignments, sigma, group))


def constraint_mask(rows: np.ndarray, constraints: Sequence[ClassConstraint],
                    group: FiniteGroup) -> np.ndarray:
    mask = np.ones(len(rows), dtype=bool)
    cols = [rows[:, i] for i in range(rows.shape[1])]
    for c in constraints:
        for w in c.words:
            mask &= group.class_of[evaluate_columns(w, cols, group, len(rows))] == c.class_id
    return mask


def verify_torsor(pres: Presentation, sigma: AutomorphismData, group: FiniteGroup,
                  constraints: Sequence[ClassConstraint] | None = None,
                  budget: int | None = None, workers: int = 1) -> TorsorReport:
    """Check that restriction Hom(P x| Z, G) -> Hom_sigma(P, G) is a torsor.

    Fibers must have the size of the base point's stabilizer, the non-empty
    fibers must sit exactly over the twisted fixed set, and the upstairs count
    divided by ``|G|`` must equal the number of twisted orbits.
    """
    constraints = tuple(constraints or ())
    k = pres.generator_count
    for c in constraints:
        for w in c.words:
            if any(abs(a) > k for a in w.letters):
                raise SizeMismatch("constraint words must avoid the mapping-torus generator")
    total = semidirect_presentation(pres, sigma)
    budget = default_budget() if budget is None else budget
    for p, cs in ((pres, ()), (total, constraints)):
        cost = enumeration_cost(p, group, cs)
        if cost > budget:
            raise BudgetExceeded(cost, budget)

    down = enumerate_homs(pres, group, budget, workers=workers)
    pulled = sigma_images(down.assignments, sigma, group)
    for r in pres.relators:
        cols = [pulled[:, i] for i in range(k)]
        if len(pulled) and (evaluate_columns(r, cols, group, len(pulled)) != 0).any():
            raise SigmaInconsistent(f"phi o sigma fails to kill a relator in {group.name}")

    up = enumerate_constrained(total, group, constraints, budget, workers=workers)
    down = down.subset(constraint_mask(down.assignments, constraints, group))
    twisted_mask = _twisted_mask(down.assignments, sigma, group)
    twisted = down.subset(twisted_mask)

    fiber_size: dict[tuple, int] = {}
    for row in up.assignments[:, :k].tolist():
        key = tuple(row)
        fiber_size[key] = fiber_size.get(key, 0) + 1
    stabs = stabilizer_orders(down.assignments, group)
    fibers = []
    for row, stab, tw in zip(down.assignments.tolist(), stabs.tolist(), twisted_mask.tolist()):
        fibers.append(Fiber(tuple(row), fiber_size.pop(tuple(row), 0), stab, tw))
    # anything left over restricts outside the constrained hom set
    stray = bool(fiber_size)

    orbits = orbit_decomposition(twisted)
    return TorsorReport(
        upstairs_count=up.count,
        downstairs_count=down.count,
        group_order=group.order,
        fibers=fibers,
        quotient=Fraction(up.count, group.order),
        orbit_count=len(orbits),
        fiber_sizes_match=all(f.size in (0, f.stabilizer_order) for f in fibers) and not stray,
        support_matches_twisted=all((f.size > 0) == f.twisted for f in fibers) and not stray,
    )
