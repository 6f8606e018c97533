"""Concrete finite groups on dense element indices.

Every group stores its elements as indices ``0..order-1`` with the identity at
index 0.  Small groups carry a full multiplication table; larger ones multiply
on the fly from a coordinate representation (permutation images, matrix
entries), vectorised with numpy.

Permutations compose left to right: ``mul(f, g)`` applies ``f`` first, then
``g``, so as image arrays ``(f*g)[i] = g[f[i]]``.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import CayleyValidationFailed, InvalidSpec

TABLE_BOUND = 2048
ASSOCIATIVITY_BOUND = 512

_KINDS = ("symmetric", "cyclic", "sl2", "psl2", "cayley")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    param: int | None = None
    path: str | None = None

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``S<n> | C<n> | SL2_<p> | PSL2_<p> | cayley:<path>``."""
        text = text.strip()
        if text.startswith("cayley:"):
            return cls("cayley", path=text[len("cayley:"):])
        m = re.fullmatch(r"(PSL2_|SL2_|S|C)(\d+)", text)
        if m is None:
            raise InvalidSpec(f"unrecognised group spec {text!r}")
        kind = {"S": "symmetric", "C": "cyclic", "SL2_": "sl2", "PSL2_": "psl2"}[m.group(1)]
        return cls(kind, int(m.group(2)))

    def validate(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidSpec(f"unknown group kind {self.kind!r}")
        if self.kind == "cayley":
            if not self.path:
                raise InvalidSpec("cayley spec needs a path")
            return
        if self.param is None or self.param < 1:
            raise InvalidSpec(f"{self.kind} needs a positive parameter")
        if self.kind in ("sl2", "psl2") and not (self.param > 2 and is_prime(self.param)):
            raise InvalidSpec(f"{self.kind} needs an odd prime, got {self.param}")

    def __str__(self) -> str:
        if self.kind == "cayley":
            return f"cayley:{self.path}"
        prefix = {"symmetric": "S", "cyclic": "C", "sl2": "SL2_", "psl2": "PSL2_"}[self.kind]
        return f"{prefix}{self.param}"


@dataclass(frozen=True)
class ConjugacyClass:
    id: int
    representative: int
    size: int
    members: tuple[int, ...]
    centralizer_order: int


class FiniteGroup:
    """A finite group on indices ``0..order-1`` (identity = 0).

    Build instances with :func:`build_group`, :meth:`from_table` or
    :meth:`from_coordinates`; the constructor itself does no validation.
    """

    identity = 0

    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        inverse: np.ndarray,
        table: np.ndarray | None = None,
        coords: np.ndarray | None = None,
        product: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
        key: Callable[[np.ndarray], np.ndarray] | None = None,
        kind: str = "cayley",
        degree: int | None = None,
    ):
        self.name = name
        self.labels = tuple(labels)
        self.order = len(self.labels)
        self.inverse = inverse
        self.table = table
        self.coords = coords
        self._product = product
        self._key = key
        self.kind = kind
        self.degree = degree
        if coords is not None:
            keys = key(coords)
            self._key_order = np.argsort(keys, kind="stable")
            self._sorted_keys = keys[self._key_order]
        self._label_index = {_squash(lab): i for i, lab in enumerate(self.labels)}

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    # construction -----------------------------------------------------------

    @classmethod
    def from_table(cls, table, labels=None, name="cayley", validate=True,
                   check_associativity=None) -> "FiniteGroup":
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise CayleyValidationFailed("multiplication table must be square and nonempty")
        if table.min() < 0 or table.max() >= n:
            raise CayleyValidationFailed("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
            raise CayleyValidationFailed("element 0 is not a two-sided identity")
        hits = table == 0
        if not (hits.sum(axis=1) == 1).all():
            raise CayleyValidationFailed("some element lacks a unique right inverse")
        inverse = hits.argmax(axis=1)
        if not (table[inverse, ar] == 0).all():
            raise CayleyValidationFailed("left and right inverses disagree")
        labels = labels if labels is not None else [str(i) for i in range(n)]
        group = cls(name, labels, inverse, table=table)
        if validate:
            if check_associativity is None:
                check_associativity = n <= ASSOCIATIVITY_BOUND
            if check_associativity and not group.is_associative():
                raise CayleyValidationFailed("multiplication is not associative")
        return group

    @classmethod
    def from_coordinates(cls, coords, product, invert, key, label, name, kind,
                         degree=None, table_bound=TABLE_BOUND) -> "FiniteGroup":
        """Group from an ``(order, d)`` coordinate array whose row 0 is the identity.

        ``product``/``invert``/``key`` act on stacked coordinate arrays.
        """
        coords = np.ascontiguousarray(coords, dtype=np.int64)
        labels = [label(row) for row in coords]
        group = cls(name, labels, np.empty(0, dtype=np.int64), coords=coords,
                    product=product, key=key, kind=kind, degree=degree)
        group.inverse = group.index_of(invert(coords))
        if group.order <= table_bound:
            table = np.empty((group.order, group.order), dtype=np.int64)
            for a in range(group.order):
                table[a] = group.index_of(product(coords[a][None, :], coords))
            group.table = table
        return group

    def index_of(self, coords: np.ndarray) -> np.ndarray:
        keys = self._key(coords)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        if not (self._sorted_keys[pos] == keys).all():
            raise ValueError("coordinates do not describe group elements")
        return self._key_order[pos]

    # arithmetic -------------------------------------------------------------

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise product of index arrays (broadcasting)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.table is not None:
            return self.table[a, b]
        a, b = np.broadcast_arrays(a, b)
        out = self.index_of(self._product(self.coords[a.ravel()], self.coords[b.ravel()]))
        return out.reshape(a.shape)

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return int(self.table[a, b])
        return int(self.mul_vec(np.array([a]), np.array([b]))[0])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conjugate_vec(self, g, x) -> np.ndarray:
        """``g x g^-1`` elementwise."""
        g = np.asarray(g, dtype=np.int64)
        return self.mul_vec(self.mul_vec(g, x), self.inverse[g])

    def power_vec(self, xs, m: int) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        if m < 0:
            xs, m = self.inverse[xs], -m
        result = np.zeros_like(xs)
        base = xs
        while m:
            if m & 1:
                result = self.mul_vec(result, base)
            m >>= 1
            if m:
                base = self.mul_vec(base, base)
        return result

    def power(self, x: int, m: int) -> int:
        return int(self.power_vec(np.array([x]), m)[0])

    def element(self, label: str) -> int:
        try:
            return self._label_index[_squash(label)]
        except KeyError:
            raise InvalidSpec(f"{label!r} is not an element label of {self.name}") from None

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = self.mul(y, x)
            k += 1
        return k

    # structure --------------------------------------------------------------

    def is_associative(self) -> bool:
        t = self.table
        if t is None:
            raise ValueError("associativity check needs a multiplication table")
        for a in range(self.order):
            if not np.array_equal(t[t[a]], t[a][t]):
                return False
        return True

    def check_axioms(self, exhaustive_bound: int = ASSOCIATIVITY_BOUND, samples: int = 20000,
                     seed: int = 0) -> bool:
        """Identity, inverse and associativity laws (sampled above the bound)."""
        ar = np.arange(self.order)
        if not (np.array_equal(self.mul_vec(0, ar), ar) and np.array_equal(self.mul_vec(ar, 0), ar)):
            return False
        if not (self.mul_vec(ar, self.inverse) == 0).all():
            return False
        if self.table is not None and self.order <= exhaustive_bound:
            return self.is_associative()
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, self.order, size=(3, samples))
        return bool((self.mul_vec(self.mul_vec(a, b), c) == self.mul_vec(a, self.mul_vec(b, c))).all())

    @cached_property
    def _classes(self) -> tuple[tuple[ConjugacyClass, ...], np.ndarray]:
        class_of = np.full(self.order, -1, dtype=np.int64)
        everything = np.arange(self.order)
        classes = []
        for x in range(self.order):
            if class_of[x] >= 0:
                continue
            members = np.unique(self.conjugate_vec(everything, x))
            cid = len(classes)
            class_of[members] = cid
            classes.append(ConjugacyClass(
                id=cid,
                representative=x,
                size=len(members),
                members=tuple(int(m) for m in members),
                centralizer_order=self.order // len(members),
            ))
        return tuple(classes), class_of

    @property
    def classes(self) -> tuple[ConjugacyClass, ...]:
        return self._classes[0]

    @property
    def class_of(self) -> np.ndarray:
        """Class id of every element."""
        return self._classes[1]

    def centralizer_order(self, x: int) -> int:
        return self.classes[int(self.class_of[x])].centralizer_order

    def cycle_type(self, x: int) -> tuple[int, ...]:
        """Cycle type (descending) of a permutation element of a symmetric group."""
        if self.kind != "symmetric":
            raise TypeError("cycle types exist only for symmetric groups")
        return _cycle_type(self.coords[x])


def _squash(text: str) -> str:
    return re.sub(r"\s+", "", text)


# constructors ---------------------------------------------------------------


def _cycle_type(perm) -> tuple[int, ...]:
    n = len(perm)
    seen = [False] * n
    lengths = []
    for i in range(n):
        if not seen[i]:
            j, k = i, 0
            while not seen[j]:
                seen[j] = True
                j = int(perm[j])
                k += 1
            lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def _cycle_label(perm) -> str:
    n = len(perm)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cycle, j = [], i
        while not seen[j]:
            seen[j] = True
            cycle.append(str(j + 1))
            j = int(perm[j])
        parts.append("(" + ",".join(cycle) + ")")
    return "".join(parts) or "()"


def symmetric_group(n: int, table_bound: int = TABLE_BOUND) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("symmetric group degree must be >= 1")
    coords = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def product(f, g):
        return np.take_along_axis(g, f, axis=-1)

    return FiniteGroup.from_coordinates(
        coords,
        product=product,
        invert=lambda f: np.argsort(f, axis=-1),
        key=lambda f: f @ weights,
        label=_cycle_label,
        name=f"S{n}",
        kind="symmetric",
        degree=n,
        table_bound=table_bound,
    )


def cyclic_group(n: int, table_bound: int = TABLE_BOUND) -> FiniteGroup:
    if n < 1:
        raise InvalidSpec("cyclic group order must be >= 1")
    return FiniteGroup.from_coordinates(
        np.arange(n).reshape(n, 1),
        product=lambda a, b: (a + b) % n,
        invert=lambda a: (-a) % n,
        key=lambda a: a[..., 0],
        label=lambda row: str(int(row[0])),
        name=f"C{n}",
        kind="cyclic",
        degree=n,
        table_bound=table_bound,
    )


def _matrix_product(p: int, projective: bool):
    def product(a, b):
        a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
        b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
        out = np.stack([a0 * b0 + a1 * b2, a0 * b1 + a1 * b3,
                        a2 * b0 + a3 * b2, a2 * b1 + a3 * b3], axis=-1) % p
        return _normalize_sign(out, p) if projective else out
    return product


def _normalize_sign(m, p):
    """Scale by -1 where needed so the first nonzero entry lies in 1..(p-1)/2."""
    first = np.where(m[..., 0] != 0, m[..., 0], m[..., 1])
    flip = first > (p - 1) // 2
    return np.where(flip[..., None], (-m) % p, m)


def _sl2_coords(p: int, projective: bool) -> np.ndarray:
    r = np.arange(p)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a * d - b * c) % p == 1
    mats = np.stack([a[keep], b[keep], c[keep], d[keep]], axis=-1)
    if projective:
        mats = np.unique(_normalize_sign(mats, p), axis=0)
    ident = np.array([1, 0, 0, 1])
    is_ident = (mats == ident).all(axis=1)
    return np.concatenate([mats[is_ident], mats[~is_ident]])


def _matrix_group(p: int, projective: bool, table_bound: int) -> FiniteGroup:
    weights = np.array([p ** 3, p ** 2, p, 1], dtype=np.int64)

    def invert(m):
        inv = np.stack([m[..., 3], -m[..., 1], -m[..., 2], m[..., 0]], axis=-1) % p
        return _normalize_sign(inv, p) if projective else inv

    return FiniteGroup.from_coordinates(
        _sl2_coords(p, projective),
        product=_matrix_product(p, projective),
        invert=invert,
        key=lambda m: m @ weights,
        label=lambda m: f"[[{m[0]},{m[1]}],[{m[2]},{m[3]}]]",
        name=f"{'PSL2' if projective else 'SL2'}_{p}",
        kind="psl2" if projective else "sl2",
        degree=p,
        table_bound=table_bound,
    )


def sl2_group(p: int, table_bound: int = TABLE_BOUND) -> FiniteGroup:
    GroupSpec("sl2", p).validate()
    return _matrix_group(p, False, table_bound)


def psl2_group(p: int, table_bound: int = TABLE_BOUND) -> FiniteGroup:
    GroupSpec("psl2", p).validate()
    return _matrix_group(p, True, table_bound)


def read_cayley(path, check_associativity: bool | None = None) -> FiniteGroup:
    """Load a Cayley table file: order on line 1, then one row per element."""
    path = Path(path)
    try:
        lines = [ln.split() for ln in path.read_text().splitlines() if ln.strip()]
        n = int(lines[0][0])
        rows = [[int(tok) for tok in ln] for ln in lines[1:]]
    except (OSError, ValueError, IndexError) as exc:
        raise InvalidSpec(f"cannot read Cayley file {path}: {exc}") from exc
    if len(lines[0]) != 1 or len(rows) != n or any(len(r) != n for r in rows):
        raise CayleyValidationFailed(f"{path}: expected {n} rows of {n} entries")
    return FiniteGroup.from_table(rows, name=path.stem, check_associativity=check_associativity)


def write_cayley(group: FiniteGroup, path) -> None:
    ar = np.arange(group.order)
    lines = [str(group.order)]
    for a in range(group.order):
        lines.append(" ".join(str(int(v)) for v in group.mul_vec(a, ar)))
    Path(path).write_text("\n".join(lines) + "\n")


def build_group(spec: GroupSpec | str, table_bound: int = TABLE_BOUND,
                check_associativity: bool | None = None) -> FiniteGroup:
    if isinstance(spec, str):
        spec = GroupSpec.parse(spec)
    spec.validate()
    if spec.kind == "symmetric":
        return symmetric_group(spec.param, table_bound)
    if spec.kind == "cyclic":
        return cyclic_group(spec.param, table_bound)
    if spec.kind == "sl2":
        return sl2_group(spec.param, table_bound)
    if spec.kind == "psl2":
        return psl2_group(spec.param, table_bound)
    return read_cayley(spec.path, check_associativity)


def conjugacy_classes(group: FiniteGroup) -> list[ConjugacyClass]:
    return list(group.classes)


def power_class_map(group: FiniteGroup, m: int) -> dict[int, int]:
    """Map each class id to the class of the ``m``-th powers of its members."""
    result = {}
    for cls in group.classes:
        images = group.class_of[group.power_vec(np.array(cls.members), m)]
        if not (images == images[0]).all():
            raise AssertionError(f"power map not constant on class {cls.id}")
        result[cls.id] = int(images[0])
    return result
