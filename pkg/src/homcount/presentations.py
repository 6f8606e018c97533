"""Words, finite presentations, abelianization and mapping-torus presentations.

A word is a tuple of signed 1-based generator indices: ``k`` stands for
generator ``k-1`` and ``-k`` for its inverse.

Text grammar::

    presentation := "gens:" name ("," name)* ";" "rels:" [word ("," word)*]
    word         := factor*
    factor       := atom ["^" integer]
    atom         := name | "[" word "," word "]" | "(" word ")"

``[u,v]`` expands to ``u v u^-1 v^-1``.  Inverses are always written ``^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParseError, SizeMismatch


def free_reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if 0 in self.letters:
            raise ValueError("letter 0 is not a generator")
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)))

    def generators(self) -> set[int]:
        """0-based indices of the generators that occur."""
        return {abs(a) - 1 for a in self.letters}

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Replace generator ``i`` by ``images[i]``."""
        out: list[int] = []
        for a in self.letters:
            img = images[abs(a) - 1]
            out.extend(img.letters if a > 0 else img.inverse().letters)
        return Word(tuple(out))

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            a = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == a:
                j += 1
            run = (j - i) * (1 if a > 0 else -1)
            name = names[abs(a) - 1]
            parts.append(name if run == 1 else f"{name}^{run}")
            i = j
        return " ".join(parts)


def gen(i: int) -> Word:
    """The word consisting of generator ``i`` (0-based)."""
    return Word((i + 1,))


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


@dataclass(frozen=True)
class Presentation:
    generator_names: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generator_names", tuple(self.generator_names))
        rels = tuple(r for r in self.relators if len(r))
        k = len(self.generator_names)
        for r in rels:
            if any(abs(a) > k for a in r.letters):
                raise ValueError(f"relator references a generator beyond {k}")
        object.__setattr__(self, "relators", rels)

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def format(self) -> str:
        rels = ", ".join(r.format(self.generator_names) for r in self.relators)
        return f"gens: {', '.join(self.generator_names)}; rels: {rels}"


@dataclass(frozen=True)
class AutomorphismData:
    """Images of the generators under sigma, one word each."""

    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))

    @classmethod
    def identity(cls, count: int) -> "AutomorphismData":
        return cls(tuple(gen(i) for i in range(count)))

    def format(self, names: Sequence[str]) -> str:
        return "; ".join(f"{n} -> {w.format(names)}" for n, w in zip(names, self.images))


@dataclass(frozen=True)
class AbelianizationInfo:
    free_rank: int
    torsion_divisors: tuple[int, ...] = field(default=())

    @property
    def is_infinite(self) -> bool:
        return self.free_rank >= 1


# parsing -----------------------------------------------------------------------


class _WordParser:
    def __init__(self, text: str, names: Sequence[str]):
        self.text = re.sub(r"\s+", " ", text).strip()
        self.pos = 0
        self.names = sorted(names, key=len, reverse=True)
        self.index = {n: i for i, n in enumerate(names)}

    def error(self, msg):
        raise ParseError(f"{msg} at position {self.pos} in {self.text!r}")

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def word(self) -> Word:
        letters: list[int] = []
        while (c := self.peek()) and c not in ",])":
            letters.extend(self.factor().letters)
        return Word(tuple(letters))

    def factor(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            self.peek()
            m = re.match(r"[+-]?\d+", self.text[self.pos:])
            if m is None:
                self.error("expected an integer exponent")
            self.pos += m.end()
            return base ** int(m.group())
        return base

    def atom(self) -> Word:
        c = self.peek()
        if c == "[":
            self.pos += 1
            u = self.word()
            if self.peek() != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            v = self.word()
            if self.peek() != "]":
                self.error("expected ']'")
            self.pos += 1
            return commutator(u, v)
        if c == "(":
            self.pos += 1
            w = self.word()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return w
        if c == "1" and not any(self.text.startswith(n, self.pos) for n in self.names):
            self.pos += 1
            return Word()
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return gen(self.index[name])
        self.error("unknown generator")

    def parse(self) -> Word:
        w = self.word()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return w


def parse_word(text: str, names: Sequence[str]) -> Word:
    return _WordParser(text, names).parse()


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_presentation(text: str) -> Presentation:
    """Parse ``gens: x, y; rels: [x,y], x^2 y^-3``."""
    m = re.fullmatch(r"\s*gens\s*:(?P<gens>[^;]*)(;\s*rels\s*:(?P<rels>.*))?\s*;?\s*", text, re.S)
    if m is None:
        raise ParseError(f"expected 'gens: ...; rels: ...', got {text!r}")
    names = [n.strip() for n in m.group("gens").split(",") if n.strip()]
    for n in names:
        if not _NAME.fullmatch(n):
            raise ParseError(f"bad generator name {n!r}")
    if len(set(names)) != len(names):
        raise ParseError("duplicate generator names")
    rels_text = (m.group("rels") or "").strip().rstrip(";")
    relators = []
    if rels_text:
        for chunk in _split_top_level(rels_text, ","):
            if not chunk.strip():
                raise ParseError("empty relator")
            relators.append(parse_word(chunk, names))
    return Presentation(tuple(names), tuple(relators))


def parse_sigma(text: str, names: Sequence[str]) -> AutomorphismData:
    """Parse ``"x -> x^-1; y -> x y"``; unmentioned generators are fixed."""
    images = [gen(i) for i in range(len(names))]
    index = {n: i for i, n in enumerate(names)}
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        if "->" not in chunk:
            raise ParseError(f"expected '<gen> -> <word>' in {chunk!r}")
        lhs, rhs = chunk.split("->", 1)
        lhs = lhs.strip()
        if lhs not in index:
            raise ParseError(f"unknown generator {lhs!r} in sigma")
        images[index[lhs]] = parse_word(rhs, names)
    return AutomorphismData(tuple(images))


# evaluation --------------------------------------------------------------------


def evaluate_word(w: Word, assignment: Sequence[int], group) -> int:
    """Left-to-right product of the images; negative letters use inverses."""
    x = 0
    for a in w.letters:
        g = int(assignment[abs(a) - 1])
        x = group.mul(x, g if a > 0 else group.inv(g))
    return x


# abelianization ----------------------------------------------------------------


def exponent_matrix(pres: Presentation) -> list[list[int]]:
    rows = []
    for r in pres.relators:
        row = [0] * pres.generator_count
        for a in r.letters:
            row[abs(a) - 1] += 1 if a > 0 else -1
        rows.append(row)
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form, as a divisibility chain.

    Exact integer row/column reduction; the pivot is always an entry of
    minimal nonzero absolute value among the candidates.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0

    def move_to_pivot(t, cells):
        _, i, j = min((abs(a[i][j]), i, j) for i, j in cells if a[i][j])
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]

    diag = []
    for t in range(min(rows, cols)):
        block = [(i, j) for i in range(t, rows) for j in range(t, cols)]
        if not any(a[i][j] for i, j in block):
            break
        move_to_pivot(t, block)
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
            cross = [(i, t) for i in range(t, rows)] + [(t, j) for j in range(t + 1, cols)]
            if any(a[i][j] for i, j in cross[1:]):
                move_to_pivot(t, cross)
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
    return diag


def abelianization(pres: Presentation) -> AbelianizationInfo:
    diag = smith_normal_form(exponent_matrix(pres))
    rank = len(diag)
    return AbelianizationInfo(
        free_rank=pres.generator_count - rank,
        torsion_divisors=tuple(d for d in diag if d > 1),
    )


# standard presentations ----------------------------------------------------------


def surface_presentation(g: int) -> Presentation:
    if g < 0:
        raise ValueError("genus must be non-negative")
    names = [n for i in range(1, g + 1) for n in (f"x{i}", f"y{i}")]
    rel = Word()
    for i in range(g):
        rel = rel * commutator(gen(2 * i), gen(2 * i + 1))
    return Presentation(tuple(names), (rel,))


def free_presentation(k: int) -> Presentation:
    names = ("x", "y", "z") if k <= 3 else tuple(f"x{i}" for i in range(1, k + 1))
    return Presentation(names[:k])


def baumslag_solitar(m: int, n: int) -> Presentation:
    """``<x, y | x^-m y x^n y^-1>``."""
    return Presentation(("x", "y"), (gen(0) ** -m * gen(1) * gen(0) ** n * gen(1).inverse(),))


def product_relator_presentation(k: int) -> Presentation:
    """``<x1..xk | x1 x2 ... xk>``."""
    names = tuple(f"x{i}" for i in range(1, k + 1))
    return Presentation(names, (Word(tuple(range(1, k + 1))),))


def semidirect_presentation(pres: Presentation, sigma: AutomorphismData) -> Presentation:
    """Mapping torus: add ``t`` with relators ``t x_i t^-1 sigma(x_i)^-1``."""
    if len(sigma.images) != pres.generator_count:
        raise SizeMismatch(f"sigma has {len(sigma.images)} images for {pres.generator_count} generators")
    for w in sigma.images:
        if any(abs(a) > pres.generator_count for a in w.letters):
            raise SizeMismatch("sigma image references an unknown generator")
    name = "t"
    while name in pres.generator_names:
        name += "_"
    t = gen(pres.generator_count)
    extra = tuple(t * gen(i) * t.inverse() * img.inverse() for i, img in enumerate(sigma.images))
    return Presentation(pres.generator_names + (name,), pres.relators + extra)


def induced_matrix(sigma: AutomorphismData, count: int) -> np.ndarray:
    """Action of sigma on exponent vectors (column i = image of generator i)."""
    m = np.zeros((count, count), dtype=np.int64)
    for i, w in enumerate(sigma.images):
        for a in w.letters:
            m[abs(a) - 1, i] += 1 if a > 0 else -1
    return m
