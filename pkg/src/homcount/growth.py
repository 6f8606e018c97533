"""Subgroup growth from homomorphism counts into symmetric groups.

``sum_n h_n x^n / n! = exp(sum_n u_n x^n / n)`` where ``h_n = #Hom(G, S_n)`` and
``u_n`` counts index-n subgroups; ``u_n = sum_{d|n} d v_d`` defines ``v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import frobenius, symchar
from .errors import BadConstantTerm, IndexOutOfRange, NonIntegerResult
from .groups import is_prime, symmetric_group
from .homs import count_homs
from .presentations import Presentation, surface_presentation

SERIES_ORDER_CAP = 64


@dataclass(frozen=True)
class RationalSeries:
    """Power series truncated after ``x^order``."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("series needs at least a constant term")
        if len(coeffs) - 1 > SERIES_ORDER_CAP:
            raise ValueError(f"truncation order above {SERIES_ORDER_CAP}")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coefficients[n]

    def __mul__(self, other: "RationalSeries") -> "RationalSeries":
        n = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        return RationalSeries(tuple(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)))

    def derivative_coefficients(self) -> list[Fraction]:
        return [k * c for k, c in enumerate(self.coefficients)][1:]


def series_log(f: RationalSeries) -> RationalSeries:
    """Solve ``F' = A' F`` for ``A`` with ``A(0) = 0``."""
    if f[0] != 1:
        raise BadConstantTerm(f"log needs constant term 1, got {f[0]}")
    n = f.order
    a = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        s = k * f[k] - sum(j * a[j] * f[k - j] for j in range(1, k))
        a[k] = s / k
    return RationalSeries(tuple(a))


def series_exp(a: RationalSeries) -> RationalSeries:
    """Solve ``F' = A' F`` with ``F(0) = 1``."""
    if a[0] != 0:
        raise BadConstantTerm(f"exp needs constant term 0, got {a[0]}")
    n = a.order
    f = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        f[k] = sum(j * a[j] * f[k - j] for j in range(1, k + 1)) / k
    return RationalSeries(tuple(f))


def egf(h: Sequence[int]) -> RationalSeries:
    return RationalSeries(tuple(Fraction(c, math.factorial(n)) for n, c in enumerate(h)))


# homomorphism counts -------------------------------------------------------------------


def hom_sequence(source: Presentation | int, N: int, method: str = "brute",
                 budget: int | None = None, workers: int = 1) -> list[int]:
    """``h_0..h_N`` with ``h_n = #Hom(source, S_n)``; an int source means that genus."""
    if method not in ("brute", "character"):
        raise ValueError(f"unknown method {method!r}")
    if method == "character":
        if not isinstance(source, int):
            raise ValueError("the character method needs a surface genus")
        return [1] + [_surface_homs(source, n) for n in range(1, N + 1)]
    if isinstance(source, int):
        source = surface_presentation(source)
    return [1] + [count_homs(source, symmetric_group(n), budget, workers) for n in range(1, N + 1)]


def _surface_homs(g: int, n: int) -> int:
    table = symchar.character_table(n)
    if g == 0:
        return frobenius.commutator_count(table, 0, table.identity_class)
    return frobenius.surface_count(table, g)


# u and v -------------------------------------------------------------------------------------


def u_from_homs(h: Sequence[int]) -> list[int]:
    """``u_n = n [x^n] log(sum h_n x^n / n!)`` for n = 1..N."""
    if h[0] != 1:
        raise BadConstantTerm("h_0 must be 1")
    logs = series_log(egf(h))
    out = []
    for n in range(1, len(h)):
        u = n * logs[n]
        if u.denominator != 1:
            raise NonIntegerResult(f"u_{n} = {u}")
        out.append(int(u))
    return out


def _u_by_transitive_recursion(h: Sequence[int]) -> list[int]:
    """Cross-check: ``h_n = sum_k C(n-1, k-1) t_k h_{n-k}``, ``u_k = t_k / (k-1)!``."""
    t = [0] * len(h)
    for n in range(1, len(h)):
        t[n] = h[n] - sum(math.comb(n - 1, k - 1) * t[k] * h[n - k] for k in range(1, n))
    out = []
    for k in range(1, len(h)):
        q, r = divmod(t[k], math.factorial(k - 1))
        if r:
            raise NonIntegerResult(f"t_{k} not divisible by (k-1)!")
        out.append(q)
    return out


def mobius(n: int) -> int:
    if n < 1 or n > 10**6:
        raise ValueError("mobius defined here for 1 <= n <= 10^6")
    result, d = 1, 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    return -result if n > 1 else result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def v_from_u(u: Sequence[int]) -> list[int]:
    """``v_n = (1/n) sum_{d|n} mu(n/d) u_d`` (u, v are 1-indexed lists from n = 1)."""
    out = []
    for n in range(1, len(u) + 1):
        s = sum(mobius(n // d) * u[d - 1] for d in divisors(n))
        if s % n:
            raise NonIntegerResult(f"v_{n} = {Fraction(s, n)}")
        out.append(s // n)
    return out


def u_from_v(v: Sequence[int]) -> list[int]:
    return [sum(d * v[d - 1] for d in divisors(n)) for n in range(1, len(v) + 1)]


def product_form_check(h: Sequence[int], v: Sequence[int], N: int) -> bool:
    """Does ``prod_{n<=N} (1 - x^n)^(-v_n)`` match the EGF of ``h`` through ``x^N``?"""
    if len(h) < N + 1 or len(v) < N:
        raise IndexOutOfRange("sequences shorter than N")
    series = [Fraction(0)] * (N + 1)
    series[0] = Fraction(1)
    for n in range(1, N + 1):
        # (1 - x^n)^(-v) = sum_j binom(v + j - 1, j) x^(nj), valid for any integer v
        factor = [Fraction(0)] * (N + 1)
        coeff = Fraction(1)
        for j in range(0, N // n + 1):
            factor[n * j] = coeff
            coeff = coeff * (v[n - 1] + j) / (j + 1)
        series = [sum(series[i] * factor[k - i] for i in range(k + 1)) for k in range(N + 1)]
    return series == list(egf(h[:N + 1]).coefficients)


def congruence_check(u: Sequence[int], p: int, k: int) -> bool:
    """``u_{p^(k+1)} = u_{p^k} mod p^(k+1)`` for a 1-indexed ``u``."""
    if not is_prime(p) or k < 0:
        raise ValueError("need a prime p and k >= 0")
    if p ** (k + 1) > len(u):
        raise IndexOutOfRange(f"u has no entry {p ** (k + 1)}")
    return (u[p ** (k + 1) - 1] - u[p ** k - 1]) % p ** (k + 1) == 0


def applicable_congruences(N: int) -> list[tuple[int, int]]:
    out = []
    for p in range(2, N + 1):
        if is_prime(p):
            k = 0
            while p ** (k + 1) <= N:
                out.append((p, k))
                k += 1
    return out


@dataclass(frozen=True)
class GrowthResult:
    hom_counts: tuple[int, ...]  # h_1..h_N
    u: tuple[int, ...]
    v: tuple[int, ...]


def growth(source: Presentation | int, N: int, method: str = "brute",
           budget: int | None = None, workers: int = 1) -> GrowthResult:
    h = hom_sequence(source, N, method, budget, workers)
    u = u_from_homs(h)
    return GrowthResult(tuple(h[1:]), tuple(u), tuple(v_from_u(u)))


def surface_tables(max_genus: int, max_n: int) -> tuple[list[list[int]], list[list[int]]]:
    """u and v rows for genus 1..max_genus via the character formula."""
    us, vs = [], []
    for g in range(1, max_genus + 1):
        r = growth(g, max_n, method="character")
        us.append(list(r.u))
        vs.append(list(r.v))
    return us, vs
