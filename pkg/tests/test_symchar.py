import itertools
import math
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homcount.errors import BoundExceeded, SizeMismatch
from homcount.symchar import (adams_transform, character_table, class_function, hook_length_degree,
                              inner_product, mn_character_value, partitions, power_cycle_type)


def _count_partitions(n):
    # generate-and-count: multisets of parts from 1..n summing to n
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


def _frobenius_character(lam, mu):
    """Coefficient of x^(lam + delta) in a_delta * p_mu, with len(lam) variables."""
    k = len(lam)
    poly = defaultdict(int)
    for perm in itertools.permutations(range(k)):
        sign = 1
        for i, j in itertools.combinations(range(k), 2):
            if perm[i] > perm[j]:
                sign = -sign
        poly[tuple(k - 1 - perm[i] for i in range(k))] += sign
    for r in mu:
        nxt = defaultdict(int)
        for mono, c in poly.items():
            for v in range(k):
                m = list(mono)
                m[v] += r
                nxt[tuple(m)] += c
        poly = nxt
    return poly.get(tuple(part + k - 1 - i for i, part in enumerate(lam)), 0)


@pytest.mark.parametrize("n", range(0, 12))
def test_partition_counts(n):
    parts = partitions(n)
    assert len(parts) == _count_partitions(n)
    assert len(set(parts)) == len(parts)
    assert all(sum(p) == n and list(p) == sorted(p, reverse=True) for p in parts)


def test_small_partitions():
    assert partitions(0) == [()]
    assert partitions(1) == [(1,)]
    assert len(partitions(5)) == 7
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_partition_bound():
    with pytest.raises(BoundExceeded):
        partitions(31)
    with pytest.raises(BoundExceeded):
        character_table(9, bound=8)


@pytest.mark.parametrize("n", range(1, 9))
def test_hooks_on_ncycle(n):
    for lam in partitions(n):
        value = mn_character_value(lam, (n,))
        is_hook = len(lam) == 1 or lam[1] <= 1
        if is_hook:
            assert value == (-1) ** (len(lam) - 1)
        else:
            assert value == 0


def test_degree_example():
    assert mn_character_value((3, 2), (1,) * 5) == 5


@pytest.mark.parametrize("n", range(1, 9))
def test_degrees_match_hook_length_formula(n):
    assert all(mn_character_value(lam, (1,) * n) == hook_length_degree(lam) for lam in partitions(n))


@pytest.mark.parametrize("n", range(1, 7))
def test_against_frobenius_formula(n):
    for lam in partitions(n):
        for mu in partitions(n):
            assert mn_character_value(lam, mu) == _frobenius_character(lam, mu)


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        mn_character_value((2, 1), (2,))


def test_table_degrees():
    assert sorted(character_table(3).degrees) == [1, 1, 2]
    assert sorted(character_table(5).degrees) == [1, 1, 4, 4, 5, 5, 6]


@pytest.mark.parametrize("n", range(1, 9))
def test_orthogonality(n):
    t = character_table(n)
    k = len(t.partitions)
    assert sum(t.class_sizes) == t.order
    for a in range(k):
        for b in range(k):
            row = sum(s * x * y for s, x, y in zip(t.class_sizes, t.values[a], t.values[b]))
            assert row == (t.order if a == b else 0)
            col = sum(t.values[i][a] * t.values[i][b] for i in range(k))
            assert col == (t.order // t.class_sizes[a] if a == b else 0)


def test_power_cycle_type():
    assert power_cycle_type((6,), 2) == (3, 3)
    assert power_cycle_type((6,), 4) == (3, 3)
    assert power_cycle_type((5, 2), 5) == (2, 1, 1, 1, 1, 1)
    assert power_cycle_type((3, 2), 0) == (1,) * 5


@given(st.integers(1, 7), st.integers(-12, 12))
@settings(max_examples=60, deadline=None)
def test_power_cycle_type_against_permutations(n, m):
    mu = partitions(n)[(n * 7 + m) % len(partitions(n))]
    perm, start = [0] * n, 0
    for part in mu:
        for i in range(part):
            perm[start + i] = start + (i + 1) % part
        start += part
    power = list(range(n))
    for _ in range(m % math.lcm(*mu)):
        power = [perm[v] for v in power]
    seen, lengths = set(), []
    for i in range(n):
        if i not in seen:
            j, l = i, 0
            while j not in seen:
                seen.add(j)
                j, l = power[j], l + 1
            lengths.append(l)
    assert power_cycle_type(mu, m) == tuple(sorted(lengths, reverse=True))


def _std_s3():
    t = character_table(3)
    return t, t.character(t.partitions.index((2, 1)))


def test_adams_examples():
    t, std = _std_s3()
    # partition order is (3), (2,1), (1,1,1)
    assert std.values == (-1, 0, 2)
    assert adams_transform(1, std) == std
    assert adams_transform(2, std).values == (-1, 2, 2)
    assert adams_transform(3, std).values == (2, 0, 2)


@pytest.mark.parametrize("n", range(1, 7))
def test_adams_fixes_identity_value(n):
    t = character_table(n)
    for i in range(len(t.partitions)):
        chi = t.character(i)
        for m in range(-3, 7):
            psi = adams_transform(m, chi)
            assert psi.values[t.identity_class] == chi.values[t.identity_class]
            assert psi.is_integral()
            assert inner_product(psi, psi) >= 1


def test_inner_products():
    t, std = _std_s3()
    assert inner_product(adams_transform(2, std), std) == 1
    for n in range(1, 6):
        t = character_table(n)
        for i in range(len(t.partitions)):
            chi = t.character(i)
            assert inner_product(chi, chi) == 1
            if t.partitions[i] != (n,):
                assert inner_product(chi, t.trivial()) == 0


def test_inner_product_mismatch():
    with pytest.raises(SizeMismatch):
        inner_product(character_table(3).trivial(), character_table(4).trivial())
    with pytest.raises(SizeMismatch):
        class_function(3, [1, 2])


def test_rational_class_function():
    f = class_function(3, [Fraction(1, 2), 0, 1])
    assert not f.is_integral()
    # class sizes 2, 3, 1 in partition order
    assert inner_product(f, character_table(3).trivial()) == Fraction(1, 3)
