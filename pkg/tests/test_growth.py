import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from homcount.errors import BadConstantTerm, IndexOutOfRange, NonIntegerResult
from homcount.growth import (RationalSeries, _u_by_transitive_recursion, applicable_congruences,
                             congruence_check, divisors, egf, growth, hom_sequence, mobius,
                             product_form_check, series_exp, series_log, surface_tables,
                             u_from_homs, u_from_v, v_from_u)
from homcount.presentations import abelianization, free_presentation
from homcount.symchar import partitions
from homcount.verification import SURFACE_U, SURFACE_V, divisibility_catalog, klein_bottle

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


def _sigma(n):
    return sum(d for d in range(1, n + 1) if n % d == 0)


def _hnf_count(n):
    # index-n sublattices of Z^2: upper triangular [[a, b], [0, d]], a d = n, 0 <= b < d
    return sum(1 for a in range(1, n + 1) if n % a == 0 for _ in range(n // a))


def test_hom_sequence_examples():
    assert hom_sequence(1, 5, method="character") == [1, 1, 4, 18, 120, 840]
    assert hom_sequence(1, 5, method="character") == [len(partitions(n)) * math.factorial(n) for n in range(6)]
    assert hom_sequence(2, 4, method="character") == [1, 1, 16, 486, 34176]
    assert hom_sequence(free_presentation(1), 4) == [1, 1, 2, 6, 24]


@pytest.mark.parametrize("genus", [0, 1, 2])
def test_brute_and_character_agree(genus):
    assert hom_sequence(genus, 4) == hom_sequence(genus, 4, method="character")


def test_hom_sequence_bad_method():
    with pytest.raises(ValueError):
        hom_sequence(1, 3, method="magic")
    with pytest.raises(ValueError):
        hom_sequence(free_presentation(1), 3, method="character")


def test_log_of_geometric_series():
    f = RationalSeries(tuple([1] * 12))
    assert series_log(f).coefficients == (0,) + tuple(Fraction(1, n) for n in range(1, 12))


def test_log_of_genus_one_egf():
    logs = series_log(egf(hom_sequence(1, 10, method="character")))
    assert [logs[n] for n in range(1, 11)] == [Fraction(_sigma(n), n) for n in range(1, 11)]


@given(st.lists(rationals, min_size=0, max_size=10))
@settings(max_examples=80, deadline=None)
def test_log_exp_round_trip(tail):
    f = RationalSeries((Fraction(1),) + tuple(tail))
    assert series_exp(series_log(f)) == f
    a = RationalSeries((Fraction(0),) + tuple(tail))
    assert series_log(series_exp(a)) == a


def test_exp_matches_factorials():
    # exp(x) has coefficients 1/n!
    assert series_exp(RationalSeries((0, 1, 0, 0, 0, 0))).coefficients == \
        tuple(Fraction(1, math.factorial(n)) for n in range(6))


def test_bad_constant_terms():
    with pytest.raises(BadConstantTerm):
        series_log(RationalSeries((2, 1)))
    with pytest.raises(BadConstantTerm):
        series_exp(RationalSeries((1, 1)))
    with pytest.raises(BadConstantTerm):
        u_from_homs([2, 1, 2])


def test_series_cap():
    with pytest.raises(ValueError):
        RationalSeries(tuple([1] * 66))
    assert RationalSeries(tuple([1] * 65)).order == 64


def test_series_product():
    a = RationalSeries((1, -1, 0, 0))
    b = RationalSeries((1, 1, 1, 1))
    assert (a * b).coefficients == (1, 0, 0, 0)


def test_u_examples():
    assert u_from_homs(hom_sequence(1, 5, method="character")) == [1, 3, 4, 7, 6]
    assert u_from_homs(hom_sequence(2, 5, method="character")) == [1, 15, 220, 5275, 151086]
    assert u_from_homs(hom_sequence(free_presentation(1), 5)) == [1] * 5


def test_u_genus_one_is_sublattice_count():
    u = u_from_homs(hom_sequence(1, 12, method="character"))
    assert u == [_hnf_count(n) for n in range(1, 13)]
    assert v_from_u(u) == [1] * 12


def test_u_rejects_inconsistent_counts():
    with pytest.raises(NonIntegerResult):
        u_from_homs([1, 1, 2, 5])


@pytest.mark.parametrize("genus", [1, 2, 3])
def test_transitive_recursion_oracle(genus):
    h = hom_sequence(genus, 4, method="character")
    assert _u_by_transitive_recursion(h) == u_from_homs(h)


def test_v_examples():
    assert v_from_u([1, 3, 4, 7, 6]) == [1, 1, 1, 1, 1]
    assert v_from_u([1, 15, 220, 5275, 151086]) == [1, 7, 73, 1315, 30217]
    assert u_from_v(v_from_u(list(SURFACE_U[2]))) == list(SURFACE_U[2])
    assert v_from_u([1] * 6) == [1, 0, 0, 0, 0, 0]


def test_v_rejects_non_integers():
    with pytest.raises(NonIntegerResult):
        v_from_u([1, 2])


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=30))
def test_mobius_round_trip(v):
    assert v_from_u(u_from_v(v)) == v


def test_mobius_values():
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
    assert all(sum(mobius(d) for d in divisors(n)) == (n == 1) for n in range(1, 200))
    with pytest.raises(ValueError):
        mobius(0)


def test_tables():
    u, v = surface_tables(5, 5)
    assert tuple(map(tuple, u)) == SURFACE_U
    assert tuple(map(tuple, v)) == SURFACE_V
    assert u[4][4] == 429988374084026406
    assert v[4][4] == 85997674816805281


def test_product_form():
    h1 = hom_sequence(1, 8, method="character")
    assert product_form_check(h1, [1] * 8, 8)
    h2 = hom_sequence(2, 5, method="character")
    v2 = v_from_u(u_from_homs(h2))
    assert product_form_check(h2, v2, 5)
    for i in range(5):
        for delta in (-1, 1):
            bad = list(v2)
            bad[i] += delta
            assert not product_form_check(h2, bad, 5)


def test_product_form_euler_identity():
    # prod (1 - x^n)^-1 = sum p(n) x^n, which is the genus-1 EGF
    n = 10
    h = [len(partitions(k)) * math.factorial(k) for k in range(n + 1)]
    assert product_form_check(h, [1] * n, n)


def test_product_form_short_input():
    with pytest.raises(IndexOutOfRange):
        product_form_check([1, 1], [1], 3)


def test_congruence_examples():
    assert congruence_check([1, 15, 220, 5275, 151086], 2, 1)
    assert congruence_check(list(SURFACE_U[2]), 2, 1)
    assert (5275 - 15) % 4 == 0 and (2757307 - 63) % 4 == 0
    u = [1, 4, 9, 7]
    assert congruence_check(u, 2, 0) == ((u[1] - u[0]) % 2 == 0)
    assert not congruence_check([1, 2, 0, 0], 2, 0)


def test_congruence_errors():
    with pytest.raises(IndexOutOfRange):
        congruence_check([1, 3, 4], 2, 1)
    with pytest.raises(ValueError):
        congruence_check([1, 3, 4, 7], 4, 0)


def test_applicable_congruences():
    assert applicable_congruences(5) == [(2, 0), (2, 1), (3, 0), (5, 0)]
    assert (2, 2) in applicable_congruences(8)


@pytest.mark.parametrize("row", range(5))
def test_table_congruences(row):
    assert all(congruence_check(SURFACE_U[row], p, k) for p, k in applicable_congruences(5))


def test_klein_bottle_growth():
    r = growth(klein_bottle(), 5)
    assert r.u == (1, 3, 4, 7, 6)
    assert r.hom_counts == tuple(hom_sequence(1, 5, method="character")[1:])


@pytest.mark.parametrize("label, pres", [
    (label, pres) for label, pres in divisibility_catalog() if abelianization(pres).free_rank >= 1
])
def test_catalog_growth_is_integral_and_non_negative(label, pres):
    n = 5 if pres.generator_count <= 2 else 4
    r = growth(pres, n)
    assert all(u >= 0 for u in r.u)
    assert all(v >= 0 for v in r.v)
    assert u_from_v(list(r.v)) == list(r.u)
    assert product_form_check((1,) + r.hom_counts, r.v, n)
    assert _u_by_transitive_recursion((1,) + r.hom_counts[:4]) == list(r.u[:4])
