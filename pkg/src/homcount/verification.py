"""End-to-end checks: every counting formula against brute force, on catalogs.

Each ``check_*`` function returns a :class:`Check`; ``run_all`` runs them in
order.  The published surface-group tables are frozen here as literals.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product

from . import frobenius, growth, symchar
from .groups import build_group
from .homs import ClassConstraint, count_homs, default_budget, enumerate_constrained, verify_torsor
from .presentations import (AutomorphismData, Presentation, abelianization, baumslag_solitar,
                            commutator, free_presentation, gen, parse_presentation, parse_sigma,
                            parse_word, product_relator_presentation, semidirect_presentation,
                            surface_presentation)

SURFACE_U = (
    (1, 3, 4, 7, 6),
    (1, 15, 220, 5275, 151086),
    (1, 63, 7924, 2757307, 2081946006),
    (1, 255, 281740, 1542456475, 29867372813886),
    (1, 1023, 10095844, 882442672507, 429988374084026406),
)
SURFACE_V = (
    (1, 1, 1, 1, 1),
    (1, 7, 73, 1315, 30217),
    (1, 31, 2641, 689311, 416389201),
    (1, 127, 93913, 385614055, 5973474562777),
    (1, 511, 3365281, 220610667871, 85997674816805281),
)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.1f}s) {self.detail}"


def _timed(name):
    def wrap(fn):
        def run(*args, **kwargs):
            t = time.perf_counter()
            check = fn(*args, **kwargs)
            check.seconds = time.perf_counter() - t
            return check
        run.__name__ = fn.__name__
        run.check_name = name
        return run
    return wrap


# catalogs ----------------------------------------------------------------------------


def torsor_catalog() -> list[tuple[str, Presentation, AutomorphismData]]:
    """(label, presentation, sigma) pairs; sigma is an automorphism in each case."""
    entries = [
        ("Z, identity", "gens: x; rels:", "x -> x"),
        ("Z, inversion (Klein bottle)", "gens: x; rels:", "x -> x^-1"),
        ("trivial group", "gens: ; rels:", ""),
        ("F2, identity", "gens: x, y; rels:", ""),
        ("F2, swap", "gens: x, y; rels:", "x -> y; y -> x"),
        ("F2, transvection", "gens: x, y; rels:", "x -> x y"),
        ("F2, x->y, y->xy", "gens: x, y; rels:", "x -> y; y -> x y"),
        ("Z^2, rotation", "gens: x, y; rels: [x,y]", "x -> y; y -> x^-1"),
        ("Z^2, cat map", "gens: x, y; rels: [x,y]", "x -> x^2 y; y -> x y"),
        ("Z/3, inversion", "gens: x; rels: x^3", "x -> x^2"),
        ("Z/2, identity", "gens: x; rels: x^2", ""),
        ("infinite dihedral, swap", "gens: x, y; rels: x^2, y^2", "x -> y; y -> x"),
        ("Z^2, identity", "gens: x, y; rels: [x,y]", ""),
    ]
    out = []
    for label, pres_text, sigma_text in entries:
        pres = parse_presentation(pres_text)
        out.append((label, pres, parse_sigma(sigma_text, pres.generator_names)))
    return out


TORSOR_GROUPS = ("C3", "C4", "S3", "SL2_3", "S4", "PSL2_5")
DIVISIBILITY_GROUPS = ("C2", "C3", "C5", "S3", "S4", "SL2_3", "PSL2_5", "SL2_5", "S5")


def divisibility_catalog() -> list[tuple[str, Presentation]]:
    x, y = gen(0), gen(1)
    klein = semidirect_presentation(Presentation(("x",)), AutomorphismData((x.inverse(),)))
    cats = [
        ("surface g=1", surface_presentation(1)),
        ("surface g=2", surface_presentation(2)),
        ("Klein bottle", klein),
        ("free rank 1", free_presentation(1)),
        ("Z x Z/2", parse_presentation("gens: x, y; rels: [x,y], y^2")),
    ]
    for m, n in ((1, 1), (1, 2), (2, 1), (2, 3), (1, -1), (3, 2)):
        cats.append((f"Baumslag-Solitar({m},{n})", baumslag_solitar(m, n)))
    cats.append(("x^2 y x y^2", Presentation(("x", "y"), (x ** 2 * y * x * y ** 2,))))
    cats.append(("[u1,u2] z1", parse_presentation("gens: u1, u2, z1; rels: [u1,u2] z1")))
    cats.append(("[u1,u2] z1 z2", parse_presentation("gens: u1, u2, z1, z2; rels: [u1,u2] z1 z2")))
    cats.append(("[[u1,u2],u1] z1 z2", parse_presentation("gens: u1, u2, z1, z2; rels: [[u1,u2],u1] z1 z2")))
    return cats


# criterion checks ---------------------------------------------------------------------


@_timed("surface tables reproduce the published u_n and v_n exactly")
def check_surface_tables() -> Check:
    u, v = growth.surface_tables(5, 5)
    ok = tuple(map(tuple, u)) == SURFACE_U and tuple(map(tuple, v)) == SURFACE_V
    return Check("", ok, f"u5(g=5)={u[4][4]} v5(g=5)={v[4][4]}")


@_timed("PSL2(11): #{x^2 y^2 x^-2 y^-2 = 1} = 112 * 660")
def check_psl2_word(budget=None) -> Check:
    group = build_group("PSL2_11")
    w = parse_word("x^2 y^2 x^-2 y^-2", ["x", "y"])
    count = frobenius.word_solution_count(group, w, budget)
    return Check("", count == 112 * 660 and group.order == 660, f"count={count}")


def _brute_commutator_count(group, g, cls):
    """#{tuples with [x1,y1]...[xg,yg] = z} for z in class ``cls``, by enumeration."""
    rel = surface_presentation(g).relators
    word = rel[0] if rel else None
    pres = free_presentation(2 * g)
    if word is None:
        return 1 if group.classes[cls].representative == 0 else 0
    hits = enumerate_constrained(pres, group, [ClassConstraint((word,), cls)], store=False).count
    return hits // group.classes[cls].size


@_timed("character sums equal brute-force counts on S_n, n <= 4")
def check_frobenius_oracles(budget=None) -> Check:
    failures = []
    checked = 0
    for n in range(1, 5):
        group = build_group(f"S{n}")
        table = symchar.character_table(n)
        for c in group.classes:
            col = table.class_index(group.cycle_type(c.representative))
            for g in range(3):
                got = frobenius.commutator_count(table, g, col)
                want = _brute_commutator_count(group, g, c.id)
                checked += 1
                if got != want:
                    failures.append(("commutator", n, g, c.id, got, want))
        for g in (1, 2):
            got = frobenius.surface_count(table, g)
            want = count_homs(surface_presentation(g), group, budget)
            checked += 1
            if got != want:
                failures.append(("surface", n, g, got, want))
        ids = [c.id for c in group.classes]
        cols = {c.id: table.class_index(group.cycle_type(c.representative)) for c in group.classes}
        for k in (2, 3):
            for combo in combinations_with_replacement(ids, k):
                pres = product_relator_presentation(k)
                cons = [ClassConstraint((gen(i),), cid) for i, cid in enumerate(combo)]
                want = enumerate_constrained(pres, group, cons, budget, store=False).count
                got = frobenius.constrained_count(table, [cols[c] for c in combo])
                checked += 1
                if got != want:
                    failures.append(("constrained", n, combo, got, want))
        if n >= 2:
            ncyc = next(c.id for c in group.classes if group.cycle_type(c.representative) == (n,))
            for k in range(2, 5):
                pres = product_relator_presentation(k)
                cons = [ClassConstraint((gen(i),), ncyc) for i in range(k)]
                want = enumerate_constrained(pres, group, cons, budget, store=False).count
                got = frobenius.constrained_count(table, [table.class_index((n,))] * k)
                closed = frobenius.ncycle_ratio(n, k) * math.factorial(n)
                checked += 1
                if not (got == want == closed):
                    failures.append(("n-cycle", n, k, got, want, closed))
    s2 = count_homs(surface_presentation(2), build_group("S3"), budget)
    if s2 != 486:
        failures.append(("genus-2 into S3", s2))
    return Check("", not failures, f"{checked} comparisons, {len(failures)} mismatches", failures=failures)


def torsor_constrained_instances():
    """(label, presentation, sigma, group spec, constraint builder)."""
    x, y = gen(0), gen(1)
    out = []
    for spec in ("S3", "S4", "PSL2_5"):
        group = build_group(spec)
        for c in group.classes[1:]:
            out.append((f"F2 identity, x in class {c.id}", free_presentation(2),
                        AutomorphismData.identity(2), spec, [ClassConstraint((x,), c.id)]))
            out.append((f"F2 swap, x,y in class {c.id}", free_presentation(2),
                        AutomorphismData((y, x)), spec, [ClassConstraint((x, y), c.id)]))
            out.append((f"F2 transvection, [x,y] in class {c.id}", free_presentation(2),
                        AutomorphismData((x * y, y)), spec,
                        [ClassConstraint((commutator(x, y),), c.id)]))
            out.append((f"Z^2 rotation, x in class {c.id}", parse_presentation("gens: x, y; rels: [x,y]"),
                        AutomorphismData((y, x.inverse())), spec, [ClassConstraint((x,), c.id)]))
    return out


@_timed("restriction to the fiber group is a torsor (fibers, quotients)")
def check_torsors(budget=None) -> Check:
    failures = []
    runs = 0
    for spec in TORSOR_GROUPS:
        group = build_group(spec)
        for label, pres, sigma in torsor_catalog():
            report = verify_torsor(pres, sigma, group, budget=budget)
            runs += 1
            if not report.passed:
                failures.append((label, spec))
    constrained = 0
    for label, pres, sigma, spec, cons in torsor_constrained_instances():
        report = verify_torsor(pres, sigma, build_group(spec), cons, budget=budget)
        runs += 1
        constrained += 1
        if not report.passed:
            failures.append((label, spec))
    detail = (f"{len(torsor_catalog())} pairs x {len(TORSOR_GROUPS)} groups + "
              f"{constrained} constrained: {runs - len(failures)}/{runs} pass")
    return Check("", not failures, detail, failures=failures)


@_timed("|G| divides #Hom exactly for infinite abelianization (with control)")
def check_divisibility(budget=10**10) -> Check:
    failures = []
    runs = 0
    for label, pres in divisibility_catalog():
        if not abelianization(pres).is_infinite:
            failures.append((label, "finite abelianization in catalog"))
            continue
        for spec in DIVISIBILITY_GROUPS:
            group = build_group(spec)
            n = count_homs(pres, group, budget)
            runs += 1
            if n % group.order:
                failures.append((label, spec, n))
            if label.startswith("[") or label.startswith("[["):
                # constrained variant: z_i into prescribed classes
                zs = [i for i, nm in enumerate(pres.generator_names) if nm.startswith("z")]
                for combo in product(range(len(group.classes)), repeat=len(zs)):
                    if group.order > 60 and len(zs) > 1 and any(combo[1:]):
                        continue
                    cons = [ClassConstraint((gen(i),), cid) for i, cid in zip(zs, combo)]
                    m = enumerate_constrained(pres, group, cons, budget, store=False).count
                    runs += 1
                    if m % group.order:
                        failures.append((label, spec, combo, m))
    control_pres = parse_presentation("gens: x; rels: x^2")
    control = count_homs(control_pres, build_group("C3"), budget)
    control_ok = control == 1 and not abelianization(control_pres).is_infinite
    if not control_ok:
        failures.append(("control", control))
    return Check("", not failures,
                 f"{runs} divisible counts, control <x|x^2> -> C3 count={control}", failures=failures)


@_timed("SL2(F_p) closed forms match brute force")
def check_sl2(budget=None) -> Check:
    failures = []
    runs = 0
    for p in (5, 7):
        group = build_group(f"SL2_{p}")
        pres = product_relator_presentation(4)
        for lam in combinations_with_replacement(range(2, p - 1), 4):
            ratio, a = frobenius.sl2_four_class_ratio(frobenius.EigenvalueTuple(p, lam))
            cons = [ClassConstraint((gen(i),), frobenius.diagonal_class(group, l))
                    for i, l in enumerate(lam)]
            count = enumerate_constrained(pres, group, cons, budget, store=False).count
            runs += 1
            if ratio * group.order != count:
                failures.append(("four-class", p, lam, ratio, count))
            if p == 5 and lam == (2, 2, 2, 2) and (count != 8520 or a != 4):
                failures.append(("p=5 total", count, a))
    for p in (5, 7, 11, 13):
        group = build_group(f"SL2_{p}")
        for m in (2, 4, 6, 8):
            brute = frobenius.m_stable_class_count(group, m, budget)
            runs += 1
            if brute != frobenius.sl2_m_stable_closed_form(p, m):
                failures.append(("m-stable", p, m, brute))
    return Check("", not failures, f"{runs} comparisons", failures=failures)


@_timed("chi(1) s_chi(x^-m y x^n y^-1) = <Psi^m chi, Psi^n chi> on S3, S4")
def check_baumslag_solitar(budget=None) -> Check:
    failures = []
    for n_sym in (3, 4):
        group = build_group(f"S{n_sym}")
        for m, n in product((1, 2, 3), repeat=2):
            report = frobenius.bs_identity_check(n_sym, m, n, budget)
            if not report.passed:
                failures.append((n_sym, m, n))
            homs = count_homs(baumslag_solitar(m, n), group, budget)
            if homs != report.hom_count:
                failures.append(("hom count", n_sym, m, n))
            if n == 1 and Fraction(homs, group.order) != frobenius.m_stable_class_count(group, m, budget):
                failures.append(("C^m=C", n_sym, m))
    return Check("", not failures, "S3, S4 x (m,n) in {1,2,3}^2", failures=failures)


def klein_bottle() -> Presentation:
    return semidirect_presentation(Presentation(("x",)), AutomorphismData((gen(0).inverse(),)))


def klein_bottle_growth_order(budget: int, cap: int = 8, floor: int = 6) -> int:
    """Largest N <= cap whose S_N enumeration fits the budget (never below floor)."""
    letters = sum(len(r) for r in klein_bottle().relators)
    N = floor
    for n in range(floor + 1, cap + 1):
        if math.factorial(n) ** 2 * letters > budget:
            break
        N = n
    return N


@_timed("u_{p^(k+1)} = u_{p^k} mod p^(k+1) on table rows and the Klein bottle")
def check_congruences(budget=None) -> Check:
    budget = default_budget() if budget is None else budget
    failures = []
    for g, row in enumerate(SURFACE_U, start=1):
        for p, k in growth.applicable_congruences(5):
            if not growth.congruence_check(row, p, k):
                failures.append((g, p, k))
    N = klein_bottle_growth_order(budget)
    result = growth.growth(klein_bottle(), N, budget=budget)
    for p, k in growth.applicable_congruences(N):
        if not growth.congruence_check(result.u, p, k):
            failures.append(("klein", p, k))
    if any(v < 0 for v in result.v):
        failures.append(("klein v negative", result.v))
    return Check("", not failures, f"Klein bottle to N={N}: u={list(result.u)}", failures=failures)


@_timed("property suites: orthogonality, integrality, axioms, series, inversion")
def check_properties(seed: int = 0) -> Check:
    failures = []
    for n in range(0, 9):
        t = symchar.character_table(n)
        size = len(t.partitions)
        for i in range(size):
            for j in range(size):
                row = sum(s * a * b for s, a, b in zip(t.class_sizes, t.values[i], t.values[j]))
                col = sum(t.values[r][i] * t.values[r][j] for r in range(size))
                if row != (t.order if i == j else 0):
                    failures.append(("row orthogonality", n, i, j))
                if col != (t.order // t.class_sizes[i] if i == j else 0):
                    failures.append(("column orthogonality", n, i, j))
                frobenius.f_chi(t, i, j)
    for spec in TORSOR_GROUPS + ("SL2_5", "PSL2_11", "S5"):
        if not build_group(spec).check_axioms():
            failures.append(("axioms", spec))
    rng = random.Random(seed)
    for _ in range(20):
        coeffs = [Fraction(1)] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(8)]
        f = growth.RationalSeries(tuple(coeffs))
        if growth.series_exp(growth.series_log(f)) != f:
            failures.append(("log/exp", coeffs))
    for g, (u, v) in enumerate(zip(SURFACE_U, SURFACE_V), start=1):
        if growth.v_from_u(u) != list(v) or growth.u_from_v(v) != list(u):
            failures.append(("mobius", g))
        h = growth.hom_sequence(g, 5, "character")
        if not growth.product_form_check(h, v, 5):
            failures.append(("product form", g))
    return Check("", not failures, "n <= 8 tables, catalog groups, random series", failures=failures)


ALL_CHECKS = (
    check_surface_tables,
    check_psl2_word,
    check_frobenius_oracles,
    check_torsors,
    check_divisibility,
    check_sl2,
    check_baumslag_solitar,
    check_congruences,
    check_properties,
)


def run_check(i: int) -> Check:
    """Run criterion ``i`` (1-based)."""
    fn = ALL_CHECKS[i - 1]
    check = fn()
    check.name = f"[{i}] {fn.check_name}"
    return check


def run_all(echo=None) -> list[Check]:
    results = []
    for i in range(1, len(ALL_CHECKS) + 1):
        check = run_check(i)
        results.append(check)
        if echo:
            echo(check.line())
    return results
