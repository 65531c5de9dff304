"""End-to-end acceptance checks, one test per shipped guarantee.

Every test times itself and asserts the documented wall-clock budget, so
a correctness regression and a performance regression fail on the same
line.  All polynomial comparisons are bit-exact equality over F_p; there
are no tolerances anywhere.
"""

import random
import time

from plinth.conductor import generic_decomposition, represent
from plinth.groebner import (
    SubalgebraReducer,
    in_ideal,
    normal_form,
    solve_in_span,
    subalgebra_reduce,
)
from plinth.morphism import fixed_space, is_plinth_witness
from plinth.nagata import classic_family
from plinth.rank3 import Rank3Family, hand_example, hand_example_images
from plinth.ring import VarTable, substitute

GRID = ((2, 1, 2, 2), (2, 1, 2, 3), (3, 1, 1, 3))


def test_criterion_01_worked_example_closed_forms():
    # construction, closed-form match, and order p by direct composition
    for p in (2, 3):
        start = time.perf_counter()
        fam, inst = hand_example(p)
        for image, expected in zip(inst.phi.images, hand_example_images(fam)):
            assert image == expected
        assert inst.phi.power(p).is_identity()
        assert time.perf_counter() - start < 30.0


def test_criterion_02_coaction_axioms():
    for point in GRID:
        start = time.perf_counter()
        eps = Rank3Family(*point).coaction()
        assert eps.check_counit()
        assert eps.check_coassoc()
        assert time.perf_counter() - start < 60.0


def test_criterion_03_invariant_generators_when_p_divides_t():
    for point in ((2, 1, 2, 2), (3, 1, 1, 3)):
        fam = Rank3Family(*point)
        for h_text in ("f", "f*g"):
            start = time.perf_counter()
            inst = fam.instantiate(h_text)
            inv = inst.invariants()
            for value in (inst.q, inv.q1, inv.q2, inv.q3):
                assert inst.phi.is_fixed(value)
            assert inv.q1 * inv.q3 - inv.q2 ** (fam.t // fam.p) == fam.f
            assert fam.f ** (fam.l * fam.t) * inv.q3 + inv.lam == fam.g
            assert fam.f ** (fam.l * fam.p) * inv.q2 + inv.xi == inst.q
            assert time.perf_counter() - start < 60.0


def test_criterion_04_fixed_space_matches_generated_subalgebra():
    start = time.perf_counter()
    fam, inst = hand_example(2)
    inv = inst.invariants()
    basis = fixed_space(inst.phi, 8)
    assert len(basis) == 8
    back_images = {"V1": inv.q1, "V2": inv.q2, "V3": inv.q3}
    reducer = SubalgebraReducer(
        (("V1", inv.q1), ("V2", inv.q2), ("V3", inv.q3)), gb_pair_budget=0)
    for element in basis:
        rep = reducer.reduce(element)
        assert substitute(rep, back_images, target=fam.table) == element
    degrees = (inv.q1.degree(), inv.q2.degree(), inv.q3.degree())
    products = []
    a = 0
    while degrees[0] * a <= 8:
        b = 0
        while degrees[0] * a + degrees[1] * b <= 8:
            c = 0
            while degrees[0] * a + degrees[1] * b + degrees[2] * c <= 8:
                products.append(inv.q1 ** a * inv.q2 ** b * inv.q3 ** c)
                c += 1
            b += 1
        a += 1
    assert len(products) >= 2
    for product in products:
        assert solve_in_span(product, basis) is not None
    assert time.perf_counter() - start < 300.0


def test_criterion_05_plinth_witnesses_and_containments():
    for point in GRID + ((2, 1, 1, 3),):
        start = time.perf_counter()
        fam = Rank3Family(*point)
        inst = fam.instantiate("f")
        suite = inst.plinth_suite()
        assert all(suite.values()), suite
        if fam.t % fam.p == 0:
            # rebuild the quotient witness from scratch
            inv = inst.invariants()
            s = (fam.r - inv.q1 ** fam.m).exact_div(fam.f ** fam.l)
            assert is_plinth_witness(inst.phi, s, fam.g * inst.h)
        else:
            assert "witness (s/g, f^(u(lt+1)+l) h side)" in suite
        if point in GRID:
            lt = fam.l * fam.t
            ideal_j = [fam.x1, fam.x2 ** (lt + 1), fam.x2 ** lt * fam.x3]
            assert not in_ideal(fam.f ** fam.l, ideal_j)
            assert all(fam.delta_containments().values())
        assert time.perf_counter() - start < 60.0


def test_criterion_06_frobenius_presentation_when_p_coprime_t():
    start = time.perf_counter()
    fam = Rank3Family(2, 1, 2, 3)
    inst = fam.instantiate("f^2*g^2")
    frob = inst.frobenius_images()
    assert frob.all_pass(), frob.checks
    fg = fam.f * fam.g
    for p_i, x_i in ((frob.p1, fam.x1), (frob.p2, fam.x2), (frob.p3, fam.x3)):
        assert fg.divides(p_i - x_i ** fam.p)
    # the two kernel relations, checked as substitutions
    images = {"x1": frob.p1, "x2": frob.p2, "x3": frob.p3}
    assert substitute(fam.f, images, target=fam.table) == fam.f ** fam.p
    assert substitute(fam.g, images, target=fam.table) == fam.g ** fam.p
    assert frob.checks["partials of y^p - f vanish at origin"]
    assert frob.checks["partials of z^p - g vanish at origin"]
    assert time.perf_counter() - start < 300.0


def test_criterion_07_plane_family_p2():
    start = time.perf_counter()
    fam = classic_family(2)
    x = fam.table.var("x")
    y = fam.table.var("y")
    z = fam.table.var("z")
    f = z * x + y ** 2
    assert fam.f == f
    q, q1 = fam.invariants()
    assert q == y ** 2 + z * f * y
    assert q1 == x + f * y
    lam, qt1, q2 = fam.lambda_and_q2()
    assert q2 == q1 ** 2
    for value in (q, q1, q2):
        assert fam.phi.is_fixed(value)
    relation = fam.relation()
    sigma = substitute(relation, {"y0": q, "y1": q1, "y2": q2},
                       target=fam.table)
    assert sigma.is_zero()
    assert fam.principality_test() is True
    assert fam.coordinate_test() is True
    assert fam.nonsmooth_test() is False
    assert time.perf_counter() - start < 10.0


def test_criterion_08_plane_family_p3():
    start = time.perf_counter()
    fam = classic_family(3)
    assert fam.principality_test() is False
    assert fam.certificates["principality"]["basis of (t1, b)"] == ["z"]
    assert fam.coordinate_test() is False
    assert fam.nonsmooth_test() is True
    relation = fam.relation()
    lt = relation.table
    z, y0, y1, y2 = (lt.var(nm) for nm in ("z", "y0", "y1", "y2"))
    assert relation == z ** 3 * y2 + y0 ** 2 - y1 ** 3 + 2 * z ** 2 * y1 ** 4
    suite = fam.plinth_suite()
    assert suite == {"witness (y, aF)": True}
    assert fam.aF == fam.table.var("z") * fam.f
    assert is_plinth_witness(fam.phi, fam.table.var("y"), fam.aF)
    assert time.perf_counter() - start < 30.0


def test_criterion_09_conductor_representations():
    start = time.perf_counter()
    rng = random.Random(90210)
    cases = 0
    while cases < 50:
        p = rng.choice((2, 3, 5))
        l = rng.choice((0, 1, 2))
        table = VarTable(p, ("z1", "z2", "y"))
        y = table.var("y")
        f = table.zero()
        for _ in range(rng.randint(2, 5)):
            term = table.const(rng.randrange(1, p))
            term = term * table.var("z1") ** rng.randint(0, 2)
            term = term * table.var("z2") ** rng.randint(0, 2)
            f = f + term * y ** rng.randint(0, 6)
        if f.is_zero():
            continue
        rep = represent(f, l)
        back = substitute(rep.lam, {"Y0": y ** p, "Y1": f}, target=table)
        assert back == f.diff("y") ** p * y ** l
        cases += 1

    parts = generic_decomposition(2, 3, 0)
    assert parts == generic_decomposition(2, 3, 0, reverse_rows=True)
    big = VarTable(3, ("xi1", "y"))
    yv = big.var("y")
    g = yv ** 2 + big.var("xi1") * yv
    assembled = big.zero()
    power_of_g = big.one()
    for i in range(3):
        part = substitute(parts[2 - i], {"Y0": yv ** 3}, target=big)
        assembled = assembled + part * power_of_g
        power_of_g = power_of_g * g
    assert assembled == g.diff("y") ** 3
    for k, part in enumerate(parts):
        assert part.degree_in("xi1") <= k + 1
    assert time.perf_counter() - start < 120.0


def test_criterion_10_engine_property_suites():
    start = time.perf_counter()
    rng = random.Random(1729)

    def rand_poly(table, max_terms, max_exp):
        out = table.zero()
        for _ in range(rng.randint(0, max_terms)):
            term = table.const(rng.randrange(table.p))
            for nm in table.names:
                term = term * table.var(nm) ** rng.randint(0, max_exp)
            out = out + term
        return out

    # ring axioms
    for _ in range(1000):
        table = VarTable(rng.choice((2, 3, 5, 7)), ("x", "y"))
        a, b, c = (rand_poly(table, 5, 4) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()
        assert a * table.one() == a
        assert (a * table.zero()).is_zero()

    # Frobenius
    for _ in range(1000):
        p = rng.choice((2, 3, 5))
        table = VarTable(p, ("x", "y"))
        a = rand_poly(table, 4, 3)
        b = rand_poly(table, 4, 3)
        assert (a + b) ** p == a ** p + b ** p

    # exact division round-trip
    cases = 0
    while cases < 1000:
        table = VarTable(rng.choice((2, 3, 5)), ("x", "y"))
        a = rand_poly(table, 4, 3)
        b = rand_poly(table, 4, 3)
        if b.is_zero():
            continue
        assert (a * b).exact_div(b) == a
        cases += 1

    # normal-form idempotence
    cases = 0
    while cases < 1000:
        table = VarTable(rng.choice((2, 3, 5)), ("x", "y"))
        gens = [g for g in (rand_poly(table, 3, 3) for _ in range(rng.randint(1, 3)))
                if not g.is_zero()]
        if not gens:
            continue
        nf = normal_form(rand_poly(table, 5, 4), gens)
        assert normal_form(nf, gens) == nf
        cases += 1

    # subalgebra reduction is sound under substitution
    pools = 0
    while pools < 50:
        base = VarTable(rng.choice((2, 3, 5)), ("x", "y"))
        g1 = rand_poly(base, 3, 2)
        g2 = rand_poly(base, 3, 2)
        if g1.is_zero() or g2.is_zero():
            continue
        tags = VarTable(base.p, ("V1", "V2"))
        back_images = {"V1": g1, "V2": g2}
        for _ in range(20):
            comb = rand_poly(tags, 3, 2)
            member = substitute(comb, back_images, target=base)
            rep = subalgebra_reduce(member, (("V1", g1), ("V2", g2)))
            assert substitute(rep, back_images, target=base) == member
        pools += 1

    assert time.perf_counter() - start < 120.0
