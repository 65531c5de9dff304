import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from plinth.rank3 import (
    Rank3Family,
    hand_example,
    hand_example_images,
    multiplicative_order,
)


@pytest.fixture(scope="module")
def fam22():
    return Rank3Family(2, 1, 2, 2)


@pytest.fixture(scope="module")
def fam23():
    return Rank3Family(2, 1, 2, 3)


@pytest.fixture(scope="module")
def fam313():
    return Rank3Family(3, 1, 1, 3)


def test_parameter_validation():
    with pytest.raises(ValueError):
        Rank3Family(2, 0, 2, 2)
    with pytest.raises(ValueError):
        Rank3Family(2, 1, 1, 1)
    with pytest.raises(ValueError):
        Rank3Family(2, 1, 1, 2)


def test_defining_division(fam23):
    f, r, g = fam23.f, fam23.r, fam23.g
    x1, x2, x3 = fam23.x1, fam23.x2, fam23.x3
    assert f == x1 * x3 - x2**3
    assert r == f * x2 + x1**2
    assert x1 * g == f**4 + r**3


def test_middle_part_representation(fam23):
    rep = fam23.gstar_rep
    W, X = rep.table.var("W"), rep.table.var("X")
    assert rep == W**2 * X + W * X**3


def test_middle_part_vanishes_iff_t_is_p_power(fam22, fam23, fam313):
    assert fam22.gstar.is_zero()
    assert fam313.gstar.is_zero()
    assert not fam23.gstar.is_zero()


def test_counit_and_brute_coassociativity(fam22):
    eps = fam22.coaction()
    assert eps.check_counit()
    assert eps.check_coassoc()
    assert fam22.coassoc_certificate()


def test_coassociativity_certificate(fam23, fam313):
    assert fam23.coassoc_certificate()
    assert fam313.coassoc_certificate()


def test_closed_form_delta(fam22, fam23, fam313):
    d1, d2, d3 = fam22.closed_form_delta()
    ext = fam22.coaction().ext
    fe = fam22.f.transfer(ext)
    ge = fam22.g.transfer(ext)
    assert d1 == fe**2 * ge * ext.var("T") ** 2
    assert not d2.is_zero() and not d3.is_zero()
    fam313.closed_form_delta()
    with pytest.raises(ValueError):
        fam23.closed_form_delta()


def test_delta_containments(fam22, fam23):
    out = fam22.delta_containments()
    assert len(out) == 6
    assert all(out.values())
    out = fam23.delta_containments()
    assert len(out) == 3
    assert all(out.values())


def test_derivation_checks(fam22, fam23):
    out = fam23.derivation_checks()
    assert len(out) == 4
    assert all(out.values())
    with pytest.raises(ValueError):
        fam22.derivation_checks()


def test_hand_example_p2():
    fam, inst = hand_example(2)
    assert (fam.l, fam.m, fam.t) == (1, 2, 2)
    f, g = fam.f, fam.g
    x1, x2, x3 = fam.x1, fam.x2, fam.x3
    expected = (
        x1 + f**4 * g,
        x2 + f * g + f**7 * g**2,
        x3 + x1**2 * f**2 * g + x1 * f**6 * g**2 + f**10 * g**3,
    )
    assert inst.phi.images == expected
    assert hand_example_images(fam) == expected
    assert not inst.phi.is_identity()
    assert inst.phi.power(2).is_identity()


def test_hand_example_p3():
    fam, inst = hand_example(3)
    assert (fam.l, fam.m, fam.t) == (1, 1, 3)
    f, g = fam.f, fam.g
    x1, x2, x3 = fam.x1, fam.x2, fam.x3
    expected = (
        x1 + f**6 * g**2,
        x2 + f * g + 2 * f**5 * g**2,
        x3 + x1 * f**3 * g**2 + 2 * f**9 * g**4,
    )
    assert inst.phi.images == expected
    assert hand_example_images(fam) == expected
    assert not inst.phi.is_identity()
    assert inst.phi.power(3).is_identity()


def test_instantiate_validation(fam22):
    with pytest.raises(ValueError):
        fam22.instantiate(fam22.f)
    with pytest.raises(ValueError):
        fam22.instantiate(fam22.htable.zero())
    inst = fam22.instantiate("f*g + g^2", deep_checks=False)
    assert inst.h == fam22.f * fam22.g + fam22.g**2


def test_invariants_plain_branch(fam22):
    inst = fam22.instantiate("f")
    inv = inst.invariants()
    f, g, r = fam22.f, fam22.g, fam22.r
    assert inv.branch == "plain"
    assert inv.q1 == fam22.x1 + f**2 * r
    assert inv.q2 == fam22.x2**2 + g * r + f**6 * r**4
    assert (inv.q1.degree(), inv.q2.degree(), inv.q3.degree()) == (7, 24, 17)
    assert g * inv.q1 == f**3 + inst.q
    assert inv.q1 * inv.q3 - inv.q2 == f
    assert f**2 * inv.q3 + inv.lam == g
    assert f**2 * inv.q2 + inv.xi == inst.q
    assert inv.lam * inv.q1 == inv.xi


def test_invariants_eta_branch(fam22):
    inst = fam22.instantiate("g", deep_checks=False)
    inv = inst.invariants()
    assert inv.branch == "eta"
    q1 = inv.q1
    f = fam22.f
    assert q1 == fam22.x1 + f * fam22.g * fam22.r
    assert inv.xi == q1**4 + f * q1**8


def test_invariants_need_p_dividing_t(fam23):
    inst = fam23.instantiate("f", deep_checks=False)
    with pytest.raises(ValueError):
        inst.invariants()


def test_plinth_suite_p_divides_t(fam22):
    inst = fam22.instantiate("f")
    out = inst.plinth_suite()
    assert all(out.values())
    assert "witness (r, f^l g h)" in out
    assert any("divisible by g h" in key for key in out)


def test_plinth_suite_p_coprime_to_t():
    fam = Rank3Family(2, 1, 1, 3)
    assert multiplicative_order(2, 3) == 2
    inst = fam.instantiate("f")
    out = inst.plinth_suite()
    assert all(out.values())
    assert not any("divisible by g h" in key for key in out)


def test_multiplicative_order():
    assert multiplicative_order(2, 3) == 2
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 2) == 1
    assert multiplicative_order(2, 5) == 4
    with pytest.raises(ValueError):
        multiplicative_order(2, 4)


def test_frobenius_images_small():
    fam = Rank3Family(3, 1, 3, 2)
    inst = fam.instantiate("f*g", deep_checks=False)
    fro = inst.frobenius_images()
    assert fro.all_pass()
    f, g = fam.f, fam.g
    for pi, xv in ((fro.p1, fam.x1), (fro.p2, fam.x2), (fro.p3, fam.x3)):
        assert (f * g).divides(pi - xv**3)
    assert fro.p1 * fro.p3 == fro.p2**2 + f**3


def test_frobenius_rejects_p_dividing_t(fam22):
    inst = fam22.instantiate("f")
    with pytest.raises(ValueError):
        inst.frobenius_images()


def test_frobenius_rejects_uncovered_h(fam23):
    inst = fam23.instantiate("f", deep_checks=False)
    with pytest.raises(ValueError):
        inst.frobenius_images()


@settings(max_examples=12, deadline=None)
@given(
    p=st.sampled_from((2, 3, 5)),
    l=st.integers(1, 2),
    m=st.integers(1, 2),
    t=st.integers(2, 3),
)
def test_family_axioms_hold_across_parameters(p, l, m, t):
    assume(m * t >= 3)
    fam = Rank3Family(p, l, m, t)
    assert fam.x1 * fam.g == fam.f ** (l * t + 1) + fam.r**t
    assert fam.coaction().check_counit()
    assert fam.coassoc_certificate()
