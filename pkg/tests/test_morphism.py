import pytest

from plinth.morphism import (
    Coaction,
    NotInvariant,
    RingMorphism,
    fixed_space,
    in_span,
    is_plinth_witness,
    schreier_element,
    translation_identity,
)
from plinth.ring import AmbientMismatch, VarTable


@pytest.fixture
def t5():
    return VarTable(5, ("x", "y"))


def test_identity_and_apply(t5):
    x, y = t5.gens()
    ident = RingMorphism.identity(t5)
    assert ident.is_identity()
    assert ident.apply(x**2 + y) == x**2 + y
    m = RingMorphism(t5, (x + 1, y))
    assert m.apply(x**2) == x**2 + 2 * x + 1
    assert m.delta(x**2) == 2 * x + 1
    with pytest.raises(AmbientMismatch):
        m.apply(VarTable(5, ("x",)).var("x"))


def test_compose_order(t5):
    x, y = t5.gens()
    m1 = RingMorphism(t5, (x + y, y))
    m2 = RingMorphism(t5, (x, x * y))
    assert m1.compose(m2).images[1] == (x + y) * y
    assert m2.compose(m1).images[0] == x + x * y


def test_power_and_order(t5):
    x, y = t5.gens()
    tau = RingMorphism(t5, (x + 1, y))
    assert tau.power(5).is_identity()
    assert not tau.power(3).is_identity()
    assert tau.power(0).is_identity()


def test_coaction_axioms(t5):
    x, y = t5.gens()
    ext = t5.extend(("T",))
    X, Y, T = ext.gens()
    eps = Coaction(t5, "T", (X, Y + X * T))
    assert eps.check_counit()
    assert eps.check_coassoc()
    assert eps.is_invariant(x)
    assert not eps.is_invariant(y)
    assert eps.is_invariant(x**3 + 2)


def test_coaction_counit_failure(t5):
    ext = t5.extend(("T",))
    X, Y, T = ext.gens()
    eps = Coaction(t5, "T", (X + T, Y + T**2 + T))
    assert eps.check_counit()
    bad = Coaction(t5, "T", (X + 1, Y))
    assert not bad.check_counit()


def test_coaction_coassoc_failure():
    t = VarTable(3, ("x",))
    ext = t.extend(("T",))
    X, T = ext.gens()
    eps = Coaction(t, "T", (X + T**2,))
    assert eps.check_counit()
    assert not eps.check_coassoc()


def test_specialize(t5):
    x, y = t5.gens()
    ext = t5.extend(("T",))
    X, Y, T = ext.gens()
    eps = Coaction(t5, "T", (X, Y + X * T))
    phi = eps.specialize(x**2)
    assert phi.images == (x, y + x**3)
    with pytest.raises(NotInvariant):
        eps.specialize(y)


def test_schreier_element():
    t = VarTable(3, ("x", "y"))
    x, y = t.gens()
    phi = RingMorphism(t, (x, y + x**2))
    q = schreier_element(phi, y, x, x)
    assert q == y**3 - x**4 * y
    assert phi.is_fixed(q)
    with pytest.raises(NotInvariant):
        schreier_element(phi, y, x, x**2)
    psi = RingMorphism(t, (x + y, y))
    with pytest.raises(NotInvariant):
        schreier_element(psi, y, x, x)


@pytest.mark.parametrize("p", (2, 3, 5, 7))
def test_translation_identity(p):
    assert translation_identity(p)


def test_plinth_witness():
    t = VarTable(3, ("x", "y"))
    x, y = t.gens()
    phi = RingMorphism(t, (x, y + x**2))
    assert is_plinth_witness(phi, y, x**2)
    assert not is_plinth_witness(phi, y, x)
    assert not is_plinth_witness(phi, x, x)


def test_fixed_space_gf2():
    t = VarTable(2, ("x", "y"))
    x, y = t.gens()
    phi = RingMorphism(t, (x, y + x))
    basis = fixed_space(phi, 2)
    assert len(basis) == 4
    for b in basis:
        assert phi.is_fixed(b)
    assert in_span(t.one(), basis)
    assert in_span(x, basis)
    assert in_span(x**2, basis)
    assert in_span(x * y + y**2, basis)
    assert not in_span(y, basis)
    assert not in_span(y**2, basis)


def test_fixed_space_modp():
    t = VarTable(3, ("x", "y"))
    x, y = t.gens()
    phi = RingMorphism(t, (x, y + x**2))
    basis = fixed_space(phi, 2)
    assert len(basis) == 3
    assert in_span(x**2 + 2 * x, basis)
    assert not in_span(y, basis)
    # degree 3 only adds x^3: every y-monomial image leaves an uncancelled term
    basis3 = fixed_space(phi, 3)
    assert len(basis3) == 4
    assert in_span(x**3, basis3)
    assert not in_span(y**3 - x**4 * y, basis3)  # fixed, but degree 5


def test_fixed_space_identity_is_everything():
    t = VarTable(2, ("x", "y"))
    basis = fixed_space(RingMorphism.identity(t), 2)
    # dim of polynomials of degree <= 2 in two variables
    assert len(basis) == 6


def test_in_span_empty(t5):
    x, _ = t5.gens()
    assert in_span(t5.zero(), [])
    assert not in_span(x, [])
