import random

import pytest

from plinth.groebner import (
    GREVLEX,
    BudgetExceeded,
    NotMember,
    block_order,
    eliminate,
    gcd_pair,
    groebner_basis,
    in_ideal,
    in_radical,
    lead_term,
    normal_form,
    s_polynomial,
    subalgebra_reduce,
)
from plinth.ring import VarTable


@pytest.fixture
def txy7():
    return VarTable(7, ("x", "y"))


def test_reduced_basis_frozen(txy7):
    x, y = txy7.gens()
    G = groebner_basis([x**2 + y**2, x * y])
    assert G == [x * y, x**2 + y**2, y**3]


def test_basis_is_groebner_and_contains_ideal(txy7):
    x, y = txy7.gens()
    gens = [x**2 + y**2, x * y]
    G = groebner_basis(gens)
    for g in gens:
        assert normal_form(g, G).is_zero()
    for i in range(len(G)):
        for j in range(i):
            assert normal_form(s_polynomial(G[i], G[j]), G).is_zero()


def test_basis_random_property():
    rng = random.Random(99)
    for trial in range(25):
        p = rng.choice((2, 3, 5))
        t = VarTable(p, ("x", "y"))
        gens = []
        for _ in range(rng.randrange(1, 4)):
            terms = {
                (rng.randrange(4), rng.randrange(4)): rng.randrange(1, p)
                for _ in range(rng.randrange(1, 5))
            }
            gens.append(t.from_terms(terms))
        G = groebner_basis(gens)
        for g in gens:
            assert normal_form(g, G).is_zero()
        for i in range(len(G)):
            for j in range(i):
                assert normal_form(s_polynomial(G[i], G[j]), G).is_zero()


def test_basis_input_order_invariance(txy7):
    x, y = txy7.gens()
    gens = [x**3 - y, x * y - 1, 3 * x**2 + y**2]
    want = groebner_basis(gens)
    rng = random.Random(5)
    for _ in range(5):
        rng.shuffle(gens)
        assert groebner_basis(gens) == want


def test_normal_form_properties(txy7):
    x, y = txy7.gens()
    gens = [x**2 + y**2, x * y]
    G = groebner_basis(gens)
    f = x**3 + 2 * x + 1
    r = normal_form(f, G)
    assert in_ideal(f - r, gens)
    assert normal_form(r, G) == r
    assert normal_form(txy7.zero(), G).is_zero()
    # against a non-basis the remainder is still congruent to f
    r2 = normal_form(f, gens)
    assert in_ideal(f - r2, gens)


def test_in_ideal(txy7):
    x, y = txy7.gens()
    gens = [x**2 + y**2, x * y]
    assert in_ideal(x**2 + y**2, gens)
    assert in_ideal(x**3, gens)
    assert not in_ideal(x, gens)
    assert not in_ideal(txy7.one(), gens)
    assert in_ideal(txy7.zero(), [])
    assert not in_ideal(x, [])


def test_in_radical(txy7):
    x, y = txy7.gens()
    assert in_radical(x, [x**2])
    assert in_radical(x * y, [x**3 * y**2])
    assert not in_radical(y, [x**2])
    assert in_radical(txy7.zero(), [x])
    assert not in_radical(txy7.one(), [x])


def test_eliminate_frozen(txy7):
    x, y = txy7.gens()
    out = eliminate([x * y - 1, x**2 - y], ("x",))
    small = VarTable(7, ("y",))
    assert out == [small.var("y") ** 3 - 1]


def test_block_order_splits_blocks():
    t = VarTable(5, ("a", "b", "c"))
    order = block_order(t, ("a",))
    # any positive power of a beats anything a-free
    assert order.key((1, 0, 0)) > order.key((0, 4, 4))
    assert order.key((2, 0, 1)) > order.key((1, 5, 5))
    # a-free monomials compare by grevlex on the rest
    assert order.key((0, 1, 1)) > order.key((0, 0, 2))


def test_lead_term_under_orders(txy7):
    x, y = txy7.gens()
    f = x + y**2
    assert lead_term(f, GREVLEX)[0] == (0, 2)
    order = block_order(txy7, ("x",))
    assert lead_term(f, order)[0] == (1, 0)


def test_gcd_pair_univariate():
    t = VarTable(5, ("x",))
    (x,) = t.gens()
    f = x**2 - 1
    g = x**2 + 3 * x + 2
    assert gcd_pair(f, g) == x + 1
    assert gcd_pair(f, t.zero()) == f.monic()
    assert gcd_pair(t.zero(), g) == g.monic()
    assert gcd_pair(f, t.one()) == t.one()


def test_gcd_pair_multivariate():
    t = VarTable(3, ("x", "y"))
    x, y = t.gens()
    f = (x + y) ** 2 * x
    g = (x + y) * y**2
    assert gcd_pair(f, g) == x + y
    assert gcd_pair(2 * f, f) == f.monic()


def test_subalgebra_reduce_plain(txy7):
    x, y = txy7.gens()
    rep = subalgebra_reduce(x**2 + x * y, {"a": x, "b": x + y})
    rt = rep.table
    assert rt.names == ("a", "b")
    assert rep == rt.var("a") * rt.var("b")


def test_subalgebra_reduce_coeff_vars():
    t = VarTable(5, ("z", "x"))
    z, x = t.gens()
    rep = subalgebra_reduce(z**2 * x**2 + z * x, {"w": x}, coeff_names=("z",))
    rt = rep.table
    zz, w = rt.gens()
    assert rt.names == ("z", "w")
    assert rep == zz**2 * w**2 + zz * w


def test_subalgebra_reduce_modulo(txy7):
    x, y = txy7.gens()
    rep = subalgebra_reduce(x**2 + y * x, {"w": x}, modulo=[y])
    assert rep == rep.table.var("w") ** 2


def test_subalgebra_reduce_failure(txy7):
    x, y = txy7.gens()
    with pytest.raises(NotMember) as ei:
        subalgebra_reduce(y, {"w": x})
    assert ei.value.remainder.uses("y")
    with pytest.raises(ValueError):
        subalgebra_reduce(y, {"x": x})


def test_budget_degree(txy7):
    x, y = txy7.gens()
    with pytest.raises(BudgetExceeded) as ei:
        groebner_basis([x**2 + y**2, x * y], degree_cap=2)
    assert ei.value.kind == "degree"


def test_budget_pairs(txy7):
    x, y = txy7.gens()
    with pytest.raises(BudgetExceeded) as ei:
        groebner_basis([x**2 + y**2, x * y], pair_cap=0)
    assert ei.value.kind == "pairs"


def test_unit_ideal(txy7):
    x, y = txy7.gens()
    G = groebner_basis([x, x + 1])
    assert G == [txy7.one()]
