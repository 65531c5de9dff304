"""Clearing the y-derivative: (f')^p S[y] lands inside S[y^p, f].

For f over S[y] with S = F_p[coefficient variables], multiplying by the p-th
power of f' = df/dy clears every denominator that obstructs membership in
the subring S[y^p, f].  represent() makes that effective for one target
(f')^p y^l, returning a deterministic representative lambda(Y0, Y1) with
lambda(y^p, f) equal to the target bit-exactly.  The primary method is an
exact linear solve over degree windows keyed to the target; tag-variable
elimination backstops it, and on small inputs the two methods cross-check
each other.

generic_decomposition() treats the generic monic polynomial of degree d
(coefficients are fresh symbols xi_1..xi_(d-1)): it expresses (g')^p y^l in
the basis 1, g, .., g^(p-1) with coordinates in S[y^p], which are unique,
and asserts the coefficient-degree bound deg_xi(f_(p-i)) <= p - i.
"""

from __future__ import annotations

import itertools

from .groebner import (BudgetExceeded, NotMember, solve_in_span,
                       subalgebra_reduce)
from .ring import VarTable, substitute

_WINDOW_STEPS = 4


class Representation:
    """lam over (coeff vars, Y0, Y1) with lam(y^p, f) == (f')^p * target."""

    __slots__ = ("lam", "source", "target", "l", "p")

    def __init__(self, lam, source, target, l, p):
        self.lam = lam
        self.source = source
        self.target = target
        self.l = l
        self.p = p

    def __repr__(self):
        return "<representation %s>" % (self.lam,)


def represent(f, l, main="y"):
    """Express (df/dy)^p * y^l as a polynomial in y^p and f.

    f lives over a table containing the variable named by main; every other
    variable is a coefficient.  The result's lam uses the tags Y0 (standing
    for y^p) and Y1 (standing for f); representatives are unique only up to
    the relations between y^p and f, and the one returned is determined by
    the solver's fixed row order.  The defining identity is re-verified by
    substitution before returning.  The containment (f')^p S[y] inside
    S[y^p, f] guarantees a representative exists, so a y-contaminated
    remainder on the elimination path raises AssertionError.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    rep = represent_multiple(f, f.table.var(main) ** l, main)
    rep.l = l
    return rep


def represent_multiple(f, s, main="y"):
    """Like represent, for the target (df/dy)^p * s with s over S[y].

    For fixed f the map is F_p-linear in s whenever the targets admit the
    same degree window, since solving against one fixed pivot set is
    linear; in general representatives of a sum and the sum of
    representatives agree after substituting the tags away.
    """
    table = f.table
    if main not in table.index:
        raise KeyError("no variable %r in the table of f" % (main,))
    p = table.p
    yv = table.var(main)
    target = f.diff(main) ** p * s
    coeff = tuple(nm for nm in table.names if nm != main)
    try:
        lam = _window_solve(f, target, main)
    except BudgetExceeded:
        # Elimination always terminates, so it backstops the windows, but
        # a single stalled reduction can make it very slow; in practice
        # the windows succeed first.
        try:
            lam = subalgebra_reduce(target, (("Y0", yv**p), ("Y1", f)),
                                    coeff_names=coeff)
        except NotMember as exc:
            raise AssertionError(
                "derivative-power target escaped S[y^p, f]: remainder %r"
                % (exc.remainder,)) from exc
    return Representation(lam, f, target, None, p)


def _window_solve(f, target, main):
    """Express target as sum of c * z^a * (y^p)^b * f^i by linear algebra.

    Candidate rows are capped per variable by the target's own degrees; the
    caps widen a few times before giving up, since a valid combination may
    rely on cancellation above the target's degree when the leading
    y-coefficient of f is not a unit.  Any solution is re-verified by
    substitution before being returned.
    """
    table = f.table
    p = table.p
    coeff = tuple(nm for nm in table.names if nm != main)
    result_table = VarTable(p, coeff + ("Y0", "Y1"))
    if target.is_zero():
        return result_table.zero()
    yi = table.index[main]
    zidx = tuple(table.index[nm] for nm in coeff)
    d = f.degree_in(main)
    fz = tuple(f.degree_in(nm) for nm in coeff)
    ty = target.degree_in(main)
    tz = tuple(target.degree_in(nm) for nm in coeff)
    width = len(table.names)

    for step in range(_WINDOW_STEPS + 1):
        ycap = ty + step * p
        zcap = tuple(tz[k] + step * max(1, fz[k]) for k in range(len(coeff)))
        meta = []
        rows = []
        fpow = table.one()
        i = 0
        while i * d <= ycap:
            for b in range((ycap - i * d) // p + 1):
                base = fpow.terms
                spans = [range(zcap[k] - i * fz[k] + 1)
                         for k in range(len(coeff))]
                if any(len(r) == 0 for r in spans):
                    continue
                for a in itertools.product(*spans):
                    shift = [0] * width
                    shift[yi] = p * b
                    for k, e in enumerate(a):
                        shift[zidx[k]] = e
                    shifted = {
                        tuple(m + s for m, s in zip(mono, shift)): c
                        for mono, c in base.items()}
                    meta.append((i, b, a))
                    rows.append(table.from_terms(shifted))
            fpow = fpow * f
            i += 1
        coeffs = solve_in_span(target, rows)
        if coeffs is None:
            continue
        lam = result_table.zero()
        y0 = result_table.var("Y0")
        y1 = result_table.var("Y1")
        for (i, b, a), c in zip(meta, coeffs):
            if not c:
                continue
            term = result_table.const(c) * y0**b * y1**i
            for k, e in enumerate(a):
                if e:
                    term = term * result_table.var(coeff[k]) ** e
            lam = lam + term
        images = {"Y0": table.var(main) ** p, "Y1": f}
        if substitute(lam, images, target=table) != target:
            raise AssertionError("window solution failed re-verification")
        return lam
    raise BudgetExceeded("conductor window", _WINDOW_STEPS, ty)


def _xi_tuples(d, weight):
    """Exponent tuples (a_1..a_(d-1)) with sum a_k (d - k) == weight."""
    out = []

    def rec(k, remaining, prefix):
        if k == d:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        w = d - k
        e = 0
        while e * w <= remaining:
            prefix.append(e)
            rec(k + 1, remaining - e * w, prefix)
            prefix.pop()
            e += 1

    rec(1, weight, [])
    return out


def generic_decomposition(d, p, l, reverse_rows=False):
    """Coordinates of (g')^p y^l in the basis 1, g, .., g^(p-1) over S[y^p].

    g = y^d + xi_(d-1) y^(d-1) + .. + xi_1 y is the generic monic polynomial
    without constant term over S = F_p[xi_1..xi_(d-1)]; d must be coprime to
    p.  Returns the tuple (f_1, .., f_p) over (xi_1.., Y0) satisfying

        (g')^p y^l  ==  sum over i of f_(p-i) g^i       (i = 0 .. p-1)

    with Y0 standing for y^p.  Everything is weighted-homogeneous for
    wt(y) = 1, wt(xi_k) = d - k, which makes the linear ansatz finite; the
    coordinates are unique, the assembled identity is re-verified exactly,
    and the bound deg_xi(f_(p-i)) <= p - i is asserted.  reverse_rows feeds
    the solver its rows in the opposite order; the unique answer must not
    change, which doubles as a cross-check of the solver.
    """
    if d < 1 or l < 0:
        raise ValueError("need d >= 1 and l >= 0")
    if d % p == 0:
        raise ValueError("d must be coprime to p")
    xi_names = tuple("xi%d" % k for k in range(1, d))
    big = VarTable(p, xi_names + ("y",))
    yv = big.var("y")
    g = yv**d
    for k in range(1, d):
        g = g + big.var("xi%d" % k) * yv**k
    target = g.diff("y") ** p * yv**l

    w_total = p * (d - 1) + l
    meta = []
    polys = []
    gi = big.one()
    for i in range(p):
        wi = w_total - i * d
        if wi >= 0:
            for j in range(wi // p + 1):
                for alpha in _xi_tuples(d, wi - p * j):
                    mono = yv ** (p * j)
                    for k in range(1, d):
                        if alpha[k - 1]:
                            mono = mono * big.var("xi%d" % k) ** alpha[k - 1]
                    meta.append((i, alpha, j))
                    polys.append(mono * gi)
        gi = gi * g
    if reverse_rows:
        meta.reverse()
        polys.reverse()

    coeffs = solve_in_span(target, polys)
    if coeffs is None:
        raise AssertionError("no decomposition within the homogeneous ansatz")

    out_table = VarTable(p, xi_names + ("Y0",))
    parts = [out_table.zero() for _ in range(p)]
    for (i, alpha, j), c in zip(meta, coeffs):
        if not c:
            continue
        term = out_table.const(c) * out_table.var("Y0") ** j
        for k in range(1, d):
            if alpha[k - 1]:
                term = term * out_table.var("xi%d" % k) ** alpha[k - 1]
        parts[p - i - 1] = parts[p - i - 1] + term

    acc = big.zero()
    gi = big.one()
    for i in range(p):
        acc = acc + substitute(parts[p - i - 1], {"Y0": yv**p}, target=big) * gi
        gi = gi * g
    if acc != target:
        raise AssertionError("decomposition identity failed to verify")

    xi_idx = tuple(out_table.index[nm] for nm in xi_names)
    for bound, part in enumerate(parts, start=1):
        if part.is_zero():
            continue
        degxi = max(sum(mono[i] for i in xi_idx) for mono in part.terms)
        if degxi > bound:
            raise AssertionError("coefficient degree bound violated")
    return tuple(parts)
