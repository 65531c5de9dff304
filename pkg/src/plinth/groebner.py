"""Groebner bases over F_p: Buchberger with budgets, elimination, membership.

Monomial orders are realized as key functions mapping an exponent tuple to a
flat tuple of ints that sorts ascending; heaps extract maxima through
elementwise negation of the key.  Everything here is deterministic: input
generators are normalized and sorted before any pair is formed, reductions
always pick the first dividing generator in leading-monomial order, and the
returned basis is the reduced one (minimal, monic, tails in normal form).

Budgets guard against runaway computations.  Exceeding one raises
BudgetExceeded rather than returning a partial answer, because a truncated
basis proves nothing.
"""

from __future__ import annotations

import heapq
from operator import add as _addop

from .ring import MultiPoly, VarTable, fresh_name, substitute

DEGREE_CAP = 400
PAIR_CAP = 100_000


def _grevlex_flat(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


class BudgetExceeded(RuntimeError):
    def __init__(self, kind, limit, at):
        super().__init__("%s budget exceeded: limit %s, reached %s" % (kind, limit, at))
        self.kind = kind
        self.limit = limit
        self.at = at


class NotMember(ArithmeticError):
    """Subalgebra membership failed; .remainder holds the offending normal form."""

    def __init__(self, remainder):
        super().__init__("not a member; normal form %r" % (remainder,))
        self.remainder = remainder


class MonomialOrder:
    __slots__ = ("key", "name")

    def __init__(self, key, name):
        self.key = key
        self.name = name

    def negkey(self, m):
        return tuple(-v for v in self.key(m))

    def __repr__(self):
        return "<order %s>" % self.name


GREVLEX = MonomialOrder(_grevlex_flat, "grevlex")


def lex_order():
    return MonomialOrder(lambda m: m, "lex")


def block_order(table, front_names):
    """Eliminate front_names: compare their grevlex block first, then the rest."""
    front = tuple(table.index[nm] for nm in front_names)
    fset = set(front)
    back = tuple(i for i in range(len(table)) if i not in fset)

    def key(m):
        fe = tuple(m[i] for i in front)
        be = tuple(m[i] for i in back)
        return (sum(fe),) + tuple(-e for e in reversed(fe)) + (sum(be),) + tuple(
            -e for e in reversed(be))

    return MonomialOrder(key, "block(%s)" % ",".join(front_names))


def lead_term(f, order=GREVLEX):
    if not f.terms:
        return None
    m = max(f.terms, key=order.key)
    return m, f.terms[m]


def _divides_mono(d, m):
    return all(a <= b for a, b in zip(d, m))


def normal_form(f, gens, order=GREVLEX):
    """Remainder of f on division by gens (top reduction, first divisor wins).

    Canonical when gens is a Groebner basis for the order; otherwise just one
    valid remainder.
    """
    table = f.table
    p = table.p
    divisors = []
    for g in gens:
        if g.is_zero():
            continue
        lm, lc = lead_term(g, order)
        tail = [(m, c) for m, c in g.terms.items() if m != lm]
        divisors.append((order.key(lm), lm, pow(lc, p - 2, p), tail))
    divisors.sort(key=lambda d: d[0])
    if not divisors:
        return f
    if not f.terms:
        return f
    work = dict(f.terms)
    negkey = order.negkey
    heap = [negkey(m) + (m,) for m in work]
    heapq.heapify(heap)
    push, pop = heapq.heappush, heapq.heappop
    rem = {}
    while heap:
        m = pop(heap)[-1]
        c = work.pop(m, 0)
        if not c:
            continue
        hit = None
        for _, lm, lcinv, tail in divisors:
            if _divides_mono(lm, m):
                hit = (lm, lcinv, tail)
                break
        if hit is None:
            rem[m] = c
            continue
        lm, lcinv, tail = hit
        u = tuple(map(int.__sub__, m, lm))
        qc = c * lcinv % p
        for tm, tc in tail:
            mm = tuple(map(_addop, u, tm))
            old = work.get(mm)
            v = ((old if old else 0) - qc * tc) % p
            if v:
                if old is None:
                    push(heap, negkey(mm) + (mm,))
                work[mm] = v
            else:
                work.pop(mm, None)
    return MultiPoly(table, rem)


def s_polynomial(f, g, order=GREVLEX):
    p = f.table.p
    fm, fc = lead_term(f, order)
    gm, gc = lead_term(g, order)
    lcm = tuple(max(a, b) for a, b in zip(fm, gm))
    uf = tuple(map(int.__sub__, lcm, fm))
    ug = tuple(map(int.__sub__, lcm, gm))
    a = f.table.from_terms({uf: pow(fc, p - 2, p)})
    b = f.table.from_terms({ug: pow(gc, p - 2, p)})
    return a * f - b * g


def _normalize_gens(gens, order):
    seen = set()
    out = []
    for g in gens:
        if isinstance(g, int):
            raise TypeError("generators must be polynomials")
        if g.is_zero():
            continue
        g = g.monic() if order is GREVLEX else _monic_under(g, order)
        key = frozenset(g.terms.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    out.sort(key=lambda g: (order.key(lead_term(g, order)[0]), len(g.terms),
                            tuple(sorted(g.terms.items()))))
    return out


def _monic_under(g, order):
    lc = lead_term(g, order)[1]
    if lc == 1:
        return g
    inv = pow(lc, g.table.p - 2, g.table.p)
    return g.table.const(inv) * g


def groebner_basis(gens, order=GREVLEX, degree_cap=None, pair_cap=None):
    """Reduced Groebner basis of the ideal the generators span.

    Plain Buchberger with the product and chain criteria.  Pairs are
    processed in increasing lcm degree; a pair whose lcm degree exceeds
    degree_cap, or running past pair_cap processed pairs, aborts with
    BudgetExceeded.  A cap of None defers to the module-level defaults,
    which the CLI budget flags override.
    """
    if degree_cap is None:
        degree_cap = DEGREE_CAP
    if pair_cap is None:
        pair_cap = PAIR_CAP
    G = _normalize_gens(gens, order)
    if not G:
        return []
    lms = [lead_term(g, order)[0] for g in G]
    pending = set()
    heap = []

    def push_pair(i, j):
        lcm = tuple(max(a, b) for a, b in zip(lms[i], lms[j]))
        heapq.heappush(heap, (sum(lcm), i, j, lcm))
        pending.add((i, j))

    for j in range(len(G)):
        for i in range(j):
            push_pair(i, j)
    processed = 0
    while heap:
        deg, i, j, lcm = heapq.heappop(heap)
        pending.discard((i, j))
        if deg > degree_cap:
            raise BudgetExceeded("degree", degree_cap, deg)
        processed += 1
        if processed > pair_cap:
            raise BudgetExceeded("pairs", pair_cap, processed)
        mi, mj = lms[i], lms[j]
        if tuple(map(_addop, mi, mj)) == lcm:
            continue  # disjoint leading supports, S-poly reduces to zero
        skip = False
        for k in range(len(G)):
            if k in (i, j) or not _divides_mono(lms[k], lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a not in pending and b not in pending:
                skip = True
                break
        if skip:
            continue
        r = normal_form(s_polynomial(G[i], G[j], order), G, order)
        if r.is_zero():
            continue
        r = _monic_under(r, order)
        G.append(r)
        lms.append(lead_term(r, order)[0])
        t = len(G) - 1
        for k in range(t):
            push_pair(k, t)
    return _reduce_basis(G, order)


def _reduce_basis(G, order):
    lms = [lead_term(g, order)[0] for g in G]
    keep = []
    for i in range(len(G)):
        redundant = False
        for j in range(len(G)):
            if i == j or not _divides_mono(lms[j], lms[i]):
                continue
            if lms[j] != lms[i] or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    H = [G[i] for i in keep]
    out = []
    for i in range(len(H)):
        others = out + H[i + 1:]
        r = normal_form(H[i], others, order)
        out.append(_monic_under(r, order))
    out.sort(key=lambda g: order.key(lead_term(g, order)[0]))
    return out


def in_ideal(f, gens, order=GREVLEX, degree_cap=None, pair_cap=None):
    if f.is_zero():
        return True
    G = groebner_basis(gens, order, degree_cap, pair_cap)
    if not G:
        return False
    return normal_form(f, G, order).is_zero()


def in_radical(f, gens, degree_cap=None, pair_cap=None):
    """Membership in the radical via the trick of adjoining an inverse.

    f is in rad(I) iff the ideal I + (1 - w f) is the unit ideal in the ring
    extended by a fresh variable w.
    """
    if f.is_zero():
        return True
    table = f.table
    w = fresh_name(table, "w_rad")
    ext = table.extend((w,))
    egens = [g.transfer(ext) for g in gens]
    egens.append(ext.one() - ext.var(w) * f.transfer(ext))
    G = groebner_basis(egens, GREVLEX, degree_cap, pair_cap)
    return len(G) == 1 and G[0].is_one()


def eliminate(gens, drop_names, degree_cap=None, pair_cap=None):
    """Generators of the ideal's contraction to the subring without drop_names.

    Returns polynomials over the smaller table (original variables minus the
    dropped ones, order preserved).
    """
    if not gens:
        return []
    table = gens[0].table
    drop = set(drop_names)
    for nm in drop:
        if nm not in table.index:
            raise KeyError("cannot eliminate unknown variable %r" % (nm,))
    order = block_order(table, tuple(nm for nm in table.names if nm in drop))
    G = groebner_basis(gens, order, degree_cap, pair_cap)
    small = VarTable(table.p, tuple(nm for nm in table.names if nm not in drop))
    out = []
    for g in G:
        if any(g.uses(nm) for nm in drop):
            continue
        out.append(g.transfer(small))
    return out


class SubalgebraReducer:
    """Membership tester against one fixed generator set, reusable across calls.

    The primary route is a Groebner basis of the graph ideal {tag_i - g_i}
    (plus any modulo generators) under an order eliminating the ambient main
    variables, followed by normal forms.  Some generator sets make that basis
    infeasible to complete in pure Python; for the plain case (no coefficient
    variables, no modulo ideal) an exact fallback takes over: products of the
    generators with bounded weighted degree span a finite-dimensional space,
    and sparse Gaussian elimination over F_p decides whether f lies in that
    span.  Either way a found representation is re-verified by substitution
    before being returned, so a returned polynomial is always a certificate.

    The fallback can only certify membership; if the weight schedule runs out
    without a hit it raises BudgetExceeded, never NotMember.  gb_pair_budget
    caps the Buchberger attempt when the fallback is available (0 skips the
    attempt outright); without a fallback the caller's pair_cap applies in
    full.  All state (basis, power table, pivots) persists across reduce()
    calls, so reducing many elements against the same generators pays the
    setup once.
    """

    def __init__(self, gens, coeff_names=(), modulo=(), degree_cap=None,
                 pair_cap=None, gb_pair_budget=200, weight_cap=None):
        items = list(gens.items()) if isinstance(gens, dict) else list(gens)
        if not items:
            raise ValueError("need at least one generator")
        self.table = items[0][1].table
        for tag, _ in items:
            if tag in self.table.index:
                raise ValueError("tag %r collides with a ring variable" % (tag,))
        self.items = items
        self.tags = tuple(tag for tag, _ in items)
        self.coeff_names = tuple(coeff_names)
        self.modulo = tuple(modulo)
        self.degree_cap = DEGREE_CAP if degree_cap is None else degree_cap
        self.pair_cap = PAIR_CAP if pair_cap is None else pair_cap
        self.gb_pair_budget = gb_pair_budget
        self.weight_cap = weight_cap
        self.result_table = VarTable(self.table.p,
                                     self.coeff_names + self.tags)
        self._plain = not self.coeff_names and not self.modulo
        self._gb = None
        self._weights = tuple(g.degree() for _, g in items)
        self._powers = {}
        self._pivots = {}
        self._built = -1

    def reduce(self, f):
        got = self._gb_route()
        if not isinstance(got, BudgetExceeded):
            G, order, ext, main = got
            nf = normal_form(f.transfer(ext), G, order)
            if any(nf.uses(nm) for nm in main):
                raise NotMember(nf)
            rep = nf.transfer(self.result_table)
            return self._verified(rep, f)
        if not self._plain:
            raise got
        return self._linear(f)

    def _gb_route(self):
        if self._gb is None:
            budget = self.pair_cap
            if self._plain:
                budget = min(budget, self.gb_pair_budget)
            if budget <= 0:
                self._gb = BudgetExceeded("pair", 0, 0)
                return self._gb
            ext = self.table.extend(self.tags)
            rel = [ext.var(tag) - g.transfer(ext) for tag, g in self.items]
            rel += [m.transfer(ext) for m in self.modulo]
            main = tuple(nm for nm in self.table.names
                         if nm not in set(self.coeff_names))
            order = block_order(ext, main)
            try:
                G = groebner_basis(rel, order, self.degree_cap, budget)
            except BudgetExceeded as exc:
                self._gb = exc
            else:
                self._gb = (G, order, ext, main)
        return self._gb

    def _verified(self, rep, f):
        back = dict(self.items)
        diff = substitute(rep, back, target=self.table) - f
        ok = diff.is_zero()
        if not ok and self.modulo:
            ok = in_ideal(diff, list(self.modulo), GREVLEX, self.degree_cap,
                          self.pair_cap)
        if not ok:
            raise NotMember(rep)
        return rep

    def _linear(self, f):
        if f.is_zero():
            return self.result_table.zero()
        if min(self._weights) < 1:
            raise self._gb
        w0 = max(f.degree(), max(self._weights))
        cap = self.weight_cap if self.weight_cap is not None else 4 * w0
        width = min(w0, cap)
        while True:
            self._build(width)
            combo = self._solve(f)
            if combo is not None:
                return self._verified(self._combo_poly(combo), f)
            if width >= cap:
                raise BudgetExceeded("subalgebra weight", cap, width)
            width = min(2 * width, cap)

    def _build(self, width):
        if width <= self._built:
            return
        fresh = [a for a in self._alphas(width)
                 if self._alpha_weight(a) > self._built]
        fresh.sort(key=lambda a: (self._alpha_weight(a), a))
        for alpha in fresh:
            self._insert(alpha)
        self._built = width

    def _alphas(self, width):
        weights = self._weights
        n = len(weights)
        out = []

        def rec(i, remaining, prefix):
            if i == n:
                out.append(tuple(prefix))
                return
            w = weights[i]
            e = 0
            while e * w <= remaining:
                prefix.append(e)
                rec(i + 1, remaining - e * w, prefix)
                prefix.pop()
                e += 1

        rec(0, width, [])
        return out

    def _alpha_weight(self, alpha):
        return sum(e * w for e, w in zip(alpha, self._weights))

    def _power(self, alpha):
        got = self._powers.get(alpha)
        if got is not None:
            return got
        if not any(alpha):
            val = self.table.one()
        else:
            i = next(j for j, e in enumerate(alpha) if e)
            prev = list(alpha)
            prev[i] -= 1
            val = self._power(tuple(prev)) * self.items[i][1]
        self._powers[alpha] = val
        return val

    def _insert(self, alpha):
        p = self.table.p
        vec = dict(self._power(alpha).terms)
        combo = {alpha: 1}
        self._strip(vec, combo)
        if not vec:
            return
        lead = max(vec, key=_grevlex_flat)
        inv = pow(vec[lead], p - 2, p)
        if inv != 1:
            for m in vec:
                vec[m] = vec[m] * inv % p
            for a in combo:
                combo[a] = combo[a] * inv % p
        self._pivots[lead] = (vec, combo)

    def _strip(self, vec, combo):
        # invariant: vec - sum(combo[a] * product(a)) stays constant
        p = self.table.p
        while vec:
            lead = max(vec, key=_grevlex_flat)
            hit = self._pivots.get(lead)
            if hit is None:
                return
            pvec, pcombo = hit
            mu = vec[lead]
            for m, c in pvec.items():
                v = (vec.get(m, 0) - mu * c) % p
                if v:
                    vec[m] = v
                else:
                    vec.pop(m, None)
            for a, c in pcombo.items():
                v = (combo.get(a, 0) - mu * c) % p
                if v:
                    combo[a] = v
                else:
                    combo.pop(a, None)

    def _solve(self, f):
        vec = dict(f.terms)
        combo = {}
        self._strip(vec, combo)
        if vec:
            return None
        p = self.table.p
        return {a: -c % p for a, c in combo.items() if c % p}

    def _combo_poly(self, combo):
        rt = self.result_table
        total = rt.zero()
        for alpha, c in sorted(combo.items()):
            term = rt.const(c)
            for tag, e in zip(self.tags, alpha):
                if e:
                    term = term * rt.var(tag) ** e
            total = total + term
        return total


def subalgebra_reduce(f, gens, coeff_names=(), modulo=(), degree_cap=None,
                      pair_cap=None):
    """Express f as a polynomial in named generators, optionally modulo an ideal.

    gens maps fresh tag names to polynomials over f's table.  Coefficients may
    involve the variables listed in coeff_names.  On success the returned
    polynomial lives over VarTable(p, coeff_names + tag names) and satisfies

        f  ==  result(coeffs, gens)          (mod the modulo ideal)

    which is re-verified by substitution before returning.  Failure raises
    NotMember carrying the remainder that witnesses the obstruction.  For
    repeated reductions against one generator set build a SubalgebraReducer
    once and call reduce() on it.
    """
    reducer = SubalgebraReducer(gens, coeff_names, modulo, degree_cap, pair_cap)
    return reducer.reduce(f)


def solve_in_span(target, rows):
    """Exact coefficients expressing target in the F_p-span of rows, or None.

    Sparse Gaussian elimination over the monomial basis, grevlex-max pivots.
    When the rows are linearly independent the coefficient list is unique,
    so it does not depend on the elimination path.
    """
    p = target.table.p
    pivots = {}

    def strip(vec, combo):
        while vec:
            lead = max(vec, key=_grevlex_flat)
            hit = pivots.get(lead)
            if hit is None:
                return lead
            pvec, pcombo = hit
            mu = vec[lead]
            for m, c in pvec.items():
                v = (vec.get(m, 0) - mu * c) % p
                if v:
                    vec[m] = v
                else:
                    vec.pop(m, None)
            for i, c in pcombo.items():
                v = (combo.get(i, 0) - mu * c) % p
                if v:
                    combo[i] = v
                else:
                    combo.pop(i, None)
        return None

    for idx, row in enumerate(rows):
        vec = dict(row.terms)
        combo = {idx: 1}
        lead = strip(vec, combo)
        if lead is None:
            continue
        inv = pow(vec[lead], p - 2, p)
        if inv != 1:
            for m in vec:
                vec[m] = vec[m] * inv % p
            for i in combo:
                combo[i] = combo[i] * inv % p
        pivots[lead] = (vec, combo)

    vec = dict(target.terms)
    combo = {}
    if strip(vec, combo) is not None:
        return None
    out = [0] * len(rows)
    for i, c in combo.items():
        if c % p:
            out[i] = -c % p
    return out


def gcd_pair(f, g, degree_cap=None, pair_cap=None):
    """Monic gcd via lcm: (f) .. (g) intersect in (lcm), and gcd = f g / lcm."""
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    table = f.table
    t = fresh_name(table, "t_gcd")
    ext = table.extend((t,))
    tv = ext.var(t)
    fe, ge = f.transfer(ext), g.transfer(ext)
    inter = eliminate([tv * fe, (ext.one() - tv) * ge], (t,), degree_cap, pair_cap)
    assert len(inter) == 1, "intersection of principal ideals must be principal"
    lcm = inter[0].transfer(table)
    return (f * g).exact_div(lcm).monic()
