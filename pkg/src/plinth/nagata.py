"""Order-p plane automorphisms of Nagata type over R = F_p[z..].

Given a nonzero a in R, theta in y R[y], and F a polynomial in the symbol
f, the map

    phi(y) = y + a F,    phi(x) = x + (theta(y) - theta(y + a F)) / a

is an automorphism of R[x, y] of order p fixing f = a x + theta(y); the
division by a is exact by the Taylor expansion of theta.  The family
splits theta along p-th powers: d is the gcd of a with the coefficients
of theta', b = a / d, and

    theta(y) = theta*(y^p) + d rho(y)

with gcd(b, rho) = gcd(b, rho') = 1.  From this the invariant generators
q (the orbit norm of y), q1 (clearing d from f - theta*(q)), and q2 (via
the conductor representation of rho'^p y) are constructed, together with
the single relation Lam between them whose vanishing is verified by
substitution.  Principality of the plinth ideal, the coordinate property
of the quotient surface, and the existence of a singular point are each
decided by ideal-membership certificates.
"""

from __future__ import annotations

from .conductor import represent
from .expr import parse_poly
from .groebner import (GREVLEX, BudgetExceeded, NotMember, gcd_pair,
                       groebner_basis, normal_form, solve_in_span,
                       subalgebra_reduce)
from .morphism import (Coaction, NotInvariant, RingMorphism, is_plinth_witness,
                       schreier_element)
from .ring import NotDivisible, VarTable, fresh_name, substitute

_NUHAT_DEGREE_CAP = 6
_NUHAT_WINDOW_STEPS = 4


def _coerce(value, table, what):
    got = parse_poly(value, table) if isinstance(value, str) \
        else value.transfer(table)
    if what and got.is_zero():
        raise ValueError("%s must be nonzero" % (what,))
    return got


class NagataFamily:
    """One built family; immutable after construction.

    Construction validates every structural identity (a = b d, the split
    of theta, the coprimality of b with rho and rho') and certifies that
    phi has order p: by direct composition for p <= 3, and through the
    one-parameter coaction y -> y + a F T otherwise.
    """

    def __init__(self, p, n, a, theta, F):
        if n < 1:
            raise ValueError("need at least one coefficient variable")
        self.p = p
        self.n = n
        znames = ("z",) if n == 1 else tuple("z%d" % i for i in range(1, n + 1))
        self.znames = znames
        self.rtable = VarTable(p, znames)
        self.ytable = VarTable(p, znames + ("y",))
        self.ftable = VarTable(p, znames + ("f",))
        self.table = VarTable(p, znames + ("x", "y"))

        self.a = _coerce(a, self.rtable, "a")
        theta = _coerce(theta, self.ytable, "theta")
        yi = self.ytable.index["y"]
        if any(mono[yi] == 0 for mono in theta.terms):
            raise ValueError("theta must vanish at y = 0")
        self.theta = theta
        self.F = _coerce(F, self.ftable, "F")

        self.t = {i: c.transfer(self.rtable)
                  for i, c in theta.split_by("y").items()}
        d = self.a
        for i, ti in sorted(self.t.items()):
            if i % p:
                d = gcd_pair(d, ti)
        self.d = d.monic()
        self.b = self.a.exact_div(self.d)

        yv = self.ytable.var("y")
        rho = self.ytable.zero()
        star = self.ytable.zero()
        for i, ti in sorted(self.t.items()):
            lift = ti.transfer(self.ytable)
            if i % p:
                rho = rho + lift.exact_div(self.d.transfer(self.ytable)) * yv**i
            else:
                star = star + lift * yv ** (i // p)
        self.rho = rho
        self.theta_star = star

        # structural identities behind the construction
        assert self.b * self.d == self.a
        dy = self.d.transfer(self.ytable)
        assert substitute(star, {"y": yv**p}, target=self.ytable) \
            + dy * rho == theta
        assert theta.diff("y") == dy * rho.diff("y")
        by = self.b.transfer(self.ytable)
        if rho.is_zero():
            # theta' = 0 makes d an associate of a, so b is a unit
            assert self.b.is_constant() and not self.b.is_zero()
        else:
            assert gcd_pair(by, rho).is_one()
            assert gcd_pair(by, rho.diff("y")).is_one()

        xm = self.table.var("x")
        ym = self.table.var("y")
        self.f = self.a.transfer(self.table) * xm + theta.transfer(self.table)
        self.Fx = substitute(self.F, {"f": self.f}, target=self.table)
        self.aF = self.a.transfer(self.table) * self.Fx

        shifted = substitute(theta.transfer(self.table), {"y": ym + self.aF},
                             target=self.table)
        px = xm + (theta.transfer(self.table) - shifted).exact_div(
            self.a.transfer(self.table))
        py = ym + self.aF
        images = tuple(self.table.var(nm) for nm in znames) + (px, py)
        self.phi = RingMorphism(self.table, images)

        if p <= 3:
            if not self.phi.power(p).is_identity():
                raise AssertionError("composition did not close at order p")
            self.order_route = "direct"
        else:
            self._coaction_certificate()
            self.order_route = "coaction"

        self._q = None
        self._lam = None
        self._relation = None
        self._principality = None
        self.invariant_checks = {}
        self.certificates = {}

    def __repr__(self):
        return "<order-%d family over %d coefficient variable(s): a=%s>" % (
            self.p, self.n, self.a)

    def _coaction_certificate(self):
        """Order p through the parametric form y -> y + a F T.

        Counit and coassociativity of the parametric action give
        phi^k = (action at T = k), and T = p vanishes in F_p.
        """
        tname = fresh_name(self.table, "T")
        ext = self.table.extend((tname,))
        tv = ext.var(tname)
        theta_m = self.theta.transfer(ext)
        step = self.aF.transfer(ext) * tv
        shifted = substitute(theta_m, {"y": ext.var("y") + step}, target=ext)
        px = ext.var("x") + (theta_m - shifted).exact_div(
            self.a.transfer(ext))
        images = tuple(ext.var(nm) for nm in self.znames) \
            + (px, ext.var("y") + step)
        co = Coaction(self.table, tname, images)
        if not co.check_counit():
            raise AssertionError("parametric action fails at T = 0")
        if not co.check_coassoc():
            raise AssertionError("parametric action fails to compose additively")
        if co.specialize(self.table.one()) != self.phi:
            raise AssertionError("specializing T = 1 must recover phi")

    # -- invariant generators -------------------------------------------

    def invariants(self):
        """(q, q1): the orbit norm of y and the d-cleared invariant.

        q = y^p - (aF)^(p-1) y comes from the orbit product of y; q1 is
        exact_div(f - theta*(q), d).  Both are verified fixed, and q1 is
        checked to sit in b x + rho(y) + d^(p-2) (bF)^(p-1) y R[f, aF, y].
        """
        if self._q is not None:
            return self._q, self._q1
        ym = self.table.var("y")
        q = schreier_element(self.phi, ym, self.a.transfer(self.table),
                             self.Fx)
        star_at_q = self._eval_series(self.theta_star, q)
        q1 = (self.f - star_at_q).exact_div(self.d.transfer(self.table))
        if not self.phi.is_fixed(self.f):
            raise AssertionError("f must be fixed")
        if not self.phi.is_fixed(q1):
            raise AssertionError("q1 must be fixed")
        self.invariant_checks["phi fixes f, q, q1"] = True
        self._containment(q1)
        self._q, self._q1 = q, q1
        return q, q1

    def _eval_series(self, series, value):
        """series over (z.., y) evaluated at y = value over the main table."""
        out = self.table.zero()
        for i, c in series.split_by("y").items():
            out = out + c.transfer(self.rtable).transfer(self.table) * value**i
        return out

    def _containment(self, q1):
        """q1 - b x - rho lies in d^(p-2) (bF)^(p-1) y R[f, aF, y]."""
        p = self.p
        rem = q1 - self.b.transfer(self.table) * self.table.var("x") \
            - self.rho.transfer(self.table)
        key = "q1 - b x - rho in d^(p-2) (bF)^(p-1) y R[f, aF, y]"
        if rem.is_zero():
            self.invariant_checks[key] = True
            return
        factor = self.d.transfer(self.table) ** (p - 2) \
            * (self.b.transfer(self.table) * self.Fx) ** (p - 1) \
            * self.table.var("y")
        quot = rem.exact_div(factor)
        if not quot.is_constant():
            try:
                subalgebra_reduce(
                    quot,
                    (("Wf", self.f), ("Wa", self.aF),
                     ("Wy", self.table.var("y"))),
                    coeff_names=self.znames)
            except NotMember as exc:
                raise AssertionError(
                    "containment violated: %r" % (exc.remainder,)) from exc
        self.invariant_checks[key] = True

    def lambda_and_q2(self):
        """(lam, qt1, q2) from the conductor representation of rho'^p y.

        qt1 = exact_div(q1^p - rho^[p](q), b^(p-1)) where rho^[p] raises
        the coefficients of rho to the p-th power; lam(Y0, Y1) satisfies
        rho'(y)^p y = lam(y^p, rho(y)); q2 clears the final b from
        qt1 - lam(q, q1) (dF)^(p-1).  Invariance of qt1 and q2 and the
        defining reconstruction are verified.
        """
        if self._lam is not None:
            return self._lam, self._qt1, self._q2
        p = self.p
        q, q1 = self.invariants()
        lamtable = VarTable(p, self.znames + ("Y0", "Y1"))
        if self.rho.is_zero():
            lam = lamtable.zero()
        else:
            lam = represent(self.rho, 1, main="y").lam
            assert lam.table == lamtable
        rho_p_at_q = self._frob_series(self.rho, q)
        qt1 = (q1**p - rho_p_at_q).exact_div(
            self.b.transfer(self.table) ** (p - 1))
        lam_at = substitute(lam, {"Y0": q, "Y1": q1}, target=self.table)
        dF = self.d.transfer(self.table) * self.Fx
        q2 = (qt1 - lam_at * dF ** (p - 1)).exact_div(
            self.b.transfer(self.table))
        if not self.phi.is_fixed(qt1):
            raise AssertionError("qt1 must be fixed")
        if not self.phi.is_fixed(q2):
            raise AssertionError("q2 must be fixed")
        if qt1 != self.b.transfer(self.table) * q2 + lam_at * dF ** (p - 1):
            raise AssertionError("defining identity for q2 failed")
        self.invariant_checks["phi fixes qt1, q2"] = True
        self._lam, self._qt1, self._q2 = lam, qt1, q2
        return lam, qt1, q2

    def _frob_series(self, series, value):
        """series with coefficients raised to the p-th power, at y = value."""
        out = self.table.zero()
        for i, c in series.split_by("y").items():
            lift = c.transfer(self.rtable).transfer(self.table)
            out = out + lift ** self.p * value**i
        return out

    # -- the relation ----------------------------------------------------

    def relation(self):
        """Lam(y0, y1, y2) with Lam(q, q1, q2) = 0 verified bit-exactly.

        nu(y0, y1) = (d F(d y1 + theta*(y0)))^(p-1) realizes (dF)^(p-1)
        in the generators, by f = d q1 + theta*(q); then

            Lam = b^p y2 + rho^[p](y0) - y1^p + b^(p-1) lam(y0,y1) nu(y0,y1).
        """
        if self._relation is not None:
            return self._relation
        p = self.p
        lam, qt1, q2 = self.lambda_and_q2()
        q, q1 = self.invariants()
        lt = VarTable(p, self.znames + ("y0", "y1", "y2"))
        y0, y1, y2 = lt.var("y0"), lt.var("y1"), lt.var("y2")
        star0 = self.theta_star.transfer(lt, rename={"y": "y0"})
        inner = self.d.transfer(lt) * y1 + star0
        nu = (self.d.transfer(lt)
              * substitute(self.F, {"f": inner}, target=lt)) ** (p - 1)
        rho_p = lt.zero()
        for i, c in self.rho.split_by("y").items():
            rho_p = rho_p + c.transfer(self.rtable).transfer(lt) ** p * y0**i
        lam_l = lam.transfer(lt, rename={"Y0": "y0", "Y1": "y1"})
        bl = self.b.transfer(lt)
        Lam = bl**p * y2 + rho_p - y1**p + bl ** (p - 1) * lam_l * nu
        sigma = substitute(Lam, {"y0": q, "y1": q1, "y2": q2},
                           target=self.table)
        if not sigma.is_zero():
            raise AssertionError("the relation fails on the generators: %r"
                                 % (sigma,))
        self.nu = nu
        self.ltable = lt
        self._relation = Lam
        return Lam

    # -- certificate-level tests ------------------------------------------

    def principality_test(self):
        """True iff 1 in (t_1, b) and every t_i (i >= 2, p coprime) is
        in the radical of (b); immediate for unit b.  Reduced bases are
        stashed in certificates."""
        if self._principality is not None:
            return self._principality
        if self.b.is_constant():
            self.certificates["principality"] = {"b is a unit": str(self.b)}
            self._principality = True
            return True
        certs = {}
        t1 = self.t.get(1, self.rtable.zero())
        gens = [g for g in (t1, self.b) if not g.is_zero()]
        basis = groebner_basis(gens)
        certs["basis of (t1, b)"] = [str(g) for g in basis]
        holds = basis == [self.rtable.one()]
        for i, ti in sorted(self.t.items()):
            if i < 2 or i % self.p == 0 or ti.is_zero():
                continue
            ok, radical_basis = self._radical_certificate(ti)
            certs["radical certificate for t_%d" % i] = \
                [str(g) for g in radical_basis]
            holds = holds and ok
        self.certificates["principality"] = certs
        self._principality = holds
        return holds

    def _radical_certificate(self, g):
        """(g in rad(b), reduced basis of (b, 1 - w g)) over an extra w."""
        w = fresh_name(self.rtable, "w")
        ext = self.rtable.extend((w,))
        basis = groebner_basis([self.b.transfer(ext),
                                ext.one() - ext.var(w) * g.transfer(ext)])
        return basis == [ext.one()], basis

    def coordinate_test(self):
        """True iff, writing Lam = b^p y2 + sum_i u_i(y1, z..) y0^i, the
        coefficient u_1 is a unit modulo b^p and every u_i (i >= 2) lies
        in the radical of (b)."""
        Lam = self.relation()
        lt = self.ltable
        parts = Lam.split_by("y2")
        if sorted(parts) not in ([0], [0, 1], [1]):
            raise AssertionError("relation must be linear in y2")
        if parts.get(1, lt.zero()) != self.b.transfer(lt) ** self.p:
            raise AssertionError("the y2 part of the relation must be b^p")
        if self.b.is_constant():
            self.certificates["coordinate"] = {"b is a unit": str(self.b)}
            return True
        certs = {}
        rest = parts.get(0, lt.zero())
        us = rest.split_by("y0")
        u1 = us.get(1, lt.zero())
        gens = [g for g in (u1, self.b.transfer(lt) ** self.p)
                if not g.is_zero()]
        basis = groebner_basis(gens)
        certs["basis of (u1, b^p)"] = [str(g) for g in basis]
        holds = basis == [lt.one()]
        for i, ui in sorted(us.items()):
            if i < 2 or ui.is_zero():
                continue
            wn = fresh_name(lt, "w")
            ext = lt.extend((wn,))
            rb = groebner_basis([self.b.transfer(ext),
                                 ext.one() - ext.var(wn) * ui.transfer(ext)])
            certs["radical certificate for u_%d" % i] = [str(g) for g in rb]
            holds = holds and rb == [ext.one()]
        self.certificates["coordinate"] = certs
        return holds

    def nonsmooth_test(self):
        """True iff the zero locus of the relation has a singular point:
        the ideal of Lam and all its partials is proper."""
        Lam = self.relation()
        lt = self.ltable
        gens = [Lam]
        for nm in ("y0", "y1", "y2") + self.znames:
            gens.append(Lam.diff(nm))
        basis = groebner_basis([g for g in gens if not g.is_zero()])
        self.certificates["nonsmooth"] = {
            "basis of (Lam, partials)": [str(g) for g in basis]}
        return basis != [lt.one()]

    # -- plinth witnesses --------------------------------------------------

    def plinth_suite(self):
        """Witness report: (y, aF) always; ((y - nuhat(q1))/b, dF) when the
        plinth ideal is principal, with nuhat found by a degree ladder for
        y = nuhat(rho(y)) modulo b.  Exhaustion of the ladder while
        principality holds is an error, never a pass."""
        q, q1 = self.invariants()
        out = {}
        ym = self.table.var("y")
        out["witness (y, aF)"] = is_plinth_witness(self.phi, ym, self.aF)
        if self.principality_test():
            nuhat = self._nuhat_ladder()
            nuhat_at = self.table.zero()
            for k, c in nuhat.split_by("y").items():
                nuhat_at = nuhat_at \
                    + c.transfer(self.rtable).transfer(self.table) * q1**k
            s = (ym - nuhat_at).exact_div(self.b.transfer(self.table))
            dF = self.d.transfer(self.table) * self.Fx
            out["witness ((y - nuhat(q1))/b, dF)"] = \
                is_plinth_witness(self.phi, s, dF)
            out["dF divides aF"] = \
                self.aF.exact_div(dF) == self.b.transfer(self.table)
        return out

    def _nuhat_ladder(self):
        """nuhat over (z.., y) with y - nuhat(rho(y)) in b R[y].

        Works in R[y] modulo b: rows are z-monomial multiples of powers of
        rho reduced mod b, the target is y, and the degree of the rho-power
        climbs a ladder.  Principality guarantees a hit, so exhaustion
        raises."""
        yt = self.ytable
        yv = yt.var("y")
        bm = self.b.transfer(yt).monic()
        target = normal_form(yv, [bm], GREVLEX)
        rho = self.rho
        for cap in range(1, _NUHAT_DEGREE_CAP + 1):
            for step in range(_NUHAT_WINDOW_STEPS + 1):
                zc = step + max(
                    (self.b.degree_in(nm) for nm in self.znames), default=0)
                meta = []
                rows = []
                power = yt.one()
                for k in range(cap + 1):
                    base = normal_form(power, [bm], GREVLEX)
                    for mono in _z_monomials(yt, self.znames, zc):
                        meta.append((k, mono))
                        rows.append(normal_form(base * mono, [bm], GREVLEX))
                    power = power * rho
                coeffs = solve_in_span(target, rows)
                if coeffs is None:
                    continue
                nuhat = yt.zero()
                for (k, mono), c in zip(meta, coeffs):
                    if c:
                        nuhat = nuhat + yt.const(c) * mono * yv**k
                check = yv - substitute(nuhat, {"y": rho}, target=yt)
                if not check.is_zero():
                    check.exact_div(bm)
                return nuhat
        raise AssertionError(
            "no representation of y by rho(y) modulo b within the ladder; "
            "principality certified the contrary")

    def check_witness(self, g, h, c):
        """Witness from user data: given fixed g, h with y g = h modulo c,
        emit (s, u) = ((y g - h)/c, a F g / c) and verify it.

        Raises NotInvariant for unfixed g or h and NotDivisible when c does
        not divide as promised."""
        g = _coerce(g, self.table, None)
        h = _coerce(h, self.table, None)
        c = _coerce(c, self.table, "c")
        if not self.phi.is_fixed(g):
            raise NotInvariant("g is not fixed")
        if not self.phi.is_fixed(h):
            raise NotInvariant("h is not fixed")
        s = (self.table.var("y") * g - h).exact_div(c)
        u = (self.aF * g).exact_div(c)
        if not is_plinth_witness(self.phi, s, u):
            raise AssertionError("assembled pair is not a witness")
        return s, u


def _z_monomials(table, znames, cap):
    """All monomials in the z-variables of total degree at most cap."""
    out = [table.one()]
    for nm in znames:
        v = table.var(nm)
        out = [m * v**e for m in out for e in range(cap + 1)]
    return [m for m in out if m.degree() <= cap]


def classic_family(p):
    """The quadratic-shift family a = z, theta = y^2, F = f at a prime p."""
    return NagataFamily(p, 1, "z", "y^2", "f")
