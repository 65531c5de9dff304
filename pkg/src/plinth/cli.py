"""Command-line front end: `plinth verify ...` and `plinth poly expand`.

Three verification suites (rank3, nagata, dedekind) run named checks over
user-chosen parameters and report one record per check, as text on stdout
and optionally as a single JSON document written atomically.  Checks run
sequentially and the report is sorted by check id, so identical
invocations produce identical reports apart from the timing fields.

Exit status: 0 when every selected check passes (inconclusive records are
tolerated unless --strict), 1 when any check fails or exhausts a budget,
2 for usage errors, including syntax errors in polynomial input and
parameter values the constructors reject.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

from . import __version__, groebner
from .conductor import generic_decomposition
from .groebner import BudgetExceeded, SubalgebraReducer
from .morphism import fixed_space
from .nagata import NagataFamily
from .rank3 import Rank3Family
from .report import CheckRecord, CheckRunner, Inconclusive, poly_stats
from .ring import VarTable


def _all_true(checks):
    """Dict of named booleans -> telemetry; failing names raise."""
    bad = sorted(k for k, v in checks.items() if not v)
    if bad:
        raise AssertionError("failed: " + "; ".join(bad))
    return {"verified": len(checks)}


@contextmanager
def _budgets(args):
    saved = (groebner.DEGREE_CAP, groebner.PAIR_CAP)
    if args.budget_degree is not None:
        groebner.DEGREE_CAP = args.budget_degree
    if args.budget_pairs is not None:
        groebner.PAIR_CAP = args.budget_pairs
    try:
        yield
    finally:
        groebner.DEGREE_CAP, groebner.PAIR_CAP = saved


def _runner(args):
    if args.checks in (None, "", "all"):
        selectors = None
    else:
        selectors = [s.strip() for s in args.checks.split(",") if s.strip()]
    return CheckRunner(selectors)


def _emit(runner, args, params):
    runner.print_text(sys.stdout.write)
    if args.json:
        runner.write_json(args.json, __version__, params)
    return runner.exit_code(args.strict)


def _usage_error(exc):
    print("error: %s" % exc, file=sys.stderr)
    return 2


def _budget_abort(runner, suite, exc):
    runner.records.append(CheckRecord(
        "%s.00-construction" % suite, "construction under the given budgets",
        {}, "budget-exceeded", str(exc), 0, {}))


# -- verify rank3 ----------------------------------------------------------


def _run_rank3(args):
    params = {"suite": "rank3", "p": args.p, "l": args.l, "m": args.m,
              "t": args.t, "h": args.h}
    runner = _runner(args)
    with _budgets(args):
        try:
            fam = Rank3Family(args.p, args.l, args.m, args.t)
            inst = fam.instantiate(args.h)
        except ValueError as exc:
            return _usage_error(exc)
        except BudgetExceeded as exc:
            _budget_abort(runner, "rank3", exc)
        else:
            _rank3_checks(runner, fam, inst, args)
    return _emit(runner, args, params)


def _rank3_checks(runner, fam, inst, args):
    p, m, t = fam.p, fam.m, fam.t

    def counit():
        eps = fam.coaction()
        return {"image terms": sum(g.term_count() for g in eps.images)}

    runner.run("rank3.01-counit",
               "parametric action exists; T = 0 recovers the identity",
               counit)

    def coassoc():
        if not fam.coassoc_certificate():
            raise AssertionError("division identities fail at T + U")

    runner.run("rank3.02-coassoc",
               "acting at T then U equals acting at T + U", coassoc)

    def closed_delta():
        try:
            d1, d2, d3 = fam.closed_form_delta()
        except ValueError as exc:
            raise Inconclusive(str(exc)) from exc
        return {"delta terms": [d.term_count() for d in (d1, d2, d3)]}

    runner.run("rank3.03-closed-delta",
               "closed forms of delta(x_i) match the action images",
               closed_delta)

    runner.run("rank3.04-delta-containments",
               "delta images land in the expected monomial ideals",
               lambda: _all_true(fam.delta_containments()))

    runner.run("rank3.05-order",
               "the specialized automorphism has order p",
               lambda: _all_true(
                   {"phi^p = id": inst.phi.power(p).is_identity()}))

    def invariants():
        if t % p:
            raise Inconclusive("invariant generators need p | t")
        inv = inst.invariants()
        return ("xi branch: %s" % inv.branch,
                {"q1": poly_stats(inv.q1), "q2": poly_stats(inv.q2),
                 "q3": poly_stats(inv.q3)})

    runner.run("rank3.06-invariants",
               "generators q1, q2, q3 and their reconstruction identities",
               invariants)

    def frobenius():
        if t % p == 0 or (m * t - 1) % p == 0:
            raise Inconclusive("the presentation needs p coprime to t and mt - 1")
        frob = inst.frobenius_images()
        telemetry = {"p%d" % i: poly_stats(g)
                     for i, g in enumerate((frob.p1, frob.p2, frob.p3), 1)}
        _all_true(frob.checks)
        return "", telemetry

    runner.run("rank3.07-frobenius",
               "x_i^p congruences, kernel relations, and singular origin",
               frobenius)

    def derivations():
        try:
            checks = fam.derivation_checks()
        except ValueError as exc:
            raise Inconclusive(str(exc)) from exc
        return _all_true(checks)

    runner.run("rank3.08-derivations",
               "Jacobian-derivation diagnostics", derivations)

    runner.run("rank3.09-plinth",
               "plinth witnesses and ideal (non)memberships",
               lambda: _all_true(inst.plinth_suite()))

    def fixed_oracle():
        d = args.fixed_space_degree
        if d <= 0:
            raise Inconclusive("skipped; pass --fixed-space-degree N")
        if t % p:
            raise Inconclusive("the oracle compares against q1, q2, q3 (p | t)")
        inv = inst.invariants()
        basis = fixed_space(inst.phi, d)
        reducer = SubalgebraReducer(
            (("V1", inv.q1), ("V2", inv.q2), ("V3", inv.q3)),
            gb_pair_budget=0)
        for el in basis:
            reducer.reduce(el)
        return {"dimension": len(basis)}

    runner.run("rank3.10-fixed-space",
               "every fixed element up to the degree bound lies in k[q1,q2,q3]",
               fixed_oracle)


# -- verify nagata -----------------------------------------------------------


def _run_nagata(args):
    params = {"suite": "nagata", "p": args.p, "zvars": args.zvars,
              "a": args.a, "theta": args.theta, "F": args.F}
    runner = _runner(args)
    with _budgets(args):
        try:
            fam = _build_nagata(args)
        except ValueError as exc:
            return _usage_error(exc)
        except BudgetExceeded as exc:
            _budget_abort(runner, "nagata", exc)
        else:
            _nagata_checks(runner, fam, args)
    return _emit(runner, args, params)


def _build_nagata(args):
    p, n = args.p, args.zvars
    a, theta, F = args.a, args.theta, args.F
    if n == 1:
        # a single coefficient variable answers to z or z1
        from .expr import parse_expr
        rename = {"z1": "z"}
        rt = VarTable(p, ("z",))
        a = parse_expr(a, ("z", "z1")).evaluate(rt, rename)
        theta = parse_expr(theta, ("z", "z1", "y")).evaluate(
            rt.extend(("y",)), rename)
        F = parse_expr(F, ("z", "z1", "f")).evaluate(rt.extend(("f",)), rename)
    return NagataFamily(p, n, a, theta, F)


def _nagata_checks(runner, fam, args):
    runner.run("nagata.01-build",
               "theta splits along p-th powers; phi has order p",
               lambda: ("order route: %s" % fam.order_route,
                        {"f": poly_stats(fam.f), "aF": poly_stats(fam.aF)}))

    def invariants():
        q, q1 = fam.invariants()
        _all_true(fam.invariant_checks)
        return {"q": poly_stats(q), "q1": poly_stats(q1)}

    runner.run("nagata.02-invariants",
               "q and q1 are fixed and q1 sits in the certified coset",
               invariants)

    def q2_check():
        lam, qt1, q2 = fam.lambda_and_q2()
        return {"lambda": poly_stats(lam), "qt1": poly_stats(qt1),
                "q2": poly_stats(q2)}

    runner.run("nagata.03-conductor-q2",
               "q2 from the conductor representation of rho", q2_check)

    runner.run("nagata.04-relation",
               "the single relation vanishes on (q, q1, q2)",
               lambda: {"Lam": poly_stats(fam.relation())})

    runner.run("nagata.05-principality",
               "membership certificates decide principality of the plinth ideal",
               lambda: "principal: %s" % fam.principality_test())

    runner.run("nagata.06-coordinate",
               "unit/radical conditions on the relation decide coordinacy",
               lambda: "coordinate: %s" % fam.coordinate_test())

    runner.run("nagata.07-nonsmooth",
               "the relation surface's singular locus is tested for points",
               lambda: "singular point exists: %s" % fam.nonsmooth_test())

    def consistency():
        pr = fam.principality_test()
        return _all_true({
            "principality agrees with coordinacy": fam.coordinate_test() == pr,
            "smoothness agrees with principality": fam.nonsmooth_test() == (not pr),
        })

    runner.run("nagata.08-consistency",
               "the three certificate tests agree pairwise", consistency)

    runner.run("nagata.09-plinth", "plinth witnesses validate",
               lambda: _all_true(fam.plinth_suite()))

    def fixed_oracle():
        d = args.fixed_space_degree
        if d <= 0:
            raise Inconclusive("skipped; pass --fixed-space-degree N")
        q, q1 = fam.invariants()
        lam, qt1, q2 = fam.lambda_and_q2()
        basis = fixed_space(fam.phi, d)
        reducer = SubalgebraReducer(
            (("V0", q), ("V1", q1), ("V2", q2)), coeff_names=fam.znames)
        for el in basis:
            reducer.reduce(el)
        return {"dimension": len(basis)}

    runner.run("nagata.10-fixed-space",
               "every fixed element up to the degree bound lies in R[q,q1,q2]",
               fixed_oracle)


# -- verify dedekind ---------------------------------------------------------


def _run_dedekind(args):
    params = {"suite": "dedekind", "p": args.p, "d": args.d, "l": args.l}
    runner = _runner(args)
    with _budgets(args):
        try:
            generic_decomposition(args.d, args.p, args.l)
        except ValueError as exc:
            return _usage_error(exc)
        except BudgetExceeded as exc:
            _budget_abort(runner, "dedekind", exc)
        else:
            _dedekind_checks(runner, args)
    return _emit(runner, args, params)


def _dedekind_checks(runner, args):
    def decompose():
        parts = generic_decomposition(args.d, args.p, args.l)
        return {"parts": [poly_stats(f) for f in parts]}

    runner.run("dedekind.01-decomposition",
               "(g')^p y^l decomposes over S[y^p] with bounded coefficients",
               decompose)

    def row_order():
        a = generic_decomposition(args.d, args.p, args.l)
        b = generic_decomposition(args.d, args.p, args.l, reverse_rows=True)
        if a != b:
            raise AssertionError("decomposition depends on solver row order")

    runner.run("dedekind.02-row-order",
               "the decomposition is independent of solver row order",
               row_order)


# -- poly expand -------------------------------------------------------------


def _run_poly_expand(args):
    names = tuple(s.strip() for s in args.vars.split(",") if s.strip())
    try:
        table = VarTable(args.p, names)
        from .expr import parse_poly
        print(parse_poly(args.expr, table))
    except ValueError as exc:
        return _usage_error(exc)
    return 0


# -- argument plumbing -------------------------------------------------------


def _add_verify_flags(sub):
    sub.add_argument("--checks", default="all",
                     help="comma list of check-id substrings, or 'all'")
    sub.add_argument("--json", metavar="PATH",
                     help="also write the report as one JSON document")
    sub.add_argument("--budget-degree", type=int, default=None,
                     help="abort basis computations past this pair degree")
    sub.add_argument("--budget-pairs", type=int, default=None,
                     help="abort basis computations past this many pairs")
    sub.add_argument("--fixed-space-degree", type=int, default=0,
                     help="degree bound for the fixed-space oracle (0 skips it)")
    sub.add_argument("--strict", action="store_true",
                     help="inconclusive checks also fail the run")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plinth",
        description="verification harness for order-p polynomial automorphisms")
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="command", required=True)

    verify = top.add_parser("verify", help="run a verification suite")
    suites = verify.add_subparsers(dest="suite", required=True)

    r3 = suites.add_parser("rank3", help="the three-variable action family")
    r3.add_argument("--p", type=int, required=True)
    r3.add_argument("--l", type=int, required=True)
    r3.add_argument("--m", type=int, required=True)
    r3.add_argument("--t", type=int, required=True)
    r3.add_argument("--h", default="f", help="invariant over f, g")
    _add_verify_flags(r3)
    r3.set_defaults(func=_run_rank3)

    ng = suites.add_parser("nagata", help="the plane family over F_p[z..]")
    ng.add_argument("--p", type=int, required=True)
    ng.add_argument("--zvars", type=int, required=True,
                    help="number of coefficient variables")
    ng.add_argument("--a", required=True, help="polynomial in the z variables")
    ng.add_argument("--theta", required=True,
                    help="polynomial in y and the z variables, no constant term")
    ng.add_argument("--F", required=True, help="polynomial in the symbol f")
    _add_verify_flags(ng)
    ng.set_defaults(func=_run_nagata)

    dd = suites.add_parser("dedekind",
                           help="generic decomposition of (g')^p y^l")
    dd.add_argument("--p", type=int, required=True)
    dd.add_argument("--d", type=int, required=True)
    dd.add_argument("--l", type=int, required=True)
    _add_verify_flags(dd)
    dd.set_defaults(func=_run_dedekind)

    poly = top.add_parser("poly", help="polynomial utilities")
    ptools = poly.add_subparsers(dest="tool", required=True)
    expand = ptools.add_parser("expand", help="parse and print canonically")
    expand.add_argument("--p", type=int, required=True)
    expand.add_argument("--vars", required=True, help="comma-separated names")
    expand.add_argument("expr")
    expand.set_defaults(func=_run_poly_expand)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
