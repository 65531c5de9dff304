"""
Two order-p plane automorphisms over F_p[z], same recipe, opposite
geometry: at p = 2 the invariant ring is generated by a coordinate and
the quotient is smooth; at p = 3 it is not, and the certificates say so.
"""
from plinth import classic_family
from plinth.ring import substitute

for p in (2, 3):
    fam = classic_family(p)
    print("p = %d:  a = %s, theta = %s, F = f" % (p, fam.a, fam.theta))
    print("  f      =", fam.f)
    print("  phi(x) =", fam.phi.images[fam.table.index["x"]])
    print("  phi(y) =", fam.phi.images[fam.table.index["y"]])

    q, q1 = fam.invariants()
    lam, qt1, q2 = fam.lambda_and_q2()
    print("  q  =", q)
    print("  q1 =", q1)
    print("  q2 =", q2)

    relation = fam.relation()
    sigma = substitute(relation, {"y0": q, "y1": q1, "y2": q2},
                       target=fam.table)
    print("  relation Lambda =", relation)
    print("  Lambda(q, q1, q2) == 0:", sigma.is_zero())

    print("  plinth ideal is principal:  ", fam.principality_test())
    print("  q1 is a coordinate:         ", fam.coordinate_test())
    print("  quotient surface singular:  ", fam.nonsmooth_test())
    for check, ok in fam.plinth_suite().items():
        print("  %-40s %s" % (check, ok))
    print()
