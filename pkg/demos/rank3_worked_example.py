"""
Order-p automorphism of the polynomial ring in three variables, built as
the specialization of an additive-group coaction at an invariant h = f.

Prints the automorphism, checks its order by direct composition, and
lists the invariant-ring generators together with their defining
identities.
"""
from plinth import hand_example
from plinth.rank3 import hand_example_images

p = 2
fam, inst = hand_example(p)
print("parameters: p=%d l=%d m=%d t=%d, h = f" % (fam.p, fam.l, fam.m, fam.t))
print("f =", fam.f)
print("g =", fam.g)
print()

phi = inst.phi
for name, image in zip(fam.table.names, phi.images):
    print("phi(%s) = %s" % (name, image))
print()

closed = hand_example_images(fam)
print("matches the closed forms:", all(a == b for a, b in zip(phi.images, closed)))
print("phi^%d is the identity:  " % p, phi.power(p).is_identity())
print()

inv = inst.invariants()
print("invariant generators")
print("q  =", inst.q)
print("q1 =", inv.q1)
print("q2 =", inv.q2)
print("q3 =", inv.q3)
print()
print("q1 q3 - q2^(t/p) == f:  ",
      inv.q1 * inv.q3 - inv.q2 ** (fam.t // fam.p) == fam.f)
print("f^(lt) q3 + lam  == g:  ",
      fam.f ** (fam.l * fam.t) * inv.q3 + inv.lam == fam.g)
print("f^(lp) q2 + xi   == q:  ",
      fam.f ** (fam.l * fam.p) * inv.q2 + inv.xi == inst.q)
print()

print("plinth-ideal checks")
for check, ok in inst.plinth_suite().items():
    print("  %-45s %s" % (check, ok))
