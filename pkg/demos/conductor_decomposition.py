"""
Conductor-style representations: writing (df/dy)^p * y^l as a polynomial
in y^p and f, and decomposing the generic derivative power against the
basis 1, g, .., g^(p-1).
"""
from plinth import VarTable, generic_decomposition, represent
from plinth.ring import substitute

table = VarTable(3, ("z", "y"))
y, z = table.var("y"), table.var("z")
f = y ** 3 + z * y
print("f =", f, "over F_3[z][y]")

for l in (0, 1, 2):
    rep = represent(f, l)
    back = substitute(rep.lam, {"Y0": y ** 3, "Y1": f}, target=table)
    target = f.diff("y") ** 3 * y ** l
    print("  l=%d:  lam(Y0, Y1) = %-28s  lam(y^3, f) == (f')^3 y^%d: %s"
          % (l, rep.lam, l, back == target))
print()

d, p, l = 2, 3, 0
parts = generic_decomposition(d, p, l)
print("generic monic g = y^%d + xi1*y over F_%d[xi1], target (g')^%d" % (d, p, p))
for k, part in enumerate(parts):
    print("  coefficient of g^%d:  %s" % (p - 1 - k, part))

big = VarTable(p, ("xi1", "y"))
yv = big.var("y")
g = yv ** d + big.var("xi1") * yv
assembled = big.zero()
power_of_g = big.one()
for i in range(p):
    assembled = assembled + substitute(parts[p - 1 - i], {"Y0": yv ** p},
                                       target=big) * power_of_g
    power_of_g = power_of_g * g
print("assembled sum equals (g')^%d:" % p, assembled == g.diff("y") ** p)
