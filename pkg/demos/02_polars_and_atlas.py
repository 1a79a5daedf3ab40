"""
Polars, quasi-convex hulls and the atlas of a small group
=========================================================

The polar of S is every character sending S into T_+; the prepolar goes
back.  Quasi-convex sets are the fixed points of the bipolar.
"""

from qcdual import ModuliSequence, is_quasiconvex, polar, prepolar, qc_hull
from qcdual.abelian import FiniteTruncation, basis_element
from qcdual.quasiconvex import atlas, atlas_dot, enumerate_quasiconvex


def show(S):
    return "{" + ", ".join(x.literal() for x in sorted(S)) + "}"


Z4 = ModuliSequence.from_list([4])
T = FiniteTruncation(Z4, 1)
e = basis_element(Z4, 1)

S = {0 * e, e}
print("S =", show(S))
print("polar(S) residues:", sorted(c.residue(1) for c in polar(S, T)))
print("prepolar(polar(S)) =", show(prepolar(polar(S, T), T)))

# {1/4} alone is not quasi-convex: the hull adds 0 and -1/4
print("hull({1/4}) =", show(qc_hull({e}, T)))
print("is_quasiconvex({1/4}) ->", is_quasiconvex({e}, T))

for U in enumerate_quasiconvex(T):
    print("quasi-convex:", show(U))

# a slightly larger group, with polar sizes
T24 = FiniteTruncation(ModuliSequence.from_list([2, 4]), 2)
for rec in atlas(T24):
    print(rec["size"], "elements, polar of size", rec["polar_size"])

print(atlas_dot(T))
