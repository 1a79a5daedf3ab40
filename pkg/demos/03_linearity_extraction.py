"""
A subgroup inside every quasi-convex set
========================================

In a group of bounded exponent, polar(U)^perp is a subgroup contained in
U.  We check it for every quasi-convex U of a few finite groups.
"""

from qcdual import ModuliSequence
from qcdual.abelian import FiniteTruncation
from qcdual.quasiconvex import enumerate_quasiconvex, open_subgroup_inside

for mods in ([4], [8], [2, 4], [3, 3]):
    T = FiniteTruncation(ModuliSequence.from_list(mods), len(mods))
    print("group", " + ".join(f"Z_{m}" for m in mods))
    for U in enumerate_quasiconvex(T):
        W = open_subgroup_inside(U, T)
        closed = all(a + b in W and -a in W for a in W for b in W)
        print(f"  |U| = {len(U):2d}  |W| = {len(W):2d}  subgroup: {closed}  inside U: {W <= U}")
