"""
Comparing group topologies at a finite stage
============================================

Topologies are descriptors with explicit neighborhood bases.  At a
truncation we decide which basis refines which, with certificates and a
witness for strictness.
"""

from fractions import Fraction

from qcdual import ModuliSequence
from qcdual.abelian import FiniteTruncation, basis_character
from qcdual.topology import LinearChain, Product, UniformOnC, Weak, compare_at_truncation, linear_chain_precompact

moduli = ModuliSequence.geometric(2)
for depth in (4, 6, 8):
    T = FiniteTruncation(moduli, depth)
    c = compare_at_truncation(UniformOnC(moduli), Product(moduli), T)
    print(f"depth {depth}: {c.verdict}, witness {c.strictness_witness.literal()}")

small = ModuliSequence.from_list([2, 3, 4])
weak = Weak(small, (basis_character(small, 1),), Fraction(1, 4))
print("weak vs product:", compare_at_truncation(weak, Product(small), FiniteTruncation(small, 3)).verdict)

# subgroup indices along a chain of open subgroups
print(linear_chain_precompact(LinearChain(moduli, tail=True), [3, 4, 5]).to_json())
