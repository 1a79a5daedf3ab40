"""
A discontinuous character built along a null sequence
=====================================================

Along e_1, e_2, ... in (+) Z_{2^n} we extend a homomorphism one element at
a time, always choosing a value outside T_+.  Relations among the chosen
elements constrain later values; sometimes no admissible value exists and
the element is skipped.
"""

import random

from qcdual import ModuliSequence, build_discontinuous_character, homomorphism_check
from qcdual.abelian import basis_element
from qcdual.constructions import sample_relations

moduli = ModuliSequence.geometric(2)
seq = [basis_element(moduli, n) for n in range(1, 11)]
table = build_discontinuous_character(moduli, seq)
for a, v in zip(table.accepted, table.values):
    print(f"f({a.literal()}) = {v}")

rels = sample_relations(table, 200, random.Random(0))
print("homomorphism on 200 relations:", homomorphism_check(table, rels, moduli))

# Z_9: f(3e) = 1/3 forces f(e) in {1/9, 4/9, -2/9}
Z9 = ModuliSequence.from_list([9])
e = basis_element(Z9, 1)
print([str(v) for v in build_discontinuous_character(Z9, [3 * e, e]).values])

# Z_4: f(2e) = 1/2 leaves only +-1/4 for f(e), both in T_+
Z4 = ModuliSequence.from_list([4])
e = basis_element(Z4, 1)
print(build_discontinuous_character(Z4, [2 * e, e]).to_json()["skipped"])
