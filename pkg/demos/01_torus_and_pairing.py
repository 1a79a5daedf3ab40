"""
Exact arithmetic on the circle and the character pairing
========================================================

Points of R/Z are kept as fractions in (-1/2, 1/2].  A character of
(+) Z_{m_n} is a list of residues chi_n, and chi(x) = sum chi_n k_n / m_n.
"""

from fractions import Fraction

from qcdual import Character, GroupElement, ModuliSequence, pairing
from qcdual.abelian import FiniteTruncation, dual_enumerate
from qcdual.torus import in_t_m, in_t_plus, int_mul, normalize

# normalization picks the representative in (-1/2, 1/2]
for q in (Fraction(7, 5), Fraction(-1, 2), Fraction(3, 4)):
    print(q, "->", normalize(q))

# T_+ is closed: the quarter points belong to it
print("1/4 in T_+:", in_t_plus(normalize(Fraction(1, 4))))
print("3/8 in T_+:", in_t_plus(normalize(Fraction(3, 8))))
print("1/8 in T_2:", in_t_m(normalize(Fraction(1, 8)), 2))
print("-3 * 1/3 =", int_mul(-3, normalize(Fraction(1, 3))))

# the group Z_2 + Z_3 + Z_4 + ...
moduli = ModuliSequence.arithmetic(2, 1)
chi = Character(moduli, {1: 1, 2: -1})
x = GroupElement(moduli, {1: 1, 2: 1})
print(f"chi = {chi.literal()}, x = {x.literal()}, chi(x) = {pairing(chi, x)}")

# a finite stage: Z_2 + Z_3 has six characters
T = FiniteTruncation(moduli, 2)
print("characters of Z_2+Z_3:", [c.literal() for c in dual_enumerate(T)])

# the T_+ pattern of the whole pairing table, as a numpy boolean matrix
print(T.tplus_matrix.astype(int))
