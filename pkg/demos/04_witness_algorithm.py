"""
Witnessing that a character is not tau_c-continuous
===================================================

Given a prefix of a character with infinite support and m >= 1, the
algorithm finds x in V_m with chi(x) outside T_+.  The report carries
every inequality it relied on.
"""

from qcdual import Character, ModuliSequence, continuity_certificate, witness_not_continuous
from qcdual.errors import InsufficientSupport

geom = ModuliSequence.geometric(2)
arith = ModuliSequence.arithmetic(2, 1)

examples = [
    (geom, {4: 8}),  # one large coordinate
    (geom, {5: 1, 6: 1}),  # two tiny coordinates
    (arith, {n: 2 for n in range(9, 19)}),  # a bucket of equal ratios
    (geom, {5: 1}),  # too short a prefix
]
for moduli, residues in examples:
    chi = Character(moduli, residues, prefix_of_infinite=True)
    try:
        r = witness_not_continuous(chi, 1, moduli)
    except InsufficientSupport as exc:
        print(chi.literal(), "->", exc)
        continue
    print(f"{chi.literal()}  {r.case_used}: x = {r.witness.literal()}, chi(x) = {r.pairing_value}")
    for check in r.trace:
        print(f"    {check.label}: {check.lhs} {check.relation} {check.rhs}  {check.holds}")

# the other direction: a finitely supported character vanishes on some V_m
cert = continuity_certificate(Character(arith, {1: 1, 2: 2}), arith)
print("certificate:", cert.to_json())
