"""Brute-force reference implementations used as test oracles.

Everything here works on plain dicts and Fractions, independent of the
numpy pairing matrices and the lattice solver in the package.
"""

import itertools
from fractions import Fraction

from qcdual.abelian import Character, GroupElement

QUARTER = Fraction(1, 4)


def rep(q):
    """Representative of q mod 1 in (-1/2, 1/2]."""
    q = Fraction(q) % 1
    return q - 1 if q > Fraction(1, 2) else q


def raw_sum(chi, x):
    """sum chi_n k_n / m_n as a rational number, no reduction mod 1."""
    xs = x.as_dict()
    return sum(
        (Fraction(c * xs[n], x.moduli[n]) for n, c in chi.as_dict().items() if n in xs),
        Fraction(0),
    )


def pair(chi, x):
    return rep(raw_sum(chi, x))


def vectors(moduli, depth):
    return list(itertools.product(*(range(moduli[n]) for n in range(1, depth + 1))))


def elements(moduli, depth):
    return [GroupElement(moduli, dict(enumerate(v, 1))) for v in vectors(moduli, depth)]


def characters(moduli, depth):
    return [Character(moduli, dict(enumerate(v, 1))) for v in vectors(moduli, depth)]


def polar(S, chars):
    return frozenset(c for c in chars if all(abs(pair(c, x)) <= QUARTER for x in S))


def prepolar(N, elems):
    return frozenset(x for x in elems if all(abs(pair(c, x)) <= QUARTER for c in N))


def subsets(pool):
    return [frozenset(c) for r in range(len(pool) + 1) for c in itertools.combinations(pool, r)]


def is_subgroup(H):
    return bool(H) and all(a + b in H and -a in H for a in H for b in H)


def in_vm(m, x):
    return all(4 * m * abs(k) <= x.moduli[n] for n, k in x.as_dict().items())


def span(gens, elems):
    """Subgroup generated by gens, by closure inside the finite list elems."""
    zero = elems[0] - elems[0]
    H = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                for y in (h + g, h - g):
                    if y not in H:
                        H.add(y)
                        nxt.append(y)
        frontier = nxt
    return frozenset(H)


def all_prepolars(chars, elems):
    """{prepolar(N) : N a subset of chars}, visiting every subset of chars.

    Bitmask dynamic programme: the prepolar of N is the prepolar of N
    minus its lowest member, intersected with that member's prepolar.
    """
    single = []
    for c in chars:
        bits = 0
        for i, x in enumerate(elems):
            if abs(pair(c, x)) <= QUARTER:
                bits |= 1 << i
        single.append(bits)
    full = (1 << len(elems)) - 1
    table = [full] * (1 << len(chars))
    for mask in range(1, 1 << len(chars)):
        low = (mask & -mask).bit_length() - 1
        table[mask] = table[mask & (mask - 1)] & single[low]
    return {frozenset(x for i, x in enumerate(elems) if bits >> i & 1) for bits in set(table)}
