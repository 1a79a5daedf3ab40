"""Polars, prepolars and quasi-convex hulls on finite truncations.

For ``S`` a set of elements and ``N`` a set of characters::

    polar(S)    = {chi : chi(x) in T_+ for all x in S}
    prepolar(N) = {x : chi(x) in T_+ for all chi in N}

A set is quasi-convex when it equals ``prepolar(polar(S))``.  Everything
here is computed by brute force over the truncation, which doubles as the
reference semantics.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .abelian import Character, FiniteTruncation, GroupElement, annihilator_of_characters
from .errors import BudgetExceeded, NotQuasiConvex

__all__ = [
    "polar",
    "prepolar",
    "qc_hull",
    "is_quasiconvex",
    "open_subgroup_inside",
    "enumerate_quasiconvex",
    "atlas",
    "atlas_dot",
    "sorted_set",
]

# above this size the full pairing matrix is not cached
_MATRIX_LIMIT = 2048


def sorted_set(S: Iterable) -> list:
    return sorted(S)


def _indices(values, T: FiniteTruncation) -> np.ndarray:
    values = list(values)
    T.check(*values)
    return np.fromiter((T.index_of(v) for v in values), dtype=np.int64, count=len(values))


def _restrict(values, T, cls):
    # canonical members selected by a boolean mask over the enumeration
    pool = T.elements() if cls is GroupElement else T.characters()
    return frozenset(v for v, keep in zip(pool, values) if keep)


def _polar_mask(S, T: FiniteTruncation) -> np.ndarray:
    T.require_budget()
    if T.cardinality <= _MATRIX_LIMIT and T.cardinality**2 <= T.budget:
        idx = _indices(S, T)
        return T.tplus_matrix[idx].all(axis=0)
    mask = np.ones(T.cardinality, dtype=bool)
    for x in S:
        mask &= T.tplus_mask(x)
        if not mask.any():
            break
    return mask


def _prepolar_mask(N, T: FiniteTruncation) -> np.ndarray:
    # the pairing matrix is symmetric in residue vectors
    return _polar_mask(N, T)


def polar(S: Iterable[GroupElement], T: FiniteTruncation) -> frozenset[Character]:
    """Characters of ``T`` mapping every element of ``S`` into ``T_+``."""
    return _restrict(_polar_mask(list(S), T), T, Character)


def prepolar(N: Iterable[Character], T: FiniteTruncation) -> frozenset[GroupElement]:
    """Elements of ``T`` mapped into ``T_+`` by every character of ``N``."""
    return _restrict(_prepolar_mask(list(N), T), T, GroupElement)


def qc_hull(S: Iterable[GroupElement], T: FiniteTruncation) -> frozenset[GroupElement]:
    """Smallest quasi-convex set containing ``S`` (the bipolar of ``S``)."""
    return prepolar(polar(S, T), T)


def is_quasiconvex(S: Iterable[GroupElement], T: FiniteTruncation):
    """``True``, or the lexicographically first point of ``qc_hull(S)`` missing from ``S``."""
    S = frozenset(S)
    extra = qc_hull(S, T) - S
    if not extra:
        return True
    return min(extra)


def open_subgroup_inside(U: Iterable[GroupElement], T: FiniteTruncation) -> frozenset[GroupElement]:
    """The subgroup ``polar(U)^perp``, which sits inside a quasi-convex ``U``.

    Every character of ``polar(U)`` maps the subgroup to 0, a point of
    ``T_+``, so the subgroup lies in ``prepolar(polar(U)) = U``.
    """
    U = frozenset(U)
    verdict = is_quasiconvex(U, T)
    if verdict is not True:
        raise NotQuasiConvex(verdict)
    return annihilator_of_characters(polar(U, T), T)


def enumerate_quasiconvex(T: FiniteTruncation, limit: int = 32) -> list[frozenset[GroupElement]]:
    """All quasi-convex subsets of ``T``, by size and then lexicographically.

    Quasi-convex sets are the prepolars of sets of characters.  Since
    ``prepolar(N)`` is the intersection of the single-character prepolars,
    the family is generated by closing those under intersection, which
    gives the same sets as scanning all ``2^|T|`` subsets of the dual.
    """
    if T.cardinality > limit:
        raise BudgetExceeded(T.cardinality, limit, "quasi-convex atlas")
    n = T.cardinality
    singles = {tuple(_prepolar_mask([chi], T)) for chi in T.characters()}
    family = {(True,) * n}
    for s in singles:
        family |= {tuple(a and b for a, b in zip(f, s)) for f in family}
    sets = [_restrict(mask, T, GroupElement) for mask in family]
    return sorted(sets, key=lambda S: (len(S), sorted(S)))


def atlas(T: FiniteTruncation, limit: int = 32) -> list[dict]:
    """One record per quasi-convex set: size, members and polar size."""
    records = []
    for S in enumerate_quasiconvex(T, limit):
        records.append(
            {
                "size": len(S),
                "members": [x.to_json() for x in sorted(S)],
                "polar_size": len(polar(S, T)),
            }
        )
    return records


def atlas_dot(T: FiniteTruncation, limit: int = 32) -> str:
    """Graphviz rendering of the inclusion order (Hasse diagram) of the atlas."""
    sets = enumerate_quasiconvex(T, limit)
    names = [
        "{" + ", ".join(x.literal() for x in sorted(S)) + "}" for S in sets
    ]
    lines = ["digraph quasiconvex {", "  rankdir=BT;"]
    for i, name in enumerate(names):
        lines.append(f'  q{i} [label="{name}"];')
    for i, A in enumerate(sets):
        for j, B in enumerate(sets):
            if i != j and A < B:
                covered = any(A < C < B for C in sets)
                if not covered:
                    lines.append(f"  q{i} -> q{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
