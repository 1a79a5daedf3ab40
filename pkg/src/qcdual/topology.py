"""Symbolic group topologies on ``(+) Z_{m_n}`` and their comparison at finite depth.

A topology is described by a basis of zero-neighborhoods.  Each basic
neighborhood has an exact membership predicate on group elements and can
list its members inside a :class:`~qcdual.abelian.FiniteTruncation`.
Nothing here reasons about infinite groups: claims such as "finer than"
are certified at an explicit truncation, against an explicit (budgeted)
family of basic neighborhoods, with explicit witnesses.

Descriptors:

* :class:`Product` -- topology inherited from the product, basics
  ``{x : |x_n| <= c for n <= k}`` (``c = 0`` by default).
* :class:`UniformOnC` -- uniform convergence on ``{0, +-e_n}``, basics
  ``V_m = {x : |x_n| <= 1/(4m) for all n}``.
* :class:`LinearChain` -- a decreasing chain of subgroups.
* :class:`Weak` -- the weak topology of finitely many characters.
* :class:`Extension` -- zero-neighborhoods are those of an inner topology
  on an open subgroup ``H``.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

from .abelian import (
    Character,
    FiniteTruncation,
    GroupElement,
    ModuliSequence,
    generated_subgroup,
    pairing,
    subgroup_membership,
    window,
)
from .errors import BudgetExceeded, InvalidParams, ModuliMismatch

__all__ = [
    "DEFAULT_BASIS_BUDGET",
    "Tail",
    "Generated",
    "Neighborhood",
    "BoxNeighborhood",
    "PredicateNeighborhood",
    "Product",
    "UniformOnC",
    "LinearChain",
    "Weak",
    "Extension",
    "vm_contains",
    "vm",
    "basic_nbhd",
    "nbhd_contains",
    "compare_at_truncation",
    "Comparison",
    "DirectionResult",
    "linear_chain_precompact",
    "ChainReport",
    "subgroup_index",
]

DEFAULT_BASIS_BUDGET = int(os.environ.get("QCDUAL_BASIS_BUDGET") or 16)

_FULL = None  # bound meaning "no restriction on this coordinate"


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class Tail:
    """The subgroup ``{x : x_n = 0 for n <= k}``; ``Tail(0)`` is the whole group."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise InvalidParams(f"tail index must be >= 0, got {self.k}")

    def contains(self, x: GroupElement) -> bool:
        return all(n > self.k for n, _ in x.support)

    def label(self) -> str:
        return f"tail={self.k}"


@dataclass(frozen=True)
class Generated:
    """The subgroup generated by finitely many elements."""

    gens: tuple[GroupElement, ...]

    def contains(self, x: GroupElement) -> bool:
        if not x:
            return True
        if not self.gens:
            return False
        depth = max([x.max_index] + [g.max_index for g in self.gens])
        T = FiniteTruncation(x.moduli, max(depth, 1))
        return subgroup_membership(self.gens, x, T) is not None

    def label(self) -> str:
        return "[" + ";".join(g.literal() for g in self.gens) + "]"


Subgroup = Union[Tail, Generated]


# ---------------------------------------------------------------------------
# neighborhoods


class Neighborhood:
    """A zero-neighborhood with a decidable membership predicate."""

    label: str
    moduli: ModuliSequence

    def contains(self, x: GroupElement) -> bool:
        raise NotImplementedError

    __contains__ = contains

    def members(self, T: FiniteTruncation) -> Iterator[GroupElement]:
        T.require_budget(what=f"members of {self.label}")
        return (x for x in T.elements() if self.contains(x))

    def count_bound(self, T: FiniteTruncation) -> int:
        return T.cardinality

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class BoxNeighborhood(Neighborhood):
    """``{x : |k_n| <= b_n for every n}`` for a per-coordinate residue bound ``b_n``.

    ``bound(n)`` returns an integer or ``None`` (no restriction).
    """

    def __init__(self, moduli: ModuliSequence, bound: Callable[[int], int | None], label: str):
        self.moduli = moduli
        self._bound = bound
        self.label = label

    def bound(self, n: int) -> int:
        half = self.moduli[n] // 2
        b = self._bound(n)
        return half if b is _FULL else min(b, half)

    def contains(self, x: GroupElement) -> bool:
        if x.moduli != self.moduli:
            raise ModuliMismatch(f"{x.moduli} vs {self.moduli}")
        return all(abs(k) <= self.bound(n) for n, k in x.support)

    __contains__ = contains

    def _ranges(self, T):
        out = []
        for n, m in enumerate(T.orders, start=1):
            b = self.bound(n)
            rs = [r for r in range(m) if abs(window(r, m)) <= b]
            out.append([window(r, m) for r in rs])
        return out

    def count_bound(self, T):
        return math.prod(len(r) for r in self._ranges(T))

    def members(self, T):
        if T.moduli != self.moduli:
            raise ModuliMismatch(f"{T.moduli} vs {self.moduli}")
        ranges = self._ranges(T)
        T.require_budget(math.prod(len(r) for r in ranges), f"members of {self.label}")
        for row in itertools.product(*ranges):
            yield GroupElement(self.moduli, [(n, k) for n, k in enumerate(row, start=1) if k])

    def is_trivial_at(self, T: FiniteTruncation) -> bool:
        return all(self.bound(n) == 0 for n in range(1, T.depth + 1))


class PredicateNeighborhood(Neighborhood):
    """A neighborhood given by a predicate, optionally inside an enumerable box."""

    def __init__(self, moduli, predicate, label, within: Neighborhood | None = None):
        self.moduli = moduli
        self._predicate = predicate
        self.label = label
        self.within = within

    def contains(self, x):
        if x.moduli != self.moduli:
            raise ModuliMismatch(f"{x.moduli} vs {self.moduli}")
        if self.within is not None and not self.within.contains(x):
            return False
        return self._predicate(x)

    __contains__ = contains

    def count_bound(self, T):
        return self.within.count_bound(T) if self.within is not None else T.cardinality

    def members(self, T):
        if self.within is not None:
            return (x for x in self.within.members(T) if self._predicate(x))
        return super().members(T)


def vm_contains(m: int, x: GroupElement, moduli: ModuliSequence) -> bool:
    """Is ``x`` in ``V_m``, i.e. ``|x_n| <= 1/(4m)`` for every ``n``?"""
    if m < 1:
        raise InvalidParams(f"m must be a positive integer, got {m}")
    if x.moduli != moduli:
        raise ModuliMismatch(f"{x.moduli} vs {moduli}")
    return all(4 * m * abs(k) <= moduli[n] for n, k in x.support)


def vm(moduli: ModuliSequence, m: int) -> BoxNeighborhood:
    if not isinstance(m, int) or m < 1:
        raise InvalidParams(f"V_m needs a positive integer m, got {m!r}")
    return BoxNeighborhood(moduli, lambda n: moduli[n] // (4 * m), f"V_{m}")


def _tail_box(moduli, k, bound=Fraction(0), label=None):
    bound = Fraction(bound)

    def b(n):
        return math.floor(bound * moduli[n]) if n <= k else _FULL

    if label is None:
        label = f"product(k={k})" if bound == 0 else f"product(k={k}, |x_n|<={bound})"
    return BoxNeighborhood(moduli, b, label)


def _intersect_box(moduli, a: BoxNeighborhood, b: BoxNeighborhood, label):
    return BoxNeighborhood(moduli, lambda n: min(a.bound(n), b.bound(n)), label)


# ---------------------------------------------------------------------------
# descriptors


def _require_moduli(desc, T):
    if desc.moduli != T.moduli:
        raise ModuliMismatch(f"descriptor over {desc.moduli}, truncation over {T.moduli}")


@dataclass(frozen=True)
class Product:
    moduli: ModuliSequence

    name = "product"

    def basic(self, k: int = 0, bound: Fraction = Fraction(0)) -> BoxNeighborhood:
        if not isinstance(k, int) or k < 0:
            raise InvalidParams(f"product basic needs depth k >= 0, got {k!r}")
        bound = Fraction(bound)
        if not 0 <= bound <= Fraction(1, 2):
            raise InvalidParams(f"coordinate bound must lie in [0, 1/2], got {bound}")
        return _tail_box(self.moduli, k, bound)

    def basis(self, T: FiniteTruncation, budget: int):
        _require_moduli(self, T)
        # k = N would leave only {0}; it stands for a tail beyond the truncation
        ks = range(T.depth)
        return [self.basic(k) for k in ks[:budget]], len(ks) > budget


@dataclass(frozen=True)
class UniformOnC:
    """Uniform convergence on ``c = {0, +-e_n}``; basics ``V_m``."""

    moduli: ModuliSequence

    name = "uniform-c"

    def __post_init__(self):
        if not (self.moduli.monotone and self.moduli.unbounded):
            raise InvalidParams(
                f"uniform-c needs non-decreasing unbounded moduli, got {self.moduli}"
            )

    def basic(self, m: int = 1) -> BoxNeighborhood:
        return vm(self.moduli, m)

    def basis(self, T: FiniteTruncation, budget: int):
        _require_moduli(self, T)
        # V_m for m = 1, 2, 4, ... while V_m is not {0} on T
        top = max(T.orders)
        ms = []
        m = 1
        while 4 * m <= top:
            ms.append(m)
            m *= 2
        return [self.basic(m) for m in ms[:budget]], len(ms) > budget


@dataclass(frozen=True)
class LinearChain:
    """A decreasing chain of subgroups; ``tail=True`` means ``Tail(0) > Tail(1) > ...``."""

    moduli: ModuliSequence
    subgroups: tuple = ()
    tail: bool = False

    name = "chain"

    def members_at(self, T: FiniteTruncation, count: int | None = None) -> list:
        if self.tail:
            count = T.depth if count is None else count
            return [Tail(k) for k in range(count)]
        return list(self.subgroups)

    def basic(self, index: int = 0, T: FiniteTruncation | None = None) -> Neighborhood:
        if self.tail:
            if not isinstance(index, int) or index < 0:
                raise InvalidParams(f"chain index must be >= 0, got {index!r}")
            return _subgroup_nbhd(self.moduli, Tail(index))
        if not 0 <= index < len(self.subgroups):
            raise InvalidParams(f"chain has {len(self.subgroups)} members, index {index}")
        return _subgroup_nbhd(self.moduli, self.subgroups[index])

    def basis(self, T: FiniteTruncation, budget: int):
        _require_moduli(self, T)
        subs = self.members_at(T)
        basics = [_subgroup_nbhd(self.moduli, H) for H in subs[:budget]]
        if not self.tail:
            _check_decreasing(basics, T)
        return basics, len(subs) > budget


def _subgroup_nbhd(moduli, H: Subgroup) -> Neighborhood:
    if isinstance(H, Tail):
        return _tail_box(moduli, H.k, label=f"H({H.label()})")
    return PredicateNeighborhood(moduli, H.contains, f"H({H.label()})")


def _check_decreasing(basics, T):
    for big, small in zip(basics, basics[1:]):
        if nbhd_contains(big, small, T) is not True:
            raise InvalidParams(f"chain is not decreasing: {small.label} not inside {big.label}")


@dataclass(frozen=True)
class Weak:
    """Weak topology of the listed characters; basics ``{x : |chi(x)| <= eps/2^j}``."""

    moduli: ModuliSequence
    characters: tuple[Character, ...]
    threshold: Fraction = Fraction(1, 4)

    name = "weak"

    def __post_init__(self):
        if not self.threshold > 0:
            raise InvalidParams(f"weak threshold must be positive, got {self.threshold}")
        for chi in self.characters:
            if chi.moduli != self.moduli:
                raise ModuliMismatch(f"{chi.moduli} vs {self.moduli}")

    def basic(self, level: int = 0) -> PredicateNeighborhood:
        if not isinstance(level, int) or level < 0:
            raise InvalidParams(f"weak basic level must be >= 0, got {level!r}")
        eps = Fraction(self.threshold) / 2**level
        chars = self.characters

        def pred(x):
            return all(abs(pairing(chi, x).value) <= eps for chi in chars)

        names = ";".join(c.literal() for c in chars)
        return PredicateNeighborhood(self.moduli, pred, f"weak([{names}], {eps})")

    def basis(self, T: FiniteTruncation, budget: int):
        _require_moduli(self, T)
        # pairings on T are multiples of 1/L; below that every level is the joint kernel
        L = math.lcm(*T.orders)
        levels = []
        j = 0
        while True:
            levels.append(j)
            if Fraction(self.threshold) / 2**j < Fraction(1, L):
                break
            j += 1
        return [self.basic(j) for j in levels[:budget]], len(levels) > budget


@dataclass(frozen=True)
class Extension:
    """Topology whose zero-neighborhoods are those of ``inner`` restricted to ``H``."""

    moduli: ModuliSequence
    H: Subgroup
    inner: object

    name = "ext"

    def __post_init__(self):
        if getattr(self.inner, "moduli", None) != self.moduli:
            raise ModuliMismatch("inner descriptor must live on the same moduli")

    def _restrict(self, nb: Neighborhood) -> Neighborhood:
        label = f"{self.H.label()}&{nb.label}"
        if isinstance(self.H, Tail) and isinstance(nb, BoxNeighborhood):
            return _intersect_box(self.moduli, _subgroup_nbhd(self.moduli, self.H), nb, label)
        return PredicateNeighborhood(self.moduli, self.H.contains, label, within=nb)

    def basic(self, *args, **kwargs) -> Neighborhood:
        if not args and not kwargs:
            return _subgroup_nbhd(self.moduli, self.H)
        return self._restrict(self.inner.basic(*args, **kwargs))

    def basis(self, T: FiniteTruncation, budget: int):
        _require_moduli(self, T)
        inner, truncated = self.inner.basis(T, max(budget - 1, 0))
        basics = [_subgroup_nbhd(self.moduli, self.H)] + [self._restrict(b) for b in inner]
        return basics[:budget], truncated


Descriptor = Union[Product, UniformOnC, LinearChain, Weak, Extension]


def basic_nbhd(desc: Descriptor, *args, **kwargs) -> Neighborhood:
    """Basic neighborhood of ``desc`` for variant-specific parameters.

    ``Product``: ``k``, ``bound``; ``UniformOnC``: ``m``; ``LinearChain``:
    ``index``; ``Weak``: ``level``; ``Extension``: the inner parameters
    (no parameters gives ``H`` itself).
    """
    try:
        return desc.basic(*args, **kwargs)
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None


# ---------------------------------------------------------------------------
# containment and comparison


def nbhd_contains(A: Neighborhood, B: Neighborhood, T: FiniteTruncation):
    """``True`` if ``B`` is inside ``A`` on ``T``; otherwise an element of ``B`` outside ``A``."""
    if isinstance(A, BoxNeighborhood) and isinstance(B, BoxNeighborhood):
        for n in range(1, T.depth + 1):
            bB, bA = B.bound(n), A.bound(n)
            if bB > bA:
                return GroupElement(T.moduli, {n: bB})
        return True
    # cheap probes first: single coordinates at their farthest point
    for n, m in enumerate(T.orders, start=1):
        x = GroupElement(T.moduli, {n: m // 2})
        if B.contains(x) and not A.contains(x):
            return x
    needed = B.count_bound(T)
    if needed > T.budget:
        raise BudgetExceeded(needed, T.budget, f"members of {B.label}")
    for x in B.members(T):
        if not A.contains(x):
            return x
    return True


@dataclass
class DirectionResult:
    """Does the ``fine`` basis refine the ``coarse`` one on the truncation?

    ``certificates`` pairs each coarse basic with a fine basic inside it.
    On failure, ``failure`` names the first coarse basic containing no fine
    basic, with one witness per fine basic.
    """

    holds: bool
    certificates: list = field(default_factory=list)
    failure: tuple | None = None
    fine_truncated: bool = False

    def to_json(self):
        out = {
            "holds": self.holds,
            "certificates": [{"coarse": c, "fine": f} for c, f in self.certificates],
            "fine_basis_truncated": self.fine_truncated,
        }
        if self.failure is not None:
            coarse, witnesses = self.failure
            out["failure"] = {
                "coarse": coarse,
                "witnesses": [{"fine": f, "witness": w.to_json()} for f, w in witnesses],
            }
        return out


@dataclass
class Comparison:
    verdict: str
    first_refines_second: DirectionResult
    second_refines_first: DirectionResult
    strictness_witness: GroupElement | None = None

    def to_json(self):
        return {
            "verdict": self.verdict,
            "tau1_refines_tau2": self.first_refines_second.to_json(),
            "tau2_refines_tau1": self.second_refines_first.to_json(),
            "strictness_witness": (
                None if self.strictness_witness is None else self.strictness_witness.to_json()
            ),
        }


def _refines(fine, fine_truncated, coarse, T) -> DirectionResult:
    result = DirectionResult(True, fine_truncated=fine_truncated)
    for B in coarse:
        witnesses = []
        for A in fine:
            verdict = nbhd_contains(B, A, T)
            if verdict is True:
                result.certificates.append((B.label, A.label))
                break
            witnesses.append((A.label, verdict))
        else:
            result.holds = False
            result.failure = (B.label, witnesses)
            return result
    return result


def compare_at_truncation(
    tau1: Descriptor, tau2: Descriptor, T: FiniteTruncation, basis_budget: int = DEFAULT_BASIS_BUDGET
) -> Comparison:
    """Compare two topologies through their basic neighborhoods on ``T``.

    ``tau1`` is finer when every basic of ``tau2`` contains a basic of
    ``tau1``.  A failing direction whose candidate family was cut by the
    budget yields ``inconclusive_at_budget``.
    """
    basis1, trunc1 = tau1.basis(T, basis_budget)
    basis2, trunc2 = tau2.basis(T, basis_budget)
    d12 = _refines(basis1, trunc1, basis2, T)
    d21 = _refines(basis2, trunc2, basis1, T)
    if d12.holds and d21.holds:
        return Comparison("equal", d12, d21)
    failing = [d for d in (d12, d21) if not d.holds]
    if any(d.fine_truncated for d in failing):
        return Comparison("inconclusive_at_budget", d12, d21)
    if d12.holds:
        return Comparison("tau1_finer", d12, d21, d21.failure[1][-1][1])
    if d21.holds:
        return Comparison("tau2_finer", d12, d21, d12.failure[1][-1][1])
    return Comparison("incomparable", d12, d21)


# ---------------------------------------------------------------------------
# precompactness evidence for linear chains


def subgroup_index(H: Subgroup, T: FiniteTruncation) -> int:
    """Index of ``H`` intersected with ``T`` inside ``T``."""
    if isinstance(H, Tail):
        return math.prod(T.orders[: min(H.k, T.depth)])
    depth = max([T.depth] + [g.max_index for g in H.gens])
    big = FiniteTruncation(T.moduli, depth, T.budget)
    inside = sum(1 for x in generated_subgroup(H.gens, big) if x.max_index <= T.depth)
    return T.cardinality // inside


@dataclass
class ChainReport:
    verdict: str
    table: dict
    labels: list
    divergent: str | None = None

    def to_json(self):
        return {
            "verdict": self.verdict,
            "subgroups": self.labels,
            "indices": {str(d): idx for d, idx in self.table.items()},
            "divergent": self.divergent,
        }


def linear_chain_precompact(
    desc: LinearChain, depths: Sequence[int], chain_length: int | None = None, budget: int | None = None
) -> ChainReport:
    """Index of every chain subgroup at each depth, and whether they stabilise.

    A precompact linear topology has only finite-index open subgroups, so
    indices that keep growing with the depth point at a subgroup of
    infinite index.  For a tail chain the first ``chain_length`` members
    are examined (default: the smallest depth).
    """
    depths = sorted(set(depths))
    if len(depths) < 2:
        raise InvalidParams("need at least two truncation depths")
    kwargs = {} if budget is None else {"budget": budget}
    truncs = [FiniteTruncation(desc.moduli, d, **kwargs) for d in depths]
    count = depths[0] if chain_length is None else chain_length
    subs = desc.members_at(truncs[0], count)
    labels = [H.label() for H in subs]
    table = {T.depth: [subgroup_index(H, T) for H in subs] for T in truncs}
    last, prev = table[depths[-1]], table[depths[-2]]
    for label, a, b in zip(labels, prev, last):
        if a != b:
            return ChainReport("unbounded_indices", table, labels, label)
    return ChainReport("bounded_indices", table, labels)
