"""Direct sums of cyclic groups and their finite truncations.

The group ``G = (+)_{n>=1} Z_{m_n}`` is modelled through a
:class:`ModuliSequence`.  Elements and characters are finitely supported
residue vectors; a coordinate ``k`` of an element stands for the point
``k/m_n`` of the circle, and both residues are kept in the window
``(-m_n/2, m_n/2]``.  A character ``chi`` acts by
``chi(x) = sum_n chi_n * k_n / m_n (mod 1)``.

Exhaustive operations run on a :class:`FiniteTruncation`, the finite
group ``(+)_{n<=N} Z_{m_n}``, and are guarded by an enumeration budget.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import sympy

from . import _lattice
from .errors import BudgetExceeded, ModuliMismatch, ModulusBelowTwo, ZeroElement
from .torus import TorusPoint

__all__ = [
    "DEFAULT_BUDGET",
    "ModuliSequence",
    "GroupElement",
    "Character",
    "FiniteTruncation",
    "MinimalMultiple",
    "window",
    "basis_element",
    "basis_character",
    "pairing",
    "dual_enumerate",
    "subgroup_membership",
    "minimal_multiple_in",
    "generated_subgroup",
    "enumerate_subgroups",
    "annihilator",
    "annihilator_of_characters",
    "is_dually_closed",
]


def _env_int(name, default):
    value = os.environ.get(name)
    return int(value) if value else default


DEFAULT_BUDGET = _env_int("QCDUAL_BUDGET", 10**6)


def window(k: int, m: int) -> int:
    """Representative of ``k mod m`` in ``(-m/2, m/2]``."""
    r = k % m
    if 2 * r > m:
        r -= m
    return r


# ---------------------------------------------------------------------------
# moduli sequences


@dataclass(frozen=True)
class ModuliSequence:
    """The orders ``m_1, m_2, ...`` of the cyclic summands (1-indexed).

    ``rule`` is one of ``"list"``, ``"arith"``, ``"geom"``, ``"primes"``;
    ``params`` holds the rule arguments.  Use the constructors rather than
    building instances by hand.
    """

    rule: str
    params: tuple

    def __post_init__(self):
        if self.rule == "list":
            if not self.params:
                raise ValueError("explicit moduli list is empty")
            for i, m in enumerate(self.params, start=1):
                if m < 2:
                    raise ModulusBelowTwo(f"m_{i} = {m} < 2")
        elif self.rule == "arith":
            start, step = self.params
            if start < 2:
                raise ModulusBelowTwo(f"m_1 = {start} < 2")
            if step < 0:
                raise ModulusBelowTwo("a decreasing arithmetic rule drops below 2")
        elif self.rule == "geom":
            (base,) = self.params
            if base < 2:
                raise ModulusBelowTwo(f"geometric base {base} < 2")
        elif self.rule == "primes":
            if self.params:
                raise ValueError("primes rule takes no parameters")
        else:
            raise ValueError(f"unknown moduli rule {self.rule!r}")

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "ModuliSequence":
        return cls("list", tuple(int(v) for v in values))

    @classmethod
    def arithmetic(cls, start: int, step: int) -> "ModuliSequence":
        return cls("arith", (int(start), int(step)))

    @classmethod
    def geometric(cls, base: int) -> "ModuliSequence":
        return cls("geom", (int(base),))

    @classmethod
    def primes(cls) -> "ModuliSequence":
        return cls("primes", ())

    @property
    def length(self):
        """Number of terms, or ``None`` for an infinite rule."""
        return len(self.params) if self.rule == "list" else None

    @property
    def is_finite(self) -> bool:
        return self.rule == "list"

    @property
    def monotone(self) -> bool:
        if self.rule == "list":
            return all(a <= b for a, b in zip(self.params, self.params[1:]))
        return True

    @property
    def unbounded(self) -> bool:
        if self.rule == "list":
            return False
        if self.rule == "arith":
            return self.params[1] > 0
        return True

    def has_index(self, n: int) -> bool:
        return n >= 1 and (self.length is None or n <= self.length)

    def __getitem__(self, n: int) -> int:
        if not isinstance(n, int) or n < 1:
            raise IndexError(f"moduli are indexed from 1, got {n!r}")
        if self.rule == "list":
            if n > len(self.params):
                raise IndexError(f"explicit moduli list has only {len(self.params)} terms")
            return self.params[n - 1]
        if self.rule == "arith":
            start, step = self.params
            return start + (n - 1) * step
        if self.rule == "geom":
            return self.params[0] ** n
        return int(sympy.prime(n))

    def prefix(self, count: int) -> list[int]:
        return [self[n] for n in range(1, count + 1)]

    def render(self) -> str:
        """Spec string accepted by :func:`qcdual.parsing.parse_moduli_spec`."""
        if self.rule == "list":
            return "list:" + ",".join(str(m) for m in self.params)
        if self.rule == "arith":
            return f"arith:start={self.params[0]},step={self.params[1]}"
        if self.rule == "geom":
            return f"geom:base={self.params[0]}"
        return "primes"

    def __str__(self):
        return self.render()


# ---------------------------------------------------------------------------
# sparse residue vectors


@total_ordering
class _Sparse:
    __slots__ = ("moduli", "support")

    def __init__(self, moduli: ModuliSequence, residues: Mapping[int, int] | Iterable = ()):
        items = residues.items() if isinstance(residues, Mapping) else residues
        support = {}
        for n, k in items:
            n = int(n)
            m = moduli[n]
            r = window(int(k) + support.get(n, 0), m)
            if r:
                support[n] = r
            else:
                support.pop(n, None)
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "support", tuple(sorted(support.items())))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _make(self, residues):
        return type(self)(self.moduli, residues)

    def residue(self, n: int) -> int:
        for i, k in self.support:
            if i == n:
                return k
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.support)

    def indices(self) -> tuple[int, ...]:
        return tuple(n for n, _ in self.support)

    @property
    def max_index(self) -> int:
        return self.support[-1][0] if self.support else 0

    def is_zero(self) -> bool:
        return not self.support

    def __bool__(self):
        return bool(self.support)

    def _check(self, other):
        if not isinstance(other, _Sparse) or type(other) is not type(self):
            return False
        if other.moduli != self.moduli:
            raise ModuliMismatch(f"{self.moduli} vs {other.moduli}")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return self._make(list(self.support) + list(other.support))

    def __neg__(self):
        return self._make([(n, -k) for n, k in self.support])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, c):
        if isinstance(c, bool) or not isinstance(c, int):
            return NotImplemented
        return self._make([(n, c * k) for n, k in self.support])

    def order(self) -> int:
        """Order in the group, i.e. the lcm of the coordinate orders."""
        out = 1
        for n, k in self.support:
            m = self.moduli[n]
            out = math.lcm(out, m // math.gcd(k, m))
        return out

    def sort_key(self):
        """Lexicographic key: residues mod m_n, coordinate 1 most significant."""
        return tuple((n, k % self.moduli[n]) for n, k in self.support)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.moduli == other.moduli and self.support == other.support

    def __lt__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        a, b = dict(self.support), dict(other.support)
        for n in sorted(set(a) | set(b)):
            ra = a.get(n, 0) % self.moduli[n]
            rb = b.get(n, 0) % self.moduli[n]
            if ra != rb:
                return ra < rb
        return False

    def __hash__(self):
        return hash((type(self).__name__, self.support))

    def to_json(self) -> dict[str, int]:
        return {str(n): k for n, k in self.support}

    @classmethod
    def from_json(cls, moduli: ModuliSequence, data: Mapping[str, int], **kwargs):
        return cls(moduli, {int(n): int(k) for n, k in data.items()}, **kwargs)

    def literal(self) -> str:
        """Command-line form ``"n:residue,..."`` (``"0"`` for zero)."""
        if not self.support:
            return "0"
        return ",".join(f"{n}:{k}" for n, k in self.support)

    def __repr__(self):
        return f"{type(self).__name__}({self.literal()!r} over {self.moduli})"


class GroupElement(_Sparse):
    """A finitely supported element ``x = (k_n / m_n)_n`` of the direct sum."""

    __slots__ = ()

    def coordinate(self, n: int) -> TorusPoint:
        return TorusPoint(Fraction(self.residue(n), self.moduli[n]))

    def __str__(self):
        if not self.support:
            return "0"
        return "(" + ", ".join(f"x_{n}={k}/{self.moduli[n]}" for n, k in self.support) + ")"


class Character(_Sparse):
    """A character given by its integer coordinates ``chi_n``.

    ``prefix_of_infinite`` marks a finite table that presents the beginning
    of a character with infinite support (an element of the full product
    dual, not of the direct sum).  The flag does not take part in equality.
    """

    __slots__ = ("prefix_of_infinite",)

    def __init__(self, moduli, residues=(), prefix_of_infinite: bool = False):
        super().__init__(moduli, residues)
        object.__setattr__(self, "prefix_of_infinite", bool(prefix_of_infinite))

    def _make(self, residues):
        return Character(self.moduli, residues, self.prefix_of_infinite)

    def __call__(self, x: GroupElement) -> TorusPoint:
        return pairing(self, x)

    def __str__(self):
        body = ", ".join(f"chi_{n}={k}" for n, k in self.support) or "0"
        return f"<{body}{', ...' if self.prefix_of_infinite else ''}>"


def basis_element(moduli: ModuliSequence, n: int, k: int = 1) -> GroupElement:
    return GroupElement(moduli, {n: k})


def basis_character(moduli: ModuliSequence, n: int, k: int = 1) -> Character:
    """The coordinate character ``e_n`` (times ``k``)."""
    return Character(moduli, {n: k})


def pairing(chi: Character, x: GroupElement) -> TorusPoint:
    """``chi(x) = sum_n chi_n x_n + Z``."""
    if chi.moduli != x.moduli:
        raise ModuliMismatch(f"character over {chi.moduli}, element over {x.moduli}")
    xs = dict(x.support)
    total = Fraction(0)
    for n, c in chi.support:
        k = xs.get(n)
        if k:
            total += Fraction(c * k, x.moduli[n])
    return TorusPoint(total)


# ---------------------------------------------------------------------------
# finite truncations


@dataclass(frozen=True, eq=True)
class FiniteTruncation:
    """The finite group ``(+)_{n <= depth} Z_{m_n}``."""

    moduli: ModuliSequence
    depth: int
    budget: int = field(default=DEFAULT_BUDGET, compare=False)

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"truncation depth must be positive, got {self.depth}")
        if not self.moduli.has_index(self.depth):
            raise ValueError(f"moduli {self.moduli} have no term m_{self.depth}")

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.moduli.prefix(self.depth))

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.orders)

    def __len__(self):
        return self.cardinality

    def require_budget(self, needed=None, what="truncation"):
        needed = self.cardinality if needed is None else needed
        if needed > self.budget:
            raise BudgetExceeded(needed, self.budget, what)

    def contains(self, v: _Sparse) -> bool:
        return v.moduli == self.moduli and v.max_index <= self.depth

    def check(self, *values: _Sparse):
        for v in values:
            if v.moduli != self.moduli:
                raise ModuliMismatch(f"value over {v.moduli}, truncation over {self.moduli}")
            if v.max_index > self.depth:
                raise ValueError(f"{v!r} is supported beyond depth {self.depth}")

    # -- enumeration -------------------------------------------------------

    def _residue_rows(self) -> Iterator[tuple[int, ...]]:
        ranges = [range(m) for m in self.orders]
        for t in itertools.product(*ranges):
            yield tuple(window(k, m) for k, m in zip(t, self.orders))

    def _from_row(self, cls, row):
        return cls(self.moduli, [(n, k) for n, k in enumerate(row, start=1) if k])

    @cached_property
    def _elements(self) -> tuple[GroupElement, ...]:
        self.require_budget()
        return tuple(self._from_row(GroupElement, r) for r in self._residue_rows())

    @cached_property
    def _characters(self) -> tuple[Character, ...]:
        self.require_budget()
        return tuple(self._from_row(Character, r) for r in self._residue_rows())

    def elements(self) -> tuple[GroupElement, ...]:
        """All elements in lexicographic order."""
        return self._elements

    def characters(self) -> tuple[Character, ...]:
        return self._characters

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides, acc = [], 1
        for m in reversed(self.orders):
            strides.append(acc)
            acc *= m
        return tuple(reversed(strides))

    def index_of(self, v: _Sparse) -> int:
        """Position of ``v`` in the lexicographic enumeration."""
        self.check(v)
        return sum((k % self.orders[n - 1]) * self._strides[n - 1] for n, k in v.support)

    def dense(self, v: _Sparse) -> list[int]:
        out = [0] * self.depth
        for n, k in v.support:
            out[n - 1] = k
        return out

    # -- vectorised pairing -------------------------------------------------
    # chi(x) = (sum_n chi_n k_n L/m_n mod L) / L with L = lcm(m_1..m_N)

    @cached_property
    def _lcm(self) -> int:
        return math.lcm(*self.orders)

    @cached_property
    def _weights(self) -> tuple[int, ...]:
        return tuple(self._lcm // m for m in self.orders)

    @cached_property
    def _dtype(self):
        bound = self.depth * max(self.orders) * self._lcm
        return np.int64 if bound < 2**62 else object

    @cached_property
    def _residue_matrix(self) -> np.ndarray:
        self.require_budget()
        rows = list(self._residue_rows())
        return np.array(rows, dtype=self._dtype).reshape(len(rows), self.depth)

    def pairing_numerators(self, v: _Sparse) -> np.ndarray:
        """``L * chi(x) mod L`` against every enumerated counterpart of ``v``.

        The pairing is symmetric in the residue vectors, so the same array
        serves a character against all elements and an element against all
        characters.
        """
        w = np.array([k * wt for k, wt in zip(self.dense(v), self._weights)], dtype=self._dtype)
        return (self._residue_matrix @ w) % self._lcm

    def tplus_mask(self, v: _Sparse) -> np.ndarray:
        r = self.pairing_numerators(v)
        dist = np.minimum(r, self._lcm - r)
        return (4 * dist <= self._lcm).astype(bool)

    def zero_mask(self, v: _Sparse) -> np.ndarray:
        return (self.pairing_numerators(v) == 0).astype(bool)

    @cached_property
    def tplus_matrix(self) -> np.ndarray:
        """Boolean matrix ``M[i, j] = (chi_j(x_i) in T_+)``."""
        self.require_budget(self.cardinality**2, "pairing matrix")
        return np.array([self.tplus_mask(x) for x in self.elements()], dtype=bool).reshape(
            self.cardinality, self.cardinality
        )

    def __repr__(self):
        return f"FiniteTruncation({self.moduli}, depth={self.depth})"


def dual_enumerate(T: FiniteTruncation) -> list[Character]:
    """All characters of ``T`` in lexicographic order."""
    return list(T.characters())


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class MinimalMultiple:
    k: int
    coefficients: tuple[int, ...]


def _membership_system(gens, extra, T):
    rows = sorted({n for g in list(gens) + list(extra) for n, _ in g.support})
    columns = [dict(g.support) for g in gens]
    columns += [{n: T.orders[n - 1]} for n in rows]
    columns += [dict(e.support) for e in extra]
    return rows, columns


def _reduce_coefficients(coeffs, gens):
    return tuple(c % g.order() if g else 0 for c, g in zip(coeffs, gens))


def subgroup_membership(
    gens: Sequence[GroupElement], x: GroupElement, T: FiniteTruncation, method: str = "exact"
) -> tuple[int, ...] | None:
    """Integers ``c`` with ``sum c_i gens_i = x``, or ``None`` if ``x`` is not in ``<gens>``.

    ``method="exact"`` solves the congruence system by integer echelon
    reduction; ``method="brute"`` walks the subgroup breadth-first and is
    limited by the truncation budget.  Coefficients are reduced modulo the
    order of the corresponding generator.
    """
    gens = list(gens)
    T.check(x, *gens)
    if method == "brute":
        return _membership_brute(gens, x, T)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    rows, columns = _membership_system(gens, (), T)
    pivots, _ = _lattice.echelon(columns, rows)
    z = _lattice.solve(pivots, dict(x.support))
    if z is None:
        return None
    return _reduce_coefficients([z.get(i, 0) for i in range(len(gens))], gens)


def _membership_brute(gens, x, T):
    zero = GroupElement(T.moduli)
    seen = {zero: (0,) * len(gens)}
    queue = deque([zero])
    while queue:
        y = queue.popleft()
        if y == x:
            return _reduce_coefficients(seen[y], gens)
        for i, g in enumerate(gens):
            z = y + g
            if z not in seen:
                if len(seen) >= T.budget:
                    raise BudgetExceeded(len(seen) + 1, T.budget, "subgroup walk")
                c = list(seen[y])
                c[i] += 1
                seen[z] = tuple(c)
                queue.append(z)
    return None


def minimal_multiple_in(
    gens: Sequence[GroupElement], a: GroupElement, T: FiniteTruncation
) -> MinimalMultiple | None:
    """Least ``k >= 1`` with ``k*a`` in ``<gens>``, with an expression for ``k*a``.

    Returns ``None`` when ``<a>`` meets ``<gens>`` trivially, i.e. when the
    least such ``k`` is ``ord(a)``.
    """
    gens = list(gens)
    T.check(a, *gens)
    if not a:
        raise ZeroElement("minimal_multiple_in needs a nonzero element")
    rows, columns = _membership_system(gens, [a], T)
    a_col = len(columns) - 1
    _, kernel = _lattice.echelon(columns, rows)
    # the a-coordinates of kernel vectors form the ideal k*Z we are after
    k, vec = _lattice.gcd_combination(kernel, a_col)
    order = a.order()
    if k == order:
        return None
    # k*a + sum c_i g_i + (moduli terms) = 0
    coeffs = _reduce_coefficients([-vec.get(i, 0) for i in range(len(gens))], gens)
    return MinimalMultiple(k, coeffs)


def generated_subgroup(gens: Iterable[GroupElement], T: FiniteTruncation) -> frozenset[GroupElement]:
    """All elements of ``<gens>`` inside ``T`` (budgeted closure)."""
    gens = [g for g in gens if g]
    T.check(*gens)
    zero = GroupElement(T.moduli)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = y + g
                if z not in seen:
                    if len(seen) >= T.budget:
                        raise BudgetExceeded(len(seen) + 1, T.budget, "subgroup closure")
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(seen)


def enumerate_subgroups(T: FiniteTruncation) -> list[frozenset[GroupElement]]:
    """Every subgroup of ``T``, ordered by size then lexicographically."""
    elements = T.elements()
    zero = frozenset([elements[0]])
    found = {zero}
    stack = [zero]
    while stack:
        H = stack.pop()
        for g in elements:
            if g in H:
                continue
            K = _join(H, g)
            if K not in found:
                found.add(K)
                stack.append(K)
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def _join(H, g):
    out = set(H)
    frontier = list(H)
    while frontier:
        nxt = []
        for y in frontier:
            z = y + g
            if z not in out:
                out.add(z)
                nxt.append(z)
        frontier = nxt
    return frozenset(out)


def annihilator(H_gens: Iterable[GroupElement], T: FiniteTruncation) -> frozenset[Character]:
    """Characters of ``T`` vanishing on ``<H_gens>``."""
    H_gens = list(H_gens)
    T.check(*H_gens)
    chars = T.characters()
    keep = np.ones(len(chars), dtype=bool)
    for h in H_gens:
        keep &= T.zero_mask(h)
    return frozenset(c for c, k in zip(chars, keep) if k)


def annihilator_of_characters(N: Iterable[Character], T: FiniteTruncation) -> frozenset[GroupElement]:
    """Elements of ``T`` killed by every character in ``N``."""
    N = list(N)
    T.check(*N)
    elements = T.elements()
    keep = np.ones(len(elements), dtype=bool)
    for chi in N:
        keep &= T.zero_mask(chi)
    return frozenset(x for x, k in zip(elements, keep) if k)


def is_dually_closed(
    H_gens: Sequence[GroupElement], x: GroupElement, T: FiniteTruncation
) -> Character | None:
    """A character vanishing on ``<H_gens>`` but not at ``x``; ``None`` if ``x`` is in ``<H_gens>``."""
    H_gens = list(H_gens)
    T.check(x, *H_gens)
    if subgroup_membership(H_gens, x, T) is not None:
        return None
    for chi in sorted(annihilator(H_gens, T)):
        if pairing(chi, x):
            return chi
    raise AssertionError("finite groups are dually closed in every subgroup")
