"""Constructive engines: V_m witnesses for infinite-support characters and
discontinuous characters of torsion groups.

Witness algorithm
-----------------
Let ``G = (+) Z_{m_n}`` with non-decreasing unbounded ``m_n`` and let
``chi`` be a character with infinitely many nonzero coordinates (given
here as a finite prefix).  For every ``m`` there is ``x`` in ``V_m`` with
``chi(x)`` outside ``T_+``, so ``chi`` is not continuous for the topology
of uniform convergence on ``{0, +-e_n}``.  :func:`witness_not_continuous`
builds that ``x`` exactly:

0. ``n0`` is the least index with ``m_n >= 10m``; from there on
   ``1/m_n <= 1/(10m)``, so elements with coordinates in ``{0, +-1/m_n}``
   past ``n0`` lie in ``V_m``.
1. If some ``n >= n0`` has ``|chi_n|/m_n > 1/4``, ``x = sign(chi_n) e_n``.
2. Otherwise sort the support past ``n0`` into buckets ``A_k`` by
   ``k/m_{n0} < |chi_n|/m_n <= (k+1)/m_{n0}``.  If a bucket with ``k >= 1``
   has ``m_{n0}`` members, add the terms ``|chi_n|/m_n`` (each at most
   1/4) until the partial sum first exceeds 1/4; it is then below 3/4.
3. If ``A_0`` has ``2m`` members, put
   ``x_n = floor(m_n / (4m|chi_n|)) sign(chi_n) / m_n`` on the first
   ``2m`` of them; each term ``chi_n x_n`` lies in ``[3/(20m), 1/(4m)]``
   so the total lies in ``[3/10, 1/2]``.

Every comparison is recorded in the report trace as exact rationals.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .abelian import (
    DEFAULT_BUDGET,
    Character,
    FiniteTruncation,
    GroupElement,
    ModuliSequence,
    minimal_multiple_in,
    pairing,
)
from .errors import (
    AllCandidatesSkipped,
    InsufficientSupport,
    InvariantViolation,
    ModuliMismatch,
    NoIndexWithinLimit,
    NonMonotoneModuli,
    ZeroElement,
)
from .topology import vm, vm_contains
from .torus import TorusPoint, format_rational, in_t_plus

__all__ = [
    "DEFAULT_SCAN_LIMIT",
    "BoundCheck",
    "WitnessReport",
    "compute_n0",
    "partition_support",
    "witness_not_continuous",
    "Certificate",
    "continuity_certificate",
    "DiscontinuityTable",
    "build_discontinuous_character",
    "ViolatedRelation",
    "homomorphism_check",
    "sample_relations",
]

DEFAULT_SCAN_LIMIT = int(os.environ.get("QCDUAL_SCAN_LIMIT") or 100_000)

_QUARTER = Fraction(1, 4)
_HALF = Fraction(1, 2)

_RELATIONS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


@dataclass(frozen=True)
class BoundCheck:
    """One exact comparison ``lhs <relation> rhs`` of the inequality trace."""

    label: str
    lhs: Fraction
    relation: str
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return _RELATIONS[self.relation](self.lhs, self.rhs)

    def to_json(self):
        return {
            "label": self.label,
            "lhs": format_rational(self.lhs),
            "relation": self.relation,
            "rhs": format_rational(self.rhs),
            "holds": self.holds,
        }


def _sign(k):
    return 1 if k > 0 else -1


@dataclass
class WitnessReport:
    case_used: str
    m: int
    n0: int
    witness: GroupElement
    pairing_value: TorusPoint
    chosen_k: int | None = None
    trace: list[BoundCheck] = field(default_factory=list)
    chi: Character | None = field(default=None, repr=False)

    @property
    def sound(self) -> bool:
        """``x`` in ``V_m`` and ``chi(x)`` not in ``T_+``, re-checked from scratch."""
        return vm_contains(self.m, self.witness, self.witness.moduli) and not in_t_plus(
            self.pairing_value
        )

    def to_json(self):
        return {
            "case_used": self.case_used,
            "m": self.m,
            "n0": self.n0,
            "chosen_k": self.chosen_k,
            "witness": self.witness.to_json(),
            "pairing_value": str(self.pairing_value),
            "trace": [c.to_json() for c in self.trace],
        }


def _require_monotone(moduli):
    if not moduli.monotone:
        raise NonMonotoneModuli(f"moduli {moduli} are not non-decreasing")


def compute_n0(moduli: ModuliSequence, m: int, scan_limit: int = DEFAULT_SCAN_LIMIT) -> int:
    """Least ``n`` with ``m_n / (4m) >= 5/2``, i.e. ``m_n >= 10m``."""
    _require_monotone(moduli)
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    stop = scan_limit if moduli.length is None else min(scan_limit, moduli.length)
    if moduli.rule == "geom":
        # m_n = b^n: jump straight to the answer
        n = max(1, math.ceil(math.log(10 * m, moduli.params[0])) - 1)
        while moduli[n] < 10 * m:
            n += 1
        while n > 1 and moduli[n - 1] >= 10 * m:
            n -= 1
        if n <= stop:
            return n
    else:
        for n in range(1, stop + 1):
            if moduli[n] >= 10 * m:
                return n
    raise NoIndexWithinLimit(f"no m_n >= {10 * m} with n <= {stop} in {moduli}")


def _bucket(c: int, m_n: int, m_n0: int) -> int:
    # k with k/m_n0 < |c|/m_n <= (k+1)/m_n0
    return -(-abs(c) * m_n0 // m_n) - 1


def partition_support(chi: Character, n0: int, moduli: ModuliSequence) -> dict[int, list[int]]:
    """Nonempty buckets ``A_k`` of the support of ``chi`` at or past ``n0``."""
    m_n0 = moduli[n0]
    buckets: dict[int, list[int]] = {}
    for n, c in chi.support:
        if n >= n0:
            buckets.setdefault(_bucket(c, moduli[n], m_n0), []).append(n)
    return dict(sorted(buckets.items()))


def witness_not_continuous(
    chi: Character, m: int, moduli: ModuliSequence, scan_limit: int = DEFAULT_SCAN_LIMIT
) -> WitnessReport:
    """An ``x`` in ``V_m`` with ``chi(x)`` outside ``T_+``.

    Raises :class:`InsufficientSupport` when the given prefix of ``chi``
    has too few nonzero coordinates past ``n0`` for any of the three cases.
    """
    if chi.moduli != moduli:
        raise ModuliMismatch(f"character over {chi.moduli}, moduli {moduli}")
    n0 = compute_n0(moduli, m, scan_limit)
    m_n0 = moduli[n0]
    trace = [BoundCheck("m_n0 >= 10m", Fraction(m_n0), ">=", Fraction(10 * m))]
    tail = [(n, c) for n, c in chi.support if n >= n0]

    for n, c in tail:
        ratio = Fraction(abs(c), moduli[n])
        if ratio > _QUARTER:
            trace += [
                BoundCheck(f"|chi_{n}|/m_{n} > 1/4", ratio, ">", _QUARTER),
                BoundCheck(f"1/m_{n} <= 1/(4m)", Fraction(1, moduli[n]), "<=", Fraction(1, 4 * m)),
            ]
            x = GroupElement(moduli, {n: _sign(c)})
            return _finish(WitnessReport("short_circuit", m, n0, x, pairing(chi, x), None, trace), chi)

    buckets = partition_support(chi, n0, moduli)
    for k, members in buckets.items():
        if k >= 1 and len(members) >= m_n0:
            return _case1(chi, m, moduli, n0, k, members[:m_n0], trace)
    zero_bucket = buckets.get(0, [])
    if len(zero_bucket) >= 2 * m:
        return _case2(chi, m, moduli, n0, zero_bucket[: 2 * m], trace)
    sizes = {k: len(v) for k, v in buckets.items()}
    raise InsufficientSupport(
        f"prefix too short for m={m}: n0={n0}, m_n0={m_n0}, bucket sizes {sizes}; "
        f"case 1 needs {m_n0} indices in one bucket k>=1, case 2 needs {2 * m} in A_0"
    )


def _case1(chi, m, moduli, n0, k, chosen, trace):
    m_n0 = moduli[n0]
    residues = {}
    total = Fraction(0)
    for n in chosen:
        c = chi.residue(n)
        term = Fraction(abs(c), moduli[n])
        trace += [
            BoundCheck(f"k/m_n0 < chi_{n} x_{n}", Fraction(k, m_n0), "<", term),
            BoundCheck(f"chi_{n} x_{n} <= 1/4", term, "<=", _QUARTER),
            BoundCheck(f"1/m_{n} <= 1/(10m)", Fraction(1, moduli[n]), "<=", Fraction(1, 10 * m)),
        ]
        residues[n] = _sign(c)
        total += term
        if _QUARTER < total < Fraction(3, 4):
            trace += [
                BoundCheck("partial sum > 1/4", total, ">", _QUARTER),
                BoundCheck("partial sum < 3/4", total, "<", Fraction(3, 4)),
            ]
            x = GroupElement(moduli, residues)
            return _finish(WitnessReport("case1", m, n0, x, pairing(chi, x), k, trace), chi)
    raise InvariantViolation(f"case 1 partial sums never entered (1/4, 3/4): total {total}", trace)


def _case2(chi, m, moduli, n0, J, trace):
    residues = {}
    total = Fraction(0)
    low, high = Fraction(3, 20 * m), Fraction(1, 4 * m)
    for n in J:
        c = chi.residue(n)
        m_n = moduli[n]
        j = m_n // (4 * m * abs(c))
        residues[n] = j * _sign(c)
        size = Fraction(j, m_n)
        term = abs(c) * size
        trace += [
            BoundCheck(f"j_{n} != 0", Fraction(j), "!=", Fraction(0)),
            BoundCheck(f"|x_{n}| <= 1/(4m|chi_{n}|)", size, "<=", Fraction(1, 4 * m * abs(c))),
            BoundCheck(
                f"|x_{n}| >= 1/(4m|chi_{n}|) - 1/m_{n}",
                size,
                ">=",
                Fraction(1, 4 * m * abs(c)) - Fraction(1, m_n),
            ),
            BoundCheck(f"3/(20m) <= chi_{n} x_{n}", low, "<=", term),
            BoundCheck(f"chi_{n} x_{n} <= 1/(4m)", term, "<=", high),
        ]
        total += term
    trace += [
        BoundCheck("sum > 1/4", total, ">", _QUARTER),
        BoundCheck("sum <= 1/2", total, "<=", _HALF),
    ]
    x = GroupElement(moduli, residues)
    return _finish(WitnessReport("case2", m, n0, x, pairing(chi, x), 0, trace), chi)


def _finish(report: WitnessReport, chi: Character) -> WitnessReport:
    report.chi = chi
    x = report.witness
    report.trace += [
        BoundCheck(
            f"x in V_{report.m}: max |x_n|",
            max((Fraction(abs(k), x.moduli[n]) for n, k in x.support), default=Fraction(0)),
            "<=",
            Fraction(1, 4 * report.m),
        ),
        BoundCheck("|chi(x)| > 1/4", abs(report.pairing_value), ">", _QUARTER),
    ]
    bad = [c for c in report.trace if not c.holds]
    if bad or not report.sound:
        raise InvariantViolation(f"witness for {chi} failed its own checks: {bad}", report.trace)
    return report


# ---------------------------------------------------------------------------
# the easy direction


@dataclass(frozen=True)
class Certificate:
    """``chi`` vanishes on ``V_m`` with ``m = m_{n1}``.

    ``points_checked`` counts the elements of ``V_m`` in the truncation of
    depth ``verified_depth`` on which ``chi(x) = 0`` was confirmed
    (``None`` when that enumeration was over budget).
    """

    m: int
    n1: int
    verified_depth: int
    points_checked: int | None

    def to_json(self):
        return {
            "m": self.m,
            "n1": self.n1,
            "verified_depth": self.verified_depth,
            "points_checked": self.points_checked,
        }


def continuity_certificate(
    chi: Character, moduli: ModuliSequence, budget: int = DEFAULT_BUDGET
) -> Certificate:
    """Smallest certified ``m`` with ``chi(V_m) = {0}`` for a finitely supported ``chi``.

    With ``n1`` one past the support, every ``x`` in ``V_m`` for
    ``m = m_{n1}`` has ``|k_n| <= m_n/(4 m_{n1}) < 1`` below ``n1``.
    """
    _require_monotone(moduli)
    if chi.moduli != moduli:
        raise ModuliMismatch(f"character over {chi.moduli}, moduli {moduli}")
    n1 = chi.max_index + 1
    m = moduli[n1]
    depth = n1 + 2 if moduli.length is None else min(n1 + 2, moduli.length)
    T = FiniteTruncation(moduli, depth, budget)
    box = vm(moduli, m)
    checked = None
    if box.count_bound(T) <= budget:
        checked = 0
        for x in box.members(T):
            if pairing(chi, x):
                raise InvariantViolation(f"{chi} does not vanish at {x} in V_{m}")
            checked += 1
    return Certificate(m, n1, depth, checked)


# ---------------------------------------------------------------------------
# discontinuous characters of torsion groups


@dataclass(frozen=True)
class DiscontinuityTable:
    """Values of a homomorphism ``f`` on the accepted elements.

    ``relations[j] = (k, coeffs)`` says ``k * a_j = sum_i coeffs[i] * a_i``
    over earlier accepted elements (``coeffs`` all zero and ``k = ord(a_j)``
    when ``<a_j>`` met the earlier subgroup trivially).  These relations
    generate every relation among the accepted elements.
    """

    moduli: ModuliSequence
    accepted: tuple[GroupElement, ...]
    values: tuple[TorusPoint, ...]
    relations: tuple[tuple[int, tuple[int, ...]], ...]
    skipped: tuple[tuple[GroupElement, str], ...] = ()

    def evaluate(self, coeffs: Sequence[int]) -> TorusPoint:
        return TorusPoint(sum((c * v.value for c, v in zip(coeffs, self.values) if c), Fraction(0)))

    def combine(self, coeffs: Sequence[int]) -> GroupElement:
        acc: dict[int, int] = {}
        for c, a in zip(coeffs, self.accepted):
            if c:
                for n, k in a.support:
                    acc[n] = acc.get(n, 0) + c * k
        return GroupElement(self.moduli, acc)

    def with_value(self, index: int, value) -> "DiscontinuityTable":
        values = list(self.values)
        values[index] = value if isinstance(value, TorusPoint) else TorusPoint(value)
        return replace(self, values=tuple(values))

    def to_json(self):
        return {
            "accepted": [
                {"element": a.to_json(), "value": str(v), "relation_k": k}
                for a, v, (k, _) in zip(self.accepted, self.values, self.relations)
            ],
            "skipped": [{"element": a.to_json(), "reason": r} for a, r in self.skipped],
        }


def _best(candidates):
    # farthest from 0, positive representative on ties
    return max(candidates, key=lambda t: (abs(t.value), t.value > 0))


def build_discontinuous_character(
    moduli: ModuliSequence,
    seq: Sequence[GroupElement],
    limit: int | None = None,
) -> DiscontinuityTable:
    """Extend a homomorphism along ``seq`` keeping every value outside ``T_+``.

    Elements already in the generated subgroup are skipped
    (``"in_subgroup"``), as are elements whose every admissible value lies
    in ``T_+`` (``"boundary_obstruction"``); dropping them amounts to
    passing to a subsequence.
    """
    seq = list(seq)[:limit]
    for a in seq:
        if not a:
            raise ZeroElement("sequence contains the zero element")
    if not seq:
        raise AllCandidatesSkipped("empty sequence")
    depth = max(a.max_index for a in seq)
    T = FiniteTruncation(moduli, depth)
    accepted, values, relations, skipped = [], [], [], []
    for a in seq:
        T.check(a)
        order = a.order()
        mm = minimal_multiple_in(accepted, a, T) if accepted else None
        if mm is None:
            value = TorusPoint(Fraction(order // 2, order))
            relation = (order, (0,) * len(accepted))
        elif mm.k == 1:
            skipped.append((a, "in_subgroup"))
            continue
        else:
            v = sum((c * f for c, f in zip(mm.coefficients, values)), TorusPoint(0))
            solutions = [TorusPoint((v.value + i) / mm.k) for i in range(mm.k)]
            outside = [t for t in solutions if not in_t_plus(t)]
            if not outside:
                skipped.append((a, "boundary_obstruction"))
                continue
            value = _best(outside)
            relation = (mm.k, mm.coefficients)
        if in_t_plus(value):
            raise InvariantViolation(f"value {value} for {a} lies in T_+")
        accepted.append(a)
        values.append(value)
        relations.append(relation)
    if not accepted:
        raise AllCandidatesSkipped(f"all {len(seq)} candidates were skipped")
    return DiscontinuityTable(
        moduli, tuple(accepted), tuple(values), tuple(relations), tuple(skipped)
    )


@dataclass(frozen=True)
class ViolatedRelation:
    lhs: tuple[int, ...]
    rhs: tuple[int, ...]
    lhs_value: TorusPoint
    rhs_value: TorusPoint

    def to_json(self):
        return {
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
            "lhs_value": str(self.lhs_value),
            "rhs_value": str(self.rhs_value),
        }


def homomorphism_check(table: DiscontinuityTable, relations, ambient=None):
    """``True`` if ``f`` respects every relation ``sum c_i a_i = sum d_i a_i``.

    ``relations`` is an iterable of coefficient pairs ``(c, d)``; pairs that
    are not relations in the ambient group raise ``ValueError``.
    Otherwise the first violated relation is returned.
    """
    if ambient is not None and ambient != table.moduli:
        raise ModuliMismatch(f"table over {table.moduli}, ambient {ambient}")
    n = len(table.accepted)
    for c, d in relations:
        c = tuple(c) + (0,) * (n - len(c))
        d = tuple(d) + (0,) * (n - len(d))
        if table.combine(c) != table.combine(d):
            raise ValueError(f"{c} = {d} is not a relation in the ambient group")
        lv, rv = table.evaluate(c), table.evaluate(d)
        if lv != rv:
            return ViolatedRelation(c, d, lv, rv)
    return True


def sample_relations(table: DiscontinuityTable, count: int, rng: random.Random) -> list:
    """Random relations among the accepted elements.

    Each sample is ``(c, c + sum_j r_j R_j)`` where ``R_j`` are the basic
    relations recorded in the table, so every sample holds in the group.
    """
    n = len(table.accepted)
    basic = []
    for j, (k, coeffs) in enumerate(table.relations):
        R = [0] * n
        R[j] = k
        for i, ci in enumerate(coeffs):
            R[i] -= ci
        basic.append(R)
    out = []
    for _ in range(count):
        c = [rng.randrange(-3, 4) if rng.random() < 0.3 else 0 for _ in range(n)]
        d = list(c)
        for R in rng.sample(basic, min(len(basic), rng.randint(1, 3))):
            r = rng.choice([-2, -1, 1, 2])
            d = [x + r * y for x, y in zip(d, R)]
        out.append((tuple(c), tuple(d)))
    return out
