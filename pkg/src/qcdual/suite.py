"""Suite execution behind the command line: one structured report per run.

Each subcommand turns a :class:`SuiteConfig` into a :class:`Report`
holding a config echo, one record per case with exact ``"p/q"`` rationals,
pass/fail counts and wall-clock timings in integer milliseconds.  The report body (everything but
the timings) is a pure function of the config.

``verify`` runs the full acceptance battery; its checks are also exposed
individually (``check_*``) for the test suite.
"""

from __future__ import annotations

import functools
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

from . import abelian, constructions, quasiconvex, topology
from .abelian import Character, FiniteTruncation, GroupElement, ModuliSequence, basis_element
from .errors import InsufficientSupport
from .parsing import (
    parse_character,
    parse_descriptor,
    parse_element_set,
    parse_moduli_spec,
)
from .torus import format_rational, in_t_plus

__all__ = [
    "SuiteConfig",
    "Report",
    "CheckResult",
    "run_suite",
    "COMMANDS",
    "random_prefix_character",
    "canonical_sequence",
    "check_bipolar_calculus",
    "check_atlas",
    "check_linearity_extraction",
    "check_witness_soundness",
    "check_two_direction_consistency",
    "check_discontinuous_character",
    "check_topology_comparison",
    "ACCEPTANCE_CHECKS",
]

COMMANDS = ("hull", "polar", "atlas", "witness", "certify", "discont", "compare-top", "verify")


@dataclass
class SuiteConfig:
    command: str
    moduli_spec: str = "geom:base=2"
    truncation_depth: int = 1
    m_values: list = field(default_factory=lambda: [1])
    sample_count: int = 200
    rng_seed: int = 0
    budget: int = abelian.DEFAULT_BUDGET
    basis_budget: int = topology.DEFAULT_BASIS_BUDGET
    scan_limit: int = constructions.DEFAULT_SCAN_LIMIT
    output_path: str | None = None
    element_set: str | None = None
    character: str | None = None
    sequence: str | None = None
    tau1: str = "uniform-c"
    tau2: str = "product"
    dot_path: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        if self.truncation_depth < 1:
            raise ValueError("truncation depth must be positive")
        if self.sample_count < 1:
            raise ValueError("sample count must be positive")
        if not self.m_values or any(m < 1 for m in self.m_values):
            raise ValueError("m values must be positive integers")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng seed must be a 64-bit unsigned integer")

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def record(self) -> dict:
        return {"name": self.name, "status": "PASS" if self.passed else "FAIL", **self.details}


@dataclass
class Report:
    config: dict
    cases: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def failed(self) -> int:
        return sum(1 for c in self.cases if c["status"] == "FAIL")

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c["status"] == "PASS")

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def body(self) -> dict:
        return {
            "config": self.config,
            "cases": self.cases,
            "summary": {
                "passed": self.passed,
                "failed": self.failed,
                "other": len(self.cases) - self.passed - self.failed,
            },
        }

    def body_text(self) -> str:
        return json.dumps(self.body(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        doc = dict(self.body())
        doc["timing"] = self.timings
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _members(S) -> list:
    return [v.to_json() for v in sorted(S)]


# ---------------------------------------------------------------------------
# random inputs


def random_prefix_character(moduli: ModuliSequence, m: int, rng: random.Random, scan_limit=None):
    """A random finite prefix of an infinite-support character.

    Mixes four shapes so that every branch of the witness algorithm gets
    exercised: large coordinates, a dense bucket with ``k >= 1``, many tiny
    coordinates, and a short sparse prefix that may be insufficient.
    """
    kwargs = {} if scan_limit is None else {"scan_limit": scan_limit}
    n0 = constructions.compute_n0(moduli, m, **kwargs)
    m_n0 = moduli[n0]
    residues = {}
    for n in range(1, n0):
        if rng.random() < 0.5:
            residues[n] = rng.randint(0, moduli[n] - 1)
    shape = rng.choice(["large", "bucket", "tiny", "sparse"])
    start = n0 + rng.randint(0, 3)
    if shape == "large":
        for n in range(start, start + rng.randint(1, 8)):
            residues[n] = rng.randint(-(moduli[n] - 1) // 2, moduli[n] // 2)
    elif shape == "bucket":
        k = rng.randint(1, max(1, m_n0 // 4 - 1))
        n, hits = start, 0
        while hits < m_n0 + rng.randint(0, 4):
            m_n = moduli[n]
            lo = k * m_n // m_n0 + 1
            hi = min((k + 1) * m_n // m_n0, m_n // 4)
            if lo <= hi:
                residues[n] = rng.choice([1, -1]) * rng.randint(lo, hi)
                hits += 1
            n += 1
    elif shape == "tiny":
        n, hits = start, 0
        while hits < 2 * m + rng.randint(0, 5):
            top = moduli[n] // m_n0
            if top >= 1:
                residues[n] = rng.choice([1, -1]) * rng.randint(1, top)
                hits += 1
            n += 1
    else:
        for n in rng.sample(range(start, start + 12), rng.randint(0, 3)):
            residues[n] = rng.choice([1, -1]) * rng.randint(1, max(1, moduli[n] // m_n0))
    return Character(moduli, residues, prefix_of_infinite=True)


def random_finite_character(moduli: ModuliSequence, rng: random.Random, max_index: int = 6):
    residues = {}
    for n in range(1, rng.randint(0, max_index) + 1):
        if rng.random() < 0.7:
            residues[n] = rng.randint(0, moduli[n] - 1)
    return Character(moduli, residues)


def canonical_sequence(moduli: ModuliSequence, depth: int) -> list[GroupElement]:
    """The null sequence ``e_1, e_2, ..., e_depth`` of the product topology."""
    return [basis_element(moduli, n) for n in range(1, depth + 1)]


# ---------------------------------------------------------------------------
# acceptance checks


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - t
        return result

    return wrapper


def _criterion1_groups():
    groups = [FiniteTruncation(ModuliSequence.from_list([m]), 1) for m in range(2, 9)]
    groups.append(FiniteTruncation(ModuliSequence.from_list([2, 4]), 2))
    return groups


def _all_subsets(pool):
    n = len(pool)
    return {mask: frozenset(pool[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)}


def _submask_pairs(n):
    full = (1 << n) - 1
    for big in range(full + 1):
        sub = big
        while True:
            yield sub, big
            if sub == 0:
                break
            sub = (sub - 1) & big


@_timed
def check_bipolar_calculus() -> CheckResult:
    """Extensive and idempotent hulls, antitone polars, triple polar identity."""
    failures = []
    counts = {}
    for T in _criterion1_groups():
        elements, chars = T.elements(), T.characters()
        subsets = _all_subsets(elements)
        csubsets = _all_subsets(chars)
        polars = {k: quasiconvex.polar(S, T) for k, S in subsets.items()}
        prepolars = {k: quasiconvex.prepolar(N, T) for k, N in csubsets.items()}
        for k, S in subsets.items():
            hull = quasiconvex.prepolar(polars[k], T)
            if not S <= hull:
                failures.append(("extensive", str(T), _members(S)))
            if quasiconvex.qc_hull(hull, T) != hull:
                failures.append(("idempotent", str(T), _members(S)))
            if quasiconvex.polar(quasiconvex.prepolar(polars[k], T), T) != polars[k]:
                failures.append(("triple polar", str(T), _members(S)))
        n = len(elements)
        pairs = 0
        for sub, big in _submask_pairs(n):
            pairs += 1
            if not polars[big] <= polars[sub]:
                failures.append(("polar antitone", str(T), sub, big))
            if not prepolars[big] <= prepolars[sub]:
                failures.append(("prepolar antitone", str(T), sub, big))
        counts[repr(T)] = {"subsets": len(subsets), "subset_pairs": pairs}
    return CheckResult(
        "bipolar_calculus", not failures, {"groups": counts, "failures": failures[:10]}
    )


def _atlas_oracle(T):
    # all prepolars of all subsets of the dual
    chars = T.characters()
    return {quasiconvex.prepolar(N, T) for N in _all_subsets(chars).values()}


@_timed
def check_atlas() -> CheckResult:
    """The quasi-convex atlas of Z_2, Z_3, Z_4 against exhaustive prepolars."""
    details = {}
    ok = True
    Z4 = ModuliSequence.from_list([4])
    e = basis_element(Z4, 1)
    expected_z4 = [
        frozenset([0 * e]),
        frozenset([0 * e, 2 * e]),
        frozenset([0 * e, e, -e]),
        frozenset([0 * e, e, 2 * e, -e]),
    ]
    for m in (2, 3, 4):
        T = FiniteTruncation(ModuliSequence.from_list([m]), 1)
        sets = quasiconvex.enumerate_quasiconvex(T)
        oracle = _atlas_oracle(T)
        agree = set(sets) == oracle and len(sets) == len(oracle)
        details[f"Z_{m}"] = {"count": len(sets), "sets": [_members(S) for S in sets], "oracle_agrees": agree}
        ok &= agree
        if m in (2, 3):
            ok &= len(sets) == 2
        else:
            ok &= sets == expected_z4
    return CheckResult("quasiconvex_atlas", ok, details)


def _is_subgroup(H):
    return all((a + b) in H and (-a) in H for a in H for b in H) and bool(H)


@_timed
def check_linearity_extraction() -> CheckResult:
    """polar(U)^perp is a subgroup inside U for every quasi-convex U."""
    failures = []
    tested = 0
    for T in _criterion1_groups():
        for U in quasiconvex.enumerate_quasiconvex(T):
            W = quasiconvex.open_subgroup_inside(U, T)
            tested += 1
            if not (_is_subgroup(W) and W <= U):
                failures.append({"group": repr(T), "U": _members(U), "W": _members(W)})
    return CheckResult("linearity_extraction", not failures, {"sets_tested": tested, "failures": failures})


def _witness_case_ok(report: constructions.WitnessReport) -> bool:
    chi_x = report.pairing_value
    ok = report.sound and all(c.holds for c in report.trace)
    ok &= topology.vm_contains(report.m, report.witness, report.witness.moduli)
    ok &= abs(chi_x.value) > Fraction(1, 4)
    labels = {c.label: c for c in report.trace}
    if report.case_used == "case1":
        s_low, s_high = labels["partial sum > 1/4"], labels["partial sum < 3/4"]
        ok &= Fraction(1, 4) < s_low.lhs < Fraction(3, 4) and s_high.lhs == s_low.lhs
    elif report.case_used == "case2":
        total = labels["sum > 1/4"].lhs
        ok &= Fraction(1, 4) < total <= Fraction(1, 2)
        m = report.m
        for n, k in report.witness.support:
            term = Fraction(abs(k), report.witness.moduli[n]) * abs(report.chi.residue(n))
            ok &= Fraction(3, 20 * m) <= term <= Fraction(1, 4 * m)
    return ok


@_timed
def check_witness_soundness(seed: int = 0, samples: int = 200, m_values=(1, 2, 3)) -> CheckResult:
    """Every witness lies in V_m and pairs with chi outside T_+."""
    configs = ["geom:base=2", "arith:start=2,step=1"]
    details = {}
    ok = True
    for spec in configs:
        moduli = parse_moduli_spec(spec)
        for m in m_values:
            rng = random.Random(f"{seed}:{spec}:{m}")
            tally = {"short_circuit": 0, "case1": 0, "case2": 0, "insufficient_support": 0}
            bad = []
            for _ in range(samples):
                chi = random_prefix_character(moduli, m, rng)
                try:
                    report = constructions.witness_not_continuous(chi, m, moduli)
                except InsufficientSupport:
                    tally["insufficient_support"] += 1
                    continue
                tally[report.case_used] += 1
                if not _witness_case_ok(report):
                    bad.append(chi.literal())
            successes = samples - tally["insufficient_support"]
            ok &= not bad and successes > 0
            details[f"{spec} m={m}"] = {**tally, "failures": bad[:5]}
    return CheckResult("witness_soundness", ok, details)


@_timed
def check_two_direction_consistency(seed: int = 0, samples: int = 100) -> CheckResult:
    """Finite-support characters: certified continuous, and no witness below the certificate."""
    rng = random.Random(f"{seed}:consistency")
    mods = [parse_moduli_spec("geom:base=2"), parse_moduli_spec("arith:start=2,step=1")]
    bad = []
    checked_points = 0
    for i in range(samples):
        moduli = mods[i % 2]
        chi = random_finite_character(moduli, rng)
        cert = constructions.continuity_certificate(chi, moduli)
        if cert.points_checked is None:
            bad.append({"chi": chi.literal(), "why": "verification over budget"})
            continue
        checked_points += cert.points_checked
        try:
            constructions.witness_not_continuous(chi, cert.m, moduli)
        except InsufficientSupport:
            continue
        bad.append({"chi": chi.literal(), "why": "witness found below certificate"})
    return CheckResult(
        "two_direction_consistency",
        not bad,
        {"characters": samples, "points_checked": checked_points, "failures": bad[:5]},
    )


@_timed
def check_discontinuous_character(seed: int = 0, depth: int = 50, relations: int = 500) -> CheckResult:
    """Builder on (+) Z_{2^n}: many accepted, all outside T_+, relations respected."""
    moduli = parse_moduli_spec("geom:base=2")
    table = constructions.build_discontinuous_character(moduli, canonical_sequence(moduli, depth))
    outside = all(abs(v.value) > Fraction(1, 4) for v in table.values)
    rels = constructions.sample_relations(table, relations, random.Random(f"{seed}:relations"))
    hom = constructions.homomorphism_check(table, rels, moduli)
    Z4 = ModuliSequence.from_list([4])
    e = basis_element(Z4, 1)
    obstruction = constructions.build_discontinuous_character(Z4, [2 * e, e])
    skipped_ok = [(a, r) for a, r in obstruction.skipped] == [(e, "boundary_obstruction")]
    ok = len(table.accepted) >= 40 and outside and hom is True and skipped_ok
    return CheckResult(
        "discontinuous_character",
        ok,
        {
            "accepted": len(table.accepted),
            "all_values_outside_T_plus": outside,
            "relations_checked": len(rels),
            "homomorphism": True if hom is True else hom.to_json(),
            "z4_obstruction": obstruction.to_json(),
        },
    )


@_timed
def check_topology_comparison(depth: int = 8) -> CheckResult:
    """tau_c strictly finer than the product topology on (+) Z_{2^n}."""
    moduli = parse_moduli_spec("geom:base=2")
    T = FiniteTruncation(moduli, depth)
    result = topology.compare_at_truncation(topology.UniformOnC(moduli), topology.Product(moduli), T)
    basics, _ = topology.Product(moduli).basis(T, topology.DEFAULT_BASIS_BUDGET)
    certified = {c for c, _ in result.first_refines_second.certificates}
    w = result.strictness_witness
    ok = (
        result.verdict == "tau1_finer"
        and certified == {b.label for b in basics}
        and w is not None
        and w.max_index == depth
        and abs(w.coordinate(depth).value) == Fraction(1, 2)
    )
    return CheckResult("topology_comparison", ok, result.to_json())


ACCEPTANCE_CHECKS: dict[str, Callable[..., CheckResult]] = {
    "bipolar_calculus": check_bipolar_calculus,
    "quasiconvex_atlas": check_atlas,
    "linearity_extraction": check_linearity_extraction,
    "witness_soundness": check_witness_soundness,
    "two_direction_consistency": check_two_direction_consistency,
    "discontinuous_character": check_discontinuous_character,
    "topology_comparison": check_topology_comparison,
}


# ---------------------------------------------------------------------------
# subcommands


def _truncation(cfg):
    return FiniteTruncation(parse_moduli_spec(cfg.moduli_spec), cfg.truncation_depth, cfg.budget)


def _run_hull(cfg, report):
    T = _truncation(cfg)
    S = frozenset(parse_element_set(cfg.element_set or "", T.moduli))
    hull = quasiconvex.qc_hull(S, T)
    verdict = quasiconvex.is_quasiconvex(S, T)
    ok = S <= hull and quasiconvex.qc_hull(hull, T) == hull
    report.cases.append(
        {
            "name": "hull",
            "status": "PASS" if ok else "FAIL",
            "input": _members(S),
            "hull": _members(hull),
            "polar_size": len(quasiconvex.polar(S, T)),
            "quasiconvex": verdict is True,
            "counterexample": None if verdict is True else verdict.to_json(),
        }
    )


def _run_polar(cfg, report):
    T = _truncation(cfg)
    S = frozenset(parse_element_set(cfg.element_set or "", T.moduli))
    P = quasiconvex.polar(S, T)
    zero = Character(T.moduli)
    ok = zero in P and all(-chi in P for chi in P)
    report.cases.append(
        {"name": "polar", "status": "PASS" if ok else "FAIL", "input": _members(S), "polar": _members(P)}
    )


def _run_atlas(cfg, report):
    T = _truncation(cfg)
    records = quasiconvex.atlas(T)
    for i, (rec, S) in enumerate(zip(records, quasiconvex.enumerate_quasiconvex(T))):
        ok = quasiconvex.is_quasiconvex(S, T) is True
        report.cases.append({"name": f"atlas[{i}]", "status": "PASS" if ok else "FAIL", **rec})
    if cfg.dot_path:
        with open(cfg.dot_path, "w") as fh:
            fh.write(quasiconvex.atlas_dot(T))


def _run_witness(cfg, report):
    moduli = parse_moduli_spec(cfg.moduli_spec)
    chi = parse_character(cfg.character or "0", moduli, prefix_of_infinite=True)
    for m in cfg.m_values:
        case = {"name": f"witness m={m}", "chi": chi.to_json()}
        try:
            w = constructions.witness_not_continuous(chi, m, moduli, cfg.scan_limit)
        except InsufficientSupport as exc:
            case.update(status="INSUFFICIENT_SUPPORT", reason=str(exc))
        else:
            case.update(status="PASS" if w.sound else "FAIL", **w.to_json())
        report.cases.append(case)


def _run_certify(cfg, report):
    moduli = parse_moduli_spec(cfg.moduli_spec)
    chi = parse_character(cfg.character or "0", moduli)
    cert = constructions.continuity_certificate(chi, moduli, cfg.budget)
    report.cases.append({"name": "certify", "status": "PASS", "chi": chi.to_json(), **cert.to_json()})


def _run_discont(cfg, report):
    moduli = parse_moduli_spec(cfg.moduli_spec)
    if cfg.sequence:
        seq = parse_element_set(cfg.sequence, moduli)
    else:
        seq = canonical_sequence(moduli, cfg.truncation_depth)
    table = constructions.build_discontinuous_character(moduli, seq)
    rels = constructions.sample_relations(table, cfg.sample_count, random.Random(cfg.rng_seed))
    hom = constructions.homomorphism_check(table, rels, moduli)
    outside = all(not in_t_plus(v) for v in table.values)
    report.cases.append(
        {
            "name": "discont",
            "status": "PASS" if outside and hom is True else "FAIL",
            **table.to_json(),
            "relations_checked": len(rels),
            "violated": None if hom is True else hom.to_json(),
        }
    )


def _run_compare(cfg, report):
    T = _truncation(cfg)
    t1 = parse_descriptor(cfg.tau1, T.moduli)
    t2 = parse_descriptor(cfg.tau2, T.moduli)
    result = topology.compare_at_truncation(t1, t2, T, cfg.basis_budget)
    report.cases.append(
        {"name": f"compare {cfg.tau1} vs {cfg.tau2}", "status": "PASS", **result.to_json()}
    )


def _run_verify(cfg, report):
    seed = cfg.rng_seed
    runs = [
        ("1 bipolar calculus", lambda: check_bipolar_calculus()),
        ("2 quasi-convex atlas", lambda: check_atlas()),
        ("3 linearity extraction", lambda: check_linearity_extraction()),
        ("4 witness soundness", lambda: check_witness_soundness(seed, 200)),
        ("5 two-direction consistency", lambda: check_two_direction_consistency(seed, 100)),
        ("6 discontinuous character", lambda: check_discontinuous_character(seed)),
        ("7 topology comparison", lambda: check_topology_comparison()),
    ]
    for label, run in runs:
        result = run()
        case = result.record()
        case["criterion"] = label
        report.cases.append(case)
        report.timings[label] = round(result.seconds * 1000)


_RUNNERS = {
    "hull": _run_hull,
    "polar": _run_polar,
    "atlas": _run_atlas,
    "witness": _run_witness,
    "certify": _run_certify,
    "discont": _run_discont,
    "compare-top": _run_compare,
    "verify": _run_verify,
}


def _jsonable(obj):
    # normalise tuples and stray Fractions so the body serialises identically every run
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    return obj


def run_suite(cfg: SuiteConfig) -> Report:
    """Execute ``cfg.command`` and return its report.

    Configuration problems propagate as :class:`QCDualError` or
    ``ValueError``; a failed check never raises, it is recorded in the
    report.
    """
    report = Report(config=cfg.echo())
    start = time.perf_counter()
    _RUNNERS[cfg.command](cfg, report)
    report.cases = _jsonable(report.cases)
    report.timings["total_ms"] = round((time.perf_counter() - start) * 1000)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(report.to_text())
    return report
