import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as O
from qcdual.abelian import Character, GroupElement, ModuliSequence, basis_element
from qcdual.constructions import (
    build_discontinuous_character,
    compute_n0,
    continuity_certificate,
    homomorphism_check,
    partition_support,
    sample_relations,
    witness_not_continuous,
    ViolatedRelation,
)
from qcdual.errors import (
    AllCandidatesSkipped,
    InsufficientSupport,
    ModuliMismatch,
    NoIndexWithinLimit,
    NonMonotoneModuli,
    ZeroElement,
)
from qcdual.suite import random_prefix_character

F = Fraction
G2 = ModuliSequence.geometric(2)
A2 = ModuliSequence.arithmetic(2, 1)


def prefix(moduli, residues):
    return Character(moduli, residues, prefix_of_infinite=True)


def test_compute_n0():
    assert compute_n0(G2, 1) == 4
    assert compute_n0(A2, 1) == 9
    assert compute_n0(G2, 3) == 5
    with pytest.raises(NoIndexWithinLimit):
        compute_n0(ModuliSequence.arithmetic(2, 0), 1, scan_limit=1000)
    with pytest.raises(NonMonotoneModuli):
        compute_n0(ModuliSequence.from_list([16, 2]), 1)


def test_compute_n0_is_least_qualifying_index():
    for moduli in (G2, A2, ModuliSequence.primes(), ModuliSequence.geometric(3)):
        for m in range(1, 8):
            n0 = compute_n0(moduli, m)
            assert moduli[n0] >= 10 * m
            assert n0 == 1 or moduli[n0 - 1] < 10 * m


def test_partition_support():
    chi = Character(G2, {4: 8, 5: 1, 6: 16})
    assert partition_support(chi, 4, G2) == {7: [4], 0: [5], 3: [6]}
    assert partition_support(Character(G2, {}), 4, G2) == {}
    assert partition_support(Character(G2, {1: 1, 3: 2}), 4, G2) == {}


@given(st.dictionaries(st.integers(1, 12), st.integers(-3000, 3000), max_size=8))
def test_partition_support_oracle(residues):
    chi = Character(G2, residues)
    n0 = 4
    buckets = partition_support(chi, n0, G2)
    for k, idx in buckets.items():
        for n in idx:
            ratio = F(abs(chi.residue(n)), G2[n])
            assert F(k, G2[n0]) < ratio <= F(k + 1, G2[n0])
    flat = sorted(n for idx in buckets.values() for n in idx)
    assert flat == [n for n in chi.indices() if n >= n0]


def test_witness_short_circuit():
    r = witness_not_continuous(prefix(G2, {4: 8}), 1, G2)
    assert r.case_used == "short_circuit"
    assert r.witness == GroupElement(G2, {4: 1})
    assert r.pairing_value.value == F(1, 2)


def test_witness_case2():
    r = witness_not_continuous(prefix(G2, {5: 1, 6: 1}), 1, G2)
    assert r.case_used == "case2"
    assert r.witness == GroupElement(G2, {5: 8, 6: 16})
    assert r.pairing_value.value == F(1, 2)
    assert all(c.holds for c in r.trace)
    assert r.to_json()["pairing_value"] == "1/2"


def test_witness_case1():
    r = witness_not_continuous(prefix(A2, {n: 2 for n in range(9, 19)}), 1, A2)
    assert r.case_used == "case1" and r.chosen_k == 1
    assert r.witness == GroupElement(A2, {9: 1, 10: 1})
    assert r.pairing_value.value == F(21, 55)


def test_witness_insufficient():
    with pytest.raises(InsufficientSupport):
        witness_not_continuous(prefix(G2, {5: 1}), 1, G2)
    with pytest.raises(ModuliMismatch):
        witness_not_continuous(prefix(A2, {9: 1}), 1, G2)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([G2, A2, ModuliSequence.primes()]), st.integers(1, 4), st.integers(0, 2**32))
def test_witness_soundness_random(moduli, m, seed):
    chi = random_prefix_character(moduli, m, random.Random(seed))
    try:
        r = witness_not_continuous(chi, m, moduli)
    except InsufficientSupport:
        return
    assert O.in_vm(m, r.witness)
    assert abs(O.pair(chi, r.witness)) > O.QUARTER
    assert all(n >= r.n0 for n in r.witness.indices())
    assert r.sound


def test_continuity_certificate_examples():
    c = continuity_certificate(Character(A2, {1: 1, 2: 2}), A2)
    assert (c.m, c.n1) == (4, 3)
    assert continuity_certificate(Character(A2, {}), A2).m == 2
    assert continuity_certificate(Character(G2, {1: 1}), G2).m == 4
    with pytest.raises(NonMonotoneModuli):
        continuity_certificate(Character(ModuliSequence.from_list([4, 2, 8]), {1: 1}), ModuliSequence.from_list([4, 2, 8]))


def test_discontinuous_examples():
    mods = ModuliSequence.from_list([2, 3, 4])
    seq = [basis_element(mods, n) for n in (1, 2, 3)]
    table = build_discontinuous_character(mods, seq)
    assert [v.value for v in table.values] == [F(1, 2), F(1, 3), F(1, 2)]

    z9 = ModuliSequence.from_list([9])
    e = basis_element(z9, 1)
    table9 = build_discontinuous_character(z9, [3 * e, e])
    assert [v.value for v in table9.values] == [F(1, 3), F(4, 9)]
    assert table9.relations[1] == (3, (1,))

    z4 = ModuliSequence.from_list([4])
    e4 = basis_element(z4, 1)
    table4 = build_discontinuous_character(z4, [2 * e4, e4])
    assert table4.accepted == (2 * e4,)
    assert table4.skipped == ((e4, "boundary_obstruction"),)


def test_discontinuous_errors_and_skips():
    z4 = ModuliSequence.from_list([4])
    e = basis_element(z4, 1)
    with pytest.raises(ZeroElement):
        build_discontinuous_character(z4, [e, 0 * e])
    with pytest.raises(AllCandidatesSkipped):
        build_discontinuous_character(z4, [])
    table = build_discontinuous_character(z4, [e, 2 * e, -e])
    assert [r for _, r in table.skipped] == ["in_subgroup", "in_subgroup"]


def test_homomorphism_check_examples():
    z9 = ModuliSequence.from_list([9])
    e = basis_element(z9, 1)
    table = build_discontinuous_character(z9, [3 * e, e])
    assert homomorphism_check(table, [((0, 3), (1, 0))], z9) is True
    assert homomorphism_check(table, [((), ())], z9) is True
    bad = table.with_value(1, F(2, 9))
    v = homomorphism_check(bad, [((0, 3), (1, 0))], z9)
    assert isinstance(v, ViolatedRelation)
    assert v.lhs_value.value == F(-1, 3) and v.rhs_value.value == F(1, 3)
    with pytest.raises(ValueError):
        homomorphism_check(table, [((1, 0), (0, 1))], z9)


@pytest.mark.parametrize("mods", [[2, 3, 4, 6, 8, 9, 12], [4, 8, 16, 32], [3, 9, 27, 81]])
def test_discontinuous_character_is_homomorphism(mods):
    moduli = ModuliSequence.from_list(mods)
    rng = random.Random(str(mods))
    n = len(mods)
    seq = []
    for _ in range(12):
        x = GroupElement(moduli, {i: rng.randrange(moduli[i]) for i in range(1, n + 1)})
        if x and x not in seq:
            seq.append(x)
    table = build_discontinuous_character(moduli, seq)
    assert all(abs(v.value) > O.QUARTER for v in table.values)
    # every relation among accepted elements, by brute force over small coefficients
    k = len(table.accepted)
    for _ in range(300):
        c = [rng.randrange(-4, 5) for _ in range(k)]
        if not table.combine(c):
            total = sum((ci * v.value for ci, v in zip(c, table.values)), F(0))
            assert O.rep(total) == 0
    rels = sample_relations(table, 200, rng)
    assert homomorphism_check(table, rels, moduli) is True
