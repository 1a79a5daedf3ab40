import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import _oracles as O
from qcdual.abelian import Character, FiniteTruncation, GroupElement, ModuliSequence, basis_character, basis_element
from qcdual.errors import InvalidParams, ModuliMismatch
from qcdual.quasiconvex import prepolar
from qcdual.topology import (
    Extension,
    Generated,
    LinearChain,
    Product,
    Tail,
    UniformOnC,
    Weak,
    basic_nbhd,
    compare_at_truncation,
    linear_chain_precompact,
    nbhd_contains,
    subgroup_index,
    vm,
    vm_contains,
)

G2 = ModuliSequence.geometric(2)
A2 = ModuliSequence.arithmetic(2, 1)


def x_(moduli, **coords):
    return GroupElement(moduli, {int(k[1:]): v for k, v in coords.items()})


def test_vm_contains_examples():
    assert vm_contains(1, x_(G2, n5=1), G2)
    assert not vm_contains(1, x_(G2, n1=1), G2)
    assert vm_contains(2, x_(G2, n4=1), G2)
    assert vm_contains(3, GroupElement(G2, {}), G2)


def test_basic_nbhd_examples():
    V3 = basic_nbhd(UniformOnC(G2), 3)
    T = FiniteTruncation(G2, 5)
    assert {x for x in T.elements() if V3.contains(x)} == {x for x in T.elements() if vm_contains(3, x, G2)}
    mods = ModuliSequence.from_list([2, 3, 4])
    chi = Character(mods, {1: 1, 3: 1})
    T3 = FiniteTruncation(mods, 3)
    W = basic_nbhd(Weak(mods, (chi,), Fraction(1, 4)))
    assert {x for x in T3.elements() if W.contains(x)} == prepolar([chi], T3)
    ext = Extension(G2, Tail(1), Product(G2))
    for x in T.elements():
        if ext.basic(2).contains(x):
            assert x.residue(1) == 0
    with pytest.raises(InvalidParams):
        basic_nbhd(UniformOnC(G2), 0)
    with pytest.raises(InvalidParams):
        basic_nbhd(Product(G2), 1, 2, 3)


def test_descriptor_validation():
    with pytest.raises(InvalidParams):
        UniformOnC(ModuliSequence.from_list([2, 4, 8]))
    with pytest.raises(InvalidParams):
        Weak(G2, (), Fraction(0))
    with pytest.raises(ModuliMismatch):
        Weak(G2, (basis_character(A2, 1),))
    T = FiniteTruncation(G2, 3)
    increasing = LinearChain(G2, (Generated(()), Tail(0)))
    with pytest.raises(InvalidParams):
        increasing.basis(T, 16)


def test_nbhd_contains_examples():
    T6 = FiniteTruncation(G2, 6)
    for N in range(1, 7):
        A = Product(G2).basic(N, Fraction(1, 4))
        assert nbhd_contains(A, vm(G2, 1), T6) is True
    w = nbhd_contains(vm(G2, 1), Product(G2).basic(4), T6)
    assert w == x_(G2, n5=16)
    V2 = vm(G2, 2)
    assert nbhd_contains(V2, V2, T6) is True


def test_nbhd_contains_against_enumeration():
    mods = ModuliSequence.from_list([4, 6, 8])
    T = FiniteTruncation(mods, 3)
    prod = Product(mods)
    chi = Character(mods, {1: 1, 2: 1})
    boxes = [prod.basic(k, b) for k in range(4) for b in (0, Fraction(1, 4), Fraction(1, 2))]
    boxes += [Weak(mods, (chi,)).basic(j) for j in range(3)]
    for A, B in itertools.product(boxes, repeat=2):
        result = nbhd_contains(A, B, T)
        outside = [x for x in T.elements() if B.contains(x) and not A.contains(x)]
        if outside:
            assert result in outside
        else:
            assert result is True


def test_compare_examples():
    T8 = FiniteTruncation(G2, 8)
    c = compare_at_truncation(UniformOnC(G2), Product(G2), T8)
    assert c.verdict == "tau1_finer"
    assert c.strictness_witness == x_(G2, n8=128)
    assert compare_at_truncation(Product(G2), Product(G2), T8).verdict == "equal"
    mods = ModuliSequence.from_list([2, 3, 4])
    T3 = FiniteTruncation(mods, 3)
    weak = Weak(mods, (basis_character(mods, 1),), Fraction(1, 4))
    c = compare_at_truncation(weak, Product(mods), T3)
    assert c.verdict == "tau2_finer"
    assert c.strictness_witness is not None


def test_compare_budget_inconclusive():
    T8 = FiniteTruncation(G2, 8)
    c = compare_at_truncation(Product(G2), UniformOnC(G2), T8, basis_budget=2)
    assert c.verdict == "inconclusive_at_budget"


def test_compare_witness_json():
    T = FiniteTruncation(G2, 4)
    doc = compare_at_truncation(UniformOnC(G2), Product(G2), T).to_json()
    assert doc["verdict"] == "tau1_finer"
    assert doc["strictness_witness"] == {"4": 8}


@pytest.mark.parametrize("depth", [4, 6, 8, 10])
def test_tau_c_strictly_finer_when_some_modulus_exceeds_4m(depth):
    T = FiniteTruncation(G2, depth)
    c = compare_at_truncation(UniformOnC(G2), Product(G2), T)
    assert c.verdict == "tau1_finer" and c.strictness_witness is not None
    assert not vm_contains(1, c.strictness_witness, G2)


def test_extension():
    T = FiniteTruncation(A2, 3)
    H = Generated((x_(A2, n1=1, n3=2),))
    ext = Extension(A2, H, Product(A2))
    basics, _ = ext.basis(T, 16)
    assert basics[0].label.startswith("H(")
    for nb in basics:
        assert all(H.contains(x) for x in T.elements() if nb.contains(x))
    assert compare_at_truncation(ext, Product(A2), T).verdict == "tau1_finer"


def test_chain_precompact_examples():
    tail = linear_chain_precompact(LinearChain(G2, tail=True), [3, 4, 5])
    assert tail.verdict == "bounded_indices"
    assert tail.table[5] == [1, 2, 8]
    zero = linear_chain_precompact(LinearChain(G2, (Generated(()),)), [3, 4, 5])
    assert zero.verdict == "unbounded_indices" and zero.divergent == "[]"
    whole = linear_chain_precompact(LinearChain(G2, (Tail(0),)), [2, 3, 4])
    assert whole.verdict == "bounded_indices"
    assert all(v == [1] for v in whole.table.values())


def test_subgroup_index():
    T = FiniteTruncation(A2, 3)
    assert subgroup_index(Tail(2), T) == 6
    assert subgroup_index(Generated((x_(A2, n3=2),)), T) == 12


# -- properties ------------------------------------------------------------

ms = st.integers(1, 9)


@given(ms, ms)
def test_vm_nested(m, m2):
    lo, hi = sorted((m, m2))
    T = FiniteTruncation(A2, 4)
    big, small = vm(A2, lo), vm(A2, hi)
    assert nbhd_contains(big, small, T) is True
    assert all(big.contains(x) for x in T.elements() if small.contains(x))


def _neighborhoods(mods):
    chi = Character(mods, {1: 1, 2: -1})
    return [
        Product(mods).basic(1),
        Product(mods).basic(2, Fraction(1, 4)),
        vm(mods, 1),
        vm(mods, 2),
        Weak(mods, (chi,), Fraction(1, 3)).basic(1),
        LinearChain(mods, (Generated((GroupElement(mods, {1: 2}),)),)).basic(0),
        Extension(mods, Tail(1), Product(mods)).basic(2),
    ]


@pytest.mark.parametrize("mods", [[4, 6, 8], [2, 4, 8], [3, 9, 27]])
def test_neighborhoods_symmetric_with_zero(mods):
    moduli = ModuliSequence.from_list(mods)
    T = FiniteTruncation(moduli, len(mods))
    for nb in _neighborhoods(moduli):
        members = {x for x in T.elements() if nb.contains(x)}
        assert GroupElement(moduli, {}) in members
        assert all(-x in members for x in members)
        assert set(nb.members(T)) == members


@pytest.mark.parametrize("mods", [[2, 3, 4], [4, 4], [5, 6], [2, 2, 8]])
def test_weak_quarter_is_prepolar(mods):
    moduli = ModuliSequence.from_list(mods)
    T = FiniteTruncation(moduli, len(mods))
    for chi in T.characters():
        nb = Weak(moduli, (chi,), Fraction(1, 4)).basic(0)
        assert {x for x in T.elements() if nb.contains(x)} == prepolar([chi], T)
        assert {x for x in T.elements() if nb.contains(x)} == O.prepolar([chi], O.elements(moduli, len(mods)))
