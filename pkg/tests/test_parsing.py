from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcdual.abelian import Character, GroupElement, ModuliSequence
from qcdual.errors import ModulusBelowTwo, ParseError
from qcdual.parsing import (
    parse_character,
    parse_character_set,
    parse_descriptor,
    parse_element,
    parse_element_set,
    parse_int_list,
    parse_moduli_spec,
)
from qcdual.topology import Extension, Generated, LinearChain, Product, Tail, UniformOnC, Weak

G2 = ModuliSequence.geometric(2)


def test_moduli_examples():
    assert parse_moduli_spec("geom:base=2").prefix(4) == [2, 4, 8, 16]
    assert parse_moduli_spec("arith:start=2,step=1").prefix(4) == [2, 3, 4, 5]
    seq = parse_moduli_spec("list:4,2")
    assert seq.prefix(2) == [4, 2] and not seq.monotone
    assert parse_moduli_spec(" primes ").prefix(3) == [2, 3, 5]


@pytest.mark.parametrize(
    "text, position",
    [("geom:base=x", 10), ("foo", 0), ("list:", 5), ("arith:start=2", 13), ("primes7", 6), ("list:2,,3", 7)],
)
def test_moduli_parse_errors(text, position):
    with pytest.raises(ParseError) as info:
        parse_moduli_spec(text)
    assert info.value.position == position
    assert info.value.expected
    assert "^" in str(info.value)


def test_modulus_below_two():
    with pytest.raises(ModulusBelowTwo):
        parse_moduli_spec("list:2,1")
    with pytest.raises(ModulusBelowTwo):
        parse_moduli_spec("geom:base=1")


rules = st.one_of(
    st.lists(st.integers(2, 1000), min_size=1, max_size=6).map(ModuliSequence.from_list),
    st.builds(ModuliSequence.arithmetic, st.integers(2, 50), st.integers(0, 20)),
    st.integers(2, 10).map(ModuliSequence.geometric),
    st.just(ModuliSequence.primes()),
)


@given(rules)
def test_moduli_round_trip(seq):
    again = parse_moduli_spec(seq.render())
    assert again == seq
    n = seq.length or 12
    assert again.prefix(n) == seq.prefix(n)


def test_elements_and_characters():
    assert parse_element("1:1,3:-2", G2) == GroupElement(G2, {1: 1, 3: -2})
    assert parse_element("0", G2) == GroupElement(G2, {})
    chi = parse_character("5:1,6:1", G2, prefix_of_infinite=True)
    assert chi.prefix_of_infinite and chi == Character(G2, {5: 1, 6: 1})
    with pytest.raises(ParseError):
        parse_element("0:1", G2)
    with pytest.raises(ParseError):
        parse_element("3:1,", G2)
    with pytest.raises(ParseError):
        parse_element("3:1", ModuliSequence.from_list([2, 2]))


def test_sets():
    Z4 = ModuliSequence.from_list([4])
    assert parse_element_set("", Z4) == []
    assert parse_element_set("0;1:1;1:-1", Z4) == [GroupElement(Z4, {}), GroupElement(Z4, {1: 1}), GroupElement(Z4, {1: -1})]
    assert parse_character_set("1:2", Z4) == [Character(Z4, {1: 2})]
    assert parse_int_list("1, 2,3".replace(" ", "")) == [1, 2, 3]


@given(st.dictionaries(st.integers(1, 20), st.integers(-10**6, 10**6), max_size=6))
def test_literal_round_trip(residues):
    x = GroupElement(G2, residues)
    assert parse_element(x.literal(), G2) == x


def test_descriptors():
    assert parse_descriptor("product", G2) == Product(G2)
    assert parse_descriptor("uniform-c", G2) == UniformOnC(G2)
    assert parse_descriptor("chain:tail", G2) == LinearChain(G2, tail=True)
    chain = parse_descriptor("chain:tail=1>[2:2;3:4]>tail=3", G2)
    assert chain.subgroups == (Tail(1), Generated((GroupElement(G2, {2: 2}), GroupElement(G2, {3: 4}))), Tail(3))
    weak = parse_descriptor("weak:[1:1;2:1]:1/8", G2)
    assert weak == Weak(G2, (Character(G2, {1: 1}), Character(G2, {2: 1})), Fraction(1, 8))
    ext = parse_descriptor("ext:tail=2:product", G2)
    assert ext == Extension(G2, Tail(2), Product(G2))
    for bad in ("prod", "weak:[1:1]", "weak:[1:1]:1/0", "ext:tail=2", "chain:tail=-1", "product x"):
        with pytest.raises(ParseError):
            parse_descriptor(bad, G2)
