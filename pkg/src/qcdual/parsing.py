"""Parsers for the textual forms used on the command line and in reports.

Moduli specs::

    list:<int>,<int>,...        finite explicit list
    arith:start=<a>,step=<d>    m_n = a + (n-1) d
    geom:base=<b>               m_n = b^n
    primes                      m_n = n-th prime

Elements and characters are written ``"n:residue,n:residue"`` (``"0"`` is
the zero vector); sets of them are ``;``-separated.  Topology descriptors::

    product | uniform-c | chain:tail | chain:zero | chain:whole
    chain:<subgroup>><subgroup>...
    weak:[<characters>]:<rational>
    ext:<subgroup>:<descriptor>

where ``<subgroup>`` is ``tail=<k>`` or ``[<elements>]``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .abelian import Character, GroupElement, ModuliSequence
from .errors import ParseError
from .topology import Extension, Generated, LinearChain, Product, Tail, UniformOnC, Weak

__all__ = [
    "parse_moduli_spec",
    "parse_element",
    "parse_character",
    "parse_element_set",
    "parse_character_set",
    "parse_descriptor",
    "parse_int_list",
]

_INT = re.compile(r"[+-]?\d+")
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


class _Cursor:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, *expected):
        raise ParseError(self.text, self.pos, expected)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str):
        if not self.accept(literal):
            self.fail(repr(literal))

    def _match(self, pattern, name):
        mo = pattern.match(self.text, self.pos)
        if not mo:
            self.fail(name)
        self.pos = mo.end()
        return mo.group()

    def integer(self) -> int:
        return int(self._match(_INT, "integer"))

    def rational(self) -> Fraction:
        start = self.pos
        token = self._match(_RATIONAL, "rational p/q")
        try:
            return Fraction(token)
        except ZeroDivisionError:
            self.pos = start
            self.fail("nonzero denominator")

    def end(self):
        if not self.at_end():
            self.fail("end of input")


def parse_moduli_spec(text: str) -> ModuliSequence:
    """Parse a moduli spec string into a :class:`ModuliSequence`."""
    cur = _Cursor(text.strip())
    if cur.accept("list:"):
        values = [cur.integer()]
        while cur.accept(","):
            values.append(cur.integer())
        cur.end()
        return ModuliSequence.from_list(values)
    if cur.accept("arith:"):
        cur.expect("start=")
        start = cur.integer()
        cur.expect(",")
        cur.expect("step=")
        step = cur.integer()
        cur.end()
        return ModuliSequence.arithmetic(start, step)
    if cur.accept("geom:"):
        cur.expect("base=")
        base = cur.integer()
        cur.end()
        return ModuliSequence.geometric(base)
    if cur.accept("primes"):
        cur.end()
        return ModuliSequence.primes()
    cur.fail("'list:'", "'arith:'", "'geom:'", "'primes'")


def _sparse_pairs(cur: _Cursor, stops: str):
    nxt = cur.pos + 1
    if cur.peek("0") and (nxt >= len(cur.text) or cur.text[nxt] in stops):
        cur.pos = nxt
        return []
    pairs = []
    while True:
        start = cur.pos
        n = cur.integer()
        if n < 1:
            cur.pos = start
            cur.fail("index >= 1")
        cur.expect(":")
        pairs.append((n, cur.integer()))
        if not cur.accept(","):
            return pairs


def _sparse(cur, moduli, cls, stops=""):
    start = cur.pos
    pairs = _sparse_pairs(cur, stops)
    try:
        return cls(moduli, pairs)
    except IndexError as exc:
        raise ParseError(cur.text, start, [f"indices within the moduli ({exc})"]) from None


def parse_element(text: str, moduli: ModuliSequence) -> GroupElement:
    cur = _Cursor(text.strip())
    x = _sparse(cur, moduli, GroupElement)
    cur.end()
    return x


def parse_character(text: str, moduli: ModuliSequence, prefix_of_infinite: bool = False) -> Character:
    cur = _Cursor(text.strip())
    chi = _sparse(cur, moduli, Character)
    cur.end()
    if prefix_of_infinite:
        chi = Character(moduli, chi.support, prefix_of_infinite=True)
    return chi


def _sparse_set(cur, moduli, cls, stops):
    out = []
    if cur.at_end() or cur.text[cur.pos] in stops:
        return out
    out.append(_sparse(cur, moduli, cls, stops + ";"))
    while cur.accept(";"):
        out.append(_sparse(cur, moduli, cls, stops + ";"))
    return out


def parse_element_set(text: str, moduli: ModuliSequence) -> list[GroupElement]:
    """``"1:1;1:2;0"`` -> list of elements (empty string -> empty list)."""
    cur = _Cursor(text.strip())
    out = _sparse_set(cur, moduli, GroupElement, "")
    cur.end()
    return out


def parse_character_set(text: str, moduli: ModuliSequence) -> list[Character]:
    cur = _Cursor(text.strip())
    out = _sparse_set(cur, moduli, Character, "")
    cur.end()
    return out


def parse_int_list(text: str) -> list[int]:
    cur = _Cursor(text.strip())
    values = [cur.integer()]
    while cur.accept(","):
        values.append(cur.integer())
    cur.end()
    return values


def _subgroup(cur: _Cursor, moduli):
    if cur.accept("tail="):
        k = cur.integer()
        if k < 0:
            cur.fail("tail index >= 0")
        return Tail(k)
    if cur.accept("["):
        gens = _sparse_set(cur, moduli, GroupElement, "]")
        cur.expect("]")
        return Generated(tuple(gens))
    cur.fail("'tail='", "'['")


def _descriptor(cur: _Cursor, moduli):
    if cur.accept("product"):
        return Product(moduli)
    if cur.accept("uniform-c"):
        return UniformOnC(moduli)
    if cur.accept("chain:"):
        if not cur.peek("tail=") and cur.accept("tail"):
            return LinearChain(moduli, tail=True)
        if cur.accept("zero"):
            return LinearChain(moduli, (Generated(()),))
        if cur.accept("whole"):
            return LinearChain(moduli, (Tail(0),))
        subs = [_subgroup(cur, moduli)]
        while cur.accept(">"):
            subs.append(_subgroup(cur, moduli))
        return LinearChain(moduli, tuple(subs))
    if cur.accept("weak:"):
        cur.expect("[")
        chars = _sparse_set(cur, moduli, Character, "]")
        cur.expect("]")
        cur.expect(":")
        eps = cur.rational()
        return Weak(moduli, tuple(chars), eps)
    if cur.accept("ext:"):
        H = _subgroup(cur, moduli)
        cur.expect(":")
        inner = _descriptor(cur, moduli)
        return Extension(moduli, H, inner)
    cur.fail("'product'", "'uniform-c'", "'chain:'", "'weak:'", "'ext:'")


def parse_descriptor(text: str, moduli: ModuliSequence):
    """Parse a topology descriptor literal over ``moduli``."""
    cur = _Cursor(text.strip())
    desc = _descriptor(cur, moduli)
    cur.end()
    return desc
