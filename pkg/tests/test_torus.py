import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcdual.torus import (
    ZERO,
    TorusPoint,
    add,
    format_rational,
    in_t_m,
    in_t_plus,
    int_mul,
    neg,
    normalize,
    parse_rational,
    torus_abs,
)

F = Fraction
rationals = st.fractions(max_denominator=60).filter(lambda q: abs(q) < 50)
points = rationals.map(normalize)


@pytest.mark.parametrize("q, expected", [(F(7, 5), F(2, 5)), (F(-1, 2), F(1, 2)), (0, 0), (F(3, 4), F(-1, 4))])
def test_normalize(q, expected):
    assert normalize(q).value == expected


def test_group_operations():
    assert add(normalize(F(1, 2)), normalize(F(2, 3))).value == F(1, 6)
    assert int_mul(2, normalize(F(1, 4))).value == F(1, 2)
    assert int_mul(-3, normalize(F(1, 3))) == ZERO
    assert neg(normalize(F(1, 2))).value == F(1, 2)


@pytest.mark.parametrize("q, expected", [(F(1, 2), F(1, 2)), (F(-1, 3), F(1, 3)), (0, 0)])
def test_torus_abs(q, expected):
    assert torus_abs(normalize(q)) == expected


def test_boundaries():
    assert in_t_plus(normalize(F(1, 4)))
    assert in_t_plus(normalize(F(-1, 4)))
    assert not in_t_plus(normalize(F(3, 8)))
    assert in_t_m(normalize(F(1, 8)), 2)
    assert not in_t_m(normalize(F(1, 7)), 2)
    with pytest.raises(ValueError):
        in_t_m(ZERO, 0)


def test_immutable_and_hashable():
    a = normalize(F(1, 3))
    with pytest.raises(AttributeError):
        a._value = F(0)
    assert {a, normalize(F(4, 3))} == {a}


def test_format_and_parse():
    assert format_rational(F(-2, 4)) == "-1/2"
    assert format_rational(3) == "3/1"
    assert str(normalize(F(5, 4))) == "1/4"
    assert parse_rational(" -3/9 ") == F(-1, 3)


@given(rationals)
def test_normalize_range_and_idempotent(q):
    t = normalize(q)
    assert F(-1, 2) < t.value <= F(1, 2)
    assert (t.value - q).denominator == 1
    assert normalize(t.value) == t


@given(points, points, points)
def test_abelian_group_axioms(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert add(a, b) == add(b, a)
    assert add(a, ZERO) == a
    assert add(a, neg(a)) == ZERO


@given(points)
def test_t1_inside_t_plus(a):
    if in_t_m(a, 1):
        assert in_t_plus(a)


def test_int_mul_is_repeated_addition_exhaustive():
    values = {F(p, q) for q in range(1, 13) for p in range(q)}
    for v, k in itertools.product(values, range(21)):
        a = normalize(v)
        acc = ZERO
        for _ in range(k):
            acc = add(acc, a)
        assert int_mul(k, a) == acc
    assert 3 * TorusPoint(F(1, 3)) == ZERO
