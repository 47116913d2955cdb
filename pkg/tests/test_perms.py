from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from pdecomp.perms import InvalidPermutation, Perm, product


def test_identity_and_call():
    e = Perm.identity(5)
    assert e.is_identity()
    assert [e(i) for i in range(1, 6)] == [1, 2, 3, 4, 5]


def test_parse_and_format_roundtrip():
    p = Perm.parse("(1 2 3)(4 5)", degree=6)
    assert p(1) == 2 and p(3) == 1 and p(4) == 5 and p(6) == 6
    assert str(p) == "(1 2 3)(4 5)"
    assert Perm.parse(str(p), degree=6) == p


def test_parse_comma_and_overlapping_cycles():
    # cycles compose left to right: 1 -> 2 -> 3 under (1,2) then (2,3)
    assert Perm.parse("(1,2)(2,3)", degree=3)(1) == 3
    assert Perm.parse("(1,2)(2,3)", degree=3) == Perm.parse("(1 3 2)")
    assert Perm.parse("()", degree=4).is_identity()


def test_parse_rejects_garbage():
    with pytest.raises(InvalidPermutation):
        Perm.parse("(1 2", degree=3)
    with pytest.raises(InvalidPermutation):
        Perm.parse("(1 1 2)", degree=3)
    with pytest.raises(InvalidPermutation):
        Perm((1, 1, 3))


def test_mult_is_left_to_right():
    p = Perm.parse("(1 2)", 3)
    q = Perm.parse("(2 3)", 3)
    # (p*q)(1) = q(p(1)) = q(2) = 3
    assert (p * q)(1) == 3
    assert (q * p)(1) == 2


def test_conjugation_relabels_cycles():
    p = Perm.parse("(1 2)", 4)
    g = Perm.parse("(1 3)(2 4)", 4)
    assert p ** g == Perm.parse("(3 4)", 4)


def test_order_and_cycle_type():
    p = Perm.parse("(1 2 3)(4 5)", 6)
    assert p.order() == 6
    assert p.cycle_type() == (1, 2, 3)


@st.composite
def perms(draw, n=6):
    img = draw(st.permutations(list(range(1, n + 1))))
    return Perm(img)


@given(perms(), perms())
def test_inverse_and_assoc(p, q):
    assert (p * q).inv() == q.inv() * p.inv()
    assert (p * p.inv()).is_identity()


@given(perms(), perms(), perms())
def test_conj_is_right_action(p, g, h):
    assert (p ** g) ** h == p ** (g * h)


def test_product_empty():
    assert product([], 4).is_identity()
