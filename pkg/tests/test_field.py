"""Finite-field layer: exhaustive laws on small fields, hypothesis on F_q."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frobext.field import GF


SMALL = [GF(2), GF(2, 2), GF(2, 3), GF(3), GF(3, 2), GF(5), GF(7, 2)]


@pytest.mark.parametrize("field", SMALL, ids=lambda f: "q%d" % f.q)
def test_field_axioms_exhaustive(field):
    elems = list(field.elements())
    assert len(elems) == field.q
    one, zero = field.one, field.zero
    for a in elems:
        assert a + zero == a
        assert a * one == a
        assert a - a == zero
        if a:
            assert a * a.inverse() == one
    # commutativity and distributivity on the full triple product when tiny
    if field.q <= 9:
        for a in elems:
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                for c in elems:
                    assert a * (b + c) == a * b + a * c
                    assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("field", SMALL, ids=lambda f: "q%d" % f.q)
def test_frobenius_is_field_automorphism(field):
    elems = list(field.elements())
    for a in elems:
        for b in elems[:8]:
            assert (a + b).frobenius() == a.frobenius() + b.frobenius()
            assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    # order: applying it e times is the identity
    for a in elems:
        x = a
        for _ in range(field.e):
            x = x.frobenius()
        assert x == a


@pytest.mark.parametrize("field", SMALL, ids=lambda f: "q%d" % f.q)
def test_pth_root_inverts_frobenius(field):
    for a in field.elements():
        assert a.pth_root().frobenius() == a
        assert a.frobenius().pth_root() == a


def test_fixed_points_of_frobenius_are_prime_field():
    field = GF(2, 2)
    fixed = [a for a in field.elements() if a.frobenius() == a]
    assert len(fixed) == 2
    field = GF(3, 2)
    fixed = [a for a in field.elements() if a.frobenius() == a]
    assert len(fixed) == 3


def test_from_coords_roundtrip():
    field = GF(3, 2)
    seen = set()
    for i in range(3):
        for j in range(3):
            a = field.from_coords((i, j))
            assert tuple(a.val) == (i, j)
            seen.add((i, j))
    assert len(seen) == 9


def test_nonprime_characteristic_rejected():
    with pytest.raises(ValueError):
        GF(4)
    with pytest.raises(ValueError):
        GF(1)


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
@settings(max_examples=60)
def test_f9_ring_laws_hypothesis(i, j, k):
    field = GF(3, 2)
    elems = list(field.elements())
    a, b, c = elems[i], elems[j], elems[k]
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).frobenius() == a.frobenius() * b.frobenius()


def test_format_parse_agree_on_generator():
    field = GF(2, 2)
    w = field.gen
    assert field.format_elem(w) == "w"
    assert field.format_elem(field.one + w) == "1 + w"
    assert field.format_elem(field.zero) == "0"
