from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import CapExceeded, FieldError
from ff import (
    ff_add,
    ff_code,
    ff_elem,
    ff_enumerate,
    ff_frobenius,
    ff_from_code,
    ff_from_int,
    ff_inv,
    ff_make,
    ff_make_order,
    ff_mul,
    ff_neg,
    ff_pow,
    ff_sub,
    field_tables,
    is_irreducible,
    multiplicative_order,
    poly_deriv,
    poly_divmod,
    poly_gcd,
    primitive_element,
)


# ─── Construction ──────────────────────────────────────────────────────

def test_prime_field_uses_modulus_x():
    spec = ff_make(3, 1)
    assert spec.q == 3
    assert spec.modulus == (0, 1)


def test_gf9_modulus_is_x2_plus_1():
    spec = ff_make(3, 2)
    assert spec.q == 9
    assert spec.modulus == (1, 0, 1)
    assert len(ff_enumerate(spec)) == 9


def test_gf25_modulus_is_x2_plus_2():
    assert ff_make(5, 2).modulus == (2, 0, 1)


@pytest.mark.parametrize("p,k", [(4, 1), (1, 1), (9, 1), (3, 0), (3, -1)])
def test_ff_make_rejects_bad_parameters(p, k):
    with pytest.raises(FieldError):
        ff_make(p, k)


def test_ff_make_order():
    assert ff_make_order(9) == ff_make(3, 2)
    assert ff_make_order(7) == ff_make(7, 1)
    with pytest.raises(FieldError):
        ff_make_order(12)


def test_irreducibility():
    assert is_irreducible(3, (1, 0, 1))
    assert not is_irreducible(5, (1, 0, 1))  # 2^2 = -1 mod 5
    assert is_irreducible(2, (1, 1, 0, 1))


# ─── Arithmetic ────────────────────────────────────────────────────────

def test_examples_gf3():
    spec = ff_make(3, 1)
    two = ff_from_int(spec, 2)
    assert ff_add(two, two) == ff_from_int(spec, 1)
    assert ff_inv(ff_from_int(spec, 1)) == ff_from_int(spec, 1)


def test_x_squared_is_minus_one_in_gf9():
    spec = ff_make(3, 2)
    x = ff_elem(spec, [0, 1])
    assert ff_mul(x, x) == ff_from_int(spec, 2)


def test_inverse_of_zero_fails():
    with pytest.raises(FieldError):
        ff_inv(ff_from_int(ff_make(5, 1), 0))


def test_field_mismatch():
    with pytest.raises(FieldError):
        ff_add(ff_from_int(ff_make(3, 1), 1), ff_from_int(ff_make(5, 1), 1))


@pytest.mark.parametrize("p,k", [(3, 1), (5, 1), (3, 2)])
def test_field_axioms_exhaustive(p, k):
    spec = ff_make(p, k)
    elems = ff_enumerate(spec)
    zero, one = elems[0], elems[1]
    for a in elems:
        assert ff_add(a, zero) == a
        assert ff_mul(a, one) == a
        assert ff_add(a, ff_neg(a)) == zero
        if not a.is_zero():
            assert ff_mul(a, ff_inv(a)) == one
        for b in elems:
            assert ff_add(a, b) == ff_add(b, a)
            assert ff_mul(a, b) == ff_mul(b, a)
            assert ff_sub(ff_add(a, b), b) == a
            for c in elems:
                assert ff_mul(a, ff_add(b, c)) == ff_add(ff_mul(a, b), ff_mul(a, c))
                assert ff_mul(ff_mul(a, b), c) == ff_mul(a, ff_mul(b, c))


@settings(max_examples=200, derandomize=True)
@given(st.integers(0, 120), st.integers(0, 120), st.integers(0, 120))
def test_field_axioms_gf121(a, b, c):
    spec = ff_make(11, 2)
    a, b, c = (ff_from_code(spec, v) for v in (a, b, c))
    assert ff_mul(a, ff_add(b, c)) == ff_add(ff_mul(a, b), ff_mul(a, c))
    assert ff_mul(ff_mul(a, b), c) == ff_mul(a, ff_mul(b, c))
    if not a.is_zero():
        assert ff_mul(a, ff_inv(a)) == ff_from_int(spec, 1)


def test_frobenius():
    gf3 = ff_make(3, 1)
    for a in ff_enumerate(gf3):
        assert ff_frobenius(a) == a
    gf9 = ff_make(3, 2)
    elems = ff_enumerate(gf9)
    for a in elems:
        assert ff_frobenius(ff_frobenius(a)) == a
        for b in elems:
            assert ff_frobenius(ff_mul(a, b)) == ff_mul(ff_frobenius(a), ff_frobenius(b))
    # the fixed field of Frobenius on GF(9) is GF(3)
    assert sum(1 for a in elems if ff_frobenius(a) == a) == 3


def test_fermat():
    spec = ff_make(3, 2)
    for a in ff_enumerate(spec)[1:]:
        assert ff_pow(a, spec.q - 1) == ff_from_int(spec, 1)


LARGER_FIELDS = [7, 11, 13, 25, 27, 49]


@pytest.mark.parametrize("q", LARGER_FIELDS)
def test_field_axioms_random_triples(q):
    spec = ff_make_order(q)
    triples = np.random.default_rng(q).integers(0, q, size=(10_000, 3))
    zero, one = ff_from_int(spec, 0), ff_from_int(spec, 1)
    for row in triples.tolist():
        a, b, c = (ff_from_code(spec, v) for v in row)
        assert ff_add(a, b) == ff_add(b, a)
        assert ff_mul(a, b) == ff_mul(b, a)
        assert ff_add(ff_add(a, b), c) == ff_add(a, ff_add(b, c))
        assert ff_mul(ff_mul(a, b), c) == ff_mul(a, ff_mul(b, c))
        assert ff_mul(a, ff_add(b, c)) == ff_add(ff_mul(a, b), ff_mul(a, c))
        assert ff_sub(ff_add(a, b), b) == a
        if not a.is_zero():
            assert ff_mul(a, ff_inv(a)) == one
        assert ff_add(a, ff_neg(a)) == zero


@pytest.mark.parametrize("q", LARGER_FIELDS)
def test_every_element_is_a_root_of_x_q_minus_x(q):
    spec = ff_make_order(q)
    for a in ff_enumerate(spec):
        assert ff_pow(a, q) == a


@pytest.mark.parametrize("q", LARGER_FIELDS)
def test_frobenius_has_order_k(q):
    spec = ff_make_order(q)
    elems = ff_enumerate(spec)
    images = list(elems)
    for step in range(1, spec.k + 1):
        images = [ff_frobenius(a) for a in images]
        fixed = sum(1 for a, b in zip(elems, images) if a == b)
        if step < spec.k:
            # Frobenius^step fixes exactly GF(p^gcd(step, k))
            assert fixed == spec.p ** math.gcd(step, spec.k)
    assert images == elems


# ─── Enumeration and codes ─────────────────────────────────────────────

def test_enumeration_order():
    assert [ff_code(a) for a in ff_enumerate(ff_make(3, 1))] == [0, 1, 2]
    elems = ff_enumerate(ff_make(5, 2))
    assert len(elems) == 25
    assert len(set(elems)) == 25
    assert [a.code for a in elems] == list(range(25))


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        ff_enumerate(ff_make(13, 2))


def test_code_roundtrip_gf9():
    spec = ff_make(3, 2)
    assert [ff_code(ff_from_code(spec, c)) for c in range(9)] == list(range(9))


def test_tables_agree_with_arithmetic():
    spec = ff_make(3, 2)
    t = field_tables(spec)
    elems = ff_enumerate(spec)
    for a in elems:
        assert t.neg[a.code] == ff_neg(a).code
        assert t.frob[a.code] == ff_frobenius(a).code
        if a.code:
            assert t.mul[a.code][t.inv[a.code]] == 1
        for b in elems:
            assert t.add[a.code][b.code] == ff_add(a, b).code
            assert t.mul[a.code][b.code] == ff_mul(a, b).code
    assert t.inv[0] == -1


def test_primitive_element():
    for p, k in [(3, 1), (5, 1), (7, 1), (3, 2)]:
        spec = ff_make(p, k)
        assert multiplicative_order(spec, primitive_element(spec)) == spec.q - 1
    assert primitive_element(ff_make(7, 1)) == 3


# ─── Polynomials over codes ────────────────────────────────────────────

def test_poly_helpers_gf5():
    t = field_tables(ff_make(5, 1))
    # (x - 1)(x - 2) = x^2 - 3x + 2 = x^2 + 2x + 2
    a = (2, 2, 1)
    quot, rem = poly_divmod(a, (4, 1), t)
    assert quot == (3, 1)
    assert rem == ()
    assert poly_gcd(a, (3, 1), t) == (3, 1)
    assert poly_gcd(a, poly_deriv(a, t), t) == (1,)
    assert poly_deriv((0, 0, 0, 0, 0, 1), t) == ()  # d/dx x^5 = 5x^4 = 0
