"""Tests for finite fields and precision-tracked Laurent series."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramislope.errors import DomainError, FieldTooSmall, PrecisionExhausted
from ramislope.series_fields import (
    DEFAULT_PRECISION,
    FiniteField,
    LaurentSeries,
    Substituter,
    series_invert,
    series_substitute,
    series_valuation,
    with_adaptive_precision,
)

F3 = FiniteField(3)
F9 = FiniteField(3, 2)
F2 = FiniteField(2)
F25 = FiniteField(5, 2)


def naive_inverse_oracle(field, coeffs, offset, n_terms):
    """Inverse of sum coeffs[i] t^(offset+i) by the long-division recurrence.

    Returns out with out[k] = coefficient of t^(-offset+k) in the inverse.
    """
    lead_inv = field.inv(coeffs[0])
    out = [lead_inv]
    for m in range(1, n_terms):
        acc = 0
        for i in range(1, min(m, len(coeffs) - 1) + 1):
            acc = field.add(acc, field.mul(coeffs[i], out[m - i]))
        out.append(field.neg(field.mul(lead_inv, acc)))
    return out


class TestFiniteField:
    def test_modulus_is_monic_of_right_degree(self):
        assert len(F9.modulus) == 3 and F9.modulus[-1] == 1
        assert len(F25.modulus) == 3 and F25.modulus[-1] == 1

    def test_prime_field_arithmetic(self):
        assert F3.add(2, 2) == 1
        assert F3.mul(2, 2) == 1
        assert F3.inv(2) == 2

    def test_extension_inverses(self):
        for a in range(1, F9.q):
            assert F9.mul(a, F9.inv(a)) == 1
        for a in range(1, F25.q):
            assert F25.mul(a, F25.inv(a)) == 1

    def test_associativity_sample(self):
        rng = random.Random(7)
        for _ in range(200):
            a, b, c = (rng.randrange(F25.q) for _ in range(3))
            assert F25.mul(F25.mul(a, b), c) == F25.mul(a, F25.mul(b, c))
            assert F25.add(F25.add(a, b), c) == F25.add(a, F25.add(b, c))
            assert F25.mul(a, F25.add(b, c)) == F25.add(F25.mul(a, b), F25.mul(a, c))

    def test_frobenius_and_pth_root(self):
        for a in range(F9.q):
            assert F9.pth_root(F9.pow(a, 3)) == a
            assert F9.pow(F9.pth_root(a), 3) == a

    def test_primitive_roots_of_unity(self):
        z = F9.primitive_root_of_unity(4)
        assert F9.element_order(z) == 4
        with pytest.raises(FieldTooSmall):
            F3.primitive_root_of_unity(4)

    def test_of_order(self):
        assert FiniteField.of_order(9) is F9
        with pytest.raises(ValueError):
            FiniteField.of_order(12)

    def test_instances_cached(self):
        assert FiniteField(3, 2) is F9


class TestValuation:
    def test_simple(self):
        s = LaurentSeries.from_terms(F3, {3: 1, 5: 1}, 65)
        assert series_valuation(s) == 3

    def test_unit_times_uniformizer(self):
        zeta = F9.primitive_root_of_unity(4)
        t = LaurentSeries.uniformizer(F9, 64)
        s = t.scalar_mul(F9.sub(zeta, 1))
        assert series_valuation(s) == 1

    def test_zero_window_raises(self):
        with pytest.raises(PrecisionExhausted):
            series_valuation(LaurentSeries.zero(F3, 64))

    def test_safety_margin(self):
        s = LaurentSeries.from_terms(F3, {62: 1}, 65)
        with pytest.raises(PrecisionExhausted):
            series_valuation(s)


class TestArithmetic:
    def test_addition_cancels(self):
        t = LaurentSeries.uniformizer(F3, 64)
        s = t + t + t
        assert s.is_zero()

    def test_mul_precision_rule(self):
        a = LaurentSeries.from_terms(F3, {2: 1}, 10)
        b = LaurentSeries.from_terms(F3, {3: 1}, 12)
        prod = a * b
        assert prod.coefficient(5) == 1
        assert prod.abs_prec == min(2 + 12, 3 + 10)

    def test_pow_negative(self):
        t = LaurentSeries.uniformizer(F3, 32)
        s = t**-2
        assert s.offset == -2
        assert s.coefficient(-2) == 1


class TestInvert:
    def test_uniformizer(self):
        t = LaurentSeries.uniformizer(F3, 64)
        assert series_invert(t).coefficient(-1) == 1

    def test_geometric_series_char3(self):
        one_plus_t = LaurentSeries.from_terms(F3, {0: 1, 1: 1}, 12)
        inv = series_invert(one_plus_t)
        expected = naive_inverse_oracle(F3, [1, 1], 0, 12)
        for k in range(12):
            assert inv.coefficient(k) == expected[k]
        # alternating signs: 1 - t + t^2 - ... with -1 = 2 in F_3
        assert [inv.coefficient(k) for k in range(4)] == [1, 2, 1, 2]

    def test_product_with_inverse_is_one(self):
        s = LaurentSeries.from_terms(F3, {0: 1, 1: 1}, 40)
        prod = s * series_invert(s)
        assert prod == LaurentSeries.constant(F3, 1, prod.abs_prec)
        assert prod.coefficient(0) == 1
        assert all(prod.coefficient(k) == 0 for k in range(1, prod.abs_prec))


class TestSubstitute:
    def test_square_of_scaled_variable(self):
        zeta = F9.primitive_root_of_unity(4)
        t = LaurentSeries.uniformizer(F9, 32)
        s = t * t
        image = t.scalar_mul(zeta)
        out = series_substitute(s, image)
        assert out.coefficient(2) == F9.mul(zeta, zeta)
        assert series_valuation(out) == 2

    def test_identity_on_degree_one(self):
        t = LaurentSeries.uniformizer(F3, 32)
        image = t + t * t
        assert series_substitute(t, image) == image

    def test_laurent_tail_uses_inversion(self):
        t = LaurentSeries.uniformizer(F3, 16)
        s = t**-1
        image = t + t * t
        out = series_substitute(s, image)
        expected = naive_inverse_oracle(F3, [1, 1], 1, 10)
        for k in range(8):
            assert out.coefficient(-1 + k) == expected[k]
        # 1/(t + t^2) = t^-1 - 1 + t - t^2 + ... (signs in F_3)
        assert [out.coefficient(e) for e in (-1, 0, 1, 2)] == [1, 2, 1, 2]

    def test_rejects_nonpositive_valuation(self):
        t = LaurentSeries.uniformizer(F3, 16)
        with pytest.raises(DomainError):
            series_substitute(t, LaurentSeries.constant(F3, 1, 16))

    def test_dense_path_matches_sparse(self):
        rng = random.Random(11)
        t = LaurentSeries.uniformizer(F9, 48)
        image = t + (t * t).scalar_mul(5) + (t * t * t).scalar_mul(2)
        many = LaurentSeries(
            F9, 1, [rng.randrange(9) for _ in range(30)], 40
        )
        sub = Substituter(image)
        dense = sub.substitute(many)
        acc = None
        for i, c in enumerate(many.coeffs):
            if not c:
                continue
            piece = (image ** (many.offset + i)).scalar_mul(c)
            acc = piece if acc is None else acc + piece
        assert dense == acc.truncate(dense.abs_prec)


# ----------------------------------------------------------------- properties

@st.composite
def series_st(draw, field=F3, min_offset=-3):
    offset = draw(st.integers(min_value=min_offset, max_value=4))
    coeffs = draw(
        st.lists(st.integers(min_value=0, max_value=field.q - 1), min_size=1, max_size=10)
    )
    prec = offset + len(coeffs) + draw(st.integers(min_value=6, max_value=12))
    return LaurentSeries(field, offset, coeffs, prec)


@settings(max_examples=80, deadline=None)
@given(a=series_st(), b=series_st(), c=series_st())
def test_ring_axioms_within_window(a, b, c):
    assert (a + b) - b == a.truncate((a + b).abs_prec)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=80, deadline=None)
@given(a=series_st(), b=series_st())
def test_valuation_rules(a, b):
    try:
        va, vb = a.valuation(), b.valuation()
    except PrecisionExhausted:
        return
    prod = a * b
    try:
        assert prod.valuation() == va + vb
    except PrecisionExhausted:
        pass
    try:
        vs = (a + b).valuation()
        assert vs >= min(va, vb)
    except PrecisionExhausted:
        pass


@settings(max_examples=60, deadline=None)
@given(a=series_st(min_offset=0), b=series_st(min_offset=0))
def test_substitution_is_ring_homomorphism(a, b):
    t = LaurentSeries.uniformizer(F3, 24)
    image = t + (t * t).scalar_mul(2)
    sub = Substituter(image)
    lhs = sub.substitute(a * b)
    rhs = sub.substitute(a) * sub.substitute(b)
    assert lhs == rhs
    assert sub.substitute(a + b) == sub.substitute(a) + sub.substitute(b)


def test_adaptive_precision_doubles_until_success():
    calls = []

    def compute(prec):
        calls.append(prec)
        if prec < 256:
            raise PrecisionExhausted("need more")
        return prec

    assert with_adaptive_precision(compute, initial=64, cap=1024) == 256
    assert calls == [64, 128, 256]


def test_adaptive_precision_cap_reraises():
    def compute(prec):
        raise PrecisionExhausted("never enough")

    with pytest.raises(PrecisionExhausted):
        with_adaptive_precision(compute, initial=64, cap=128)
    assert DEFAULT_PRECISION == 64
