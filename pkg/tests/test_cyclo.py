import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fusionforge.cyclo import (
    CyclotomicError,
    CyclotomicNumber,
    cyclotomic_polynomial,
    euler_phi,
    qbinom,
    qfactorial,
    qint,
    qpow,
    zeta,
)


def one(ell):
    return CyclotomicNumber.from_int(ell, 1)


def test_zeta_times_zeta4_is_one():
    z = zeta(5)
    assert z * z**4 == one(5)


def test_sum_of_nontrivial_fifth_roots_is_minus_one():
    z = zeta(5)
    assert z + z**2 + z**3 + z**4 == CyclotomicNumber.from_int(5, -1)


def test_inverse_contract():
    x = one(5) + zeta(5)
    assert x.inverse() * x == one(5)
    assert x / x == one(5)


def test_zero_inverse_raises():
    with pytest.raises(CyclotomicError):
        CyclotomicNumber.from_int(7, 0).inverse()


def test_mismatched_ell_raises():
    with pytest.raises(CyclotomicError):
        zeta(5) + zeta(7)


@pytest.mark.parametrize("ell", range(3, 16))
def test_zeta_order_and_minimal_polynomial(ell):
    z = zeta(ell)
    assert z**ell == one(ell)
    assert all(not (z**k == one(ell)) for k in range(1, ell))
    phi_poly = cyclotomic_polynomial(ell)
    total = sum((z**k * c for k, c in enumerate(phi_poly) if c), CyclotomicNumber.from_int(ell, 0))
    assert total.is_zero()
    assert len(z.coeffs) == euler_phi(ell)


def test_euler_phi_against_gcd_count():
    for n in range(1, 60):
        assert euler_phi(n) == sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


def test_qint_examples():
    assert qint(5, 1, 5).is_zero()
    for ell in range(3, 12):
        assert qint(1, 1, ell) == one(ell)
    z = zeta(5)
    assert qint(2, 1, 5) == z + z**4


def test_qint_degenerate_denominator():
    with pytest.raises(CyclotomicError):
        qint(3, 2, 4)


def _numeric(x: CyclotomicNumber) -> complex:
    return x.to_complex()


@pytest.mark.parametrize("ell", range(3, 13))
def test_qint_matches_float_formula(ell):
    # Independent oracle: the defining quotient evaluated in floating point.
    q = cmath.exp(2j * math.pi / ell)
    for d in (1, 2, 3):
        if (2 * d) % ell == 0:
            continue
        for n in range(-3 * ell, 3 * ell + 1):
            want = (q ** (d * n) - q ** (-d * n)) / (q**d - q ** (-d))
            assert abs(_numeric(qint(n, d, ell)) - want) < 1e-9


@pytest.mark.parametrize("ell", range(3, 13))
def test_qint_odd_and_addition_identity(ell):
    for d in (1, 2):
        if (2 * d) % ell == 0:
            continue
        for n in range(-3 * ell, 3 * ell + 1):
            assert qint(-n, d, ell) == -qint(n, d, ell)
        for m in range(-3 * ell, 3 * ell + 1, 3):
            for n in range(-3 * ell, 3 * ell + 1, 2):
                rhs = qint(m, d, ell) * qpow(ell, d * n) + qint(n, d, ell) * qpow(ell, -d * m)
                assert qint(m + n, d, ell) == rhs


def test_qbinom_and_factorial_consistent_off_root():
    # Away from vanishing [k]!, [n choose k] [k]! [n-k]! = [n]!.
    ell = 11
    for n in range(0, 10):
        for k in range(0, n + 1):
            lhs = qbinom(n, k, 1, ell) * qfactorial(k, 1, ell) * qfactorial(n - k, 1, ell)
            assert lhs == qfactorial(n, 1, ell)


def test_json_round_trip():
    x = CyclotomicNumber(7, [Fraction(1, 3), -2, 0, 5])
    assert CyclotomicNumber.from_json(7, x.to_json()) == x
    assert x.to_json()[0] == "1/3"


ELLS = st.integers(min_value=3, max_value=12)


def elements(ell):
    coeff = st.fractions(min_value=-5, max_value=5, max_denominator=7)
    return st.lists(coeff, min_size=euler_phi(ell), max_size=euler_phi(ell)).map(lambda c: CyclotomicNumber(ell, c))


@st.composite
def triples(draw):
    ell = draw(ELLS)
    return ell, draw(elements(ell)), draw(elements(ell)), draw(elements(ell))


@given(triples())
def test_field_axioms(t):
    ell, a, b, c = t
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + CyclotomicNumber.from_int(ell, 0) == a
    assert a * one(ell) == a
    assert (a - a).is_zero()
    if not a.is_zero():
        assert a * a.inverse() == one(ell)


@given(triples())
def test_multiplication_matches_complex_embedding(t):
    _, a, b, _ = t
    assert abs((a * b).to_complex() - a.to_complex() * b.to_complex()) < 1e-6
