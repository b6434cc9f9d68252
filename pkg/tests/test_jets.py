"""Truncated-jet arithmetic against closed forms and finite differences."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slowdisp.jets import (
    TruncatedJet,
    cos_sin_t_omega_jet,
    cos_t_omega_jet,
    inv_omega_jet,
    jet_mul,
    jet_reciprocal,
    jet_sqrt,
    omega_jet,
    sin_t_omega_jet,
)
from slowdisp.precision import DOUBLE, QUAD256, Precision

ORDER = 8

coeff_lists = st.lists(
    st.floats(min_value=-4, max_value=4, allow_nan=False), min_size=ORDER + 1, max_size=ORDER + 1
)


def jet_from(coeffs):
    return TruncatedJet(np.asarray(coeffs, dtype=np.complex128), DOUBLE)


def max_diff(a: TruncatedJet, b: TruncatedJet) -> float:
    return max(abs(complex(x) - complex(y)) for x, y in zip(a.coeffs, b.coeffs))


# -- ring axioms ---------------------------------------------------------------


@given(coeff_lists, coeff_lists)
def test_mul_commutes(a, b):
    ja, jb = jet_from(a), jet_from(b)
    lhs = jet_mul(ja, jb)
    scale = max(1.0, max(lhs.coefficient_magnitudes()))
    assert max_diff(lhs, jet_mul(jb, ja)) <= 1e-14 * scale


@given(coeff_lists, coeff_lists, coeff_lists)
def test_mul_associates(a, b, c):
    ja, jb, jc = jet_from(a), jet_from(b), jet_from(c)
    lhs = jet_mul(jet_mul(ja, jb), jc)
    rhs = jet_mul(ja, jet_mul(jb, jc))
    scale = max(1.0, max(lhs.coefficient_magnitudes()))
    assert max_diff(lhs, rhs) <= 1e-12 * scale


@given(coeff_lists, coeff_lists, coeff_lists)
def test_mul_distributes(a, b, c):
    ja, jb, jc = jet_from(a), jet_from(b), jet_from(c)
    lhs = jet_mul(ja, jb + jc)
    rhs = jet_mul(ja, jb) + jet_mul(ja, jc)
    scale = max(1.0, max(lhs.coefficient_magnitudes()))
    assert max_diff(lhs, rhs) <= 1e-12 * scale


@given(coeff_lists)
def test_derivative_of_antiderivative_round_trips(a):
    j = jet_from(a)
    back = j.antiderivative(0).derivative()
    # the top coefficient is truncated away by the antiderivative
    diff = max(abs(complex(x) - complex(y)) for x, y in zip(back.coeffs[:-1], j.coeffs[:-1]))
    assert diff <= 1e-14 * max(1.0, max(j.coefficient_magnitudes()))


# -- inverses ------------------------------------------------------------------


@given(coeff_lists)
def test_reciprocal_inverts(a):
    a = [a[0] if abs(a[0]) > 0.1 else 1.0] + list(a[1:])
    j = jet_from(a)
    prod = jet_mul(j, jet_reciprocal(j))
    one = TruncatedJet.constant(1, ORDER, DOUBLE)
    scale = max(1.0, max(jet_reciprocal(j).coefficient_magnitudes()) ** 2)
    assert max_diff(prod, one) <= 1e-10 * scale


@given(coeff_lists)
def test_sqrt_squares_back(a):
    a = [abs(a[0]) + 0.5] + list(a[1:])
    j = jet_from(a)
    r = jet_sqrt(j)
    scale = max(1.0, max(r.coefficient_magnitudes()) ** 2)
    assert max_diff(jet_mul(r, r), j) <= 1e-10 * scale


# -- the omega = sqrt(1 + xi^2) jets ---------------------------------------------


def test_omega_jet_squares_to_one_plus_xi_squared():
    w = omega_jet(ORDER, DOUBLE)
    sq = jet_mul(w, w)
    expected = [1.0, 0.0, 1.0] + [0.0] * (ORDER - 2)
    assert max_diff(sq, jet_from(expected)) <= 1e-15


def test_inv_omega_jet_is_reciprocal_of_omega():
    w = omega_jet(ORDER, DOUBLE)
    assert max_diff(inv_omega_jet(ORDER, DOUBLE), jet_reciprocal(w)) <= 1e-15


@given(st.floats(min_value=0.1, max_value=6.0))
def test_cos_t_omega_matches_pointwise(t):
    j = cos_t_omega_jet(t, 16, DOUBLE)
    for xi in (0.01, 0.05):
        exact = math.cos(t * math.hypot(1, xi))
        assert abs(complex(j.evaluate(xi)).real - exact) <= 1e-9


@given(st.floats(min_value=0.1, max_value=6.0))
def test_sin_t_omega_matches_pointwise(t):
    j = sin_t_omega_jet(t, 16, DOUBLE)
    for xi in (0.01, 0.05):
        exact = math.sin(t * math.hypot(1, xi))
        assert abs(complex(j.evaluate(xi)).real - exact) <= 1e-9


@given(st.floats(min_value=0.1, max_value=6.0))
def test_cos_squared_plus_sin_squared_is_one(t):
    c, s = cos_sin_t_omega_jet(t, ORDER, DOUBLE)
    total = jet_mul(c, c) + jet_mul(s, s)
    one = TruncatedJet.constant(1, ORDER, DOUBLE)
    assert max_diff(total, one) <= 1e-12


# -- precision scaling -----------------------------------------------------------


def test_higher_precision_shrinks_identity_defect():
    t = 3.7
    defects = {}
    for p in (DOUBLE, QUAD256):
        c, s = cos_sin_t_omega_jet(p.real(t), ORDER, p)
        total = jet_mul(c, c) + jet_mul(s, s)
        one = TruncatedJet.constant(1, ORDER, p)
        defects[p.mantissa_bits] = max(
            abs(complex(x) - complex(y)) for x, y in zip(total.coeffs, one.coeffs)
        )
    assert defects[53] <= 1e-12
    assert defects[256] <= defects[53] * 2.0 ** -(48)


def test_derivative_matches_finite_differences():
    j = cos_t_omega_jet(2.0, 10, DOUBLE)
    d = j.derivative()
    h = 1e-6
    for xi in (0.02, 0.07):
        fd = (complex(j.evaluate(xi + h)) - complex(j.evaluate(xi - h))).real / (2 * h)
        assert abs(complex(d.evaluate(xi)).real - fd) <= 1e-7


def test_reciprocal_rejects_zero_constant_term():
    j = jet_from([0.0] * (ORDER + 1))
    with pytest.raises(Exception):
        jet_reciprocal(j)
