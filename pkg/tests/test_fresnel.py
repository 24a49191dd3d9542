import cmath
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozen_oracles as F
from _residue import fitted_residue
from genfresnel import (
    DomainError,
    FresnelParams,
    PoleError,
    Sign,
    closed_form,
    euler_beta,
    full_line_term_coefficient,
    gamma,
    generalized_beta,
    poles_in_p,
    poles_in_q,
    rotated_contour_oracle,
)
from genfresnel.fresnel import nearest_pole

P_GRID = (0.5, 1.0, 2.0, 3.0, 7.5)


def test_sign_parsing():
    assert Sign.parse("plus") is Sign.PLUS
    assert Sign.parse("-") is Sign.MINUS
    assert Sign.parse(-1) is Sign.MINUS
    with pytest.raises(DomainError):
        Sign.parse("sideways")


def test_params_validation():
    with pytest.raises(DomainError):
        FresnelParams(p=0.0, q=1.0)
    assert FresnelParams(p=2.0, q=1.0).q_real == 1.0


def test_classical_fresnel():
    expected = math.sqrt(math.pi) * cmath.exp(0.25j * math.pi)
    assert abs(2 * closed_form(2, 1, "plus") - expected) <= 1e-14
    assert abs(2 * closed_form(2, 1, "minus") - expected.conjugate()) <= 1e-14


def test_cubic_value():
    assert abs(closed_form(3, 1) - F.CLOSED_3_1_PLUS) <= 1e-14


def test_full_line_coefficients():
    assert abs(full_line_term_coefficient(3, 0) - F.FULL_LINE_3_0) <= 1e-14
    c1 = full_line_term_coefficient(3, 1)
    assert abs(c1.real) <= 1e-15 and abs(c1.imag - F.FULL_LINE_3_1_IM) <= 1e-14
    # odd terms of an even phase cancel
    assert abs(full_line_term_coefficient(2, 1)) <= 1e-15
    assert abs(full_line_term_coefficient(2, 0) - math.sqrt(math.pi) * cmath.exp(0.25j * math.pi)) <= 1e-14


@pytest.mark.parametrize("p", P_GRID)
@pytest.mark.parametrize("frac", (0.1, 0.5, 0.9))
@pytest.mark.parametrize("sign", ("plus", "minus"))
def test_rotated_contour_equivalence(p, frac, sign):
    q = frac * p
    cf = closed_form(p, q, sign)
    rot = rotated_contour_oracle(p, q, sign)
    assert abs(cf - rot) <= 1e-10 * abs(cf)


def test_rotated_oracle_frozen_value():
    assert abs(rotated_contour_oracle(4, 2, "minus") - F.ROT_4_2_MINUS) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(P_GRID), st.floats(-20.0, 20.0))
def test_conjugation_and_nonvanishing(p, q):
    try:
        plus = closed_form(p, q, "plus")
    except PoleError:
        return
    except OverflowError:
        return
    minus = closed_form(p, q, "minus")
    assert abs(minus.real - plus.real) <= 1e-13 * abs(plus)
    assert abs(minus.imag + plus.imag) <= 1e-13 * abs(plus)
    assert abs(plus) > 0


def test_beta_identity_random():
    rng = random.Random(20240611)
    for _ in range(50):
        q1, q2 = rng.uniform(1e-3, 5), rng.uniform(1e-3, 5)
        b = euler_beta(q1, q2)
        for sign in ("plus", "minus"):
            assert abs(generalized_beta(1, 1, 1, q1, q2, q1 + q2, sign) - b) <= 1e-10 * max(1.0, b)


@pytest.mark.parametrize("p", (0.5, 1.0, 2.0, 3.0))
@pytest.mark.parametrize("j", (1, 2, 3))
@pytest.mark.parametrize("sign", ("plus", "minus"))
def test_residues_match_numerical_limit(p, j, sign):
    s = 1 if sign == "plus" else -1
    expected = cmath.exp(-s * 0.5j * math.pi * j) * (-1) ** j / math.factorial(j)
    assert abs(fitted_residue(p, j, sign) - expected) <= 1e-8
    [report] = [r for r in poles_in_q(p, (-p * j - 0.1, -p * j + 0.1), sign)]
    assert report.order == 1
    assert abs(report.residue - expected) <= 1e-15


def test_pole_detection():
    with pytest.raises(PoleError) as info:
        closed_form(2, -4)
    assert info.value.report.location == -4
    assert math.isfinite(abs(closed_form(2, -4 + 1e-6)))
    assert nearest_pole(2, 1) is None
    assert nearest_pole(2, -3.1).location == -4
    assert [r.location.real for r in poles_in_q(1, (-3.5, 0))] == [-1, -2, -3]


def test_poles_in_p():
    reports = poles_in_p(1.0, (-1.0, -0.01))
    assert len(reports) == 99  # half-open window excludes -0.01
    with pytest.raises(DomainError):
        poles_in_p(1.0, (-1.0, 0.0))
    assert reports[0].location == -1 and all(r.variable == "p" for r in reports)
    with pytest.raises(DomainError):
        closed_form(-1.0, 1.0)


def test_complex_q():
    q = complex(1.0, 0.5)
    assert abs(closed_form(2, q) - cmath.exp(0.25j * math.pi * q) * gamma(q / 2) / 2) <= 1e-15
