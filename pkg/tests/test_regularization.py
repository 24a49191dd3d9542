import cmath
import math

import pytest

from genfresnel import (
    ConvergenceError,
    DomainError,
    EpsilonSchedule,
    abel_oracle,
    chi_derivative_integral,
    closed_form,
    ibp_precondition,
    regularized_integral,
    regularized_line_integral,
    rotated_contour_oracle,
)
from genfresnel.regularization import default_schedule, default_split_point, extrapolate_to_zero

KINDS = ("gaussian", "sech", "bump")
PAIRS = ((1, 1), (2, 1), (2, 3), (3, 2))


def test_schedule_validation():
    s = EpsilonSchedule()
    assert all(0 < e < 1 for e in s.values)
    assert all(b < a for a, b in zip(s.values, s.values[1:]))
    assert s.values[0] == 2.0 ** -3 and s.values[-1] == 2.0 ** -12
    for bad in ((0.5, 0.5, 0.25), (1.0, 0.5, 0.25), (0.5, 0.25)):
        with pytest.raises(DomainError):
            EpsilonSchedule(bad)
    assert default_schedule(0.5).values[-1] < default_schedule(2.0).values[-1]


def test_extrapolation_of_a_polynomial_in_eps_squared():
    f = lambda e: (3.0 + 2.0 * e * e - 5.0 * e ** 4, 0.0)
    out = extrapolate_to_zero(f, EpsilonSchedule())
    assert out.converged and abs(out.value - 3.0) < 1e-12


def test_extrapolation_reports_non_convergence():
    f = lambda e: (math.sin(1.0 / e), 0.0)
    with pytest.raises(ConvergenceError) as info:
        extrapolate_to_zero(f, EpsilonSchedule.geometric(3, 6))
    assert info.value.outcome is not None and not info.value.outcome.converged


def test_ibp_orders():
    # every step lowers the uniform power by p
    for p, q in ((0.5, 0.3), (1.0, 1.0), (2.0, 3.0), (3.0, 2.0)):
        for times in range(4):
            tail = ibp_precondition(p, q, times=times)
            assert tail.effective_order == pytest.approx(q - 1 - times * p)
            assert max(t.power for t in tail.terms) <= q - 1 - times * (p - 1) + 1e-12
        assert ibp_precondition(p, q, times=tail.required_times).absolutely_integrable
    assert default_split_point(2, 3) == max(1.0, math.sqrt(3.0), math.sqrt(1.5))


@pytest.mark.parametrize("p", (0.5, 1.0, 2.0, 3.0, 7.5))
@pytest.mark.parametrize("frac", (0.1, 0.5, 0.9, 1.7))
def test_regularized_matches_closed_form(p, frac):
    q = frac * p
    cf = closed_form(p, q)
    out = regularized_integral(p, q)
    assert out.converged
    assert abs(out.value - cf) <= 1e-8 * abs(cf)
    # the error estimate is an honest bound on the true error here
    assert out.error_estimate >= abs(out.value - cf)


@pytest.mark.parametrize("p,q", PAIRS)
@pytest.mark.parametrize("kind", KINDS)
def test_cutoff_independence(p, q, kind):
    ref = regularized_integral(p, q, chi="gaussian").value
    assert abs(regularized_integral(p, q, chi=kind).value - ref) < 2e-6


@pytest.mark.parametrize("p,q", PAIRS)
def test_sign_conjugation(p, q):
    plus = regularized_integral(p, q, "plus")
    minus = regularized_integral(p, q, "minus")
    assert abs(minus.value - plus.value.conjugate()) <= plus.error_estimate + minus.error_estimate


@pytest.mark.parametrize("p,q", PAIRS)
@pytest.mark.parametrize("k", (1, 2))
def test_cutoff_derivative_terms_vanish(p, q, k):
    assert abs(chi_derivative_integral(p, q, k).value) < 1e-6


@pytest.mark.parametrize("q", (0.3, 0.5, 0.9))
def test_three_oracles_agree_for_linear_phase(q):
    reg = regularized_integral(1.0, q).value
    rot = rotated_contour_oracle(1.0, q)
    abel = abel_oracle(q).value
    assert abs(reg - rot) < 2e-6 and abs(reg - abel) < 2e-6 and abs(rot - abel) < 2e-6


def test_lambda_scaling():
    out = regularized_integral(2, 1, lam=4.0)
    assert abs(out.value - closed_form(2, 1) / 2) < 1e-10


def test_line_integrals():
    fres = regularized_line_integral(2, "plus").value
    assert abs(fres - math.sqrt(math.pi) * cmath.exp(0.25j * math.pi)) < 1e-9
    # odd phase: the imaginary parts of the two half lines cancel
    airy = regularized_line_integral(3, "plus", lam=1 / 3).value
    assert abs(airy.imag) < 1e-10


def test_domain_errors():
    for p, q in ((0, 1), (-1, 1), (1, 0), (1, -0.5), (1, 1j)):
        with pytest.raises(DomainError):
            regularized_integral(p, q)
    with pytest.raises(DomainError):
        chi_derivative_integral(1, 1, 0)
    with pytest.raises(DomainError):
        regularized_line_integral(2.5)
