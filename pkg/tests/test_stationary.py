import math

import numpy as np
import pytest

import frozen_oracles as F
from genfresnel import (
    Amplitude,
    DomainError,
    LambdaGrid,
    NoiseFloorError,
    PreconditionError,
    closed_form,
    decay_slope_fit,
    expansion_vs_oracle,
    full_line_expansion,
    half_line_expansion,
    weighted_half_line_value,
)
from genfresnel.stationary import (
    bump_contour_value,
    fit_leading_coefficient,
    full_line_quadrature,
    gaussian_quadratic_exact,
    weighted_half_line_quadrature,
)

G = Amplitude.gaussian()
BUMP = Amplitude.bump(1.0, 2.0)


def test_grid_validation():
    grid = LambdaGrid.logspace()
    assert len(grid) == 5 and grid.values[0] == 100 and grid.decades == pytest.approx(2.0)
    for bad in ((0.5, 10.0), (10.0, 5.0), ()):
        with pytest.raises(DomainError):
            LambdaGrid(bad)


def test_expansion_structure():
    exp = half_line_expansion(3, G, N=4)
    assert [e for e, _ in exp.terms] == pytest.approx([1 / 3, 2 / 3, 1.0, 4 / 3])
    assert exp.remainder_exponent == pytest.approx(5 / 3 - 1)
    assert exp.terms[0][1] == pytest.approx(closed_form(3, 1))
    assert exp.terms[1][1] == 0  # a'(0) = 0
    with pytest.raises(PreconditionError):
        half_line_expansion(3, G, N=2)
    with pytest.raises(PreconditionError):
        full_line_expansion(2, G, N=1)


def test_weighted_half_line_frozen_values():
    assert abs(weighted_half_line_value(2, 1, G, lam=10) - F.HALF_GAUSS_P2_LAM10) <= 1e-13
    assert abs(weighted_half_line_value(2, 3, G, lam=10) - F.HALF_GAUSS_P2_Q3_LAM10) <= 1e-13
    # phase switched off: int_0^inf x^(q-1) e^{-x^2/2} dx
    assert weighted_half_line_value(2, 3, G, lam=0).real == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)


def test_exact_gaussian_oracle_against_quadrature():
    for lam in (1.0, 10.0, 100.0):
        for sign in ("plus", "minus"):
            q = full_line_quadrature(2, G, sign, lam).value
            assert abs(q - gaussian_quadratic_exact(lam, sign)) <= 1e-11


@pytest.mark.parametrize("m", (2, 4))
def test_evenness(m):
    a = Amplitude.poly_gaussian([1.0, 0.0, -0.5])
    for lam in (1.0, 30.0):
        full = full_line_quadrature(m, a, "plus", lam).value
        half = weighted_half_line_value(m, 1, a, "plus", lam)
        assert abs(full - 2 * half) <= 1e-8 * abs(full)


def test_linear_phase_is_trivial():
    exp = full_line_expansion(1, G, N=4)
    assert all(c == 0 for c in exp.coefficients)
    lams = (2.0, 3.0, 4.0, 6.0)  # past the maximum of lam^3 exp(-lam^2/2)
    vals = [abs(full_line_quadrature(1, G, "plus", lam).value) for lam in lams]
    # exact value sqrt(2 pi) exp(-lam^2/2) decays faster than any power
    for lam, v in zip(lams, vals):
        assert v == pytest.approx(math.sqrt(2 * math.pi) * math.exp(-lam * lam / 2), rel=1e-8)
    scaled = [v * lam ** 3 for lam, v in zip(lams, vals)]
    assert all(b < a for a, b in zip(scaled, scaled[1:]))


def test_bump_contour_against_real_axis():
    for lam in (1.0, 10.0, 100.0, 316.0):
        for sign in ("plus", "minus"):
            c = bump_contour_value(2, 1, BUMP, sign, lam).value
            r = weighted_half_line_quadrature(2, 1, BUMP, sign, lam).value
            assert abs(c - r) <= 1e-12 + 1e-9 * abs(c)
    with pytest.raises(DomainError):
        bump_contour_value(2, 1, Amplitude.bump(-1.0, 1.0))


def test_bump_away_from_origin_has_zero_expansion():
    exp = half_line_expansion(2, BUMP, N=4)
    assert exp.evaluate(100.0) == 0
    assert abs(weighted_half_line_value(2, 1, BUMP, lam=100.0)) < 1e-4


def test_slope_fit():
    lams = np.geomspace(1e2, 1e4, 5)
    fit = decay_slope_fit(list(zip(lams, 3.0 * lams ** -1.5)))
    assert fit.slope == pytest.approx(-1.5) and fit.residual < 1e-12
    with pytest.raises(DomainError):
        decay_slope_fit(list(zip(lams[:3], lams[:3])))
    with pytest.raises(DomainError):
        decay_slope_fit(list(zip(np.geomspace(1, 10, 5), np.ones(5))))
    with pytest.raises(NoiseFloorError) as info:
        decay_slope_fit(list(zip(lams, lams ** -1.0)), errors=[0, 0, 0, 1e-3, 1e-3])
    assert info.value.fit is not None and info.value.fit.slope == pytest.approx(-1.0)


def test_leading_coefficient_fit():
    lams = np.geomspace(1e2, 1e4, 5)
    vals = 2.0 * lams ** (-1 / 3) * (1 + 0.7 * lams ** (-1 / 3))
    assert fit_leading_coefficient(lams, vals, 1 / 3, gap=1 / 3) == pytest.approx(2.0)


def test_exact_oracle_remainder():
    rep = expansion_vs_oracle(2, G, "plus", N=2, oracle="exact")
    assert rep.passed and rep.fit.slope <= rep.threshold
    assert rep.oracle_kind == "exact"


def test_halfline_remainder_against_quadrature():
    rep = expansion_vs_oracle(2, G, "minus", N=3, domain="halfline", oracle="real")
    assert rep.passed, rep.as_dict()
    assert rep.fit.slope <= -(3 + 1) / 2 + 1 - 0.1


def test_exact_oracle_restricted():
    with pytest.raises(DomainError):
        expansion_vs_oracle(3, G, N=3, oracle="exact")
    with pytest.raises(DomainError):
        expansion_vs_oracle(2, G, N=2, grid=(100.0, 200.0, 400.0, 800.0))
