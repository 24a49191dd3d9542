import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from genfresnel import (
    CapExceededError,
    DomainError,
    MultivariateAmplitude,
    SingularMatrixError,
    SymmetricMatrix,
    fresnel_fourier_check,
    quadratic_expansion,
    quadratic_phase_quadrature,
    signature_and_det,
)
from genfresnel.quadratic import jacobi_eigen, quadratic_remainder_check


def binom_half(k):
    """Generalized binomial coefficient C(-1/2, k)."""
    out = 1.0
    for j in range(k):
        out *= (-0.5 - j) / (j + 1)
    return out


def test_matrix_validation():
    with pytest.raises(DomainError):
        SymmetricMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        SymmetricMatrix(np.eye(4))
    A = SymmetricMatrix.from_row_major([2, 1, 1, 3])
    assert A.n == 2 and not A.entries.flags.writeable
    with pytest.raises(DomainError):
        SymmetricMatrix.from_row_major([1, 2, 3])


def test_signature_and_det_diagonal():
    for diag in ((1.0, -1.0), (2.0, 3.0, -0.5), (-4.0,), (-1.0, -2.0)):
        sgn, det = signature_and_det(SymmetricMatrix(np.diag(diag)))
        assert sgn == sum(1 if d > 0 else -1 for d in diag)
        assert det == math.prod(diag)
    with pytest.raises(SingularMatrixError):
        signature_and_det(SymmetricMatrix(np.diag([1.0, 0.0])))


symmetric3 = arrays(float, (3, 3), elements=st.floats(-5, 5)).map(lambda m: 0.5 * (m + m.T))


@settings(max_examples=50, deadline=None)
@given(symmetric3, st.integers(0, 2 ** 32 - 1))
def test_jacobi_invariance(m, seed):
    A = SymmetricMatrix(m)
    eig, V = jacobi_eigen(A)
    norm = max(A.norm, 1e-300)
    off = V.T @ m @ V - np.diag(eig)
    assert np.sqrt(np.sum(off ** 2)) <= 1e-12 * norm + 1e-300
    assert np.allclose(V.T @ V, np.eye(3), atol=1e-13)
    q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=(3, 3)))
    eig2, _ = jacobi_eigen(SymmetricMatrix(q @ m @ q.T))
    assert np.allclose(np.sort(eig), np.sort(eig2), atol=1e-12 * max(norm, 1.0))


def test_prefactor_and_term_count():
    A = SymmetricMatrix(np.array([[2.0, 0.5], [0.5, -1.0]]))
    exp = quadratic_expansion(A, MultivariateAmplitude.poly_gaussian(2), 3)
    _, det = signature_and_det(A)
    assert len(exp.terms) == 3
    assert abs(exp.prefactor) == pytest.approx(2 * math.pi / math.sqrt(abs(det)), rel=1e-14)
    with pytest.raises(CapExceededError):
        quadratic_expansion(A, MultivariateAmplitude.poly_gaussian(2, cap=3), 2)
    with pytest.raises(DomainError):
        quadratic_expansion(A, MultivariateAmplitude.poly_gaussian(1), 1)


def test_one_dimensional_coefficients_match_binomial_series():
    # int e^{i lam x^2/2} e^{-x^2/2} = sqrt(2 pi / lam) e^{i pi/4} (1 + i/lam)^{-1/2}
    exp = quadratic_expansion(SymmetricMatrix(np.eye(1)), MultivariateAmplitude.poly_gaussian(1, cap=10), 5)
    for k, c in exp.terms:
        assert abs(c - binom_half(k) * 1j ** k) <= 1e-14


def test_two_dimensional_identity_coefficients():
    # product of two 1D factors: (1 + i/lam)^{-1} = sum (-i/lam)^k
    exp = quadratic_expansion(SymmetricMatrix(np.eye(2)), MultivariateAmplitude.poly_gaussian(2, cap=10), 5)
    assert exp.prefactor == pytest.approx(2j * math.pi)
    for k, c in exp.terms:
        assert abs(c - (-1j) ** k) <= 1e-13


def test_quadrature_against_gaussian_determinant():
    m = np.array([[1.0, 0.3, 0.0], [0.3, -2.0, 0.4], [0.0, 0.4, 0.7]])
    A = SymmetricMatrix(m)
    a = MultivariateAmplitude.poly_gaussian(3)
    for lam in (0.5, 5.0, 50.0):
        val, err = quadratic_phase_quadrature(A, a, lam)
        exact = (2 * math.pi) ** 1.5 / np.sqrt(np.linalg.det(np.eye(3) - 1j * lam * m))
        assert abs(val - exact) <= 1e-10 * abs(exact)


def test_quadrature_with_polynomial_factor():
    coeffs = np.zeros((3, 1))
    coeffs[2, 0] = 1.0  # x^2 e^{-|x|^2/2}
    A = SymmetricMatrix(np.diag([1.0, 2.0]))
    lam = 3.0
    val, _ = quadratic_phase_quadrature(A, MultivariateAmplitude.poly_gaussian(2, coeffs), lam)
    c1, c2 = 1 - 1j * lam, 1 - 2j * lam
    exact = math.sqrt(2 * math.pi) / c1 ** 1.5 * np.sqrt(2 * math.pi / c2)
    assert abs(val - exact) <= 1e-12 * abs(exact)


@pytest.mark.parametrize("n", (1, 2))
def test_remainder_envelope(n):
    A = SymmetricMatrix(np.diag([1.0, -2.0][:n]))
    out = quadratic_remainder_check(A, MultivariateAmplitude.poly_gaussian(n, cap=8), 2)
    assert out["remainder_exponent"] == 2 + n / 2
    assert out["passed"], out["ratio"]


def test_fourier_check_domain():
    with pytest.raises(DomainError):
        fresnel_fourier_check("plus", 11.0)
    lhs, rhs = fresnel_fourier_check("minus", 2.5)
    assert abs(lhs - rhs) < 1e-9
