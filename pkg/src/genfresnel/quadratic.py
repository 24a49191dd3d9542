"""Non-degenerate quadratic phases in ``n <= 3`` variables.

For a real symmetric non-singular ``A`` and a Schwartz amplitude ``a``

    int exp(i lam <Ax, x>/2) a(x) dx
        ~ (2 pi)**(n/2) e^{i pi sgn A / 4} |det A|**(-1/2)
          * sum_k lam**(-k - n/2) / k! * [(-i/2 <A^{-1} D, D>)**k a](0)

with ``D = (1/i) d/dx``.  Coefficients are obtained by applying the second
order operator to a truncated Taylor table; nothing is differentiated
numerically.

The quadrature oracle rotates to the eigenbasis of ``A``.  For amplitudes
``P(x) exp(-|x|**2/2)`` the rotated polynomial splits into monomials, and each
monomial integral factorizes into one-dimensional weighted half-line
integrals.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .amplitudes import Amplitude, MultivariateAmplitude
from .errors import CapExceededError, DomainError, NoiseFloorError, SingularMatrixError
from .fresnel import Sign
from .regularization import regularized_line_integral
from .stationary import NOISE_MARGIN, LambdaGrid, weighted_half_line_quadrature

__all__ = [
    "SymmetricMatrix",
    "QuadExpansion",
    "jacobi_eigen",
    "signature_and_det",
    "quadratic_expansion",
    "quadratic_phase_quadrature",
    "quadratic_remainder_check",
    "fresnel_fourier_check",
]

SINGULAR_TOL = 1e-12


@dataclass(frozen=True)
class SymmetricMatrix:
    """Real symmetric ``n x n`` matrix with ``n <= 3``, stored exactly symmetric."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or not 1 <= a.shape[0] <= 3:
            raise DomainError(f"expected a square matrix of size 1..3, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DomainError("matrix entries must be finite")
        scale = max(1.0, float(np.abs(a).max()))
        if np.abs(a - a.T).max() > 1e-12 * scale:
            raise DomainError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @classmethod
    def from_row_major(cls, values) -> "SymmetricMatrix":
        vals = [float(v) for v in values]
        n = math.isqrt(len(vals))
        if n * n != len(vals):
            raise DomainError(f"{len(vals)} entries do not form a square matrix")
        return cls(np.array(vals).reshape(n, n))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.entries ** 2)))


def jacobi_eigen(A: SymmetricMatrix, tol=1e-13, max_sweeps=50):
    """Cyclic Jacobi diagonalization: returns ``(eigenvalues, V)`` with ``A = V diag V^T``."""
    a = np.array(A.entries, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    norm = max(float(np.sqrt(np.sum(a * a))), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off <= tol * norm:
            break
        for p_, q_ in itertools.combinations(range(n), 2):
            if a[p_, q_] == 0.0:
                continue
            diff = a[q_, q_] - a[p_, p_]
            if abs(a[p_, q_]) < 1e-150 * abs(diff):
                # theta**2 would overflow; tan of the rotation angle is ~ 1/(2 theta)
                t = a[p_, q_] / diff
            else:
                theta = diff / (2.0 * a[p_, q_])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(n)
            rot[p_, p_] = rot[q_, q_] = c
            rot[p_, q_] = s
            rot[q_, p_] = -s
            a = rot.T @ a @ rot
            a[p_, q_] = a[q_, p_] = 0.0
            v = v @ rot
    else:
        raise DomainError("Jacobi iteration did not converge")
    return np.diag(a).copy(), v


def signature_and_det(A: SymmetricMatrix):
    """``(sgn A, det A)`` from the Jacobi eigenvalues.

    Raises :class:`SingularMatrixError` if an eigenvalue is below
    ``1e-12 * ||A||`` in magnitude.
    """
    eig, _ = jacobi_eigen(A)
    if np.any(np.abs(eig) <= SINGULAR_TOL * A.norm) or A.norm == 0.0:
        raise SingularMatrixError(f"matrix is singular (eigenvalues {eig.tolist()})")
    sgn = int(np.sum(eig > 0) - np.sum(eig < 0))
    return sgn, float(np.prod(eig))


# ---------------------------------------------------------------------------
# expansion


@dataclass(frozen=True)
class QuadExpansion:
    """``prefactor * sum_k c_k lam**(-k - n/2)``."""

    terms: tuple
    prefactor: complex
    n: int
    signature: int
    det: float

    @property
    def remainder_exponent(self) -> float:
        return len(self.terms) + self.n / 2

    def evaluate(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape, dtype=complex)
        for k, c in self.terms:
            out = out + c * lam ** (-k - self.n / 2)
        out = self.prefactor * out
        return out if out.ndim else complex(out)

    def as_dict(self):
        return {
            "n": self.n,
            "signature": self.signature,
            "det": self.det,
            "prefactor": {"re": self.prefactor.real, "im": self.prefactor.imag},
            "terms": [{"k": k, "coefficient": {"re": c.real, "im": c.imag}} for k, c in self.terms],
        }


def _derivative_table(table, j):
    """Taylor table of ``d/dx_j`` of the series with coefficients ``table``."""
    n = table.ndim
    src = [slice(None)] * n
    src[j] = slice(1, None)
    d = table[tuple(src)]
    shape = [1] * n
    shape[j] = d.shape[j]
    d = d * np.arange(1, table.shape[j]).reshape(shape)
    pad = [(0, 0)] * n
    pad[j] = (0, 1)
    return np.pad(d, pad)


def _apply_operator(table, binv):
    """``-(i/2) <A^{-1} D, D>`` applied to a Taylor table.

    This is the one place where ``D = (1/i) d/dx`` is converted to plain
    derivatives: ``D_j D_l = (1/i)**2 d_j d_l = -d_j d_l``.
    """
    n = table.ndim
    out = np.zeros(table.shape, dtype=complex)
    for j in range(n):
        dj = _derivative_table(table, j)
        for l in range(n):
            if binv[j, l] != 0.0:
                out += binv[j, l] * _derivative_table(dj, l)
    return (-0.5j) * (1 / 1j) ** 2 * out


def quadratic_expansion(A: SymmetricMatrix, a: MultivariateAmplitude, N: int) -> QuadExpansion:
    """First ``N`` terms of the quadratic-phase expansion.

    Needs a Taylor table of depth at least ``2N``.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    if A.n != a.n:
        raise DomainError(f"matrix size {A.n} does not match the amplitude dimension {a.n}")
    if a.cap < 2 * N:
        raise CapExceededError(f"Taylor depth {a.cap} is below the required 2N = {2 * N}")
    sgn, det = signature_and_det(A)
    mu, V = jacobi_eigen(A)
    binv = (V / mu) @ V.T
    prefactor = (2 * math.pi) ** (A.n / 2) * cmath.exp(0.25j * math.pi * sgn) / math.sqrt(abs(det))
    table = np.array(a.table, dtype=complex)
    origin = (0,) * A.n
    terms = []
    for k in range(N):
        terms.append((k, complex(table[origin]) / math.factorial(k)))
        table = _apply_operator(table, binv)
    return QuadExpansion(tuple(terms), prefactor, A.n, sgn, det)


# ---------------------------------------------------------------------------
# oracle


def _rotate_polynomial(coeffs, V):
    """Coefficients of ``y -> P(V y)`` for a monomial coefficient array ``coeffs``."""
    n = coeffs.ndim
    deg = sum(s - 1 for s in coeffs.shape)
    out = np.zeros((deg + 1,) * n)
    # linear forms (V y)_j as coefficient arrays in y
    forms = []
    for j in range(n):
        f = np.zeros((2,) * n)
        for l in range(n):
            idx = [0] * n
            idx[l] = 1
            f[tuple(idx)] = V[j, l]
        forms.append(f)
    for alpha in zip(*np.nonzero(coeffs)):
        term = np.ones((1,) * n)
        for j, e in enumerate(alpha):
            for _ in range(e):
                term = _polymul_nd(term, forms[j])
        sl = tuple(slice(0, s) for s in term.shape)
        out[sl] += coeffs[alpha] * term
    return out


def _polymul_nd(a, b):
    shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
    out = np.zeros(shape)
    for idx in zip(*np.nonzero(b)):
        sl = tuple(slice(i, i + s) for i, s in zip(idx, a.shape))
        out[sl] += b[idx] * a
    return out


def _gaussian_moment_1d(beta, mu, lam, cache):
    """``int_R y**beta exp(i lam mu y**2/2) exp(-y**2/2) dy`` by half-line quadrature."""
    if beta % 2:
        return 0j, 0.0
    key = (beta, mu, lam)
    if key not in cache:
        sign = Sign.PLUS if mu > 0 else Sign.MINUS
        res = weighted_half_line_quadrature(2.0, beta + 1.0, Amplitude.gaussian(), sign, 0.5 * lam * abs(mu))
        cache[key] = (2.0 * res.value, 2.0 * res.error)
    return cache[key]


def quadratic_phase_quadrature(A: SymmetricMatrix, a: MultivariateAmplitude, lam: float):
    """``int_{R^n} exp(i lam <Ax, x>/2) a(x) dx`` for ``P(x) exp(-|x|**2/2)`` amplitudes.

    Returns ``(value, error_estimate)``.
    """
    if a.kind != "poly_gaussian":
        raise DomainError("the quadrature oracle handles polynomial-times-Gaussian amplitudes")
    if A.n != a.n:
        raise DomainError("matrix and amplitude dimensions differ")
    if lam < 0:
        raise DomainError("lambda must be nonnegative")
    signature_and_det(A)
    mu, V = jacobi_eigen(A)
    coeffs = _rotate_polynomial(np.asarray(a.poly, dtype=float), V)
    cache = {}
    value, error = 0j, 0.0
    for beta in zip(*np.nonzero(np.abs(coeffs) > 1e-15 * np.abs(coeffs).max())):
        prod, err = complex(coeffs[beta]), 0.0
        for j, b in enumerate(beta):
            v, e = _gaussian_moment_1d(int(b), float(mu[j]), float(lam), cache)
            err = abs(prod) * e + err * abs(v)
            prod *= v
            if prod == 0:
                break
        value += prod
        error += err
    return value, error


def quadratic_remainder_check(A: SymmetricMatrix, a: MultivariateAmplitude, N: int, grid=None, slack=0.1):
    """Envelope check of ``|oracle - expansion| <= C lam**-(N + n/2)``.

    ``C`` is fitted at the first grid point; the returned dict lists the
    per-lambda remainders and the largest ratio to the envelope.  Raises
    :class:`NoiseFloorError` when a remainder is not resolved by the oracle.
    """
    grid = grid if isinstance(grid, LambdaGrid) else LambdaGrid(tuple(grid) if grid else (1e2, 1e3, 1e4))
    exp = quadratic_expansion(A, a, N)
    rexp = N + A.n / 2
    rows = []
    for lam in grid:
        val, err = quadratic_phase_quadrature(A, a, lam)
        part = exp.evaluate(lam)
        rows.append({"lambda": lam, "oracle": val, "oracle_error": err, "partial": part, "abs_remainder": abs(val - part)})
    noisy = [r["lambda"] for r in rows if r["abs_remainder"] <= NOISE_MARGIN * r["oracle_error"]]
    if noisy:
        raise NoiseFloorError(f"remainders at lambda = {noisy} are at the quadrature noise floor")
    C = rows[0]["abs_remainder"] * grid.values[0] ** rexp
    ratio = max(r["abs_remainder"] / (C * r["lambda"] ** (-rexp)) for r in rows) if C > 0 else math.inf
    return {"expansion": exp, "rows": rows, "remainder_exponent": rexp, "C": C, "ratio": ratio,
            "passed": ratio <= 1.0 + slack}


def fresnel_fourier_check(sign="plus", xi=0.0, chi="gaussian"):
    """Fourier transform of ``exp(+/- i x**2/2)`` at ``xi``: ``(lhs, rhs)``.

    ``lhs = (2 pi)**-1/2 Os-int exp(-i x xi) exp(+/- i x**2/2) dx``.  Completing
    the square turns it into ``exp(-/+ i xi**2/2)`` times the oscillatory
    integral of ``exp(+/- i y**2/2)``, evaluated by the regularization engine
    (phase ``lam y**2`` with ``lam = 1/2``).  ``rhs`` is the closed form
    ``e^{+/- i pi/4} e^{-/+ i xi**2/2}``.
    """
    sign = Sign.parse(sign)
    xi = float(xi)
    if abs(xi) > 10:
        raise DomainError("the Fourier check is defined for |xi| <= 10")
    s = int(sign)
    os_int = regularized_line_integral(2, sign, lam=0.5, chi=chi)
    lhs = cmath.exp(-s * 0.5j * xi * xi) * os_int.value / math.sqrt(2 * math.pi)
    rhs = cmath.exp(s * 0.25j * math.pi) * cmath.exp(-s * 0.5j * xi * xi)
    return lhs, rhs
