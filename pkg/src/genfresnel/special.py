"""Complex Gamma function, Euler Beta function and Gamma residues.

The Gamma function uses the Lanczos approximation with ``g = 7`` and nine
coefficients, combined with the reflection formula for ``Re z < 1/2``.
Everything is evaluated in log form so that overflow is detected instead of
silently returning ``inf``.
"""

from __future__ import annotations

import cmath
import math
from numbers import Number

from .errors import DomainError, GammaOverflowError, PoleError

__all__ = ["gamma", "loggamma", "euler_beta", "gamma_residue"]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_MAX = math.log(1.7976931348623157e308)


def _check_argument(z: complex) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite Gamma argument {z!r}")
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at z = {z.real:g}", location=z)


def _loggamma_right(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    acc = complex(_LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def loggamma(z: Number) -> complex:
    """Logarithm of Gamma (not the principal branch of ``log(gamma(z))``).

    The real part is always ``log|Gamma(z)|``; the imaginary part is an
    argument of ``Gamma(z)`` correct modulo ``2*pi``.
    """
    z = complex(z)
    _check_argument(z)
    if z.real >= 0.5:
        return _loggamma_right(z)
    s = cmath.sin(math.pi * z)
    if s == 0:
        raise PoleError(f"Gamma has a pole at z = {z!r}", location=z)
    return math.log(math.pi) - cmath.log(s) - _loggamma_right(1.0 - z)


def gamma(z: Number) -> complex:
    """Gamma function for complex ``z`` off the nonpositive integers.

    Raises
    ------
    PoleError
        If ``z`` is ``0, -1, -2, ...``.
    GammaOverflowError
        If ``|Gamma(z)|`` exceeds the double range.
    """
    z = complex(z)
    _check_argument(z)
    if z.real < 0.5:
        # direct reflection keeps full relative accuracy near the poles
        s = cmath.sin(math.pi * z)
        if s == 0:
            raise PoleError(f"Gamma has a pole at z = {z!r}", location=z)
        lg = _loggamma_right(1.0 - z)
        if -lg.real > _LOG_MAX - 2.0:
            raise GammaOverflowError(f"|Gamma({z!r})| overflows")
        den = s * cmath.exp(lg)
        out = math.pi / den if den != 0 else complex(math.inf)
        if not (math.isfinite(out.real) and math.isfinite(out.imag)):
            raise GammaOverflowError(f"|Gamma({z!r})| overflows")
        return out
    lg = _loggamma_right(z)
    if lg.real > _LOG_MAX:
        raise GammaOverflowError(f"|Gamma({z!r})| overflows")
    out = cmath.exp(lg)
    if z.imag == 0.0:
        return complex(out.real, 0.0)
    return out


def euler_beta(q1: float, q2: float) -> float:
    """``B(q1, q2) = Gamma(q1) Gamma(q2) / Gamma(q1 + q2)`` for positive reals."""
    if not (q1 > 0 and q2 > 0):
        raise DomainError(f"euler_beta needs positive arguments, got ({q1}, {q2})")
    lb = loggamma(q1).real + loggamma(q2).real - loggamma(q1 + q2).real
    return math.exp(lb)


def gamma_residue(j: int) -> float:
    """Residue of Gamma at ``-j``, i.e. ``(-1)**j / j!``."""
    if j < 0 or int(j) != j:
        raise DomainError(f"residue index must be a nonnegative integer, got {j}")
    j = int(j)
    # exp(-lgamma) underflows gracefully to 0 where 1/j! would overflow
    return (-1.0) ** j * math.exp(-math.lgamma(j + 1.0)) if j > 170 else (-1.0) ** j / math.factorial(j)
