"""Closed-form generalized Fresnel integrals and their meromorphic structure.

The generalized Fresnel integral with parameters ``p > 0`` and ``q`` is

    I(p, q, +/-) = p**-1 * exp(+/- i*pi*q / (2p)) * Gamma(q / p),

which is the oscillatory integral of ``exp(+/- i x**p) x**(q-1)`` over the
half line for ``q > 0`` and its analytic continuation in ``q`` otherwise.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import DomainError, PoleError
from .special import gamma, gamma_residue

__all__ = [
    "Sign",
    "FresnelParams",
    "PoleReport",
    "closed_form",
    "poles_in_q",
    "poles_in_p",
    "nearest_pole",
    "generalized_beta",
    "full_line_term_coefficient",
    "POLE_TOL",
]

#: relative distance below which ``q`` is treated as sitting on a pole
POLE_TOL = 1e-9


class Sign(enum.IntEnum):
    """Sign of the phase; both signs in a formula are always taken together."""

    PLUS = 1
    MINUS = -1

    @classmethod
    def parse(cls, value) -> "Sign":
        if isinstance(value, Sign):
            return value
        if isinstance(value, str):
            key = value.strip().lower()
            if key in ("plus", "+", "p", "+1"):
                return cls.PLUS
            if key in ("minus", "-", "m", "-1"):
                return cls.MINUS
        elif value in (1, -1):
            return cls(int(value))
        raise DomainError(f"unknown sign {value!r}; use 'plus' or 'minus'")

    @property
    def label(self) -> str:
        return "plus" if self is Sign.PLUS else "minus"


@dataclass(frozen=True)
class FresnelParams:
    """Exponents of the integrand ``exp(+/- i x**p) x**(q-1)``."""

    p: float
    q: complex

    def __post_init__(self):
        if not (isinstance(self.p, (int, float)) and self.p > 0 and math.isfinite(self.p)):
            raise DomainError(f"p must be a positive finite real, got {self.p!r}")

    @property
    def q_real(self) -> float:
        q = complex(self.q)
        if q.imag != 0:
            raise DomainError(f"q must be real here, got {self.q!r}")
        return q.real


@dataclass(frozen=True)
class PoleReport:
    location: complex
    order: int
    residue: complex
    variable: str = "q"


def _check_p(p):
    if not (p > 0 and math.isfinite(p)):
        raise DomainError(f"evaluation requires p > 0, got p = {p!r}")


def _q_pole_residue(j: int, sign: Sign) -> complex:
    return cmath.exp(-int(sign) * 0.5j * math.pi * j) * gamma_residue(j)


def nearest_pole(p: float, q: complex, sign="plus") -> PoleReport | None:
    """The pole ``q = -p*j`` closest to ``q``, or ``None`` if ``Re q >= 0``."""
    _check_p(p)
    sign = Sign.parse(sign)
    q = complex(q)
    j = round(-q.real / p)
    if j < 1:
        if q.real >= 0:
            return None
        j = 1
    return PoleReport(complex(-p * j), 1, _q_pole_residue(j, sign))


def closed_form(p: float, q: complex, sign="plus") -> complex:
    """Generalized Fresnel integral ``p**-1 e^{+/- i pi q/(2p)} Gamma(q/p)``.

    Raises :class:`PoleError` (with a :class:`PoleReport`) when ``q`` is
    within ``POLE_TOL * max(1, p*j)`` of a pole ``-p*j``.
    """
    _check_p(p)
    sign = Sign.parse(sign)
    q = complex(q)
    pole = nearest_pole(p, q, sign)
    if pole is not None:
        j = round(-pole.location.real / p)
        if abs(q - pole.location) < POLE_TOL * max(1.0, p * j):
            raise PoleError(
                f"q = {q} is a pole (q = -{j}*p) of the generalized Fresnel integral",
                location=q,
                report=pole,
            )
    phase = cmath.exp(int(sign) * 0.5j * math.pi * q / p)
    return phase * gamma(q / p) / p


def poles_in_q(p: float, search_window, sign="plus") -> list[PoleReport]:
    """All poles ``q = -p*j`` (``j >= 1``) with ``lo <= q < hi``.

    Residue at ``-p*j`` is ``e^{-/+ i pi j/2} (-1)**j / j!``.
    """
    _check_p(p)
    sign = Sign.parse(sign)
    lo, hi = search_window
    out = []
    j = max(1, math.ceil(-hi / p))
    while -p * j >= lo:
        loc = -p * j
        if lo <= loc < hi:
            out.append(PoleReport(complex(loc), 1, _q_pole_residue(j, sign)))
        j += 1
    out.sort(key=lambda r: -r.location.real)
    return out


def poles_in_p(q: float, search_window, sign="plus") -> list[PoleReport]:
    """Poles of the continuation in ``p`` at ``p = -q/j`` for fixed ``q > 0``.

    Only reported; evaluation stays restricted to ``p > 0``.  The residue in
    ``p`` is ``e^{-/+ i pi j/2} (-1)**j / (j * j!)``.
    """
    if not q > 0:
        raise DomainError(f"poles in p are reported for q > 0, got {q!r}")
    sign = Sign.parse(sign)
    lo, hi = search_window
    if hi >= 0:
        raise DomainError("poles in p accumulate at p = 0; the search window must end below 0")
    out = []
    for j in range(1, 100_000):
        loc = -q / j
        if loc >= hi:
            break
        if loc >= lo:
            out.append(PoleReport(complex(loc), 1, _q_pole_residue(j, sign) / j, variable="p"))
    return out


def generalized_beta(p1, p2, p3, q1, q2, q3, sign="plus") -> complex:
    """Beta-type combination of three generalized Fresnel integrals.

    ``e^{-/+ i pi/2 (q1/p1 + q2/p2 - q3/p3)} (p1 p2 / p3) I1 I2 / I3``; with
    all ``p = 1`` and ``q3 = q1 + q2`` it reduces to ``B(q1, q2)``.
    """
    sign = Sign.parse(sign)
    i1 = closed_form(p1, q1, sign)
    i2 = closed_form(p2, q2, sign)
    i3 = closed_form(p3, q3, sign)
    if i3 == 0:
        raise DomainError("denominator integral vanished")
    rot = cmath.exp(-int(sign) * 0.5j * math.pi * (q1 / p1 + q2 / p2 - q3 / p3))
    return rot * (p1 * p2 / p3) * i1 * i2 / i3


def full_line_term_coefficient(m: int, k: int, sign="plus") -> complex:
    """Coefficient of ``a^{(k)}(0)/k! * lam**(-(k+1)/m)`` for the phase ``x**m`` on the line."""
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    m, k = int(m), int(k)
    s = int(Sign.parse(sign))
    r = (k + 1) / m
    right = cmath.exp(s * 0.5j * math.pi * r)
    if m % 2 == 0:
        factor = 1 + (-1) ** k
    elif (k + 1) % m == 0:
        # left/right = (-1)**k e^{-/+ i pi r} with integer r: cancel exactly
        factor = 1 + (-1) ** (k + (k + 1) // m)
    else:
        factor = 1 + (-1) ** k * cmath.exp(-s * 1j * math.pi * r)
    if factor == 0:
        return 0j
    return right * factor * gamma(r) / m

