"""Schwartz cutoff functions ``chi`` with ``chi(0) = 1`` and their derivatives.

Three built-in kinds are provided:

``gaussian``  ``exp(-x**2)``; derivatives through Hermite polynomials.
``sech``      ``2 / (e**x + e**-x)``; derivatives are polynomials in ``tanh``
              times ``sech``.
``bump``      ``exp(1 - 1/(1 - x**2))`` on ``|x| < 1``, zero elsewhere;
              derivatives by the Leibniz rule applied to ``exp(h)``.

A custom cutoff can be supplied programmatically through
:meth:`CutoffFunction.custom`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError
from .quadrature import integrate

__all__ = ["CutoffFunction", "get_cutoff", "cutoff_properties", "CUTOFF_KINDS"]

CUTOFF_KINDS = ("gaussian", "sech", "bump")


def _gaussian_derivatives(kmax, u):
    u = np.asarray(u, dtype=float)
    out = np.empty((kmax + 1,) + u.shape)
    h_prev = np.ones_like(u)
    w = np.exp(-u * u)
    out[0] = w
    if kmax >= 1:
        h = 2.0 * u
        out[1] = -h * w
        for n in range(1, kmax):
            h_prev, h = h, 2.0 * u * h - 2.0 * n * h_prev
            out[n + 1] = (-1) ** (n + 1) * h * w
    return out


@functools.lru_cache(maxsize=None)
def _sech_polys(kmax):
    polys = [np.array([1.0])]
    one_minus_t2 = np.array([1.0, 0.0, -1.0])
    for _ in range(kmax):
        pk = polys[-1]
        nxt = P.polysub(P.polymul(P.polyder(pk), one_minus_t2), P.polymulx(pk))
        polys.append(nxt)
    return tuple(polys)


def _sech_derivatives(kmax, u):
    u = np.asarray(u, dtype=float)
    t = np.tanh(u)
    s = 1.0 / np.cosh(np.minimum(np.abs(u), 700.0))
    polys = _sech_polys(kmax)
    return np.stack([P.polyval(t, polys[k]) * s for k in range(kmax + 1)])


def _bump_derivatives(kmax, u):
    # Leibniz recursion for exp(h): (e^h)^{(k+1)} = sum_j C(k, j) h^{(j+1)} (e^h)^{(k-j)},
    # with h^{(n)} from the partial fractions of 1/(1 - u**2).  Unlike the
    # expanded derivative polynomials this stays accurate near |u| = 1.
    shape = np.shape(u)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.zeros((kmax + 1,) + u.shape)
    # exp(1 - 1/g) underflows for g below ~1/740
    inside = 1.0 - u * u > 1.0 / 740.0
    if not inside.any():
        return out.reshape((kmax + 1,) + shape)
    ui = u[inside]
    r1 = 1.0 / (1.0 - ui)
    r2 = 1.0 / (1.0 + ui)
    h = [None] + [
        -0.5 * math.factorial(n) * (r1 ** (n + 1) + (-1) ** n * r2 ** (n + 1)) for n in range(1, kmax + 1)
    ]
    f = [np.exp(1.0 - 0.5 * (r1 + r2))]
    for k in range(kmax):
        f.append(sum(math.comb(k, j) * h[j + 1] * f[k - j] for j in range(k + 1)))
    for k in range(kmax + 1):
        out[k][inside] = f[k]
    return out.reshape((kmax + 1,) + shape)


@dataclass(frozen=True)
class CutoffFunction:
    """A cutoff ``chi`` in the Schwartz class with ``chi(0) = 1``.

    ``extent`` is a point beyond which every derivative used by the engine is
    negligible (exactly zero for compact support).
    """

    kind: str
    extent: float
    _derivatives: Callable = field(repr=False, compare=False)

    def __call__(self, x):
        return self.derivative(0, x)

    def derivative(self, k: int, x):
        """``chi^{(k)}(x)``."""
        return self._derivatives(int(k), x)[int(k)]

    def derivatives(self, kmax: int, x):
        """Array of ``chi^{(j)}(x)`` for ``j = 0..kmax`` stacked on axis 0."""
        return self._derivatives(int(kmax), x)

    @classmethod
    def gaussian(cls):
        return cls("gaussian", 40.0, _gaussian_derivatives)

    @classmethod
    def sech(cls):
        return cls("sech", 80.0, _sech_derivatives)

    @classmethod
    def bump(cls):
        return cls("bump", 1.0, _bump_derivatives)

    @classmethod
    def custom(cls, name: str, derivative: Callable, extent: float):
        """Wrap ``derivative(k, x) -> chi^{(k)}(x)`` as a cutoff.

        ``derivative(0, 0)`` must equal 1 and ``chi`` must be even on the
        half line the engine uses only through ``x >= 0``.
        """
        if abs(float(np.asarray(derivative(0, np.array([0.0])))[0]) - 1.0) > 1e-12:
            raise DomainError("custom cutoff must satisfy chi(0) = 1")

        def derivs(kmax, x):
            return np.stack([np.asarray(derivative(k, x), dtype=float) for k in range(kmax + 1)])

        return cls(name, float(extent), derivs)

    # bounds used to truncate regularized tails

    def sup_abs(self, k: int, u: float) -> float:
        """Sampled ``sup_{v >= u} |chi^{(k)}(v)|`` (with a 1.5 safety factor)."""
        if u >= self.extent:
            return 0.0
        lo = max(u, 0.0)
        grid = np.concatenate([
            np.linspace(lo, self.extent, 600),
            lo + np.geomspace(1e-6, max(self.extent - lo, 1e-6), 200),
        ])
        return 1.5 * float(np.max(np.abs(self.derivative(k, grid))))

    def tail_moment(self, k: int, a: float, u: float) -> float:
        """``int_u^extent v**a |chi^{(k)}(v)| dv`` for ``u > 0``."""
        if u >= self.extent:
            return 0.0
        pts = np.unique(np.concatenate([
            np.geomspace(u, self.extent, 40),
            np.linspace(u, self.extent, 40),
        ]))
        res = integrate(lambda v: v ** a * np.abs(self.derivative(k, v)), pts, atol=1e-300, rtol=1e-6)
        return float(abs(res.value)) * 1.01 + res.error


def get_cutoff(kind) -> CutoffFunction:
    if isinstance(kind, CutoffFunction):
        return kind
    try:
        return {"gaussian": CutoffFunction.gaussian, "sech": CutoffFunction.sech, "bump": CutoffFunction.bump}[
            str(kind).lower()
        ]()
    except KeyError:
        raise DomainError(f"unknown cutoff kind {kind!r}; choose from {CUTOFF_KINDS}") from None


def cutoff_properties(chi, eps_values=(0.5, 0.1, 0.01), half_width=50.0, compact=10.0, n=20001):
    """Sampled diagnostics of ``x -> chi(eps x)`` for each ``eps``.

    Returns a list of dicts with keys ``eps``, ``compact_deviation``
    (``max_{|x|<=compact} |chi(eps x) - 1|``), ``weighted_derivative_sup``
    (``max |d/dx chi(eps x)| (1+x^2)^{1/2}``) and ``derivative_sup``.
    """
    chi = get_cutoff(chi)
    x = np.linspace(-half_width, half_width, n)
    inner = np.abs(x) <= compact
    rows = []
    for eps in eps_values:
        vals = chi(np.abs(eps * x))
        d = eps * chi.derivative(1, eps * x)
        rows.append({
            "eps": eps,
            "compact_deviation": float(np.max(np.abs(vals[inner] - 1.0))),
            "weighted_derivative_sup": float(np.max(np.abs(d) * np.sqrt(1.0 + x * x))),
            "derivative_sup": float(np.max(np.abs(d))),
        })
    return rows
