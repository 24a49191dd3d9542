"""Schwartz amplitudes with exact derivative data at the origin.

One-variable kinds
------------------
``poly_gaussian``  ``P(x) exp(-x**2/2)`` for a coefficient list of ``P``.
``bump``           ``exp(-1/(1 - ((x-c)/r)**2))`` on ``(c-r, c+r)``, zero
                   elsewhere.
``custom``         a user evaluator plus a user-supplied Taylor list.

Spec strings (used by the command line)::

    gaussian
    poly:c0,c1,...;gaussian        # (c0 + c1 x + ...) exp(-x**2/2)
    bump:lo,hi                     # bump supported on (lo, hi)

Multivariate amplitudes (``n <= 3``) carry a Taylor table indexed by
multi-indices, see :class:`MultivariateAmplitude`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .cutoff import CutoffFunction
from .errors import CapExceededError, DomainError
from .series import gaussian_series, series_exp, series_mul, series_reciprocal

__all__ = [
    "Amplitude",
    "MultivariateAmplitude",
    "TAYLOR_CAP",
    "taylor_at_zero",
    "schwartz_decay_report",
    "parse_amplitude",
]

#: highest derivative order for which Taylor data is produced
TAYLOR_CAP = 16

_BUMP = CutoffFunction.bump()


def _check_order(k, cap=TAYLOR_CAP):
    if int(k) != k or k < 0:
        raise DomainError(f"derivative order must be a nonnegative integer, got {k!r}")
    if k > cap:
        raise CapExceededError(f"derivative order {k} exceeds the Taylor cap {cap}")
    return int(k)


@dataclass(frozen=True)
class Amplitude:
    """A one-variable Schwartz amplitude.

    Use the constructors :meth:`gaussian`, :meth:`poly_gaussian`,
    :meth:`bump` and :meth:`custom` rather than instantiating directly.
    ``params`` holds the polynomial coefficients (``poly_gaussian``) or the
    pair ``(lo, hi)`` (``bump``).
    """

    kind: str
    params: tuple = ()
    support: tuple | None = None
    _evaluator: Callable | None = field(default=None, repr=False, compare=False)
    _derivative: Callable | None = field(default=None, repr=False, compare=False)
    _taylor: tuple = field(default=(), repr=False, compare=False)

    # -- constructors -------------------------------------------------------

    @classmethod
    def gaussian(cls) -> "Amplitude":
        return cls.poly_gaussian([1.0])

    @classmethod
    def poly_gaussian(cls, coeffs: Sequence[float]) -> "Amplitude":
        c = tuple(float(v) for v in coeffs) or (0.0,)
        return cls("poly_gaussian", c)

    @classmethod
    def bump(cls, lo: float, hi: float) -> "Amplitude":
        lo, hi = float(lo), float(hi)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise DomainError(f"bump support needs lo < hi, got ({lo}, {hi})")
        return cls("bump", (lo, hi), (lo, hi))

    @classmethod
    def custom(cls, evaluator: Callable, taylor: Sequence[complex], derivative: Callable | None = None,
               support=None) -> "Amplitude":
        """``taylor[k]`` must be ``a^{(k)}(0) / k!``; ``derivative(k, x)`` is optional."""
        return cls("custom", (), tuple(support) if support else None, evaluator, derivative,
                   tuple(complex(t) if np.iscomplexobj(t) else float(t) for t in taylor))

    # -- geometry -----------------------------------------------------------

    @property
    def center_radius(self):
        lo, hi = self.params
        return 0.5 * (lo + hi), 0.5 * (hi - lo)

    def reflected(self) -> "Amplitude":
        """The amplitude ``x -> a(-x)``."""
        if self.kind == "poly_gaussian":
            return Amplitude.poly_gaussian([c * (-1) ** k for k, c in enumerate(self.params)])
        if self.kind == "bump":
            lo, hi = self.params
            return Amplitude.bump(-hi, -lo)
        ev, der = self._evaluator, self._derivative
        return Amplitude.custom(
            lambda x: ev(-np.asarray(x)),
            [t * (-1) ** k for k, t in enumerate(self._taylor)],
            None if der is None else (lambda k, x: (-1) ** k * der(k, -np.asarray(x))),
            None if self.support is None else (-self.support[1], -self.support[0]),
        )

    def effective_support(self, tol=1e-18):
        """An interval outside of which ``|a(x)|`` stays below ``tol``."""
        if self.support is not None:
            return self.support
        if self.kind == "poly_gaussian":
            # |P(x)| e^{-x^2/2} <= sum |c_k| |x|^k e^{-x^2/2}
            absc = np.abs(self.params)
            x = 1.0
            while x < 200.0:
                if P.polyval(x, absc) * math.exp(-0.5 * x * x) < tol:
                    return (-x, x)
                x += 0.25
            return (-x, x)
        return (-50.0, 50.0)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        return self.derivative(0, x)

    def derivative(self, k: int, x):
        """``a^{(k)}(x)`` evaluated exactly (no numerical differentiation)."""
        k = int(k)
        x = np.asarray(x, dtype=float)
        if self.kind == "poly_gaussian":
            # a^{(k)} = Q_k(x) e^{-x^2/2}, Q_{k+1} = Q_k' - x Q_k
            q = np.array(self.params)
            for _ in range(k):
                q = P.polysub(P.polyder(q), P.polymulx(q))
            return P.polyval(x, q) * np.exp(-0.5 * x * x)
        if self.kind == "bump":
            c, r = self.center_radius
            # exp(-1/(1-t^2)) is the unit cutoff bump divided by e
            return _BUMP.derivative(k, (x - c) / r) * (math.exp(-1.0) / r ** k)
        if k == 0:
            return np.asarray(self._evaluator(x))
        if self._derivative is None:
            raise DomainError("custom amplitude has no derivative evaluator")
        return np.asarray(self._derivative(k, x))

    # -- Taylor data --------------------------------------------------------

    def taylor(self, k: int):
        """``a^{(k)}(0) / k!``."""
        k = _check_order(k)
        return self._taylor_table()[k]

    def taylor_coefficients(self, n: int):
        """``[a^{(j)}(0)/j! for j < n]``."""
        if n - 1 > TAYLOR_CAP:
            raise CapExceededError(f"{n} coefficients exceed the Taylor cap {TAYLOR_CAP}")
        return self._taylor_table()[:n]

    def _taylor_table(self):
        n = TAYLOR_CAP + 1
        if self.kind == "poly_gaussian":
            return series_mul(np.array(self.params), gaussian_series(n), n)
        if self.kind == "bump":
            c, r = self.center_radius
            if not (c - r < 0.0 < c + r):
                # all derivatives vanish at a point outside the open support
                return np.zeros(n)
            # w(x) = 1 - ((x-c)/r)^2 as a polynomial in x; a = exp(-1/w)
            w = np.array([1.0 - (c / r) ** 2, 2.0 * c / r ** 2, -1.0 / r ** 2])
            return series_exp(-series_reciprocal(w, n), n)
        tab = list(self._taylor)
        if len(tab) < n:
            tab += [0.0] * (n - len(tab))
        return np.array(tab[:n])

    @property
    def is_even(self) -> bool:
        if self.kind == "poly_gaussian":
            return all(c == 0 for c in self.params[1::2])
        if self.kind == "bump":
            lo, hi = self.params
            return lo == -hi
        return bool(np.all(self._taylor_table()[1::2] == 0))

    def spec(self) -> str:
        """The spec string this amplitude parses from (custom has none)."""
        if self.kind == "poly_gaussian":
            if self.params == (1.0,):
                return "gaussian"
            return "poly:" + ",".join(repr(c) for c in self.params) + ";gaussian"
        if self.kind == "bump":
            return f"bump:{self.params[0]!r},{self.params[1]!r}"
        return "custom"


def taylor_at_zero(a: Amplitude, k: int):
    """Exact ``a^{(k)}(0)`` (not divided by ``k!``); ``k <= 16``."""
    k = _check_order(k)
    return a.taylor(k) * math.factorial(k)


def schwartz_decay_report(a: Amplitude, j: int, k: int, half_width=50.0, n=200_001) -> float:
    """Grid supremum of ``|x|**j |a^{(k)}(x)|`` over ``[-50, 50]``."""
    if not (0 <= j <= 4 and 0 <= k <= 4):
        raise DomainError("decay report is defined for 0 <= j, k <= 4")
    x = np.linspace(-half_width, half_width, n)
    vals = np.abs(x) ** j * np.abs(a.derivative(k, x))
    return float(np.max(vals))


def parse_amplitude(spec: str) -> Amplitude:
    """Parse ``gaussian``, ``poly:c0,c1,...;gaussian`` or ``bump:lo,hi``."""
    text = spec.strip().replace("−", "-").replace(" ", "")
    if text == "gaussian":
        return Amplitude.gaussian()
    try:
        if text.startswith("poly:"):
            body, _, tail = text[5:].partition(";")
            if tail != "gaussian":
                raise ValueError("polynomial amplitudes must end with ';gaussian'")
            return Amplitude.poly_gaussian([float(c) for c in body.split(",")])
        if text.startswith("bump:"):
            lo, hi = (float(c) for c in text[5:].split(","))
            return Amplitude.bump(lo, hi)
    except ValueError as exc:
        raise DomainError(f"bad amplitude spec {spec!r}: {exc}") from None
    raise DomainError(
        f"bad amplitude spec {spec!r}; expected 'gaussian', 'poly:c0,c1,...;gaussian' or 'bump:lo,hi'"
    )


# ---------------------------------------------------------------------------
# several variables


@dataclass(frozen=True)
class MultivariateAmplitude:
    """Amplitude on ``R**n`` (``n <= 3``) with a Taylor table.

    ``table[alpha] = d^alpha a(0) / alpha!`` for every multi-index with
    ``|alpha| <= cap``; entries of higher total degree are zero.  For the
    ``poly_gaussian`` kind ``poly[alpha]`` holds the coefficients of the
    polynomial factor of ``P(x) exp(-|x|**2/2)``.
    """

    n: int
    table: np.ndarray = field(repr=False)
    cap: int
    kind: str = "custom"
    poly: np.ndarray | None = field(default=None, repr=False)
    _evaluator: Callable | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise DomainError(f"dimension must be 1, 2 or 3, got {self.n}")
        if self.table.shape != (self.cap + 1,) * self.n:
            raise DomainError("Taylor table shape does not match the dimension and cap")

    @classmethod
    def poly_gaussian(cls, n: int, coeffs=None, cap: int = 8) -> "MultivariateAmplitude":
        """``P(x) exp(-|x|**2/2)``; ``coeffs`` is an ``n``-dimensional array of monomial
        coefficients (default ``P = 1``)."""
        if coeffs is None:
            coeffs = np.ones((1,) * n)
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != n:
            raise DomainError("coefficient array must have one axis per variable")
        g1 = gaussian_series(cap + 1)
        g = g1
        for _ in range(n - 1):
            g = np.multiply.outer(g, g1)
        g = np.asarray(g).reshape((cap + 1,) * n)
        table = np.zeros((cap + 1,) * n)
        for alpha in zip(*np.nonzero(coeffs)):
            if any(s > cap for s in alpha):
                continue
            shifted = np.zeros_like(table)
            src = tuple(slice(0, cap + 1 - s) for s in alpha)
            dst = tuple(slice(s, cap + 1) for s in alpha)
            shifted[dst] = g[src]
            table += coeffs[alpha] * shifted
        table = _truncate_degree(table, cap)
        return cls(n, table, cap, "poly_gaussian", coeffs)

    @classmethod
    def from_taylor(cls, table, evaluator: Callable | None = None) -> "MultivariateAmplitude":
        table = np.asarray(table)
        cap = table.shape[0] - 1
        return cls(table.ndim, _truncate_degree(table, cap), cap, "custom", None, evaluator)

    def __call__(self, x):
        """Evaluate on points ``x`` of shape ``(..., n)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise DomainError(f"points must have trailing dimension {self.n}")
        if self.kind == "poly_gaussian":
            out = np.zeros(x.shape[:-1])
            for alpha in zip(*np.nonzero(self.poly)):
                term = np.full(x.shape[:-1], self.poly[alpha])
                for j, e in enumerate(alpha):
                    term = term * x[..., j] ** e
                out = out + term
            return out * np.exp(-0.5 * np.sum(x * x, axis=-1))
        if self._evaluator is None:
            raise DomainError("amplitude has no evaluator")
        return np.asarray(self._evaluator(x))

    def taylor(self, alpha) -> float:
        alpha = tuple(int(a) for a in alpha)
        if len(alpha) != self.n:
            raise DomainError("multi-index length must equal the dimension")
        if sum(alpha) > self.cap:
            raise CapExceededError(f"|alpha| = {sum(alpha)} exceeds the Taylor cap {self.cap}")
        return self.table[alpha]

    def derivative_at_zero(self, alpha) -> float:
        """``d^alpha a(0)``."""
        return self.taylor(alpha) * math.prod(math.factorial(int(a)) for a in alpha)

    def taylor_sum(self, x, degree=None):
        """Truncated Taylor polynomial at points ``x`` of shape ``(..., n)``."""
        degree = self.cap if degree is None else degree
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1], dtype=self.table.dtype)
        for alpha in itertools.product(range(self.cap + 1), repeat=self.n):
            if sum(alpha) > degree or self.table[alpha] == 0:
                continue
            term = np.full(x.shape[:-1], self.table[alpha])
            for j, e in enumerate(alpha):
                term = term * x[..., j] ** e
            out = out + term
        return out


def _truncate_degree(table, cap):
    table = np.array(table)
    idx = np.indices(table.shape).sum(axis=0)
    table[idx > cap] = 0
    return table
