"""Stationary phase expansions for power phases and their numerical verification.

For a Schwartz amplitude ``a`` and ``lam >= 1``

    int_0^inf   exp(+/- i lam x**p) a(x) dx
        ~ sum_k p**-1 e^{+/- i pi (k+1)/(2p)} Gamma((k+1)/p) a^{(k)}(0)/k!  lam**(-(k+1)/p)

and on the whole line, for an integer power ``m``, the two half lines combine
into :func:`~genfresnel.fresnel.full_line_term_coefficient`.  Truncating after
``N`` terms leaves a remainder ``O(lam**-((N+1)/p - 1))``.

The verification harness compares partial sums against oracles:

* plain adaptive quadrature of the absolutely convergent integral (panels at
  every half period of ``lam x**p``);
* the exact Gaussian value ``sqrt(pi / (1/2 -/+ i lam))`` for ``m = 2``;
* for bump amplitudes supported in ``(0, inf)``, a contour through the two
  endpoint saddles, which keeps full relative accuracy where real-axis
  quadrature drowns in cancellation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .amplitudes import Amplitude
from .errors import DomainError, NoiseFloorError, PreconditionError
from .fresnel import Sign, closed_form, full_line_term_coefficient
from .quadrature import QuadResult, integrate, integrate_weighted_power, power_phase_breakpoints

__all__ = [
    "AsymptoticExpansion",
    "LambdaGrid",
    "SlopeFit",
    "ExpansionReport",
    "half_line_expansion",
    "full_line_expansion",
    "weighted_half_line_value",
    "weighted_half_line_quadrature",
    "full_line_quadrature",
    "bump_contour_value",
    "gaussian_quadratic_exact",
    "oracle_value",
    "decay_slope_fit",
    "fit_leading_coefficient",
    "expansion_vs_oracle",
]

#: quadrature tolerances of the oracles
ORACLE_RTOL = 1e-12
ORACLE_ATOL = 1e-16
#: a value counts as signal only if it exceeds this multiple of its error estimate
NOISE_MARGIN = 10.0


@dataclass(frozen=True)
class AsymptoticExpansion:
    """``sum_k c_k lam**(-e_k)`` plus the claimed remainder order.

    ``terms`` is a tuple of ``(e_k, c_k)`` with strictly increasing ``e_k``;
    the remainder is ``O(lam**-remainder_exponent)``.
    """

    terms: tuple
    remainder_exponent: float
    order: int
    power: float
    domain: str
    sign: Sign

    def __post_init__(self):
        exps = [e for e, _ in self.terms]
        if any(b <= a for a, b in zip(exps, exps[1:])):
            raise DomainError("expansion exponents must be strictly increasing")

    def evaluate(self, lam):
        """Partial sum at ``lam`` (scalar or array)."""
        lam = np.asarray(lam, dtype=float)
        out = np.zeros(lam.shape, dtype=complex)
        for e, c in self.terms:
            out = out + c * lam ** (-e)
        return out if out.ndim else complex(out)

    @property
    def coefficients(self):
        return [c for _, c in self.terms]

    def as_dict(self):
        return {
            "power": self.power,
            "domain": self.domain,
            "sign": self.sign.label,
            "order": self.order,
            "remainder_exponent": self.remainder_exponent,
            "terms": [{"exponent": e, "coefficient": {"re": c.real, "im": c.imag}} for e, c in self.terms],
        }


@dataclass(frozen=True)
class LambdaGrid:
    """Increasing frequencies ``lam >= 1``."""

    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("empty lambda grid")
        if any(not (v >= 1.0 and math.isfinite(v)) for v in vals):
            raise DomainError("every lambda must be finite and >= 1")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("lambda values must be strictly increasing")

    @classmethod
    def logspace(cls, start=1e2, stop=1e4, points=5):
        if points < 2:
            raise DomainError("a log-spaced grid needs at least two points")
        return cls(tuple(np.geomspace(start, stop, int(points))))

    @property
    def decades(self) -> float:
        return math.log10(self.values[-1] / self.values[0])

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


# ---------------------------------------------------------------------------
# expansions


def _check_order(N, power):
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if not N + 1 > power:
        raise PreconditionError(f"the expansion needs N + 1 > p; got N = {N}, p = {power}")
    return int(N)


def half_line_expansion(p, a: Amplitude, sign="plus", N=2) -> AsymptoticExpansion:
    """Terms ``k = 0..N-1`` of the half-line expansion with phase ``x**p``."""
    if not p > 0:
        raise DomainError(f"p must be positive, got {p!r}")
    sign = Sign.parse(sign)
    N = _check_order(N, p)
    taylor = a.taylor_coefficients(N)
    terms = tuple(((k + 1) / p, closed_form(p, k + 1, sign) * taylor[k]) for k in range(N))
    return AsymptoticExpansion(terms, (N + 1) / p - 1.0, N, float(p), "halfline", sign)


def full_line_expansion(m, a: Amplitude, sign="plus", N=2) -> AsymptoticExpansion:
    """Terms ``k = 0..N-1`` of the full-line expansion with phase ``x**m``."""
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    sign = Sign.parse(sign)
    N = _check_order(N, m)
    taylor = a.taylor_coefficients(N)
    terms = tuple(((k + 1) / m, full_line_term_coefficient(m, k, sign) * taylor[k]) for k in range(N))
    return AsymptoticExpansion(terms, (N + 1) / m - 1.0, N, float(m), "line", sign)


# ---------------------------------------------------------------------------
# oracles


def weighted_half_line_quadrature(p, q, a: Amplitude, sign="plus", lam=1.0,
                                  rtol=ORACLE_RTOL, atol=ORACLE_ATOL) -> QuadResult:
    """``int_0^inf exp(+/- i lam x**p) x**(q-1) a(x) dx`` by real-axis panel quadrature.

    ``lam = 0`` switches the phase off (a sanity hook).
    """
    if not (p > 0 and q > 0):
        raise DomainError(f"need p > 0 and q > 0, got p = {p!r}, q = {q!r}")
    if lam < 0:
        raise DomainError(f"lambda must be nonnegative, got {lam!r}")
    s = int(Sign.parse(sign))
    lo, hi = a.effective_support()
    lo = max(lo, 0.0)
    if hi <= lo:
        return QuadResult(0j, 0.0, 0)
    phase = (lambda x: np.exp(1j * s * lam * x ** p)) if lam > 0 else (lambda x: 1.0)
    p_phase = p if lam > 0 else None
    if lo == 0.0:
        return integrate_weighted_power(lambda x: phase(x) * a(x), q, hi, p_phase=p_phase, lam=lam,
                                        atol=atol, rtol=rtol)
    pts = power_phase_breakpoints(lo, hi, p, lam) if lam > 0 else np.array([lo, hi])
    return integrate(lambda x: phase(x) * x ** (q - 1.0) * a(x), pts, atol=atol, rtol=rtol)


def weighted_half_line_value(p, q, a: Amplitude, sign="plus", lam=1.0) -> complex:
    """Value of :func:`weighted_half_line_quadrature`."""
    return weighted_half_line_quadrature(p, q, a, sign, lam).value


def full_line_quadrature(m, a: Amplitude, sign="plus", lam=1.0, method="real") -> QuadResult:
    """``int_R exp(+/- i lam x**m) a(x) dx`` as the sum of two half lines.

    ``method="contour"`` uses :func:`bump_contour_value` on each half line
    that carries part of a bump; ``"auto"`` does so only for bumps.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    if method not in ("real", "contour", "auto"):
        raise DomainError(f"unknown method {method!r}")
    sign = Sign.parse(sign)
    use_contour = method == "contour" or (method == "auto" and a.kind == "bump")
    halves = [(a, sign), (a.reflected(), Sign(int(sign) * (-1) ** int(m)))]
    value, error, panels = 0j, 0.0, 0
    for amp, sg in halves:
        if amp.support is not None and amp.support[1] <= 0.0:
            continue
        if use_contour:
            res = bump_contour_value(m, 1.0, amp, sg, lam)
        else:
            res = weighted_half_line_quadrature(m, 1.0, amp, sg, lam)
        value += res.value
        error += res.error
        panels += res.panels
    return QuadResult(value, error, panels)


def bump_contour_value(p, q, a: Amplitude, sign="plus", lam=1.0, rtol=1e-12) -> QuadResult:
    """``int exp(+/- i lam x**p) x**(q-1) a(x) dx`` for a bump supported in ``(0, inf)``.

    The integrand is analytic between the endpoints of the support, so the
    segment ``[lo, hi]`` is replaced by the two legs ``lo -> c +/- i r -> hi``
    (``c``, ``r`` centre and half-width).  Each leg leaves its endpoint at 45
    degrees, the direction of the saddle that dominates the integral, so the
    quadrature works with the true magnitude of the result instead of
    cancelling oscillations.
    """
    if a.kind != "bump":
        raise DomainError("the contour oracle needs a bump amplitude")
    if not (p > 0 and q > 0 and lam > 0):
        raise DomainError("need p > 0, q > 0 and lam > 0")
    lo, hi = a.params
    c, r = a.center_radius
    if lo <= 0.0:
        raise DomainError("the contour oracle needs a support inside (0, inf)")
    if p * math.atan2(r, c) >= math.pi:
        raise DomainError("contour would leave the decaying sector of exp(i lam x**p)")
    s = int(Sign.parse(sign))
    d1 = r * complex(1.0, s)       # apex - lo
    d2 = r * complex(-1.0, s)      # apex - hi
    v1 = complex(1.0, s)           # (1 + t) per unit leg parameter on leg 1
    v2 = complex(1.0, -s)          # (1 - t) per unit leg parameter on leg 2

    def leg(x0, d, near):
        def f(tau):
            x = x0 + tau * d
            small = tau * near                   # 1 -/+ t, exact near the endpoint
            w = small * (2.0 - small)            # 1 - t**2
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                amp = np.where(tau > 0, np.exp(-1.0 / np.where(tau > 0, w, 1.0)), 0.0)
            return np.exp(1j * s * lam * x ** p) * x ** (q - 1.0) * amp * d
        pts = np.concatenate([[0.0], np.geomspace(1e-6, 1.0, 49)])
        return integrate(f, pts, atol=1e-300, rtol=rtol)

    r1 = leg(complex(lo), d1, v1)
    r2 = leg(complex(hi), d2, v2)
    return QuadResult(r1.value - r2.value, r1.error + r2.error, r1.panels + r2.panels)


def gaussian_quadratic_exact(lam, sign="plus") -> complex:
    """``int_R exp(+/- i lam x**2) exp(-x**2/2) dx = sqrt(pi / (1/2 -/+ i lam))``."""
    s = int(Sign.parse(sign))
    return cmath.sqrt(math.pi / complex(0.5, -s * lam))


# ---------------------------------------------------------------------------
# fits


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    lambdas: tuple
    values: tuple
    residual: float

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "residual": self.residual}


def decay_slope_fit(values, errors=None) -> SlopeFit:
    """Least-squares slope of ``log|value|`` against ``log lam``.

    ``values`` is a sequence of ``(lam, magnitude)``.  At least four points
    spanning two decades are required.  When ``errors`` (absolute error
    estimates of the magnitudes) are given, a value not exceeding
    ``NOISE_MARGIN`` times its error is quadrature noise and the fit is
    refused with :class:`NoiseFloorError`.
    """
    pts = [(float(l), float(v)) for l, v in values]
    if len(pts) < 4:
        raise DomainError("slope fit needs at least 4 points")
    lam = np.array([l for l, _ in pts])
    val = np.array([v for _, v in pts])
    if np.any(lam <= 0):
        raise DomainError("lambda values must be positive")
    if math.log10(lam.max() / lam.min()) < 2.0 - 1e-9:
        raise DomainError("slope fit needs lambda values spanning two decades")
    noisy = val <= 0
    if errors is not None:
        noisy |= val <= NOISE_MARGIN * np.asarray(errors, dtype=float)
    x = np.log(lam)
    if noisy.any():
        fit = None
        if (~noisy).sum() >= 2:
            sl, ic = np.polyfit(x[~noisy], np.log(val[~noisy]), 1)
            fit = SlopeFit(float(sl), float(ic), tuple(lam[~noisy]), tuple(val[~noisy]), math.nan)
        bad = ", ".join(f"{l:g}" for l in lam[noisy])
        raise NoiseFloorError(f"values at lambda = {bad} are at the quadrature noise floor", fit=fit)
    y = np.log(val)
    sl, ic = np.polyfit(x, y, 1)
    res = float(np.sqrt(np.mean((y - (sl * x + ic)) ** 2)))
    return SlopeFit(float(sl), float(ic), tuple(lam), tuple(val), res)


def fit_leading_coefficient(lams, values, exponent, gap=None) -> complex:
    """Coefficient ``c0`` in ``I(lam) ~ c0 lam**-exponent (1 + c1 lam**-gap)``.

    Least squares of ``lam**exponent I(lam)`` on ``[1, lam**-gap]``; without
    ``gap`` only the constant is fitted.
    """
    lams = np.asarray(lams, dtype=float)
    y = np.asarray(values, dtype=complex) * lams ** exponent
    if gap is None:
        return complex(np.mean(y))
    A = np.stack([np.ones_like(lams), lams ** (-gap)], axis=1).astype(complex)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return complex(coef[0])


# ---------------------------------------------------------------------------
# harness


@dataclass
class ExpansionReport:
    expansion: AsymptoticExpansion
    lambdas: list
    oracle: list
    oracle_error: list
    partial: list
    remainder: list
    fit: SlopeFit | None
    threshold: float
    slope_pass: bool
    envelope_constant: float
    envelope_ratio: float
    envelope_pass: bool
    oracle_kind: str
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.slope_pass and self.envelope_pass

    def rows(self):
        for lam, o, pr, r in zip(self.lambdas, self.oracle, self.partial, self.remainder):
            yield lam, o, pr, r

    def as_dict(self):
        return {
            "expansion": self.expansion.as_dict(),
            "oracle_kind": self.oracle_kind,
            "rows": [
                {"lambda": lam, "oracle": {"re": o.real, "im": o.imag}, "oracle_error": e,
                 "partial": {"re": p.real, "im": p.imag}, "abs_remainder": r}
                for lam, o, e, p, r in zip(self.lambdas, self.oracle, self.oracle_error, self.partial, self.remainder)
            ],
            "fit": None if self.fit is None else self.fit.as_dict(),
            "threshold": self.threshold,
            "slope_pass": self.slope_pass,
            "envelope_constant": self.envelope_constant,
            "envelope_ratio": self.envelope_ratio,
            "envelope_pass": self.envelope_pass,
            "passed": self.passed,
        }


def oracle_value(power, a, sign, lam, domain="line", oracle="auto", q=1.0) -> QuadResult:
    """One oracle evaluation as used by :func:`expansion_vs_oracle`."""
    if oracle == "exact":
        v = gaussian_quadratic_exact(lam, sign)
        return QuadResult(v, 4e-16 * abs(v), 0)
    if domain == "line":
        return full_line_quadrature(power, a, sign, lam, method=oracle)
    if oracle == "contour" or (oracle == "auto" and a.kind == "bump" and a.params[0] > 0):
        return bump_contour_value(power, q, a, sign, lam)
    return weighted_half_line_quadrature(power, q, a, sign, lam)


def expansion_vs_oracle(power, a: Amplitude, sign="plus", N=2, grid=None, domain="line",
                        oracle="auto", slack=0.1, map_fn=map) -> ExpansionReport:
    """Compare the ``N``-term expansion with an oracle over a lambda grid.

    ``oracle`` is ``"exact"`` (Gaussian amplitude with ``m = 2`` only),
    ``"real"``, ``"contour"`` or ``"auto"``.  The remainder slope passes when
    it is at most ``-(remainder_exponent - 0.1)``; the envelope
    ``C lam**-remainder_exponent`` is fitted at the smallest lambda and must
    not be exceeded by more than ``slack`` anywhere on the grid.  ``map_fn``
    evaluates the per-lambda oracles (e.g. an executor's ``map``); results
    keep grid order.
    """
    grid = grid if isinstance(grid, LambdaGrid) else LambdaGrid(tuple(grid) if grid else LambdaGrid.logspace().values)
    if grid.decades < 2.0 - 1e-9:
        raise DomainError("the verification grid must span at least two decades")
    sign = Sign.parse(sign)
    if domain == "line":
        exp = full_line_expansion(power, a, sign, N)
    elif domain == "halfline":
        exp = half_line_expansion(power, a, sign, N)
    else:
        raise DomainError(f"domain must be 'line' or 'halfline', got {domain!r}")
    if oracle == "exact":
        if not (domain == "line" and power == 2 and a.kind == "poly_gaussian" and a.params == (1.0,)):
            raise DomainError("the exact oracle covers only m = 2 on the line with the Gaussian amplitude")
    results = list(map_fn(lambda lam: oracle_value(power, a, sign, lam, domain, oracle), grid.values))
    lams = list(grid.values)
    oracle_vals = [r.value for r in results]
    errs = [r.error for r in results]
    partial = [exp.evaluate(l) for l in lams]
    rem = [abs(o - p) for o, p in zip(oracle_vals, partial)]
    rexp = exp.remainder_exponent
    threshold = -(rexp - 0.1)
    notes = []
    try:
        fit = decay_slope_fit(list(zip(lams, rem)), errors=errs)
        slope_pass = fit.slope <= threshold
    except NoiseFloorError as exc:
        fit = exc.fit
        slope_pass = False
        notes.append(str(exc))
    C = rem[0] * lams[0] ** rexp
    ratios = [r / (C * l ** (-rexp)) if C > 0 else math.inf for l, r in zip(lams, rem)]
    ratio = max(ratios)
    envelope_pass = ratio <= 1.0 + slack
    kind = "exact" if oracle == "exact" else "quadrature"
    return ExpansionReport(exp, lams, oracle_vals, errs, partial, rem, fit, threshold, slope_pass,
                           C, ratio, envelope_pass, kind, notes)
