"""Oscillatory-integral engine for power phases on the half line.

The central quantity is the cutoff-regularized integral

    F(eps) = int_0^inf exp(+/- i x**p) x**(q-1) chi(eps x) dx ,

whose limit ``eps -> 0`` is the oscillatory integral.  Each ``F(eps)`` is
computed on the real axis:

* ``[0, x0]`` by direct panel quadrature (``u = x**q`` removes the endpoint
  singularity when ``q < 1``);
* ``[x0, inf)`` after repeated integration by parts with the operator
  ``(1/(p x**(p-1))) (1/i) d/dx``.  Every application lowers the effective
  order of the integrand by ``p`` uniformly in ``eps``, so the remaining tail
  is truncated at a point where a rigorous-in-form bound drops below the
  tolerance.

The limit is taken by polynomial extrapolation in ``eps**2`` (the built-in
cutoffs are even, so ``F`` has an expansion in even powers of ``eps``).

Two independent oracles live here as well: the rotated-contour evaluation
(a purely real, non-oscillatory quadrature) and Abel damping ``exp(-tau x)``
for the linear phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .cutoff import CutoffFunction, get_cutoff
from .errors import ConvergenceError, DomainError
from .fresnel import Sign
from .quadrature import (
    geometric_breakpoints,
    integrate,
    integrate_weighted_power,
    power_phase_breakpoints,
)

__all__ = [
    "EpsilonSchedule",
    "QuadratureOutcome",
    "TailTerm",
    "IBPTail",
    "ibp_precondition",
    "regularized_integral",
    "chi_derivative_integral",
    "regularized_line_integral",
    "rotated_contour_oracle",
    "abel_oracle",
    "extrapolate_to_zero",
]

_TAIL_TOL = 1e-13
_QUAD_ATOL = 1e-14
_MAX_TAIL_PANELS = 3_000_000
_PANEL_TARGET = 200_000
_MAX_IBP = 16


@dataclass(frozen=True)
class EpsilonSchedule:
    """Decreasing regularization parameters and extrapolation settings.

    ``order`` is the power of ``eps`` used as the extrapolation variable
    (``h = eps**order``).  Extrapolation stops at the first index where two
    successive extrapolants differ by less than ``rtol*|value| + atol``.
    """

    values: tuple = tuple(2.0 ** -j for j in range(3, 13))
    order: int = 2
    depth: int = 5
    rtol: float = 1e-8
    atol: float = 1e-10

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) < 3:
            raise DomainError("an epsilon schedule needs at least three values")
        if any(not (0.0 < v < 1.0) for v in vals):
            raise DomainError("epsilon values must lie in (0, 1)")
        if any(b >= a for a, b in zip(vals, vals[1:])):
            raise DomainError("epsilon values must be strictly decreasing")
        if self.order < 1 or self.depth < 1:
            raise DomainError("order and depth must be positive")

    @classmethod
    def geometric(cls, start=3, stop=12, **kw):
        return cls(tuple(2.0 ** -j for j in range(start, stop + 1)), **kw)

    def as_dict(self):
        return {"values": list(self.values), "order": self.order, "depth": self.depth,
                "rtol": self.rtol, "atol": self.atol}


@dataclass
class QuadratureOutcome:
    """Extrapolated value with diagnostics.

    ``error_estimate`` is the difference of the last two extrapolants plus
    the propagated quadrature error (heuristic factor 1).
    """

    value: complex
    error_estimate: float
    per_epsilon_values: list = field(default_factory=list)
    extrapolants: list = field(default_factory=list)
    converged: bool = True

    def as_dict(self):
        return {
            "value": {"re": self.value.real, "im": self.value.imag},
            "error_estimate": self.error_estimate,
            "converged": self.converged,
            "per_epsilon_values": [
                {"eps": e, "re": v.real, "im": v.imag} for e, v in self.per_epsilon_values
            ],
        }


# ---------------------------------------------------------------------------
# extrapolation


def _lagrange_weights_at_zero(h):
    h = np.asarray(h, dtype=float)
    w = np.ones_like(h)
    for i in range(h.size):
        for j in range(h.size):
            if i != j:
                w[i] *= h[j] / (h[j] - h[i])
    return w


def extrapolate_to_zero(evaluate, schedule: EpsilonSchedule, label="eps"):
    """Drive ``evaluate(eps) -> (value, err)`` along ``schedule`` to ``eps -> 0``.

    At every step polynomial extrapolants of degree ``1..depth`` through the
    most recent points are formed and the degree whose estimate changes least
    against the next lower degree is kept; expansions that are only
    asymptotic (compactly supported cutoffs, ``p < 1``) then fall back to low
    degrees on the smallest ``eps`` automatically.

    Raises :class:`ConvergenceError` (with the partial outcome attached) if
    the extrapolants have not settled when the schedule is exhausted.
    """
    eps_done, vals, errs, extraps = [], [], [], []
    window = {}
    prop_err = 0.0
    diff = math.inf
    for eps in schedule.values:
        v, e = evaluate(eps)
        eps_done.append(eps)
        vals.append(complex(v))
        errs.append(float(e))
        prev_t = vals[-1]
        best = (math.inf, vals[-1], errs[-1])
        current = {}
        for d in range(1, min(len(vals) - 1, schedule.depth) + 1):
            h = np.asarray(eps_done[-d - 1:]) ** schedule.order
            w = _lagrange_weights_at_zero(h)
            t = complex(np.dot(w, vals[-d - 1:]))
            current[d] = t
            # disagreement with the next lower degree and with the same
            # degree on the previous window
            est = abs(t - prev_t)
            if d in window:
                est = max(est, abs(t - window[d]))
            if est < best[0]:
                best = (est, t, float(np.dot(np.abs(w), errs[-d - 1:])))
            prev_t = t
        window = current
        ext, prop_err = best[1], best[2]
        extraps.append(ext)
        if len(extraps) >= 3:
            diff = abs(extraps[-1] - extraps[-2])
            prev = abs(extraps[-2] - extraps[-3])
            tol = schedule.rtol * abs(ext) + schedule.atol
            if diff <= tol and prev <= 10 * tol:
                return QuadratureOutcome(ext, diff + prop_err, list(zip(eps_done, vals)), extraps, True)
    outcome = QuadratureOutcome(extraps[-1], diff + prop_err, list(zip(eps_done, vals)), extraps, False)
    raise ConvergenceError(
        f"{label}-extrapolation did not converge (last difference {diff:.3e})", outcome=outcome
    )


# ---------------------------------------------------------------------------
# integration by parts on the tail


@dataclass(frozen=True)
class TailTerm:
    """``coef * x**power * eps**chi_order * chi^{(chi_order)}(eps x)``."""

    coef: complex
    power: float
    chi_order: int


@dataclass(frozen=True)
class IBPTail:
    """Tail integrand after repeated integration by parts.

    ``int_{x0}^inf e^{i s x^p} x^{q-1} eps^k0 chi^{(k0)}(eps x) dx`` equals
    ``boundary_value + int_{x0}^inf e^{i s x^p} sum(terms) dx``.
    """

    p: float
    q: float
    sign: Sign
    times: int
    x0: float
    terms: tuple
    boundary: tuple
    chi_order: int = 0

    @property
    def effective_order(self) -> float:
        """Uniform-in-eps order of the transformed integrand, ``q - 1 - times*p``."""
        return self.q - 1.0 - self.times * self.p

    @property
    def required_times(self) -> int:
        """Fewest applications after which the tail is absolutely integrable."""
        return max(0, math.floor(self.q / self.p) + 1)

    @property
    def absolutely_integrable(self) -> bool:
        return self.effective_order < -1.0

    @property
    def max_chi_order(self) -> int:
        orders = [t.chi_order for t in self.terms + self.boundary]
        return max(orders) if orders else 0

    def _sum_terms(self, terms, x, eps, chi):
        x = np.asarray(x, dtype=float)
        d = chi.derivatives(self.max_chi_order, eps * x)
        out = np.zeros(x.shape, dtype=complex)
        for t in terms:
            out += t.coef * x ** t.power * eps ** t.chi_order * d[t.chi_order]
        return out

    def integrand(self, x, eps, chi):
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * int(self.sign) * x ** self.p)
        return phase * self._sum_terms(self.terms, x, eps, chi)

    def boundary_value(self, eps, chi) -> complex:
        phase = cmath.exp(1j * int(self.sign) * self.x0 ** self.p)
        return complex(phase * self._sum_terms(self.boundary, np.array([self.x0]), eps, chi)[0])

    def describe(self):
        return {
            "x0": self.x0,
            "times": self.times,
            "effective_order": self.effective_order,
            "required_times": self.required_times,
            "absolutely_integrable": self.absolutely_integrable,
            "terms": [
                {"coef": {"re": t.coef.real, "im": t.coef.imag}, "power": t.power, "chi_order": t.chi_order}
                for t in self.terms
            ],
        }


def _merge(terms):
    acc = {}
    for t in terms:
        key = (round(t.power, 12), t.chi_order)
        acc[key] = acc.get(key, 0j) + t.coef
    return tuple(TailTerm(c, a, j) for (a, j), c in sorted(acc.items()) if c != 0)


def default_split_point(p, q, times=0):
    """``max(1, (2q/p)**(1/p), ((times + q)/p)**(1/p))``.

    The last entry keeps every integration-by-parts factor below one at the
    split point, so the boundary terms do not grow with ``times``.
    """
    return max(1.0, (2.0 * q / p) ** (1.0 / p), ((times + q) / p) ** (1.0 / p))


def default_ibp_times(p, q):
    """Number of integration-by-parts steps used by the engine.

    Enough steps that every tail term decays fast enough to be truncated
    within roughly ``_PANEL_TARGET`` half periods.  For ``p <= 1`` only the
    pure power terms are driven down; terms carrying cutoff derivatives are
    truncated by the decay of the cutoff instead.
    """
    for k in range(1, _MAX_IBP + 1):
        x0 = default_split_point(p, q, k)
        xmax = max(2.0 * x0, (x0 ** p + math.pi * _PANEL_TARGET) ** (1.0 / p))
        need = -1.0 - 32.0 / math.log(xmax)
        if p <= 1:
            if q - 1.0 - k * p <= -4.0:
                return k
        elif q - 1.0 - k * p <= need and q - 1.0 - k * (p - 1.0) <= need:
            return k
    return _MAX_IBP


def ibp_precondition(p, q, times=None, sign="plus", chi_order=0, x0=None) -> IBPTail:
    """Apply the transpose of ``L = (1/(p x^{p-1})) (1/i) d/dx`` ``times`` times.

    The starting integrand is ``x**(q-1) eps**chi_order chi^{(chi_order)}(eps x)``
    on ``[x0, inf)``.  Boundary terms at infinity vanish because the cutoff
    decays; those at ``x0`` are collected in ``boundary``.
    """
    if not (p > 0 and q > 0):
        raise DomainError(f"integration by parts needs p > 0 and q > 0, got ({p}, {q})")
    sign = Sign.parse(sign)
    if times is None:
        times = default_ibp_times(p, q)
    if times < 0:
        raise DomainError("times must be nonnegative")
    if x0 is None:
        x0 = default_split_point(p, q, times)
    if x0 <= 0:
        raise DomainError("the split point must be positive")
    s = int(sign)
    terms = (TailTerm(1.0 + 0j, q - 1.0, chi_order),)
    boundary = []
    for _ in range(times):
        # g / (i s p x^{p-1})
        divided = [TailTerm(t.coef / (1j * s * p), t.power - (p - 1.0), t.chi_order) for t in terms]
        boundary.extend(TailTerm(-t.coef, t.power, t.chi_order) for t in divided)
        new = []
        for t in divided:
            if t.power != 0:
                new.append(TailTerm(-t.coef * t.power, t.power - 1.0, t.chi_order))
            new.append(TailTerm(-t.coef, t.power, t.chi_order + 1))
        terms = _merge(new)
    return IBPTail(p, q, sign, times, float(x0), terms, _merge(boundary), chi_order)


def _tail_bound(tail: IBPTail, chi: CutoffFunction, eps: float, X: float) -> float:
    total = 0.0
    u = eps * X
    for t in tail.terms:
        a, j = t.power, t.chi_order
        best = math.inf
        if a < -1.0:
            best = eps ** j * chi.sup_abs(j, u) * X ** (a + 1.0) / (-(a + 1.0))
        if u < chi.extent:
            best = min(best, eps ** (j - a - 1.0) * chi.tail_moment(j, a, u))
        else:
            best = 0.0
        total += abs(t.coef) * best
    return total


def _truncation_point(tail, chi, eps, tol):
    X = tail.x0
    for _ in range(200):
        X *= 1.5
        if _tail_bound(tail, chi, eps, X) <= tol:
            return X
        if tail.p * math.log(X) > math.log(np.pi * _MAX_TAIL_PANELS):
            break
    raise ConvergenceError(f"could not truncate the regularized tail (eps={eps:g}, X={X:.3g})")


def _regularized_at(tail: IBPTail, chi: CutoffFunction, eps: float):
    p, q, s, k0 = tail.p, tail.q, int(tail.sign), tail.chi_order

    def near_g(x):
        return np.exp(1j * s * x ** p) * eps ** k0 * chi.derivative(k0, eps * x)

    near = integrate_weighted_power(near_g, q, tail.x0, p_phase=p, atol=_QUAD_ATOL)
    X = _truncation_point(tail, chi, eps, _TAIL_TOL)
    pts = power_phase_breakpoints(tail.x0, X, p, max_panels=_MAX_TAIL_PANELS)
    far = integrate(lambda x: tail.integrand(x, eps, chi), pts, atol=_QUAD_ATOL)
    value = near.value + tail.boundary_value(eps, chi) + far.value
    return value, near.error + far.error + _TAIL_TOL


def default_schedule(p, chi=None) -> EpsilonSchedule:
    """``eps = 2**-j`` for ``j = 3..12``, continued further when needed.

    For ``p < 1`` the coefficients of the small-``eps`` expansion grow like
    ``Gamma(2k/p)``, so the extrapolation needs smaller ``eps``; those are
    cheap because the number of half periods up to ``1/eps`` is ``eps**-p``.
    A compactly supported cutoff adds exponentially small but, at moderate
    ``eps``, large corrections that no power of ``eps`` captures; two more
    halvings keep enough clean points.
    """
    stop = 12 if p >= 1 else 12 + math.ceil(8.0 * (1.0 / p - 1.0))
    if chi is not None and chi.kind == "bump" and p <= 1:
        stop += 2
    return EpsilonSchedule.geometric(3, min(stop, 40))


def _check_pq(p, q):
    if not (isinstance(p, (int, float)) and p > 0 and math.isfinite(p)):
        raise DomainError(f"p must be a positive real, got {p!r}")
    if isinstance(q, complex) and q.imag != 0:
        raise DomainError(f"the numerical engine needs real q, got {q!r}")
    q = float(q.real if isinstance(q, complex) else q)
    if not q > 0:
        raise DomainError(f"the oscillatory integral needs q > 0, got q = {q}")
    return float(p), q


def regularized_integral(p, q, sign="plus", chi="gaussian", schedule=None, lam=1.0) -> QuadratureOutcome:
    """Oscillatory integral ``Os-int_0^inf exp(+/- i lam x**p) x**(q-1) dx``.

    Computed as the ``eps -> 0`` limit of the ``chi(eps x)``-regularized
    integrals.  For ``lam != 1`` the result is rescaled by ``lam**(-q/p)``
    (per-eps values refer to the ``lam = 1`` problem).
    """
    p, q = _check_pq(p, q)
    if not lam > 0:
        raise DomainError("lam must be positive")
    chi = get_cutoff(chi)
    schedule = schedule or default_schedule(p, chi)
    tail = ibp_precondition(p, q, sign=sign)
    out = extrapolate_to_zero(lambda e: _regularized_at(tail, chi, e), schedule)
    if lam != 1.0:
        scale = lam ** (-q / p)
        out.value *= scale
        out.error_estimate *= scale
        out.extrapolants = [v * scale for v in out.extrapolants]
    return out


def chi_derivative_integral(p, q, k, sign="plus", chi="gaussian", schedule=None) -> QuadratureOutcome:
    """Limit of ``int_0^inf exp(+/- i x**p) x**(q-1) (d/dx)^k [chi(eps x)] dx``; tends to 0."""
    p, q = _check_pq(p, q)
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    chi = get_cutoff(chi)
    schedule = schedule or default_schedule(p, chi)
    tail = ibp_precondition(p, q, sign=sign, chi_order=int(k))
    return extrapolate_to_zero(lambda e: _regularized_at(tail, chi, e), schedule)


def regularized_line_integral(m, sign="plus", lam=1.0, chi="gaussian", schedule=None) -> QuadratureOutcome:
    """``Os-int_{-inf}^{inf} exp(+/- i lam x**m) dx`` for a positive integer ``m``.

    The negative half line is reflected onto the positive one, where the
    phase becomes ``+/- (-1)**m lam y**m``.
    """
    if int(m) != m or m < 1:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    sign = Sign.parse(sign)
    right = regularized_integral(m, 1.0, sign, chi, schedule, lam)
    left_sign = Sign(int(sign) * (-1) ** int(m))
    left = regularized_integral(m, 1.0, left_sign, chi, schedule, lam)
    per_eps = [(e, a + b) for (e, a), (_, b) in zip(right.per_epsilon_values, left.per_epsilon_values)]
    return QuadratureOutcome(
        right.value + left.value,
        right.error_estimate + left.error_estimate,
        per_eps,
        [],
        right.converged and left.converged,
    )


# ---------------------------------------------------------------------------
# independent oracles


def rotated_contour_oracle(p, q, sign="plus", rtol=1e-14) -> complex:
    """``e^{+/- i pi q/(2p)} int_0^inf e^{-t^p} t^{q-1} dt`` by real quadrature.

    Rotating the half line onto the ray ``arg z = +/- pi/(2p)`` (Cauchy's
    theorem on a sector) turns the oscillatory integrand into a decaying one.
    The real integral is computed with ``u = t**q``: ``(1/q) int_0^inf
    exp(-u**(p/q)) du``; no Gamma function is involved.
    """
    p, q = _check_pq(p, q)
    sign = Sign.parse(sign)
    r = p / q
    upper = 42.0 ** (1.0 / r)
    pts = np.concatenate([[0.0], geometric_breakpoints(upper * 1e-8, upper, ratio=2.0)])
    res = integrate(lambda u: np.exp(-u ** r), pts, atol=1e-300, rtol=rtol)
    radial = res.value.real / q
    return cmath.exp(int(sign) * 0.5j * math.pi * q / p) * radial


def abel_oracle(q, schedule=None, sign="plus") -> QuadratureOutcome:
    """``lim_{tau->0} int_0^inf e^{+/- ix} x^{q-1} e^{-tau x} dx`` by damped quadrature.

    Each damped integral is absolutely convergent and computed directly on
    half-period panels; the limit is extrapolated linearly in ``tau``
    (the damped integral is analytic, not even, in ``tau``).
    """
    _, q = _check_pq(1.0, q)
    s = int(Sign.parse(sign))
    if schedule is None:
        schedule = EpsilonSchedule(order=1, depth=6)

    def damped(tau):
        # x^{q-1} e^{-tau x} < 1e-17 * peak beyond this point
        b = 45.0 / tau
        if q > 1:
            for _ in range(5):
                b = (45.0 + (q - 1.0) * math.log(max(b * tau, 1.0))) / tau
        g = lambda x: np.exp((1j * s - tau) * x)
        res = integrate_weighted_power(g, q, b, p_phase=1.0, atol=_QUAD_ATOL)
        return res.value, res.error

    return extrapolate_to_zero(damped, schedule, label="tau")
