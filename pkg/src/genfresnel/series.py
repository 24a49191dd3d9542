"""Truncated power series in one variable (coefficient arrays, lowest first)."""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def series_mul(a, b, n):
    """Product of two series truncated to ``n`` coefficients."""
    out = np.convolve(np.asarray(a), np.asarray(b))[:n]
    if out.size < n:
        out = np.concatenate([out, np.zeros(n - out.size, dtype=out.dtype)])
    return out


def series_reciprocal(a, n):
    """``1 / a`` to ``n`` coefficients; needs ``a[0] != 0``."""
    a = np.asarray(a, dtype=float)
    a = np.concatenate([a, np.zeros(max(0, n - a.size))])[:n]
    if a[0] == 0:
        raise DomainError("series with zero constant term has no reciprocal")
    out = np.zeros(n)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        out[k] = -np.dot(a[1:k + 1], out[k - 1::-1][:k]) / a[0]
    return out


def series_exp(g, n):
    """``exp(g)`` to ``n`` coefficients, from ``E' = g' E``."""
    g = np.asarray(g, dtype=float)
    g = np.concatenate([g, np.zeros(max(0, n - g.size))])[:n]
    out = np.zeros(n)
    out[0] = np.exp(g[0])
    k = np.arange(n)
    for m in range(1, n):
        out[m] = np.dot(k[1:m + 1] * g[1:m + 1], out[m - 1::-1][:m]) / m
    return out


def gaussian_series(n):
    """Coefficients of ``exp(-x**2/2)``: ``(-1/2)**j / j!`` at ``x**(2j)``."""
    out = np.zeros(n)
    term = 1.0
    for j in range(0, (n + 1) // 2):
        out[2 * j] = term
        term *= -0.5 / (j + 1)
    return out
