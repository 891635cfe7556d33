"""The Lobachevsky function ``lob(x) = -int_0^x log|2 sin t| dt``.

Two independent evaluation routes are shipped:

* :func:`lob` sums the Fourier series ``1/2 sum_m sin(2 m x) / m^2`` in closed
  form.  After reduction of the argument to ``|x| <= pi/2`` the series equals
  ``1/2 Cl2(2x)`` and is evaluated through its Bernoulli expansion
  ``Cl2(u) = u - u log|u| + sum_k |B_2k| u^(2k+1) / (2k (2k+1)!)``, whose
  terms decay at least like ``4^-k`` on ``|u| <= pi``.
* :func:`lob_quadrature` integrates the definition with scipy's adaptive
  quadrature after removing the logarithmic singularity at 0 analytically.

:func:`lob_fourier` is the raw partial sum, kept for cross-checks only; its
error decays like ``1/N`` and it is not accurate enough for volumes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

LOB_MAX_ARG = math.pi / 6

_N_BERNOULLI = 40


def _clausen_coefficients(n: int) -> np.ndarray:
    b = special.bernoulli(2 * n)
    return np.array(
        [abs(b[2 * k]) / (2 * k * float(math.factorial(2 * k + 1))) for k in range(1, n + 1)]
    )


_COEF = _clausen_coefficients(_N_BERNOULLI)


@dataclass(frozen=True)
class LobEval:
    argument: float
    value: float
    method: str


def _reduce(x: float) -> float:
    """Reduce to the period (-pi/2, pi/2]."""
    r = math.fmod(x, math.pi)
    if r > math.pi / 2:
        r -= math.pi
    elif r <= -math.pi / 2:
        r += math.pi
    return r


def _clausen2(u: float) -> float:
    if u == 0.0:
        return 0.0
    u2 = u * u
    # Horner over odd powers u^3, u^5, ...
    acc = 0.0
    for c in _COEF[::-1]:
        acc = acc * u2 + c
    return u - u * math.log(abs(u)) + acc * u * u2


def lob(x: float) -> float:
    """Lobachevsky function, absolute error below 1e-14 for any finite ``x``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"lob argument must be finite, got {x!r}")
    r = _reduce(x)
    return 0.5 * _clausen2(2.0 * r)


def lob_fourier(x: float, terms: int = 10_000) -> float:
    """Partial sum of the defining Fourier series (slow, O(1/terms) error)."""
    m = np.arange(1, terms + 1, dtype=float)
    return 0.5 * float(np.sum(np.sin(2.0 * m * x) / (m * m)))


def _lob_quad_half(x: float) -> float:
    # 0 <= x <= pi/2: log|2 sin t| = log(2t) + log(sin t / t), the latter smooth.
    if x == 0.0:
        return 0.0
    smooth, _ = integrate.quad(
        lambda t: math.log(math.sin(t) / t) if t > 0.0 else 0.0,
        0.0, x, epsabs=1e-14, epsrel=1e-13, limit=200,
    )
    singular = x * math.log(2.0 * x) - x
    return -(singular + smooth)


def lob_quadrature(x: float) -> float:
    """Adaptive quadrature of the defining integral, for ``|x| <= pi``."""
    x = float(x)
    if not math.isfinite(x) or abs(x) > math.pi:
        raise ValueError(f"lob_quadrature needs |x| <= pi, got {x!r}")
    sign = -1.0 if x < 0 else 1.0
    ax = abs(x)
    if ax <= math.pi / 2:
        return sign * _lob_quad_half(ax)
    # int_0^pi log|2 sin t| dt = 0 and the integrand is symmetric about pi/2
    return -sign * _lob_quad_half(math.pi - ax)


def evaluate(x: float, method: str = "series") -> LobEval:
    if method == "series":
        return LobEval(x, lob(x), method)
    if method == "quadrature":
        return LobEval(x, lob_quadrature(x), method)
    raise ValueError(f"unknown method {method!r}")
