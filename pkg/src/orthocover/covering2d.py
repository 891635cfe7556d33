"""Horocycle + hypercycle coverings of the Lambert quadrilateral ``F_a``.

The horocycle is centred at the ideal vertex ``A0`` and meets the line
``A0 P0`` at ``T = (1, t a, 1 - t a^2)``.  The hypercycle has base line
``A1 P1`` and passes through the point ``M`` where the two cycles meet on the
boundary of ``F_a``:

* type 1: ``M = T`` lies on ``A0 P0``, ``0 < t <= 1``;
* type 2: ``M`` lies on ``P0 P1``, ``1 <= t < 2 / (1 + 2a^2 - a^4)``.

The horocycle reaches the line ``x = a`` only for ``t >= 1``, so the two
ranges meet at ``t = 1`` where ``M = T = P0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import balls, lorentz
from .optimize import Minimum, minimize_1d
from .orthoscheme import LambertDomain, area2

COVERING_BOUND = math.sqrt(12.0) / math.pi
BASE_LINE = np.array([0.0, 0.0, 1.0])


def t_max_type2(a: float) -> float:
    """Upper end of the type-2 range, where ``M`` reaches ``P1``."""
    return 2.0 / (1.0 + 2.0 * a * a - a ** 4)


def _check_a(a: float) -> None:
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a!r}")


def _check_t(kind: int, a: float, t: float) -> None:
    _check_a(a)
    if kind == 1:
        if not 0.0 < t <= 1.0:
            raise ValueError(f"type 1 needs 0 < t <= 1, got t={t!r}")
    elif kind == 2:
        if t < 1.0:
            raise ValueError(
                f"t={t!r} < 1: the horocycle does not reach P0P1, M lies on A0P0 (type 1 regime)")
        if not t < t_max_type2(a):
            raise ValueError(f"type 2 needs t < {t_max_type2(a)!r}, got t={t!r}")
    else:
        raise ValueError(f"covering type must be 1 or 2, got {kind!r}")


def horocyclic_term(a: float, t: float) -> float:
    """Printed horocycle-sector length ``2 sinh(arccosh(...) / 2)``."""
    arg = (2 * t * a * a + t - 4) / (2 * t - 4 + 2 * t * a * a)
    if arg < 1.0:
        if arg < 1.0 - 1e-12:
            raise ValueError(f"arccosh argument {arg!r} < 1")
        arg = 1.0
    return 2.0 * math.sinh(0.5 * math.acosh(arg))


def density_c1(a: float, t: float) -> float:
    """Closed-form density of the type-1 covering."""
    _check_t(1, a, t)
    base = math.acosh(1.0 / math.sqrt(1.0 - a * a))
    sinh_h = (1.0 - t * a * a) / (a * math.sqrt(2 * t - t * t - a * a * t * t))
    return (base * sinh_h + horocyclic_term(a, t)) / (math.pi / 2)


def type2_meeting_height(a: float, t: float) -> float:
    """Height ``m`` of ``M = (1, a, m)``, the lower crossing of the horocycle with ``x = a``."""
    k = math.sqrt(max(0.0, 2.0 * (t - 1.0) / t))
    return 1.0 - t * a * a / (2.0 - t) * (1.0 + k)


def density_c2(a: float, t: float) -> float:
    """Density of the type-2 covering; ``h2 = d(M, P1)`` from the coordinates of ``M``."""
    _check_t(2, a, t)
    m = type2_meeting_height(a, t)
    if not 0.0 <= m <= 1.0 - a * a + 1e-15:
        raise ValueError(f"M=(1,{a},{m}) off segment P0P1")
    sinh_h2 = m / math.sqrt(1.0 - a * a - m * m)
    base = math.acosh(1.0 / math.sqrt(1.0 - a * a))
    return (base * sinh_h2 + horocyclic_term(a, t)) / (math.pi / 2)


@dataclass(frozen=True)
class Covering2DConfig:
    a: float
    t: float
    kind: int
    M: np.ndarray
    T: np.ndarray
    horoball: balls.Horoball
    hyperball: balls.Hyperball

    @property
    def domain(self) -> LambertDomain:
        return LambertDomain(self.a)

    @property
    def S1(self) -> np.ndarray:
        return self.horoball.apex

    def horoball_volume(self) -> float:
        return balls.horoball_piece_volume_2d(self.horoball, self.S1, self.T)

    def hyperball_volume(self) -> float:
        return balls.hyperball_piece_volume_2d(self.hyperball.h, self.domain.base_length)

    def density(self) -> float:
        return (self.horoball_volume() + self.hyperball_volume()) / area2(self.domain)


def construct(a: float, t: float, kind: int) -> Covering2DConfig:
    """Build both cycles from ``(a, t)`` through the generic ball machinery."""
    _check_t(kind, a, t)
    dom = LambertDomain(a)
    T = balls.point_at(dom.A0, dom.P0, t)
    horo = balls.horoball_through(T)
    if kind == 1:
        M = T
    else:
        # parametrized from P0, next to the crossings, to keep the constant term small
        hits = balls.line_intersection(horo, dom.P0, dom.P1).roots
        if not hits:
            raise ValueError("horocycle misses line P0P1")
        # lowest crossing above P1 is where the hypercycle takes over
        tm = hits[-1]
        if not -1e-12 <= tm <= 1.0 + 1e-12:
            raise ValueError(f"M off segment P0P1 (parameter {tm!r})")
        M = balls.point_at(dom.P0, dom.P1, min(1.0, max(0.0, tm)))
    hyper = balls.hyperball_through(M, BASE_LINE)
    return Covering2DConfig(a, t, kind, M, T, horo, hyper)


def density_generic(a: float, t: float, kind: int) -> float:
    return construct(a, t, kind).density()


def verify_coverage(cfg: Covering2DConfig, samples_per_side: int = 1000) -> dict[str, object]:
    """Sample the four sides of ``F_a``; map side name to ``None`` or a witness point."""
    dom = cfg.domain
    k = np.arange(samples_per_side)
    ts = 0.5 * (1.0 - np.cos(np.pi * k / (samples_per_side - 1)))
    sides = {"A0A1": (dom.A0, dom.A1), "A1P1": (dom.A1, dom.P1),
             "P1P0": (dom.P1, dom.P0), "P0A0": (dom.P0, dom.A0)}
    out: dict[str, object] = {}
    for name, (A, B) in sides.items():
        pts = (1.0 - ts)[:, None] * A + ts[:, None] * B
        ok = cfg.horoball.contains(pts, 1e-10) | cfg.hyperball.contains(pts, 1e-10)
        out[name] = None if ok.all() else pts[int(np.argmin(ok))]
    return out


def is_covering(cfg: Covering2DConfig, samples_per_side: int = 1000) -> bool:
    return all(w is None for w in verify_coverage(cfg, samples_per_side).values())


def t_range(kind: int, a: float) -> tuple[float, float]:
    _check_a(a)
    if kind == 1:
        return (1e-9, 1.0)
    if kind == 2:
        return (1.0, t_max_type2(a) * (1.0 - 1e-12))
    raise ValueError(f"covering type must be 1 or 2, got {kind!r}")


def optimize2d(kind: int, a: float, tol: float = 1e-10) -> Minimum:
    """Thinnest covering of the given type for fixed ``a``; returns ``(t*, delta*)``."""
    lo, hi = t_range(kind, a)
    f = density_c1 if kind == 1 else density_c2
    return minimize_1d(lambda t: f(a, t), lo, hi, tol)
