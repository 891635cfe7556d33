"""Horoball + hyperball coverings of the truncated orthoscheme ``F_p^(q,r)``.

The horoball is centred at the ideal vertex ``A0``; the hyperball has the
truncating plane ``P0 P1 P2`` (``x3 = 0``) as base.  Both are surfaces of
revolution about the axis ``A0 P0``, so they meet in a circle; fixing one
point of that circle on an edge of the cell determines both balls.  Of the six
edges through which the circle can pass only ``A0A1``, ``A1A2`` and ``A2P2``
give coverings.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import balls, lorentz
from .optimize import Minimum2D, NoValidPointError, minimize_1d, minimize_2d
from .orthoscheme import (TruncatedOrthoscheme, base_triangle_area, truncated_orthoscheme,
                          volume3)

EDGES = ("A0A1", "A0A2", "A1A2", "A0P0", "A1P1", "A2P2", "P0P1", "P1P2", "P2P0")
DEFAULT_SAMPLES = 257

NON_EXTENDABLE_NOTE = ("locally optimal only: the cell with non-integer p does not generate "
                       "a tiling, so the configuration cannot be extended to all of H^3")


class CoveringCase(enum.Enum):
    ON_A0P0 = "a0p0"
    ON_A0A2 = "a0a2"
    ON_A1P1 = "a1p1"
    ON_A0A1 = "a0a1"
    ON_A1A2 = "a1a2"
    ON_A2P2 = "a2p2"

    @property
    def realizable(self) -> bool:
        return self in REALIZABLE

    @property
    def edge(self) -> tuple[str, str]:
        """Edge carrying the case point, as (start, end) of its parametrization."""
        return _CASE_EDGES[self]

    @classmethod
    def parse(cls, text: str) -> "CoveringCase":
        key = text.strip().lower().replace("on", "", 1) if text.lower().startswith("on") else text.strip().lower()
        for c in cls:
            if c.value == key:
                return c
        raise ValueError(f"unknown case {text!r}; expected one of {[c.value for c in cls]}")


REALIZABLE = frozenset({CoveringCase.ON_A0A1, CoveringCase.ON_A1A2, CoveringCase.ON_A2P2})

# parametrizations X(t) = start + t (end - start), matching
# Q(q) = (1, 0, qy, q z1 + 1 - q), U(u) = (1, ux, y, u z2 + (1-u) z1),
# R(r) = (1, x, y, r z2), T(t) = (1, tx, ty, t z2 + 1 - t), V(v) = (1, 0, y, v z1)
_CASE_EDGES = {
    CoveringCase.ON_A0A1: ("A0", "A1"),
    CoveringCase.ON_A1A2: ("A1", "A2"),
    CoveringCase.ON_A2P2: ("P2", "A2"),
    CoveringCase.ON_A0A2: ("A0", "A2"),
    CoveringCase.ON_A1P1: ("P1", "A1"),
    CoveringCase.ON_A0P0: ("P0", "A0"),
}

# best family per realizable case, with the integer p of the printed tables
TABLE_FAMILIES = {
    CoveringCase.ON_A0A1: ((6, 3), (4, 5, 6)),
    CoveringCase.ON_A1A2: ((3, 6), (7, 8, 9)),
    CoveringCase.ON_A2P2: ((4, 4), (5, 6, 7)),
}


@dataclass(frozen=True)
class BallPair:
    horoball: balls.Horoball
    hyperball: balls.Hyperball

    @property
    def s(self) -> float:
        return self.horoball.s

    @property
    def h(self) -> float:
        return self.hyperball.h

    def contains(self, points, eps: float = 1e-10):
        return self.horoball.contains(points, eps) | self.hyperball.contains(points, eps)


@dataclass(frozen=True)
class EdgeCoverage:
    """Coverage of one edge.

    ``covered_sampled`` comes from the sampled points and ``covered_exact``
    from the two membership intervals; ``covered`` requires both.
    """
    covered_sampled: bool
    covered_exact: bool
    witness: Optional[np.ndarray] = None
    horo_interval: Optional[tuple[float, float]] = None
    hyper_interval: Optional[tuple[float, float]] = None

    @property
    def covered(self) -> bool:
        return self.covered_sampled and self.covered_exact


@dataclass(frozen=True)
class CoverageReport:
    edges: dict
    a1p1_longer: bool
    orderings: dict = field(default_factory=dict)
    vertex_cover: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(e.covered for e in self.edges.values())

    @property
    def consistent(self) -> bool:
        """Sampling agrees with the exact interval test on every edge."""
        return all(e.covered_sampled == e.covered_exact for e in self.edges.values())

    def uncovered(self) -> dict:
        return {k: e.witness for k, e in self.edges.items() if not e.covered}


@dataclass(frozen=True)
class CoveringEvaluation:
    orthoscheme: TruncatedOrthoscheme
    case: CoveringCase
    param: float
    pair: BallPair
    horoball_volume: float
    hyperball_volume: float
    cell_volume: float
    density: float
    coverage: CoverageReport

    @property
    def valid(self) -> bool:
        return self.coverage.overall

    def as_dict(self) -> dict:
        o = self.orthoscheme
        return {
            "p": o.p, "q": o.family[0], "r": o.family[1],
            "case": self.case.value, "param": self.param,
            "s": self.pair.s, "h": self.pair.h,
            "horoball_volume": self.horoball_volume,
            "hyperball_volume": self.hyperball_volume,
            "cell_volume": self.cell_volume,
            "density": self.density,
            "covering": self.coverage.overall,
            "uncovered_edges": {k: (None if w is None else [float(v) for v in w[1:]])
                                for k, w in self.coverage.uncovered().items()},
        }


@functools.lru_cache(maxsize=4096)
def _cell_data(p: float, q: int, r: int, allow: bool) -> tuple[float, float]:
    orth = truncated_orthoscheme(p, (q, r), allow)
    return volume3(orth.ctx), base_triangle_area(orth)


def cell_volume(orth: TruncatedOrthoscheme) -> float:
    return _cell_data(orth.p, orth.family[0], orth.family[1], True)[0]


def _base_area(orth: TruncatedOrthoscheme) -> float:
    return _cell_data(orth.p, orth.family[0], orth.family[1], True)[1]


def _edge_point(orth: TruncatedOrthoscheme, case: CoveringCase, param: float) -> np.ndarray:
    if not 0.0 <= param <= 1.0:
        raise ValueError(f"case parameter must lie in [0, 1], got {param!r}")
    V = orth.vertices()
    a, b = case.edge
    return balls.point_at(V[a], V[b], param)


def case_point(orth: TruncatedOrthoscheme, case: CoveringCase, param: float) -> np.ndarray:
    """Point of the intersection circle on the case's edge."""
    if not case.realizable:
        raise ValueError(f"case {case.value} does not give a covering")
    return _edge_point(orth, case, param)


def balls_from_point(orth: TruncatedOrthoscheme, point) -> BallPair:
    """Horoball at ``A0`` and hyperball over the truncating plane, both through ``point``."""
    X = np.asarray(point, dtype=float)
    X = X / X[0]
    if X[3] < -1e-15:
        raise ValueError("point lies below the truncating plane")
    horo = balls.horoball_through(X)
    hyper = balls.hyperball_through(X, orth.truncating_plane)
    return BallPair(horo, hyper)


def _intervals(ball, A, B) -> Optional[tuple[float, float]]:
    """Sub-interval of [0, 1] of the segment A B inside the (convex) ball."""
    hits = balls.line_intersection(ball, A, B)
    if hits.degenerate:
        return (0.0, 1.0)
    if len(hits.roots) < 2:
        return None
    lo, hi = max(0.0, hits.roots[0]), min(1.0, hits.roots[1])
    if lo > hi:
        return None
    mid = balls.point_at(A, B, 0.5 * (lo + hi))
    if not bool(ball.contains(mid, 1e-10)):
        return None
    return (lo, hi)


def _first_gap(intervals, tol: float = 1e-12) -> Optional[float]:
    """Midpoint of the first stretch of [0, 1] outside every interval, if any."""
    reach = 0.0
    for lo, hi in sorted(iv for iv in intervals if iv is not None):
        if lo > reach + tol:
            return 0.5 * (reach + lo)
        reach = max(reach, hi)
    if reach < 1.0 - tol:
        return 0.5 * (reach + 1.0)
    return None


def _chebyshev(n: int) -> np.ndarray:
    k = np.arange(n)
    return 0.5 * (1.0 - np.cos(np.pi * k / (n - 1)))


def _edge_ordering(pair: BallPair, A, B) -> tuple[Optional[float], Optional[float]]:
    """(z where the horoball part of edge AB ends, z where the hyperball part ends).

    The horoball covers the high end of an edge and the hyperball the low end;
    the two pieces join up exactly when the hyperball reaches at least as high.
    """
    zs = (A[3] / A[0], B[3] / B[0])
    out = []
    for ball, pick in ((pair.horoball, min), (pair.hyperball, max)):
        iv = _intervals(ball, A, B)
        if iv is None:
            out.append(None)
            continue
        z = [(1.0 - t) * zs[0] + t * zs[1] for t in iv]
        out.append(pick(z))
    return out[0], out[1]


def verify_coverage(orth: TruncatedOrthoscheme, pair: BallPair,
                    samples_per_edge: int = DEFAULT_SAMPLES, structural: bool = True) -> CoverageReport:
    """Check that the two balls cover every edge of the cell.

    Each edge is sampled at Chebyshev-spaced parameters; a sampled point that
    lies in neither ball becomes the edge's witness.  Since both balls are
    convex, the exact covered set on an edge is a union of two intervals, and
    that exact answer is recorded alongside.
    """
    if samples_per_edge < 2:
        raise ValueError("need at least two samples per edge")
    V = orth.vertices()
    ts = _chebyshev(samples_per_edge)
    edges = {}
    for name in EDGES:
        A, B = V[name[:2]], V[name[2:]]
        pts = (1.0 - ts)[:, None] * A + ts[:, None] * B
        ok = pair.contains(pts)
        hi_, hy_ = _intervals(pair.horoball, A, B), _intervals(pair.hyperball, A, B)
        gap = _first_gap([hi_, hy_])
        witness = None
        if gap is not None:
            witness = balls.point_at(A, B, gap)
        elif not ok.all():
            witness = pts[int(np.argmin(ok))]
        edges[name] = EdgeCoverage(bool(ok.all()), gap is None, witness, hi_, hy_)
    if not structural:
        return CoverageReport(edges, True)
    d1 = lorentz.distance(orth.A1, orth.P1)
    d2 = lorentz.distance(orth.A2, orth.P2)
    orderings = {
        "S": _edge_ordering(pair, V["P0"], V["A0"]),
        "T": _edge_ordering(pair, V["A2"], V["A0"]),
        "Q": _edge_ordering(pair, V["A1"], V["A0"]),
        "V": _edge_ordering(pair, V["P1"], V["A1"]),
        "U": _edge_ordering(pair, V["A2"], V["A1"]),
        "R": _edge_ordering(pair, V["P2"], V["A2"]),
    }
    vertex_cover = {}
    for k, X in V.items():
        in_horo = bool(pair.horoball.contains(X, 1e-10))
        in_hyper = bool(pair.hyperball.contains(X, 1e-10))
        vertex_cover[k] = ("both" if in_horo and in_hyper else
                           "horo" if in_horo else "hyper" if in_hyper else None)
    return CoverageReport(edges, d1 >= d2, orderings, vertex_cover)


def ordering_holds(report: CoverageReport, key: str) -> Optional[bool]:
    """True when the hyperball part of the edge reaches the horoball part."""
    zh, zy = report.orderings[key]
    if zh is None or zy is None:
        return None
    return bool(zy >= zh - 1e-12)


def horoball_edge_points(orth: TruncatedOrthoscheme, ball: balls.Horoball):
    """``S1, T1, Q1``: the horosphere on the lines ``A0P0, A0A2, A0A1`` (other than A0)."""
    A0 = orth.A0
    pts = []
    for B in (orth.P0, orth.A2, orth.A1):
        roots = [t for t in balls.line_intersection(ball, A0, B).roots if abs(t) > 1e-12]
        if not roots:
            raise ValueError("horosphere does not meet an edge line through A0")
        t = max(roots, key=abs)
        pts.append(balls.point_at(A0, B, t))
    return tuple(pts)


def piece_volumes(orth: TruncatedOrthoscheme, pair: BallPair) -> tuple[float, float]:
    """(horoball piece volume, hyperball piece volume)."""
    S1, T1, Q1 = horoball_edge_points(orth, pair.horoball)
    v_horo = balls.horoball_piece_volume_3d(pair.horoball, S1, T1, Q1)
    v_hyper = balls.hyperball_piece_volume_3d(pair.h, _base_area(orth))
    return v_horo, v_hyper


def evaluate(orth: TruncatedOrthoscheme, case: CoveringCase, param: float,
             samples_per_edge: int = DEFAULT_SAMPLES, structural: bool = True) -> CoveringEvaluation:
    X = _edge_point(orth, case, param)
    pair = balls_from_point(orth, X)
    v_horo, v_hyper = piece_volumes(orth, pair)
    vol = cell_volume(orth)
    report = verify_coverage(orth, pair, samples_per_edge, structural)
    return CoveringEvaluation(orth, case, float(param), pair, v_horo, v_hyper, vol,
                              (v_horo + v_hyper) / vol, report)


def density(orth: TruncatedOrthoscheme, case: CoveringCase, param: float,
            samples_per_edge: int = DEFAULT_SAMPLES) -> CoveringEvaluation:
    """Full evaluation record; ``valid`` is False when the edges are not covered."""
    if not case.realizable:
        raise ValueError(f"case {case.value} does not give a covering; use refute_case")
    return evaluate(orth, case, param, samples_per_edge)


def covering_density(orth: TruncatedOrthoscheme, case: CoveringCase, param: float,
                     samples_per_edge: int = DEFAULT_SAMPLES) -> float:
    """Density if the configuration covers the cell, else ``inf``."""
    ev = evaluate(orth, case, param, samples_per_edge, structural=False)
    return ev.density if ev.coverage.overall else math.inf


@dataclass(frozen=True)
class CaseOptimum:
    param: float
    density: float
    evaluation: CoveringEvaluation


def optimize_case(family: tuple[int, int], p: float, case: CoveringCase,
                  allow_nonextendable: bool = False, tol: float = 1e-10,
                  n_grid: int = 101, samples_per_edge: int = DEFAULT_SAMPLES) -> CaseOptimum:
    """Thinnest covering of one case over its edge parameter in (0, 1]."""
    if not case.realizable:
        raise ValueError(f"case {case.value} does not give a covering")
    orth = truncated_orthoscheme(p, family, allow_nonextendable)
    m = minimize_1d(lambda t: covering_density(orth, case, t, samples_per_edge),
                    0.0, 1.0, tol, None, n_grid)
    ev = density(orth, case, m.x, samples_per_edge)
    return CaseOptimum(m.x, ev.density, ev)


@dataclass(frozen=True)
class RealPOptimum:
    p: float
    param: float
    density: float
    case: CoveringCase
    locally_optimal_only: bool = True
    note: str = NON_EXTENDABLE_NOTE


def optimize_real_p(p_range: tuple[float, float] = (6.0, 7.0),
                    case: CoveringCase = CoveringCase.ON_A1A2, tol: float = 1e-7,
                    n_grid: int = 21, n_grid_inner: int = 41,
                    samples_per_edge: int = 65) -> RealPOptimum:
    """Minimize the ``{p,3,6}`` density jointly over real ``p`` and the case parameter."""
    lo, hi = p_range
    if not 6.0 <= lo < hi <= 7.0:
        raise ValueError("real-p range must lie within [6, 7]")

    def f(p: float, u: float) -> float:
        orth = truncated_orthoscheme(p, (3, 6), allow_nonextendable=True)
        return covering_density(orth, case, u, samples_per_edge)

    m: Minimum2D = minimize_2d(f, ((lo, hi), (0.0, 1.0)), tol=tol, inner_tol=1e-10,
                               n_grid=n_grid, n_grid_inner=n_grid_inner)
    # confirm with the default sampling density
    orth = truncated_orthoscheme(m.x, (3, 6), allow_nonextendable=True)
    ev = density(orth, case, m.y)
    if not ev.valid:
        raise NoValidPointError("real-p optimum fails the full coverage check")
    return RealPOptimum(m.x, m.y, ev.density, case)


@dataclass(frozen=True)
class Refutation:
    case: CoveringCase
    params: np.ndarray
    refuted: np.ndarray
    witness_edges: list
    tangency: Optional[np.ndarray] = None
    gaps: dict = field(default_factory=dict)

    @property
    def all_refuted(self) -> bool:
        return bool(np.all(self.refuted))


# edges on which an uncovered point must show up
REFUTING_EDGES = {
    CoveringCase.ON_A0A2: ("A1A2", "A0A1"),
    CoveringCase.ON_A1P1: ("A2P2", "A1A2"),
    CoveringCase.ON_A0P0: tuple(e for e in EDGES if e not in ("A0P0",)),
}


def refutation_grid(n: int = 101) -> np.ndarray:
    """``n`` cell-centred points of (0, 1); both endpoints are degenerate for some cases."""
    return (np.arange(n) + 0.5) / n


def _touch_only_on_axis(pair: BallPair, n: int = 64) -> bool:
    """Horosphere lies strictly above the hypersphere off the axis."""
    s, h = pair.s, pair.h
    w = 1.0 - s
    th2 = math.tanh(h) ** 2
    rho_max = min(math.sqrt(w / 2.0), 1.0)
    for rho in np.linspace(0.0, rho_max, n)[1:]:
        # lower branch of the horosphere ellipse at radius rho
        inner = 1.0 - 2.0 * rho * rho / w
        if inner < 0:
            continue
        z_horo = (s + 1.0) / 2.0 - w / 2.0 * math.sqrt(inner)
        z_hyper = math.sqrt(max(0.0, th2 * (1.0 - rho * rho)))
        if z_horo <= z_hyper:
            return False
    return True


def refute_case(orth: TruncatedOrthoscheme, case: CoveringCase,
                params=None, samples_per_edge: int = DEFAULT_SAMPLES) -> Refutation:
    """Show that a non-realizable case leaves an edge uncovered for every parameter."""
    if case.realizable:
        raise ValueError(f"case {case.value} is realizable; nothing to refute")
    params = refutation_grid() if params is None else np.asarray(params, dtype=float)
    named = REFUTING_EDGES[case]
    refuted = np.zeros(len(params), dtype=bool)
    tangency = np.zeros(len(params), dtype=bool) if case is CoveringCase.ON_A0P0 else None
    witness_edges = []
    gaps = {}
    for i, t in enumerate(params):
        X = _edge_point(orth, case, float(t))
        pair = balls_from_point(orth, X)
        rep = verify_coverage(orth, pair, samples_per_edge)
        # a witness must lie strictly outside both balls
        bad = [e for e in named if not rep.edges[e].covered
               and not bool(pair.contains(rep.edges[e].witness, 0.0))]
        witness_edges.append({e: rep.edges[e].witness for e in bad})
        refuted[i] = bool(bad)
        if tangency is not None:
            tangency[i] = abs(pair.s - math.tanh(pair.h)) <= 1e-12 and _touch_only_on_axis(pair)
        for key in ("U", "Q", "V", "R"):
            gaps.setdefault(key, []).append(rep.orderings[key])
    return Refutation(case, params, refuted, witness_edges, tangency, gaps)
