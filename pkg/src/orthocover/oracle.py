"""Seeded Monte Carlo volumes in the Klein model.

The hyperbolic volume element of the Klein ball is
``(1 - |x|^2)^(-(n+1)/2)`` times the Euclidean one.  Points are drawn
uniformly in an axis-aligned box; the estimator of a sample is
``box_volume * weight * [inside region]``.  Samples beyond radius ``r_max``
(default ``1 - 1e-6``) carry zero weight so the estimator stays bounded.  This
suits compact regions; for regions reaching the sphere the clipped mass and the
heavy tail of the weight make the box estimator unreliable.

Regions reaching an ideal vertex have an estimator with unbounded variance
under box sampling (the weight blows up at the cusp).  :func:`mc_volume_cone`
samples such regions in cone coordinates ``X = apex + lam * sum(beta_i g_i)``
with ``beta`` uniform on the simplex and ``lam = lam_max * U**k``; the Jacobian
``lam^(n-1)`` absorbs the singular weight and the estimator stays bounded.

Random streams come from numpy's PCG64 seeded through ``SeedSequence.spawn``,
one child per batch, so results are reproducible for a given ``(seed,
samples, batch)`` and independent of how batches are scheduled.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import balls
from .orthoscheme import (LambertDomain, TruncatedOrthoscheme, area2, base_triangle_area,
                          volume3)

DEFAULT_SEED = 20190917
R_MAX = 1.0 - 1e-6
BATCH = 1_000_000


def default_seed() -> int:
    env = os.environ.get("ORTHOCOVER_SEED")
    return int(env) if env else DEFAULT_SEED


@dataclass(frozen=True)
class McEstimate:
    value: float
    stderr: float
    samples: int
    seed: int

    def agrees(self, exact: float, sigmas: float = 3.0) -> bool:
        return bool(abs(self.value - exact) <= sigmas * self.stderr)

    def z(self, exact: float) -> float:
        return (self.value - exact) / self.stderr if self.stderr > 0 else (
            0.0 if self.value == exact else math.inf)


Region = Callable[[np.ndarray], np.ndarray]


def _batch_moments(region: Region, lo, hi, n: int, count: int, r_max: float,
                   ss: np.random.SeedSequence) -> tuple[int, float, float]:
    rng = np.random.Generator(np.random.PCG64(ss))
    X = lo + (hi - lo) * rng.random((count, n))
    r2 = np.einsum("ij,ij->i", X, X)
    keep = r2 < r_max * r_max
    inside = np.zeros(count, dtype=bool)
    if keep.any():
        inside[keep] = region(X[keep])
    vals = np.zeros(count)
    sel = inside & keep
    vals[sel] = (1.0 - r2[sel]) ** (-(n + 1) / 2.0)
    vals *= float(np.prod(hi - lo))
    mean = float(vals.mean())
    m2 = float(((vals - mean) ** 2).sum())
    return count, mean, m2


def _merge(a, b):
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * nb / n, sa + sb + d * d * na * nb / n


def mc_volume(region: Region, box, n: int, samples: int, seed: int | None = None,
              r_max: float = R_MAX, batch: int = BATCH, workers: int = 1) -> McEstimate:
    """Hyperbolic volume of ``region`` within ``box`` (n = 2 or 3)."""
    if seed is None:
        seed = default_seed()
    lo, hi = (np.asarray(b, dtype=float) for b in box)
    if lo.shape != (n,) or hi.shape != (n,):
        raise ValueError(f"box must have {n} coordinates per corner")
    if not r_max < 1.0:
        raise ValueError("clipping radius must be below 1 (weight unbounded on the sphere)")
    if samples <= 1:
        raise ValueError("need at least two samples")
    counts = [batch] * (samples // batch)
    if samples % batch:
        counts.append(samples % batch)
    children = np.random.SeedSequence(seed).spawn(len(counts))
    jobs = list(zip(counts, children))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda j: _batch_moments(region, lo, hi, n, j[0], r_max, j[1]), jobs))
    else:
        parts = [_batch_moments(region, lo, hi, n, c, r_max, ss) for c, ss in jobs]
    acc = parts[0]
    for part in parts[1:]:
        acc = _merge(acc, part)
    total, mean, m2 = acc
    std = math.sqrt(m2 / (total - 1))
    return McEstimate(mean, std / math.sqrt(total), total, int(seed))


def _cone_batch(region: Region, apex, G, lam_max: float, n: int, power: float, count: int,
                r_max: float, ss: np.random.SeedSequence) -> tuple[int, float, float]:
    rng = np.random.Generator(np.random.PCG64(ss))
    lam = lam_max * rng.random(count) ** power
    beta = rng.dirichlet(np.ones(n), size=count)
    X = apex + lam[:, None] * (beta @ G)
    r2 = np.einsum("ij,ij->i", X, X)
    keep = r2 < r_max * r_max
    inside = np.zeros(count, dtype=bool)
    if keep.any():
        inside[keep] = region(X[keep])
    sel = inside & keep
    vals = np.zeros(count)
    # p(X) = p(lam) (n-1)! / (lam^(n-1) |det G|),  p(lam) = lam^(1/k-1) / (k lam_max^(1/k))
    lam_s = lam[sel]
    p_lam = lam_s ** (1.0 / power - 1.0) / (power * lam_max ** (1.0 / power))
    jac = lam_s ** (n - 1) * abs(np.linalg.det(G)) / math.factorial(n - 1)
    vals[sel] = (1.0 - r2[sel]) ** (-(n + 1) / 2.0) * jac / p_lam
    mean = float(vals.mean())
    return count, mean, float(((vals - mean) ** 2).sum())


def mc_volume_cone(region: Region, apex, generators, lam_max: float, n: int, samples: int,
                   seed: int | None = None, power: float | None = None, r_max: float = 1.0,
                   batch: int = BATCH) -> McEstimate:
    """Hyperbolic volume of a region inside the cone ``apex + span_+(generators)``
    cut at ``lam <= lam_max`` (``lam`` = sum of the generator coefficients).

    The estimator is bounded, so no clipping is needed; ``r_max`` defaults to 1
    (only the apex itself is dropped).  Clipping would bias a 2D cusp by
    roughly ``sqrt(1 - r_max)``.
    """
    if seed is None:
        seed = default_seed()
    apex = np.asarray(apex, dtype=float)
    G = np.asarray(generators, dtype=float)
    if G.shape != (n, n):
        raise ValueError(f"need {n} generators of dimension {n}")
    if power is None:
        power = 1.0 if n == 3 else 2.0
    counts = [batch] * (samples // batch)
    if samples % batch:
        counts.append(samples % batch)
    children = np.random.SeedSequence(seed).spawn(len(counts))
    parts = [_cone_batch(region, apex, G, lam_max, n, power, c, r_max, ss)
             for c, ss in zip(counts, children)]
    acc = parts[0]
    for part in parts[1:]:
        acc = _merge(acc, part)
    total, mean, m2 = acc
    return McEstimate(mean, math.sqrt(m2 / (total - 1)) / math.sqrt(total), total, int(seed))


def cone_coordinate(apex, generators, points) -> np.ndarray:
    """``lam`` of each point: the sum of its coefficients in the generator basis."""
    G = np.asarray(generators, dtype=float)
    C = np.linalg.solve(G.T, (np.atleast_2d(points) - apex).T)
    return C.sum(axis=0)


def bounding_box(points, inflate: float = 1e-6) -> tuple[np.ndarray, np.ndarray]:
    P = np.asarray(points, dtype=float)
    lo = np.maximum(P.min(axis=0) - inflate, -1.0)
    hi = np.minimum(P.max(axis=0) + inflate, 1.0)
    return lo, hi


def _halfspaces(faces, interior) -> tuple[np.ndarray, np.ndarray]:
    """Normals and offsets with ``normal . x >= offset`` on the interior side."""
    normals, offsets = [], []
    for F in faces:
        F = [np.asarray(v, dtype=float) for v in F]
        if len(F) == 2:
            d = F[1] - F[0]
            nrm = np.array([-d[1], d[0]])
        else:
            nrm = np.cross(F[1] - F[0], F[2] - F[0])
        nrm = nrm / np.linalg.norm(nrm)
        off = float(nrm @ F[0])
        if nrm @ interior < off:
            nrm, off = -nrm, -off
        normals.append(nrm)
        offsets.append(off)
    return np.array(normals), np.array(offsets)


def convex_membership(faces, interior, tol: float = 1e-12) -> Region:
    N, c = _halfspaces(faces, interior)

    def inside(X: np.ndarray) -> np.ndarray:
        return np.all(X @ N.T >= c - tol, axis=-1)
    return inside


def _e(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[1:] / v[0]


def orthoscheme_membership(orth: TruncatedOrthoscheme) -> Region:
    """The frustum as the intersection of its five bounding half-spaces."""
    V = {k: _e(v) for k, v in orth.vertices().items()}
    faces = [
        (V["A0"], V["A1"], V["P1"]),   # contains P0 as well
        (V["A0"], V["A2"], V["P2"]),   # contains P0 as well
        (V["A0"], V["A1"], V["A2"]),
        (V["P0"], V["P1"], V["P2"]),   # truncating plane
        (V["A1"], V["A2"], V["P2"]),   # contains P1 as well
    ]
    centroid = np.mean(list(V.values()), axis=0)
    return convex_membership(faces, centroid)


def orthoscheme_box(orth: TruncatedOrthoscheme):
    return bounding_box([_e(v) for v in orth.vertices().values()])


def lambert_membership(domain: LambertDomain) -> Region:
    V = [_e(v) for v in (domain.A0, domain.A1, domain.P1, domain.P0)]
    edges = [(V[i], V[(i + 1) % 4]) for i in range(4)]
    return convex_membership(edges, np.mean(V, axis=0))


def lambert_box(domain: LambertDomain):
    return bounding_box([_e(v) for v in (domain.A0, domain.A1, domain.P1, domain.P0)])


def base_triangle_membership(orth: TruncatedOrthoscheme) -> Region:
    """Triangle P0 P1 P2 in the truncating plane, which is itself a Klein disc."""
    V = [_e(v)[:2] for v in (orth.P0, orth.P1, orth.P2)]
    edges = [(V[i], V[(i + 1) % 3]) for i in range(3)]
    return convex_membership(edges, np.mean(V, axis=0))


def base_triangle_box(orth: TruncatedOrthoscheme):
    return bounding_box([_e(v)[:2] for v in (orth.P0, orth.P1, orth.P2)])


def hyperball_piece_membership(orth: TruncatedOrthoscheme, h: float) -> Region:
    """Prism over the base triangle (walls orthogonal to the base are vertical
    in this chart) cut by the hypersphere at height ``h``."""
    tri = base_triangle_membership(orth)
    th2 = math.tanh(h) ** 2

    def inside(X: np.ndarray) -> np.ndarray:
        rho2 = X[:, 0] ** 2 + X[:, 1] ** 2
        return tri(X[:, :2]) & (X[:, 2] >= 0.0) & (X[:, 2] ** 2 <= th2 * (1.0 - rho2))
    return inside


def hyperball_piece_box(orth: TruncatedOrthoscheme, h: float):
    lo, hi = base_triangle_box(orth)
    return (np.append(lo, 0.0), np.append(hi, math.tanh(h) + 1e-6))


def horoball_piece_membership(orth: TruncatedOrthoscheme, ball: balls.Horoball) -> Region:
    """Horoball cut by the trihedral cone at A0 spanned by the rays to P0, A1, A2."""
    A0, P0, A1, A2 = (_e(v) for v in (orth.A0, orth.P0, orth.A1, orth.A2))
    cone = convex_membership([(A0, P0, A1), (A0, P0, A2), (A0, A1, A2)],
                             (P0 + A1 + A2) / 3.0)

    def inside(X: np.ndarray) -> np.ndarray:
        H = np.concatenate([np.ones((len(X), 1)), X], axis=1)
        return cone(X) & ball.contains(H, 0.0)
    return inside


def horoball_piece_box(orth: TruncatedOrthoscheme, ball: balls.Horoball):
    """The cone lies in x, y >= 0; the horoball in |x|, |y| <= sqrt((1-s)/2), s <= z <= 1."""
    half = math.sqrt((1.0 - ball.s) / 2.0) + 1e-6
    return np.array([0.0, 0.0, ball.s - 1e-6]), np.array([half, half, 1.0])


def orthoscheme_cone(orth: TruncatedOrthoscheme):
    """(apex, generators, lam_max) of a cone from A0 containing the cell."""
    A0 = _e(orth.A0)
    G = np.array([_e(orth.P0) - A0, _e(orth.A1) - A0, _e(orth.A2) - A0])
    lam = cone_coordinate(A0, G, [_e(v) for v in orth.vertices().values()])
    return A0, G, float(lam.max()) * (1.0 + 1e-9)


def horoball_piece_cone(orth: TruncatedOrthoscheme, ball: balls.Horoball):
    """Same cone, cut where it leaves the horoball ellipsoid."""
    A0, G, _ = orthoscheme_cone(orth)
    ell = np.linalg.inv(G.T).sum(axis=0)           # lam(X) = ell . (X - A0)
    w = 1.0 - ball.s
    center = np.array([0.0, 0.0, (1.0 + ball.s) / 2.0])
    semi = np.array([math.sqrt(w / 2.0), math.sqrt(w / 2.0), w / 2.0])
    lam_max = float(ell @ (center - A0) + math.sqrt(np.sum((semi * ell) ** 2)))
    return A0, G, lam_max * (1.0 + 1e-9)


def lambert_cone(domain: LambertDomain):
    A0 = _e(domain.A0)
    G = np.array([_e(domain.P0) - A0, _e(domain.A1) - A0])
    lam = cone_coordinate(A0, G, [_e(v) for v in (domain.A1, domain.P1, domain.P0)])
    return A0, G, float(lam.max()) * (1.0 + 1e-9)


@dataclass(frozen=True)
class SpotCheck:
    name: str
    exact: float
    estimate: McEstimate

    @property
    def z(self) -> float:
        return self.estimate.z(self.exact)

    @property
    def ok(self) -> bool:
        return self.estimate.agrees(self.exact)


def cell_checks(orth: TruncatedOrthoscheme, horoball: balls.Horoball | None = None,
                h: float | None = None, horoball_volume: float | None = None,
                hyperball_volume: float | None = None, samples: int = 10**7,
                seed: int | None = None) -> list[SpotCheck]:
    """Closed forms of a cell (and optionally its two ball pieces) against Monte Carlo."""
    out = []
    apex, G, lam = orthoscheme_cone(orth)
    out.append(SpotCheck("volume3", volume3(orth.ctx),
                         mc_volume_cone(orthoscheme_membership(orth), apex, G, lam, 3, samples, seed)))
    out.append(SpotCheck("base_triangle_area", base_triangle_area(orth),
                         mc_volume(base_triangle_membership(orth), base_triangle_box(orth), 2,
                                   samples, seed)))
    if h is not None and hyperball_volume is not None:
        out.append(SpotCheck("hyperball_piece", hyperball_volume,
                             mc_volume(hyperball_piece_membership(orth, h),
                                       hyperball_piece_box(orth, h), 3, samples, seed)))
    if horoball is not None and horoball_volume is not None:
        apex, G, lam = horoball_piece_cone(orth, horoball)
        out.append(SpotCheck("horoball_piece", horoball_volume,
                             mc_volume_cone(horoball_piece_membership(orth, horoball), apex, G, lam,
                                            3, samples, seed)))
    return out


def lambert_check(a: float, samples: int = 10**7, seed: int | None = None) -> SpotCheck:
    d = LambertDomain(a)
    apex, G, lam = lambert_cone(d)
    return SpotCheck("area2", area2(d),
                     mc_volume_cone(lambert_membership(d), apex, G, lam, 2, samples, seed))
