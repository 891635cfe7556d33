import math

import numpy as np
import pytest

from orthocover import oracle
from orthocover.orthoscheme import LambertDomain, base_triangle_area, volume3


def test_empty_region():
    est = oracle.mc_volume(lambda X: np.zeros(len(X), bool), ([0, 0, 0], [0.1, 0.1, 0.1]), 3,
                           10_000, seed=1)
    assert est.value == 0.0 and est.stderr == 0.0


def test_reproducible_bits(orth736):
    region = oracle.base_triangle_membership(orth736)
    box = oracle.base_triangle_box(orth736)
    a = oracle.mc_volume(region, box, 2, 200_000, seed=7, batch=50_000)
    b = oracle.mc_volume(region, box, 2, 200_000, seed=7, batch=50_000)
    c = oracle.mc_volume(region, box, 2, 200_000, seed=7, batch=50_000, workers=3)
    assert a == b == c
    assert oracle.mc_volume(region, box, 2, 200_000, seed=8, batch=50_000).value != a.value


def test_env_seed(monkeypatch, orth736):
    monkeypatch.setenv("ORTHOCOVER_SEED", "123")
    assert oracle.default_seed() == 123
    region = oracle.base_triangle_membership(orth736)
    est = oracle.mc_volume(region, oracle.base_triangle_box(orth736), 2, 1000)
    assert est.seed == 123
    monkeypatch.delenv("ORTHOCOVER_SEED")
    assert oracle.default_seed() == oracle.DEFAULT_SEED


def test_stderr_scaling(orth736):
    region = oracle.base_triangle_membership(orth736)
    box = oracle.base_triangle_box(orth736)
    scaled = []
    for n in (10**3, 10**4, 10**5, 10**6):
        est = oracle.mc_volume(region, box, 2, n, seed=3)
        scaled.append(est.stderr * math.sqrt(n))
    assert max(scaled) / min(scaled) < 1.3


def test_rejects_bad_arguments():
    inside = lambda X: np.ones(len(X), bool)
    with pytest.raises(ValueError):
        oracle.mc_volume(inside, ([0, 0], [0.5, 0.5]), 2, 100, seed=1, r_max=1.0)
    with pytest.raises(ValueError):
        oracle.mc_volume(inside, ([0, 0], [0.5, 0.5]), 3, 100, seed=1)
    with pytest.raises(ValueError):
        oracle.mc_volume_cone(inside, [0, 1], [[1, 0]], 1.0, 2, 100, seed=1)


def test_membership(orth736):
    inside = oracle.orthoscheme_membership(orth736)
    V = np.array([orth736.vertices()[k][1:] for k in orth736.vertices()])
    assert inside(V.mean(axis=0)[None])[0]
    assert not inside(np.array([[0.05, 0.1, -0.01]]))[0]
    assert inside(V).all()


def test_seed_stability(orth736):
    apex, G, lam = oracle.orthoscheme_cone(orth736)
    region = oracle.orthoscheme_membership(orth736)
    a = oracle.mc_volume_cone(region, apex, G, lam, 3, 10**6, seed=11)
    b = oracle.mc_volume_cone(region, apex, G, lam, 3, 10**6, seed=12)
    assert abs(a.value - b.value) < 4 * math.hypot(a.stderr, b.stderr)
    assert a.agrees(volume3(orth736.ctx), 4)


def test_box_sampler_on_base_triangle(orth736):
    exact = base_triangle_area(orth736)
    box = oracle.mc_volume(oracle.base_triangle_membership(orth736),
                           oracle.base_triangle_box(orth736), 2, 10**6, seed=5)
    assert box.agrees(exact, 4)


def test_lambert_cone_sampler():
    d = LambertDomain(0.5)
    apex, G, lam = oracle.lambert_cone(d)
    est = oracle.mc_volume_cone(oracle.lambert_membership(d), apex, G, lam, 2, 10**6, seed=2)
    assert est.agrees(math.pi / 2, 4)


def test_covered_volume_inside_cell(optimum736, orth736):
    """Inside the cell the union of the two pieces is the whole cell."""
    ev = optimum736
    cell = oracle.orthoscheme_membership(orth736)
    horo, hyper = ev.pair.horoball, ev.pair.hyperball

    def covered(X):
        H = np.concatenate([np.ones((len(X), 1)), X], axis=1)
        return cell(X) & (horo.contains(H, 1e-12) | hyper.contains(H, 1e-12))
    apex, G, lam = oracle.orthoscheme_cone(orth736)
    est = oracle.mc_volume_cone(covered, apex, G, lam, 3, 10**6, seed=4)
    full = oracle.mc_volume_cone(cell, apex, G, lam, 3, 10**6, seed=4)
    assert est.value == full.value
    assert est.value <= ev.horoball_volume + ev.hyperball_volume
    assert est.agrees(ev.cell_volume, 4)


def test_cone_coordinate_of_generators(orth736):
    apex, G, lam = oracle.orthoscheme_cone(orth736)
    assert np.allclose(oracle.cone_coordinate(apex, G, apex + G), 1.0)
    assert lam >= 1.0
