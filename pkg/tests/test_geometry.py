import math
import os
import sys

import numpy as np
import pytest

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from app.errors import DomainError, MirrorStepError
from app.geometry import (
    EuclideanBallGeometry,
    SimplexEntropyGeometry,
    bregman_divergence,
    get_geometry,
    mirror_step,
    optimality_residual,
    proj_simplex,
    verify_lemma1,
)

GEOMETRIES = [
    EuclideanBallGeometry(3, radius=1.0),
    EuclideanBallGeometry(2, radius=2.0, center=[1.0, -1.0]),
    SimplexEntropyGeometry(4),
]


def test_euclidean_mirror_step_is_projection():
    geom = EuclideanBallGeometry(2)
    z = mirror_step(geom, np.zeros(2), np.array([2.0, 0.0]), 1.0)
    assert np.allclose(z, [-1.0, 0.0])


def test_euclidean_divergence_is_half_squared_distance():
    geom = EuclideanBallGeometry(2)
    assert bregman_divergence(geom, [0.6, 0.0], [0.0, 0.0]) == pytest.approx(0.18)


def test_entropy_divergence_is_kl():
    geom = SimplexEntropyGeometry(2)
    x, y = np.array([0.25, 0.75]), np.array([0.5, 0.5])
    expected = 0.25 * math.log(0.5) + 0.75 * math.log(1.5)
    assert bregman_divergence(geom, x, y) == pytest.approx(expected)


def test_entropy_mirror_step_closed_form():
    geom = SimplexEntropyGeometry(3)
    p = np.array([1.0, -2.0, 0.5])
    z = mirror_step(geom, geom.start, p, 0.3)
    w = np.exp(-0.3 * p)
    assert np.allclose(z, w / w.sum())


def test_entropy_start_radius_is_log_n():
    geom = SimplexEntropyGeometry(5)
    assert geom.set.R2 == pytest.approx(math.log(5))
    assert math.isinf(geom.set.theta2)


@pytest.mark.parametrize("geom", GEOMETRIES, ids=lambda g: f"{g.kind}-{g.dim}")
def test_divergence_dominates_half_squared_primal_norm(geom):
    rng = np.random.default_rng(0)
    xs, ys = geom.sample(rng, 1000), geom.sample(rng, 1000)
    for x, y in zip(xs, ys):
        v = bregman_divergence(geom, x, y)
        assert v >= 0.5 * geom.norms.primal(x - y) ** 2 - 1e-10


@pytest.mark.parametrize("geom", GEOMETRIES, ids=lambda g: f"{g.kind}-{g.dim}")
def test_mirror_step_stays_in_set_and_is_optimal(geom):
    rng = np.random.default_rng(1)
    xs = geom.sample(rng, 100)
    us = geom.sample(rng, 100)
    for x, u in zip(xs, us):
        p = rng.standard_normal(geom.dim) * 5.0
        h = float(rng.uniform(0.01, 2.0))
        z = mirror_step(geom, x, p, h)
        assert geom.contains(z)
        assert optimality_residual(geom, x, p, h, z, u) >= -1e-8


@pytest.mark.parametrize("geom", GEOMETRIES, ids=lambda g: f"{g.kind}-{g.dim}")
def test_three_point_inequality_on_convex_quadratic(geom):
    rng = np.random.default_rng(2)
    a = geom.sample(rng, 1)[0]

    def f(x):
        return 0.5 * float(np.dot(x - a, x - a))

    def grad(x):
        return x - a

    xs, ys = geom.sample(rng, 50), geom.sample(rng, 50)
    for x, y in zip(xs, ys):
        assert verify_lemma1(geom, f, grad, y, x, float(rng.uniform(0.01, 1.0)))


def test_mirror_step_rejects_points_outside():
    geom = EuclideanBallGeometry(2)
    with pytest.raises(DomainError):
        mirror_step(geom, np.array([2.0, 0.0]), np.ones(2), 0.1)
    with pytest.raises(DomainError):
        mirror_step(geom, np.zeros(2), np.ones(2), 0.0)


def test_mirror_step_error_on_non_finite_output():
    geom = EuclideanBallGeometry(2)
    with pytest.raises(MirrorStepError):
        mirror_step(geom, np.zeros(2), np.array([np.nan, 0.0]), 1.0)


def test_proj_simplex():
    assert np.allclose(proj_simplex(np.array([0.5, 0.5])), [0.5, 0.5])
    assert np.allclose(proj_simplex(np.array([2.0, 0.0])), [1.0, 0.0])
    assert proj_simplex(np.array([0.3, -1.0, 4.0])).sum() == pytest.approx(1.0)


def test_get_geometry_factory():
    assert isinstance(get_geometry(None, 3), EuclideanBallGeometry)
    assert isinstance(get_geometry("entropy", 3), SimplexEntropyGeometry)
    with pytest.raises(ValueError):
        get_geometry("hyperbolic", 3)


def test_start_outside_ball_is_rejected():
    with pytest.raises(DomainError):
        EuclideanBallGeometry(2, radius=1.0, start=[1.5, 0.0])


def test_grid_covers_bounding_box():
    ball = EuclideanBallGeometry(2)
    points = np.vstack(list(ball.grid(5)))
    assert points.shape == (25, 2)
    simplex = SimplexEntropyGeometry(3)
    chunks = list(simplex.grid(5))
    assert len(chunks) == 5
    inside = np.vstack([c[simplex.contains_batch(c)] for c in chunks])
    assert np.allclose(inside.sum(axis=1), 1.0)
    assert inside.shape[0] == 15


@pytest.mark.parametrize("geom", GEOMETRIES, ids=lambda g: f"{g.kind}-{g.dim}")
def test_three_point_inequality_on_linear_function(geom):
    rng = np.random.default_rng(3)
    c = rng.standard_normal(geom.dim)

    def f(x):
        return float(np.dot(c, x))

    def grad(x):
        return c

    xs, ys = geom.sample(rng, 50), geom.sample(rng, 50)
    for x, y in zip(xs, ys):
        assert verify_lemma1(geom, f, grad, y, x, float(rng.uniform(0.01, 1.0)))


def test_simplex_start_on_the_boundary_is_rejected():
    with pytest.raises(DomainError):
        SimplexEntropyGeometry(3, start=[1.0, 0.0, 0.0])
    with pytest.raises(DomainError):
        SimplexEntropyGeometry(2, start=[0.5, 0.6])
