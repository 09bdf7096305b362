import pytest

import starifs as si


@pytest.fixture
def unit_grid():
    return si.grid_1d(101, 0.0, 1.0)


def make_cantor(n=729, weights=(1.0, 0.5), family="product", parameter=1.0):
    """The two-map middle-thirds system on an n-point grid of [0, 1]."""
    space = si.grid_1d(n, 0.0, 1.0)
    tnorm = si.TNorm(family, parameter)
    maps = [
        si.ContractionMap.affine([[1.0 / 3.0]], [0.0]),
        si.ContractionMap.affine([[1.0 / 3.0]], [2.0 / 3.0]),
    ]
    return si.validate(si.IFSSystem(space, maps, list(weights), tnorm))


def make_sierpinski(n=64, family="minimum"):
    """Three half-scale corner maps on an n x n grid of the unit square."""
    space = si.grid_2d(n, n, ((0.0, 1.0), (0.0, 1.0)))
    tnorm = si.TNorm(family)
    half = [[0.5, 0.0], [0.0, 0.5]]
    maps = [
        si.ContractionMap.affine(half, [0.0, 0.0]),
        si.ContractionMap.affine(half, [0.5, 0.0]),
        si.ContractionMap.affine(half, [0.0, 0.5]),
    ]
    return si.validate(si.IFSSystem(space, maps, [1.0, 1.0, 1.0], tnorm))


def random_measure(space, tnorm, rng):
    density = rng.uniform(0.0, 1.0, space.n)
    density[rng.integers(0, space.n)] = 1.0
    return si.StarMeasure(space, density, tnorm)


@pytest.fixture
def cantor():
    return make_cantor()


ALL_TNORMS = [
    si.TNorm("minimum"),
    si.TNorm("product"),
    si.TNorm("lukasiewicz"),
    si.TNorm("hamacher", 0.0),
    si.TNorm("hamacher", 0.5),
    si.TNorm("hamacher", 1.0),
    si.TNorm("hamacher", 2.0),
]
