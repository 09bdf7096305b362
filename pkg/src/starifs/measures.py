"""Idempotent measures as density fields and saturated hypograph sets.

A measure on a finite space is carried by its density: the assignment
x -> top level of the saturated set at x.  Evaluation against a test
function phi is

    mu(phi) = max over x of  density(x) * phi(x)

with * the t-norm.  This functional form is verified axiomatically by
the test suite (constants, homogeneity, max-linearity) rather than
assumed.  The saturated-set view lives on a quantized level grid and is
used for Hausdorff computations and set-level cross-checks; saturation
(downward closure in the level coordinate) is what makes the two views
interchangeable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .spaces import FiniteMetricSpace, LevelGrid

NORMALIZATION_TOL = 1e-12

# test functions are plain arrays of values in [0, 1], indexed by point
TestFunction = np.ndarray


class SubDensity:
    """A density field with values in [0, 1]; the top may fall below 1.

    Arises from the scalar action r * mu, whose maximum is r * 1.
    """

    def __init__(self, space, density, tnorm):
        density = np.asarray(density, dtype=float).copy()
        if density.shape != (space.n,):
            raise DomainError("density must assign one level per point")
        if not np.all(
            (density >= -NORMALIZATION_TOL) & (density <= 1.0 + NORMALIZATION_TOL)
        ):
            raise DomainError("density values must lie in [0, 1]")
        np.clip(density, 0.0, 1.0, out=density)
        density.flags.writeable = False
        self.space = space
        self.density = density
        self.tnorm = tnorm

    @property
    def top(self):
        return float(self.density.max())


class StarMeasure(SubDensity):
    """A normalized density field: max density = 1.

    The hypograph of such a field meets the level-1 section, contains
    the zero section, and is saturated, so it is a measure.
    """

    def __init__(self, space, density, tnorm):
        super().__init__(space, density, tnorm)
        if abs(self.top - 1.0) > NORMALIZATION_TOL:
            raise ValidationError("a measure's density must attain 1")

    @classmethod
    def full(cls, space, tnorm):
        """Density identically 1: the hypograph is all of X x I."""
        return cls(space, np.ones(space.n), tnorm)

    @classmethod
    def dirac(cls, space, index, tnorm):
        if not 0 <= index < space.n:
            raise DomainError("dirac index outside the space")
        d = np.zeros(space.n)
        d[index] = 1.0
        return cls(space, d, tnorm)


def _same_space(a, b):
    return a is b or (isinstance(a, FiniteMetricSpace) and a.n == b.n)


def _check_phi(mu, phi):
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (mu.space.n,):
        raise DomainError("test function must assign one value per point")
    if not np.all((phi >= 0.0) & (phi <= 1.0)):
        raise DomainError("test function values must lie in [0, 1]")
    return phi


def evaluate(mu, phi):
    """mu(phi) = max over x of density(x) * phi(x)."""
    phi = _check_phi(mu, phi)
    return float(np.max(mu.tnorm.apply(mu.density, phi)))


def pushforward(f, mu, target=None):
    """Image measure along a point map f: X -> Y.

    ``f`` assigns a target index to every point; the image density at y
    is the max of the density over the preimage of y (0 when empty).
    The global maximum is preserved, so measures map to measures.
    """
    target = target if target is not None else mu.space
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (mu.space.n,):
        raise DomainError("point map must assign one target per point")
    if np.any(f < 0) or np.any(f >= target.n):
        raise DomainError("point map image lies outside the target space")
    out = np.zeros(target.n)
    np.maximum.at(out, f, mu.density)
    cls = StarMeasure if isinstance(mu, StarMeasure) else SubDensity
    return cls(target, out, mu.tnorm)


def scale(r, mu):
    """The scalar action r * mu: apply the t-norm to every level."""
    return SubDensity(mu.space, mu.tnorm.apply(float(r), mu.density), mu.tnorm)


def max_union(items):
    """Pointwise max of densities = union of the saturated sets."""
    items = list(items)
    if not items:
        raise DomainError("max_union needs at least one density")
    first = items[0]
    for it in items[1:]:
        if not _same_space(it.space, first.space) or it.tnorm != first.tnorm:
            raise DomainError("max_union items must share space and t-norm")
    out = items[0].density
    for it in items[1:]:
        out = np.maximum(out, it.density)
    return SubDensity(first.space, out, first.tnorm)


def weakstar_distance(mu, nu, tests):
    """max over the test family of |mu(phi) - nu(phi)|.

    A diagnostic pseudo-distance indexed by the chosen family.
    """
    if not _same_space(mu.space, nu.space):
        raise DomainError("measures must live on the same space")
    tests = list(tests)
    if not tests:
        raise DomainError("the test family must be nonempty")
    return max(abs(evaluate(mu, phi) - evaluate(nu, phi)) for phi in tests)


@dataclass(frozen=True)
class SaturatedSet:
    """A finite element of the hypograph space on X x LevelGrid.

    ``members`` holds (point index, level index) pairs.  The set must
    contain the zero section and be downward closed per point, i.e. the
    level indices at each point form a prefix {0, ..., k}.
    """

    space: FiniteMetricSpace
    levels: LevelGrid
    members: frozenset

    def __post_init__(self):
        m = self.levels.resolution
        tops = {}
        counts = {}
        for x, k in self.members:
            if not (0 <= x < self.space.n) or not (0 <= k <= m):
                raise ValidationError("member outside X x levels")
            tops[x] = max(tops.get(x, 0), k)
            counts[x] = counts.get(x, 0) + 1
        for x in range(self.space.n):
            if x not in tops:
                raise ValidationError("the zero section X x {0} must be contained")
            if counts[x] != tops[x] + 1:
                raise ValidationError("not saturated: levels must be downward closed")

    @property
    def top_indices(self):
        tops = np.zeros(self.space.n, dtype=np.int64)
        for x, k in self.members:
            tops[x] = max(tops[x], k)
        return tops

    def member_arrays(self):
        arr = np.array(sorted(self.members), dtype=np.int64)
        return arr[:, 0], arr[:, 1]


def to_saturated(mu, levels):
    """Quantized hypograph of a density: {(x, l) : l <= density(x)} u X x {0}.

    Densities are rounded down to the level grid, so the quantized set
    is contained in the true hypograph (one-sided error <= 1/m).
    """
    tops = levels.floor_index(mu.density)
    members = frozenset(
        (x, k) for x in range(mu.space.n) for k in range(int(tops[x]) + 1)
    )
    return SaturatedSet(mu.space, levels, members)


def from_saturated(sat, tnorm):
    """Top of a saturated set, as a density field.

    Inverse of to_saturated on grid-valued densities.  Returns a
    StarMeasure when the top attains 1, a SubDensity otherwise.
    """
    m = sat.levels.resolution
    tops = sat.top_indices
    density = tops / m
    cls = StarMeasure if tops.max() == m else SubDensity
    return cls(sat.space, density, tnorm)


def hypograph_hausdorff(space, dens_a, dens_b, levels, chunk=256):
    """Hausdorff distance between two quantized hypographs (sup metric).

    For saturated sets the directed sup-inf collapses to a closed form
    on the density tops: from member (x, s) the best candidate over the
    fiber of y is max(d(x, y), (s - beta(y))+), and the sup over the
    fiber of x is attained at s = alpha(x).  Hence

        directed(A -> B) = max_x min_y max(d(x,y), (alpha(x)-beta(y))+ )

    which this function evaluates exactly (level arithmetic is done on
    integer indices).  Matches the member-level brute force bit for bit
    on power-of-two resolutions, where k/m is itself exact.
    """
    ka = levels.floor_index(np.asarray(dens_a, dtype=float))
    kb = levels.floor_index(np.asarray(dens_b, dtype=float))
    m = levels.resolution

    def directed(k_from, k_to):
        worst = 0.0
        for start in range(0, space.n, chunk):
            stop = min(start + chunk, space.n)
            gap = np.maximum(k_from[start:stop, None] - k_to[None, :], 0) / m
            cand = np.maximum(space.dist[start:stop], gap)
            worst = max(worst, float(cand.min(axis=1).max()))
        return worst

    return max(directed(ka, kb), directed(kb, ka))


def hypograph_hausdorff_bruteforce(space, dens_a, dens_b, levels):
    """Member-level sup-inf evaluation of the same distance (test oracle).

    Enumerates both quantized hypographs explicitly; quadratic in member
    counts, for small spaces only.
    """
    sat_a = to_saturated(SubDensity(space, dens_a, None), levels)
    sat_b = to_saturated(SubDensity(space, dens_b, None), levels)
    ax, ak = sat_a.member_arrays()
    bx, bk = sat_b.member_arrays()
    lv = levels.levels
    d = np.maximum(
        space.dist[np.ix_(ax, bx)], np.abs(lv[ak][:, None] - lv[bk][None, :])
    )
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
