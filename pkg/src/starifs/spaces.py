"""Finite metric spaces, uniform grids, level grids, and Hausdorff distances.

Compact metric spaces are discretized to finite point clouds with an
explicit distance matrix; every continuum statement downstream is tested
up to the documented grid slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError

_TRIANGLE_EXHAUSTIVE_LIMIT = 512
_TRIANGLE_SAMPLES = 10_000

# values within this distance of a level line are treated as on it
GRID_SNAP_EPS = 1e-9


class FiniteMetricSpace:
    """A finite point set with a full distance matrix.

    Points are identified by their index 0..n-1.  ``coords`` is optional
    (affine maps and snapping need it).  ``spacing`` is the snap
    diameter: for uniform grids, the distance within which any point of
    the hull has a grid point (grid step in 1-D, cell diagonal in 2-D).
    """

    def __init__(self, dist, coords=None, spacing=None, validate=True, grid_axes=None):
        dist = np.asarray(dist, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise DomainError("distance matrix must be square")
        self.n = dist.shape[0]
        if self.n < 1:
            raise DomainError("a space needs at least one point")
        self.dist = dist
        self.dist.flags.writeable = False
        self.coords = None
        if coords is not None:
            self.coords = np.asarray(coords, dtype=float).reshape(self.n, -1)
            self.coords.flags.writeable = False
        self.diameter = float(dist.max())
        # ((lo, step, count, stride), ...) per coordinate for uniform grids
        self._grid_axes = grid_axes
        if spacing is None and self.n > 1:
            off = dist + np.where(np.eye(self.n, dtype=bool), np.inf, 0.0)
            spacing = float(off.min(axis=1).max())
        self.spacing = spacing
        if validate:
            self._check_metric()

    def _check_metric(self):
        d = self.dist
        if np.any(np.diagonal(d) != 0.0):
            raise DomainError("distance of a point to itself must be 0")
        if not np.array_equal(d, d.T):
            raise DomainError("distance matrix must be symmetric")
        off = d[~np.eye(self.n, dtype=bool)]
        if off.size and np.any(off <= 0.0):
            raise DomainError("distinct points must be at positive distance")
        tol = 1e-12 * max(1.0, self.diameter)
        if self.n <= _TRIANGLE_EXHAUSTIVE_LIMIT:
            for k in range(self.n):
                if np.any(d > d[:, k, None] + d[None, k, :] + tol):
                    raise DomainError("triangle inequality violated")
        else:
            rng = np.random.default_rng(0)
            i, j, k = rng.integers(0, self.n, size=(3, _TRIANGLE_SAMPLES))
            if np.any(d[i, j] > d[i, k] + d[k, j] + tol):
                raise DomainError("triangle inequality violated (sampled)")

    def snap(self, pts):
        """Indices of the nearest grid points; ties go to the lowest index.

        ``pts`` is (k, d) coordinates.  Uniform grids use the closed
        form per axis (exact half-way ties resolve to the lower index);
        other coordinate clouds fall back to an argmin scan.
        """
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        if self._grid_axes is not None:
            flat = np.zeros(len(pts), dtype=np.int64)
            for ax, (lo, step, count, stride) in enumerate(self._grid_axes):
                u = (pts[:, ax] - lo) / step
                idx = np.clip(np.ceil(u - 0.5), 0, count - 1).astype(np.int64)
                flat += idx * stride
            return flat
        if self.coords is None:
            raise DomainError("snapping requires coordinates")
        out = np.empty(len(pts), dtype=np.int64)
        for start in range(0, len(pts), 1024):
            chunk = pts[start : start + 1024]
            d2 = ((chunk[:, None, :] - self.coords[None, :, :]) ** 2).sum(axis=-1)
            out[start : start + 1024] = np.argmin(d2, axis=1)
        return out

    def hausdorff(self, a_points, b_points):
        return hausdorff(self, a_points, b_points)


def _pairwise_euclidean(coords, chunk=512):
    n = len(coords)
    if coords.shape[1] == 1:
        x = coords[:, 0]
        return np.abs(x[:, None] - x[None, :])
    d = np.empty((n, n), dtype=float)
    for start in range(0, n, chunk):
        diff = coords[start : start + chunk, None, :] - coords[None, :, :]
        d[start : start + chunk] = np.sqrt((diff**2).sum(axis=-1))
    return d


def grid_1d(n, a, b):
    """n equally spaced points on [a, b] with the Euclidean metric."""
    if n < 2:
        raise DomainError("grid_1d needs at least 2 points")
    a, b = float(a), float(b)
    if not a < b:
        raise DomainError("grid_1d needs a < b")
    coords = np.linspace(a, b, n).reshape(-1, 1)
    h = (b - a) / (n - 1)
    return FiniteMetricSpace(
        _pairwise_euclidean(coords),
        coords=coords,
        spacing=h,
        grid_axes=((a, h, n, 1),),
    )


def grid_2d(nx, ny, bounds):
    """nx * ny lattice points on a rectangle, row-major (index = iy*nx + ix).

    ``bounds`` is ((x0, x1), (y0, y1)).  The snap spacing is the cell
    diagonal, so any point of the rectangle is within spacing/2 of the
    lattice.
    """
    if nx < 2 or ny < 2:
        raise DomainError("grid_2d needs at least 2 points per axis")
    (x0, x1), (y0, y1) = bounds
    x0, x1, y0, y1 = float(x0), float(x1), float(y0), float(y1)
    if not (x0 < x1 and y0 < y1):
        raise DomainError("grid_2d needs a non-degenerate rectangle")
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    gx, gy = np.meshgrid(xs, ys)  # row-major: y varies along rows
    coords = np.column_stack([gx.ravel(), gy.ravel()])
    hx = (x1 - x0) / (nx - 1)
    hy = (y1 - y0) / (ny - 1)
    return FiniteMetricSpace(
        _pairwise_euclidean(coords),
        coords=coords,
        spacing=float(np.hypot(hx, hy)),
        # coordinate-column order; row-major flat index = iy * nx + ix
        grid_axes=((x0, hx, nx, 1), (y0, hy, ny, nx)),
    )


def _as_index_array(space, pts, name):
    idx = np.asarray(pts, dtype=np.int64).ravel()
    if idx.size == 0:
        raise DomainError(f"{name} must be a nonempty point set")
    if np.any(idx < 0) or np.any(idx >= space.n):
        raise DomainError(f"{name} contains indices outside the space")
    return idx


def hausdorff(space, a_points, b_points):
    """Hausdorff distance between two nonempty finite point sets.

    Implemented directly as the max of the two directed sup-inf
    distances over all pairs; no indexing structures.
    """
    a = _as_index_array(space, a_points, "A")
    b = _as_index_array(space, b_points, "B")
    sub = space.dist[np.ix_(a, b)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def product_metric(space_x, space_y):
    """The sup-metric product of two finite spaces as a materialized space.

    Pairs (i, j) are indexed row-major: flat = i * |Y| + j.  Intended
    for small factors (the full |X||Y| x |X||Y| matrix is built).
    """
    dx, dy = space_x.dist, space_y.dist
    nx, ny = space_x.n, space_y.n
    d = np.maximum(
        dx[:, None, :, None], dy[None, :, None, :]
    ).reshape(nx * ny, nx * ny)
    return FiniteMetricSpace(d, validate=False)


def pair_index(space_y, pairs):
    """Flatten (i, j) pairs into product_metric's row-major indexing."""
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return arr[:, 0] * space_y.n + arr[:, 1]


def product_sup_metric(space, levels):
    """The sup metric on space x levels as a callable on ((i, s), (j, t))."""

    def dist(p, q):
        (i, s), (j, t) = p, q
        return max(float(space.dist[i, j]), abs(float(s) - float(t)))

    return dist


def _pairs_hausdorff(space_x, space_y, a_pairs, b_pairs):
    ax, ay = a_pairs[:, 0], a_pairs[:, 1]
    bx, by = b_pairs[:, 0], b_pairs[:, 1]
    d = np.maximum(space_x.dist[np.ix_(ax, bx)], space_y.dist[np.ix_(ay, by)])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def projection_bound_check(space_x, space_y, a_pairs, b_pairs):
    """Check d_H(A, B) <= diam(X) for A, B in X x Y with equal Y-projections.

    Always true for valid inputs; exists as a verification surface.
    Unequal projections raise PreconditionError.
    """
    a = np.asarray(a_pairs, dtype=np.int64).reshape(-1, 2)
    b = np.asarray(b_pairs, dtype=np.int64).reshape(-1, 2)
    if a.size == 0 or b.size == 0:
        raise DomainError("A and B must be nonempty")
    if set(a[:, 1]) != set(b[:, 1]):
        raise PreconditionError("A and B must have equal Y-projections")
    return _pairs_hausdorff(space_x, space_y, a, b) <= space_x.diameter


@dataclass(frozen=True)
class LevelGrid:
    """The quantized unit segment {0, 1/m, ..., 1}."""

    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise DomainError("level resolution must be >= 1")

    @property
    def levels(self):
        m = self.resolution
        return np.arange(m + 1) / m

    def floor_index(self, values):
        """Largest level index at or below each value (within GRID_SNAP_EPS)."""
        v = np.asarray(values, dtype=float)
        idx = np.floor(v * self.resolution + GRID_SNAP_EPS).astype(np.int64)
        return np.clip(idx, 0, self.resolution)

    def floor(self, values):
        return self.floor_index(values) / self.resolution
