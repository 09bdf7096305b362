"""Iterated function systems and the fixed-point solver.

The system operator sends a measure A to the union over maps of
lambda_i * (image of A under f_i).  Its unique fixed point is the
invariant measure; iteration from the full seed (density identically 1)
descends monotonically onto it, and after n steps any two orbits are
within c^n * diam(X) of each other in the hypograph Hausdorff metric,
which is what certifies the stopping rule.

Affine map images are snapped to the nearest grid point (ties to the
lowest index).  Snapping contributes at most spacing/2 per application,
h/(2(1-c)) accumulated; the level grid contributes 1/m per side.  These
are the only systematic discretization errors.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoverageError,
    DomainError,
    NotAContractionError,
    WeightError,
)
from .measures import StarMeasure, hypograph_hausdorff, max_union, pushforward, scale
from .spaces import LevelGrid

WEIGHT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000
DEFAULT_LEVEL_RESOLUTION = 256


@dataclass(frozen=True)
class ContractionMap:
    """A contraction of the space, affine on coordinates or tabulated.

    Affine maps act on coordinates as x -> matrix @ x + translation and
    are snapped onto the grid; their contraction constant is the
    operator 2-norm of the matrix.  Tabulated maps are explicit
    point-to-point assignments; their constant is estimated by the
    exhaustive pairwise ratio max d(f(x), f(y)) / d(x, y).
    """

    kind: str
    matrix: np.ndarray | None = None
    translation: np.ndarray | None = None
    table: np.ndarray | None = None

    @classmethod
    def affine(cls, matrix, translation):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        translation = np.asarray(translation, dtype=float).ravel()
        if matrix.shape[0] != matrix.shape[1] or matrix.shape[0] != translation.size:
            raise DomainError("affine matrix and translation dimensions disagree")
        return cls(kind="affine", matrix=matrix, translation=translation)

    @classmethod
    def tabulated(cls, table):
        return cls(kind="tabulated", table=np.asarray(table, dtype=np.int64))

    def image_coords(self, space):
        if self.kind != "affine":
            raise DomainError("only affine maps have coordinate images")
        if space.coords is None:
            raise DomainError("affine maps need a space with coordinates")
        if space.coords.shape[1] != self.matrix.shape[0]:
            raise DomainError("affine map dimension does not match the space")
        return space.coords @ self.matrix.T + self.translation

    def snapped_table(self, space):
        """The map as a grid-point assignment."""
        if self.kind == "tabulated":
            tbl = self.table
            if tbl.shape != (space.n,):
                raise DomainError("tabulated map must assign one target per point")
            if np.any(tbl < 0) or np.any(tbl >= space.n):
                raise DomainError("tabulated map targets outside the space")
            return tbl
        return space.snap(self.image_coords(space))

    def contraction_constant(self, space):
        if self.kind == "affine":
            return float(np.linalg.norm(self.matrix, 2))
        tbl = self.snapped_table(space)
        d = space.dist
        mask = ~np.eye(space.n, dtype=bool)
        ratios = d[np.ix_(tbl, tbl)][mask] / d[mask]
        return float(ratios.max())


@dataclass
class IFSSystem:
    """Contraction maps with weights and a t-norm over one space.

    The weight vector must attain 1 (its max is the normalization the
    operator preserves).  ``c`` is the system constant: the max of the
    per-map contraction constants.  Call validate() before iterating.
    """

    space: object
    maps: tuple
    weights: np.ndarray
    tnorm: object

    def __post_init__(self):
        self.maps = tuple(self.maps)
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        self._validated = False
        self.constants = None
        self.c = None
        self.tables = None

    @property
    def k(self):
        return len(self.maps)


def validate(system):
    """Check the system invariants and cache derived data; returns system.

    Raises WeightError when max weight != 1, NotAContractionError when
    any constant reaches 1, CoverageError when an affine image leaves
    the grid hull by more than one spacing.
    """
    if system.k < 1:
        raise DomainError("a system needs at least one map")
    if system.weights.shape != (system.k,):
        raise DomainError("one weight per map is required")
    if np.any(system.weights < 0.0) or np.any(system.weights > 1.0):
        raise DomainError("weights must lie in [0, 1]")
    max_w = float(system.weights.max())
    if abs(max_w - 1.0) > WEIGHT_TOL:
        raise WeightError(f"weight error: max λ = {max_w:g}")

    constants = [m.contraction_constant(system.space) for m in system.maps]
    worst = max(constants)
    if worst >= 1.0:
        raise NotAContractionError(
            f"not a contraction: estimated constant {worst:g} >= 1"
        )

    space = system.space
    for i, m in enumerate(system.maps):
        if m.kind != "affine":
            continue
        img = m.image_coords(space)
        lo = space.coords.min(axis=0)
        hi = space.coords.max(axis=0)
        excess = np.linalg.norm(img - np.clip(img, lo, hi), axis=1).max()
        if excess > space.spacing + 1e-12:
            raise CoverageError(
                f"map {i} leaves the grid hull by {excess:g} (> spacing {space.spacing:g})"
            )

    system.constants = constants
    system.c = float(worst)
    system.tables = [m.snapped_table(system.space) for m in system.maps]
    system._validated = True
    return system


def _ensure_validated(system):
    if not getattr(system, "_validated", False):
        validate(system)


def psi(system, mu):
    """One application of the system operator.

    density'(y) = max over maps i and points x with f_i(x) snapped to y
    of lambda_i * density(x); normalization survives because some
    weight is 1 and images keep the global max.
    """
    _ensure_validated(system)
    if mu.space is not system.space and mu.space.n != system.space.n:
        raise DomainError("measure and system live on different spaces")
    parts = [
        scale(w, pushforward(tbl, mu, system.space))
        for w, tbl in zip(system.weights, system.tables)
    ]
    return StarMeasure(system.space, max_union(parts).density, system.tnorm)


def error_bound(n, c, diam):
    """The a priori bound c^n * diam(X) on the distance between orbits."""
    if not 0.0 <= c < 1.0:
        raise DomainError("the contraction constant must satisfy 0 <= c < 1")
    if diam <= 0.0:
        raise DomainError("diameter must be positive")
    if n < 0:
        raise DomainError("iteration count must be >= 0")
    return float(c**n * diam)


def residual(system, mu, levels=None):
    """Hypograph Hausdorff distance between mu and psi(mu).

    Zero at grid resolution exactly when mu is invariant.
    """
    _ensure_validated(system)
    levels = levels or LevelGrid(DEFAULT_LEVEL_RESOLUTION)
    nxt = psi(system, mu)
    return hypograph_hausdorff(system.space, mu.density, nxt.density, levels)


@dataclass
class SolveReport:
    """Iteration record: counts, the certified bound, and the stop cause."""

    iterations: int
    final_residual: float | None
    apriori_bound: float
    stopped_by: str
    wall_time: float

    def to_dict(self):
        return {
            "iterations": self.iterations,
            "finalResidual": self.final_residual,
            "aprioriBound": self.apriori_bound,
            "stoppedBy": self.stopped_by,
            "wallTime": self.wall_time,
        }


def solve(
    system,
    seed=None,
    tol=1e-6,
    max_iter=DEFAULT_MAX_ITER,
    level_resolution=DEFAULT_LEVEL_RESOLUTION,
):
    """Iterate the operator to its fixed point; returns (measure, report).

    The default seed is the full density (hypograph X x I), which the
    operator maps into itself, so the orbit is a pointwise decreasing
    chain.  Stops on whichever fires first: consecutive-iterate
    hypograph residual <= tol, a priori bound c^n diam(X) <= tol, or
    max_iter.  Hitting max_iter is a reported stop, not an error.
    """
    _ensure_validated(system)
    if tol <= 0.0:
        raise DomainError("tol must be positive")
    start = time.perf_counter()
    levels = LevelGrid(level_resolution)
    mu = seed if seed is not None else StarMeasure.full(system.space, system.tnorm)
    diam = system.space.diameter

    if diam <= tol:
        return mu, SolveReport(0, None, diam, "bound", time.perf_counter() - start)

    stopped_by = "maxIterations"
    res = None
    n = 0
    for n in range(1, max_iter + 1):
        nxt = psi(system, mu)
        if np.array_equal(nxt.density, mu.density):
            res = 0.0
        else:
            res = hypograph_hausdorff(system.space, mu.density, nxt.density, levels)
        mu = nxt
        if res <= tol:
            stopped_by = "residual"
            break
        if error_bound(n, system.c, diam) <= tol:
            stopped_by = "bound"
            break

    report = SolveReport(
        iterations=n,
        final_residual=res,
        apriori_bound=error_bound(n, system.c, diam),
        stopped_by=stopped_by,
        wall_time=time.perf_counter() - start,
    )
    return mu, report
