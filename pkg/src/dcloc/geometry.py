"""Closed-form convex set primitives.

Four shape families are supported: singletons, Euclidean balls, axis-aligned
boxes with optionally infinite bounds, and halfspaces.  Every family admits a
closed-form Euclidean projection, which makes membership tests, distance
evaluation, distance subgradients and normal-cone membership cheap and exact
(up to floating point).  General polytopes are deliberately not supported:
their projection would need an inner QP.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GeometryError",
    "DimensionMismatch",
    "ConvexSet",
    "Singleton",
    "Ball",
    "AxisBox",
    "Halfspace",
    "DistanceSubgradient",
    "membership_tol",
    "box_vertices",
    "set_contains_set",
]


class GeometryError(ValueError):
    """Invalid geometric input (bad shape parameters, unsupported query)."""


class DimensionMismatch(GeometryError):
    """Operands live in spaces of different dimension."""


def _vec(x) -> np.ndarray:
    a = np.asarray(x, dtype=float)
    if a.ndim != 1:
        raise GeometryError(f"expected a 1-d coordinate array, got shape {a.shape}")
    return a


def membership_tol(x: np.ndarray) -> float:
    """Scale-aware default tolerance for membership tests."""
    return 1e-9 * (1.0 + float(np.linalg.norm(x)))


@dataclass(eq=False)
class ConvexSet:
    """Base class for the supported nonempty closed convex shapes."""

    def _check_dim(self, x: np.ndarray) -> np.ndarray:
        x = _vec(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(
                f"point of dimension {x.shape[0]} vs set of dimension {self.dim}"
            )
        return x

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        """Euclidean projection of ``x`` onto the set."""
        raise NotImplementedError

    def project_many(self, pts: np.ndarray) -> np.ndarray:
        """Row-wise projection of an ``(N, n)`` array of points."""
        raise NotImplementedError

    def distance(self, x) -> float:
        x = self._check_dim(x)
        return float(np.linalg.norm(x - self.project(x)))

    def contains(self, x, tol: float | None = None) -> bool:
        x = self._check_dim(x)
        if tol is None:
            tol = membership_tol(x)
        return self.distance(x) <= tol

    def support(self, direction) -> float:
        """Support value sup{<direction, q> : q in set}; may be +inf."""
        raise NotImplementedError

    def bounding_radius(self) -> float | None:
        """Radius r with the set inside B(0; r), or None if unbounded."""
        raise NotImplementedError

    def selection_point(self) -> np.ndarray:
        """A canonical point of the set (the 'center' for bounded shapes)."""
        raise NotImplementedError

    def interior_depth(self, x) -> float:
        """Distance from ``x`` to the boundary; <= 0 when the interior is empty
        or ``x`` lies outside, +inf deep inside an unbounded shape."""
        raise NotImplementedError

    def normal_cone_contains(self, x, v, tol: float = 1e-9) -> bool:
        """Whether ``v`` lies in the normal cone to the set at ``x`` (x must
        belong to the set)."""
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return all(
            np.array_equal(a, b) for a, b in zip(self._key(), other._key())
        )

    def _key(self) -> tuple:
        raise NotImplementedError


@dataclass(eq=False)
class Singleton(ConvexSet):
    point: np.ndarray

    def __post_init__(self):
        self.point = _vec(self.point)

    @property
    def dim(self) -> int:
        return self.point.shape[0]

    def project(self, x) -> np.ndarray:
        self._check_dim(x)
        return self.point.copy()

    def project_many(self, pts: np.ndarray) -> np.ndarray:
        return np.broadcast_to(self.point, pts.shape).copy()

    def support(self, direction) -> float:
        return float(np.dot(_vec(direction), self.point))

    def bounding_radius(self) -> float | None:
        return float(np.linalg.norm(self.point))

    def selection_point(self) -> np.ndarray:
        return self.point.copy()

    def interior_depth(self, x) -> float:
        return 0.0 if self.contains(x) else -self.distance(x)

    def normal_cone_contains(self, x, v, tol: float = 1e-9) -> bool:
        if not self.contains(x, tol):
            raise GeometryError("normal cone queried at a point outside the set")
        return True  # normal cone at the unique point is the whole space

    def _key(self):
        return (self.point,)


@dataclass(eq=False)
class Ball(ConvexSet):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = _vec(self.center)
        self.radius = float(self.radius)
        if not self.radius > 0:
            raise GeometryError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        d = x - self.center
        nd = np.linalg.norm(d)
        if nd <= self.radius:
            return x.copy()
        return self.center + (self.radius / nd) * d

    def project_many(self, pts: np.ndarray) -> np.ndarray:
        d = pts - self.center
        nd = np.linalg.norm(d, axis=1)
        scale = np.where(nd > self.radius, self.radius / np.maximum(nd, 1e-300), 1.0)
        return self.center + d * scale[:, None]

    def support(self, direction) -> float:
        direction = _vec(direction)
        return float(
            np.dot(direction, self.center) + self.radius * np.linalg.norm(direction)
        )

    def bounding_radius(self) -> float | None:
        return float(np.linalg.norm(self.center)) + self.radius

    def selection_point(self) -> np.ndarray:
        return self.center.copy()

    def interior_depth(self, x) -> float:
        x = self._check_dim(x)
        return self.radius - float(np.linalg.norm(x - self.center))

    def normal_cone_contains(self, x, v, tol: float = 1e-9) -> bool:
        x = self._check_dim(x)
        v = self._check_dim(v)
        if not self.contains(x, tol):
            raise GeometryError("normal cone queried at a point outside the set")
        nv = np.linalg.norm(v)
        if nv <= tol:
            return True
        d = x - self.center
        nd = np.linalg.norm(d)
        if nd < self.radius - tol * (1.0 + self.radius):
            return False  # interior point: cone is {0}
        # v must be a nonnegative multiple of the outward radial direction
        u = d / nd
        return bool(np.linalg.norm(v - nv * u) <= tol * (1.0 + nv))

    def _key(self):
        return (self.center, self.radius)


@dataclass(eq=False)
class AxisBox(ConvexSet):
    """Axis-aligned box; bounds may be -inf/+inf, and lower may equal upper
    (degenerate faces encode points, segments and affine slabs)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = _vec(self.lower)
        self.upper = _vec(self.upper)
        if self.lower.shape != self.upper.shape:
            raise DimensionMismatch("box bounds of different lengths")
        if np.any(self.lower > self.upper):
            raise GeometryError("box requires lower <= upper componentwise")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise GeometryError("box bounds must not be NaN")

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        return np.clip(x, self.lower, self.upper)

    def project_many(self, pts: np.ndarray) -> np.ndarray:
        return np.clip(pts, self.lower, self.upper)

    def support(self, direction) -> float:
        direction = _vec(direction)
        bound = np.where(direction > 0, self.upper, self.lower)
        terms = np.zeros_like(direction)
        mask = direction != 0
        terms[mask] = direction[mask] * bound[mask]  # avoids 0 * inf
        return float(np.sum(terms))

    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def bounding_radius(self) -> float | None:
        if not self.is_bounded():
            return None
        vertices = box_vertices(self)
        return float(max(np.linalg.norm(v) for v in vertices))

    def selection_point(self) -> np.ndarray:
        if self.is_bounded():
            return 0.5 * (self.lower + self.upper)
        return self.project(np.zeros(self.dim))

    def interior_depth(self, x) -> float:
        x = self._check_dim(x)
        return float(np.min(np.minimum(x - self.lower, self.upper - x)))

    def normal_cone_contains(self, x, v, tol: float = 1e-9) -> bool:
        x = self._check_dim(x)
        v = self._check_dim(v)
        if not self.contains(x, tol):
            raise GeometryError("normal cone queried at a point outside the set")
        nv = np.linalg.norm(v)
        if nv <= tol:
            return True
        # sup over the box of <v, q - x>, with tiny components of v zeroed out
        vv = np.where(np.abs(v) <= tol * nv, 0.0, v)
        bound = np.where(vv > 0, self.upper, self.lower)
        gap = np.zeros_like(vv)
        mask = vv != 0
        gap[mask] = vv[mask] * (bound[mask] - x[mask])  # avoids 0 * inf
        return bool(np.sum(gap) <= tol * max(1.0, nv))

    def _key(self):
        return (self.lower, self.upper)


@dataclass(eq=False)
class Halfspace(ConvexSet):
    """The set {x : <normal, x> <= offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        self.normal = _vec(self.normal)
        self.offset = float(self.offset)
        if np.linalg.norm(self.normal) == 0:
            raise GeometryError("halfspace normal must be nonzero")

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def project(self, x) -> np.ndarray:
        x = self._check_dim(x)
        excess = np.dot(self.normal, x) - self.offset
        if excess <= 0:
            return x.copy()
        return x - (excess / np.dot(self.normal, self.normal)) * self.normal

    def project_many(self, pts: np.ndarray) -> np.ndarray:
        excess = pts @ self.normal - self.offset
        excess = np.maximum(excess, 0.0)
        return pts - np.outer(excess / np.dot(self.normal, self.normal), self.normal)

    def support(self, direction) -> float:
        direction = _vec(direction)
        nn = np.dot(self.normal, self.normal)
        t = np.dot(direction, self.normal) / nn
        residual = direction - t * self.normal
        if t < 0 or np.linalg.norm(residual) > 1e-12 * (1 + np.linalg.norm(direction)):
            return float("inf")
        return t * self.offset

    def bounding_radius(self) -> float | None:
        return None

    def selection_point(self) -> np.ndarray:
        return self.project(np.zeros(self.dim))

    def interior_depth(self, x) -> float:
        x = self._check_dim(x)
        return float(
            (self.offset - np.dot(self.normal, x)) / np.linalg.norm(self.normal)
        )

    def normal_cone_contains(self, x, v, tol: float = 1e-9) -> bool:
        x = self._check_dim(x)
        v = self._check_dim(v)
        if not self.contains(x, tol):
            raise GeometryError("normal cone queried at a point outside the set")
        nv = np.linalg.norm(v)
        if nv <= tol:
            return True
        slack = self.offset - np.dot(self.normal, x)
        if slack > tol * (1.0 + np.linalg.norm(self.normal)):
            return False  # interior point: cone is {0}
        t = np.dot(v, self.normal) / np.dot(self.normal, self.normal)
        if t < -tol:
            return False
        return bool(np.linalg.norm(v - t * self.normal) <= tol * (1.0 + nv))

    def _key(self):
        return (self.normal, self.offset)


@dataclass(frozen=True)
class DistanceSubgradient:
    """Subgradient information for the distance function at a point.

    Outside the set the subdifferential is the singleton unit vector
    ``gradient``; on the set it is the normal cone intersected with the unit
    ball, reported here by reference to the set (0 is always a valid pick).
    """

    on_set: bool
    gradient: np.ndarray | None = None
    set_ref: ConvexSet | None = field(default=None, repr=False)


def distance_subgradient(Q: ConvexSet, x, tol: float | None = None) -> DistanceSubgradient:
    """Subdifferential of the distance function to ``Q`` at ``x``."""
    x = Q._check_dim(x)
    if tol is None:
        tol = membership_tol(x)
    d = Q.distance(x)
    if d > tol:
        return DistanceSubgradient(on_set=False, gradient=(x - Q.project(x)) / d)
    return DistanceSubgradient(on_set=True, set_ref=Q)


def box_vertices(Q: ConvexSet) -> list[np.ndarray]:
    """Corner points of a bounded axis box, degenerate faces collapsed."""
    if not isinstance(Q, AxisBox):
        raise GeometryError("vertices are only defined for axis boxes")
    if not Q.is_bounded():
        raise GeometryError("vertices of an unbounded box are undefined")
    choices = []
    for lo, hi in zip(Q.lower, Q.upper):
        choices.append((lo,) if lo == hi else (lo, hi))
    return [np.array(c, dtype=float) for c in itertools.product(*choices)]


def set_contains_set(inner: ConvexSet, outer: ConvexSet) -> bool | None:
    """Decide ``inner`` subset-of ``outer`` for the decidable shape pairs.

    Returns True/False when decidable, None otherwise.  Containment in a
    halfspace or a box reduces to support-function evaluations; containment
    in a ball is handled for singletons, balls and bounded boxes.
    """
    if isinstance(inner, Singleton):
        return outer.contains(inner.point)
    if isinstance(outer, Halfspace):
        return inner.support(outer.normal) <= outer.offset + 1e-12 * (
            1.0 + abs(outer.offset)
        )
    if isinstance(outer, AxisBox):
        n = outer.dim
        for k in range(n):
            e = np.zeros(n)
            e[k] = 1.0
            if inner.support(e) > outer.upper[k] + 1e-12 * (1.0 + abs(outer.upper[k])):
                return False
            if -inner.support(-e) < outer.lower[k] - 1e-12 * (1.0 + abs(outer.lower[k])):
                return False
        return True
    if isinstance(outer, Ball):
        if isinstance(inner, Ball):
            gap = np.linalg.norm(inner.center - outer.center) + inner.radius
            return bool(gap <= outer.radius + 1e-12 * (1.0 + outer.radius))
        if isinstance(inner, AxisBox) and inner.is_bounded():
            return all(outer.contains(v) for v in box_vertices(inner))
        return None
    if isinstance(outer, Singleton):
        return None  # only a singleton fits, handled above
    return None
