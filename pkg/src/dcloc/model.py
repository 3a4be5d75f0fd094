"""Problem instances, objective evaluation and the existence classifier.

The objective is a weighted sum of distances to attraction sets minus a
weighted sum of distances to repulsion sets, minimized over a constraint set.
With negative weights present the problem is a d.c. program; the split into
two convex components (each augmented by a quadratic term) lives here as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    AxisBox,
    Ball,
    ConvexSet,
    Halfspace,
    Singleton,
    membership_tol,
    set_contains_set,
)

__all__ = [
    "WeightedSet",
    "ProblemInstance",
    "ExistenceReport",
    "SetBatch",
    "evaluate_objective",
    "evaluate_objective_many",
    "evaluate_split",
    "existence_classify",
    "validate_instance",
]


@dataclass(eq=False)
class WeightedSet:
    set: ConvexSet
    weight: float

    def __post_init__(self):
        self.weight = float(self.weight)

    def __eq__(self, other):
        if not isinstance(other, WeightedSet):
            return NotImplemented
        return self.weight == other.weight and self.set == other.set


class SetBatch:
    """Vectorized projection/distance over a list of convex sets.

    Groups the sets by shape family so that projections of a single point onto
    hundreds of sets reduce to a handful of numpy array operations.  Results
    are returned in the original set order.
    """

    def __init__(self, sets: list[ConvexSet]):
        self.n_sets = len(sets)
        self.dim = sets[0].dim if sets else 0
        self._groups = []
        by_kind: dict[type, list[int]] = {}
        for idx, s in enumerate(sets):
            by_kind.setdefault(type(s), []).append(idx)
        for kind, indices in by_kind.items():
            members = [sets[i] for i in indices]
            idx = np.array(indices)
            if kind is Singleton:
                params = (np.stack([s.point for s in members]),)
            elif kind is AxisBox:
                params = (
                    np.stack([s.lower for s in members]),
                    np.stack([s.upper for s in members]),
                )
            elif kind is Ball:
                params = (
                    np.stack([s.center for s in members]),
                    np.array([s.radius for s in members]),
                )
            elif kind is Halfspace:
                normals = np.stack([s.normal for s in members])
                params = (
                    normals,
                    np.array([s.offset for s in members]),
                    np.sum(normals * normals, axis=1),
                )
            else:
                raise TypeError(f"unsupported set type {kind.__name__}")
            self._groups.append((kind, idx, params))

    def projections(self, x: np.ndarray) -> np.ndarray:
        """(m, n) array with row i the projection of ``x`` onto set i."""
        out = np.empty((self.n_sets, self.dim))
        for kind, idx, params in self._groups:
            if kind is Singleton:
                out[idx] = params[0]
            elif kind is AxisBox:
                out[idx] = np.clip(x, params[0], params[1])
            elif kind is Ball:
                centers, radii = params
                d = x - centers
                nd = np.linalg.norm(d, axis=1)
                scale = np.where(nd > radii, radii / np.maximum(nd, 1e-300), 1.0)
                out[idx] = centers + d * scale[:, None]
            else:  # Halfspace
                normals, offsets, nn = params
                excess = np.maximum(normals @ x - offsets, 0.0)
                out[idx] = x - (excess / nn)[:, None] * normals
        return out

    def distances(self, x: np.ndarray) -> np.ndarray:
        return np.linalg.norm(x - self.projections(x), axis=1)

    def distances_many(self, pts: np.ndarray) -> np.ndarray:
        """(N, m) distances from each of N points to each of the m sets."""
        out = np.empty((pts.shape[0], self.n_sets))
        for kind, idx, params in self._groups:
            if kind is Singleton:
                diff = pts[:, None, :] - params[0][None, :, :]
                out[:, idx] = np.linalg.norm(diff, axis=2)
            elif kind is AxisBox:
                proj = np.clip(pts[:, None, :], params[0][None], params[1][None])
                out[:, idx] = np.linalg.norm(pts[:, None, :] - proj, axis=2)
            elif kind is Ball:
                centers, radii = params
                nd = np.linalg.norm(pts[:, None, :] - centers[None], axis=2)
                out[:, idx] = np.maximum(nd - radii[None], 0.0)
            else:  # Halfspace
                normals, offsets, nn = params
                excess = np.maximum(pts @ normals.T - offsets[None], 0.0)
                out[:, idx] = excess / np.sqrt(nn)[None]
        return out


@dataclass(eq=False)
class ProblemInstance:
    """Weighted attraction/repulsion sets plus a constraint set."""

    dimension: int
    attractions: list[WeightedSet]
    repulsions: list[WeightedSet]
    constraint: ConvexSet

    def __post_init__(self):
        self._attraction_batch = None
        self._repulsion_batch = None

    def __eq__(self, other):
        if not isinstance(other, ProblemInstance):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.attractions == other.attractions
            and self.repulsions == other.repulsions
            and self.constraint == other.constraint
        )

    @property
    def attraction_batch(self) -> SetBatch:
        if self._attraction_batch is None:
            self._attraction_batch = SetBatch([w.set for w in self.attractions])
        return self._attraction_batch

    @property
    def repulsion_batch(self) -> SetBatch:
        if self._repulsion_batch is None:
            self._repulsion_batch = SetBatch([w.set for w in self.repulsions])
        return self._repulsion_batch

    @property
    def attraction_weights(self) -> np.ndarray:
        return np.array([w.weight for w in self.attractions])

    @property
    def repulsion_weights(self) -> np.ndarray:
        return np.array([w.weight for w in self.repulsions])


def evaluate_objective(inst: ProblemInstance, x) -> float:
    """Weighted attraction distances minus weighted repulsion distances."""
    x = np.asarray(x, dtype=float)
    if x.shape != (inst.dimension,):
        raise ValueError(f"point of shape {x.shape} vs dimension {inst.dimension}")
    val = float(inst.attraction_weights @ inst.attraction_batch.distances(x))
    if inst.repulsions:
        val -= float(inst.repulsion_weights @ inst.repulsion_batch.distances(x))
    return val


def evaluate_objective_many(inst: ProblemInstance, pts: np.ndarray) -> np.ndarray:
    """Objective values for an (N, n) array of points."""
    pts = np.asarray(pts, dtype=float)
    vals = inst.attraction_batch.distances_many(pts) @ inst.attraction_weights
    if inst.repulsions:
        vals = vals - inst.repulsion_batch.distances_many(pts) @ inst.repulsion_weights
    return vals


def evaluate_split(inst: ProblemInstance, lam: float, x) -> tuple[float, float]:
    """Values (g, h) of the two convex components at ``x``.

    g adds the constraint indicator (so g = +inf outside the constraint set);
    both components carry the quadratic term (lam/2)||x||^2, which cancels in
    the difference g - h = f on the constraint set.
    """
    x = np.asarray(x, dtype=float)
    quad = 0.5 * lam * float(x @ x)
    h = quad
    if inst.repulsions:
        h += float(inst.repulsion_weights @ inst.repulsion_batch.distances(x))
    if not inst.constraint.contains(x):
        return math.inf, h
    g = quad + float(inst.attraction_weights @ inst.attraction_batch.distances(x))
    return g, h


@dataclass
class ExistenceReport:
    """Outcome of the sufficient-condition screen for solution existence."""

    verdict: str  # exists | no_solution_unbounded_below | objective_bounded |
    #               no_solution_infimum_not_attained | unknown
    rule: str | None = None
    objective_bound: float | None = None
    imbalance: np.ndarray | None = None  # sum(alpha_i a_i) - sum(beta_j b_j)
    majority_index: int | None = None
    infimum: float | None = None


def _is_whole_space(S: ConvexSet) -> bool:
    return (
        isinstance(S, AxisBox)
        and np.all(np.isinf(S.lower))
        and np.all(np.isinf(S.upper))
    )


def _all_bounded(sets: list[WeightedSet]) -> bool:
    return all(w.set.bounding_radius() is not None for w in sets)


def existence_classify(inst: ProblemInstance) -> ExistenceReport:
    """Apply the sufficient existence/non-existence rules in a fixed order.

    The rules are sufficient, not necessary, so ``unknown`` is an honest
    verdict when none of them fires.  Independently of the verdict the report
    carries the majority index (a single attraction weight dominating all
    others forces solutions into that set) and, in the all-singleton
    equal-weight case, the imbalance vector whose norm gives the asymptotic
    objective level.
    """
    sum_a = float(np.sum(inst.attraction_weights)) if inst.attractions else 0.0
    sum_b = float(np.sum(inst.repulsion_weights)) if inst.repulsions else 0.0
    weight_scale = max(sum_a, sum_b, 1.0)
    equal_weights = abs(sum_a - sum_b) <= 1e-12 * weight_scale

    report = ExistenceReport(verdict="unknown")

    # majority condition: needs the dominant set contained in the constraint
    for i0, w in enumerate(inst.attractions):
        rest = sum_a - w.weight + sum_b
        if w.weight > rest and set_contains_set(w.set, inst.constraint) is True:
            report.majority_index = i0
            break

    all_singletons = all(
        isinstance(w.set, Singleton) for w in inst.attractions + inst.repulsions
    )
    if all_singletons and equal_weights and inst.repulsions:
        report.imbalance = sum(
            w.weight * w.set.point for w in inst.attractions
        ) - sum(w.weight * w.set.point for w in inst.repulsions)

    if inst.constraint.bounding_radius() is not None:
        report.verdict = "exists"
        report.rule = "bounded_constraint"
        return report
    # dominance must clear the same tolerance that defines equal weights,
    # otherwise a rounding-level imbalance masks the balanced rules below
    if not equal_weights and sum_a > sum_b and _all_bounded(inst.attractions):
        report.verdict = "exists"
        report.rule = "dominant_attraction"
        return report
    if not equal_weights and sum_a < sum_b and _all_bounded(inst.repulsions):
        report.verdict = "no_solution_unbounded_below"
        report.rule = "dominant_repulsion"
        return report
    # the all-singleton no-attainment rule is a strict refinement of the
    # equal-weight boundedness rule, so it must be screened first
    if (
        all_singletons
        and equal_weights
        and len(inst.attractions) >= 2
        and len(inst.repulsions) == 1
        and _is_whole_space(inst.constraint)
    ):
        b = inst.repulsions[0].set.point
        directions = np.stack([w.set.point - b for w in inst.attractions])
        if np.linalg.matrix_rank(directions, tol=1e-9) == len(inst.attractions):
            report.verdict = "no_solution_infimum_not_attained"
            report.rule = "independent_singletons_equal_weights"
            report.infimum = -float(np.linalg.norm(report.imbalance))
            return report
    if equal_weights and _all_bounded(inst.attractions) and _all_bounded(inst.repulsions):
        r = max(w.set.bounding_radius() for w in inst.attractions)
        big_r = max(w.set.bounding_radius() for w in inst.repulsions)
        centers_b = sum(
            w.weight * float(np.linalg.norm(w.set.selection_point()))
            for w in inst.repulsions
        )
        centers_a = sum(
            w.weight * float(np.linalg.norm(w.set.selection_point()))
            for w in inst.attractions
        )
        report.verdict = "objective_bounded"
        report.rule = "equal_weights_all_bounded"
        # the two expressions bound opposite sides of the objective:
        # f <= centers_a + big_r * sum_b and f >= -(r * sum_a + centers_b),
        # so the magnitude certificate is their maximum
        report.objective_bound = max(r * sum_a + centers_b, centers_a + big_r * sum_b)
        return report

    return report


def validate_instance(inst: ProblemInstance) -> list[str]:
    """Collect human-readable diagnostics; empty list means no findings.

    The fixed-point inner solver assumes every attraction set is disjoint from
    the constraint set; intersection detection is conservative (distance
    between canonical selections of the representable shapes).
    """
    diags = []
    for label, group in (("attraction", inst.attractions), ("repulsion", inst.repulsions)):
        for i, w in enumerate(group):
            if not w.weight > 0:
                diags.append(f"{label} {i}: weight must be strictly positive")
            if w.set.dim != inst.dimension:
                diags.append(
                    f"{label} {i}: set dimension {w.set.dim} != instance "
                    f"dimension {inst.dimension}"
                )
    if inst.constraint.dim != inst.dimension:
        diags.append("constraint set dimension mismatch")
    if not inst.attractions:
        diags.append("instance has no attraction sets")
    if any(d for d in diags):
        return diags

    for i, w in enumerate(inst.attractions):
        # detect intersection by alternating projections; converges to a common
        # point when the sets meet, and to a closest pair otherwise
        q = inst.constraint.project(w.set.selection_point())
        for _ in range(25):
            q = inst.constraint.project(w.set.project(q))
        if w.set.contains(q, membership_tol(q)):
            diags.append(
                f"attraction {i} intersects the constraint set; the fixed-point "
                "inner solver may be inapplicable (subgradient fallback is used)"
            )
    return diags
