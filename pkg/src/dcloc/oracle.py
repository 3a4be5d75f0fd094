"""Brute-force verification oracle.

Exhaustive projected grid search plus a coordinate pattern-search refiner.
This is a test instrument for desk-scale problems, not a solver: the budget
cap keeps accidental high-dimensional grids from blowing up, and the result
is deterministic including the tie-break (lexicographically smallest
minimizer).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ProblemInstance, evaluate_objective, evaluate_objective_many

__all__ = [
    "GridSpec",
    "OracleResult",
    "BudgetExceeded",
    "EmptyIntersection",
    "grid_search",
    "local_refine",
]

_DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16


class BudgetExceeded(ValueError):
    """Grid would require more evaluations than the configured budget."""


class EmptyIntersection(ValueError):
    """The grid region does not reach the constraint set."""


@dataclass
class GridSpec:
    lower: np.ndarray
    upper: np.ndarray
    points_per_axis: int
    budget: int = _DEFAULT_BUDGET

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.points_per_axis = int(self.points_per_axis)
        if self.points_per_axis < 2:
            raise ValueError("need at least two grid points per axis")
        if np.any(self.lower >= self.upper):
            raise ValueError("grid requires lower < upper componentwise")


@dataclass
class OracleResult:
    best_x: np.ndarray
    best_value: float
    evaluations: int
    spacing: float


def grid_search(inst: ProblemInstance, grid: GridSpec) -> OracleResult:
    """Evaluate the objective at every grid point projected onto the
    constraint set and return the minimum.

    Projection-then-evaluate keeps feasibility exact even when the constraint
    slices the grid region.  Ties are broken by the lexicographically smallest
    minimizer.
    """
    n = inst.dimension
    if n > 4:
        raise BudgetExceeded("grid search is restricted to dimension <= 4")
    total = grid.points_per_axis**n
    if total > grid.budget:
        raise BudgetExceeded(f"{total} evaluations exceed the budget {grid.budget}")
    axes = [
        np.linspace(grid.lower[k], grid.upper[k], grid.points_per_axis)
        for k in range(n)
    ]
    spacing = float(max((hi - lo) / (grid.points_per_axis - 1)
                        for lo, hi in zip(grid.lower, grid.upper)))
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)

    diag = float(np.linalg.norm(grid.upper - grid.lower))
    best_val = np.inf
    best_rows: list[np.ndarray] = []
    min_dist = np.inf
    for start in range(0, total, _CHUNK):
        block = pts[start : start + _CHUNK]
        proj = _project_many(inst, block)
        min_dist = min(
            min_dist, float(np.min(np.linalg.norm(block - proj, axis=1)))
        )
        vals = evaluate_objective_many(inst, proj)
        lo = float(np.min(vals))
        if lo < best_val:
            best_val = lo
            best_rows = [proj[vals == lo]]
        elif lo == best_val:
            best_rows.append(proj[vals == lo])
    if min_dist > diag:
        raise EmptyIntersection("no grid point projects near the constraint set")
    candidates = np.vstack(best_rows)
    order = np.lexsort(candidates.T[::-1])
    best_x = candidates[order[0]]
    return OracleResult(
        best_x=best_x, best_value=best_val, evaluations=total, spacing=spacing
    )


def _project_many(inst: ProblemInstance, pts: np.ndarray) -> np.ndarray:
    return inst.constraint.project_many(pts)


def local_refine(
    inst: ProblemInstance, x0, radius: float, rounds: int = 30
) -> OracleResult:
    """Coordinate pattern search, halving the radius each round.

    Every trial point is projected onto the constraint set; the returned value
    is never worse than at the start.
    """
    x = inst.constraint.project(np.asarray(x0, dtype=float))
    val = evaluate_objective(inst, x)
    n = inst.dimension
    evaluations = 1
    step = float(radius)
    for _ in range(rounds):
        improved = True
        while improved:
            improved = False
            for k in range(n):
                for sign in (1.0, -1.0):
                    cand = x.copy()
                    cand[k] += sign * step
                    cand = inst.constraint.project(cand)
                    cand_val = evaluate_objective(inst, cand)
                    evaluations += 1
                    if cand_val < val:
                        x, val = cand, cand_val
                        improved = True
        step *= 0.5
    return OracleResult(best_x=x, best_value=val, evaluations=evaluations, spacing=step)
