"""Walk through one solve step by step.

The instance pulls toward the horizontal line x2 = 0 while being pushed away
from the two halfplanes {x2 >= 1} and {x2 <= -1}, all inside a radius-10
ball.  The best value is -2, attained anywhere on the line inside the ball.
"""

import numpy as np

from dcloc import (
    AxisBox,
    Ball,
    DcaConfig,
    GridSpec,
    Halfspace,
    ProblemInstance,
    WeightedSet,
    dca_solve,
    grid_search,
)

inst = ProblemInstance(
    2,
    [WeightedSet(AxisBox([-np.inf, 0], [np.inf, 0]), 1.0)],
    [
        WeightedSet(Halfspace([0, 1], -1.0), 1.0),
        WeightedSet(Halfspace([0, -1], -1.0), 1.0),
    ],
    Ball([0, 0], 10.0),
)

print("start at (3, 0.5), recording the trajectory")
report = dca_solve(inst, [3.0, 0.5], DcaConfig(record_trajectory=True))

print(f"{'k':>3} {'x1':>10} {'x2':>10} {'f':>10} {'step':>10}")
for pt in report.trajectory:
    print(f"{pt.k:>3} {pt.x[0]:>10.5f} {pt.x[1]:>10.5f} "
          f"{pt.f_value:>10.5f} {pt.step_norm:>10.2e}")

print()
print("final value:        ", report.final_value)
print("termination:        ", report.termination)
print("criticality residual:", report.criticality_residual)
print("inner methods used: ", report.inner_methods_used)

# cross-check against an exhaustive grid
grid = grid_search(inst, GridSpec([-10, -10], [10, 10], 201))
print()
print(f"grid oracle: best {grid.best_value:.4f} at {grid.best_x} "
      f"({grid.evaluations} evaluations, spacing {grid.spacing})")
