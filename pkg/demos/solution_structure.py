"""Solution structure of the two-set problem.

One attractor, one repeller.  When the attraction weight strictly dominates,
the solutions are exactly the points of the attractor farthest from the
repeller.  At equal weights every such point extends to a whole ray of
solutions pointing away from the repeller.
"""

import numpy as np

from dcloc import (
    AxisBox,
    Singleton,
    SpecialInstance,
    classify_point,
    solve_special,
    uniqueness_check,
)

# vertical segment from (0,-2) to (0,2) versus a point repeller at (1,0)
segment = AxisBox([0, -2], [0, 2])
repeller = Singleton([1.0, 0.0])

print("equal weights")
inst = SpecialInstance(omega=segment, theta=repeller)
solutions, mode = solve_special(inst)
print("  mode:", mode)
for ray in solutions:
    print(f"  ray: base {ray.base}, direction {ray.direction}")
    for t in (0.0, 1.0, 5.0):
        x = ray.point_at(t)
        print(f"    f(ray({t})) = {inst.objective(x):.6f} at {x}")
print("  unique solution?", uniqueness_check(inst))

print()
print("dominant attraction (alpha = 2)")
inst2 = SpecialInstance(omega=segment, theta=repeller, alpha=2.0)
solutions, mode = solve_special(inst2)
print("  mode:", mode)
print("  solutions:", [tuple(s) for s in solutions])
print("  unique solution?", uniqueness_check(inst2))

print()
print("classifying probe points (stationary / critical)")
for point in ([-2, 0], [2, 0], [1, 0], [0.5, 0.5], [-1, -4], [0, 0]):
    got = classify_point(inst, np.array(point, dtype=float))
    print(f"  {point}: stationary={got.stationary} critical={got.critical}")
