"""A gallery of instances for the existence classifier.

Whether a minimizer exists at all depends on the balance between the
attraction and repulsion weights and on which sets are bounded.  The
classifier applies a fixed list of sufficient rules and says "unknown" when
none of them fires.
"""

import numpy as np

from dcloc import (
    AxisBox,
    Ball,
    ProblemInstance,
    Singleton,
    WeightedSet,
    evaluate_objective,
    existence_classify,
)

INF = np.inf
free2 = AxisBox([-INF, -INF], [INF, INF])

gallery = {
    "bounded constraint": ProblemInstance(
        2,
        [WeightedSet(Singleton([2.0, 0.0]), 1.0)],
        [WeightedSet(Singleton([0.0, 0.0]), 1.0)],
        Ball([0, 0], 5.0),
    ),
    "attraction dominates": ProblemInstance(
        2,
        [WeightedSet(Ball([1.0, 1.0], 0.5), 3.0)],
        [WeightedSet(Singleton([0.0, 0.0]), 1.0)],
        free2,
    ),
    "repulsion dominates": ProblemInstance(
        2,
        [WeightedSet(Singleton([1.0, 1.0]), 1.0)],
        [WeightedSet(Ball([0.0, 0.0], 1.0), 3.0)],
        free2,
    ),
    "balanced, all bounded": ProblemInstance(
        2,
        [WeightedSet(Singleton([-1.0, 0.0]), 1.0)],
        [WeightedSet(Singleton([1.0, 0.0]), 1.0)],
        free2,
    ),
    "independent attractors, double repeller": ProblemInstance(
        2,
        [
            WeightedSet(Singleton([1.0, 0.0]), 1.0),
            WeightedSet(Singleton([0.0, 1.0]), 1.0),
        ],
        [WeightedSet(Singleton([0.0, 0.0]), 2.0)],
        free2,
    ),
    "unbounded attractor (no rule fires)": ProblemInstance(
        1,
        [WeightedSet(AxisBox([-INF], [0.0]), 2.0)],
        [WeightedSet(Singleton([1.0]), 1.0)],
        AxisBox([-INF], [INF]),
    ),
}

for name, inst in gallery.items():
    rep = existence_classify(inst)
    print(f"{name}:")
    print(f"  verdict = {rep.verdict}  (rule: {rep.rule})")
    if rep.objective_bound is not None:
        print(f"  |f| certified <= {rep.objective_bound}")
    if rep.infimum is not None:
        print(f"  infimum = {rep.infimum}")
    if rep.imbalance is not None:
        print(f"  imbalance vector = {rep.imbalance}")
    print()

# the no-attainment case really creeps toward its infimum
inst = gallery["independent attractors, double repeller"]
u = np.array([1.0, 1.0]) / np.sqrt(2.0)
print("values along the diagonal escape direction:")
for T in (10, 100, 1000, 10000):
    print(f"  f({T:>5} * u) = {evaluate_objective(inst, T * u):.6f}")
print(f"  infimum        = {-np.sqrt(2.0):.6f}  (never attained)")
