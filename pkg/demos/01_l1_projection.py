"""How the exact l1-ball projection induces sparsity.

Projects one random vector onto balls of shrinking radius and prints how
many coordinates survive: the projection is a soft-threshold whose level
rises as the budget tightens.
"""

import numpy as np

from ksparse import project_l1_ball, project_simplex

rng = np.random.default_rng(0)
v = rng.standard_normal(12) * 2.0

print("input vector:")
print(np.round(v, 3))
print(f"l1 norm: {np.abs(v).sum():.3f}\n")

print(f"{'budget':>8}  {'nonzeros':>8}  {'l1 of projection':>17}")
for eta in (16.0, 8.0, 4.0, 2.0, 1.0, 0.5):
    p = project_l1_ball(v, eta)
    print(f"{eta:8.1f}  {np.count_nonzero(p):8d}  {np.abs(p).sum():17.6f}")

print("\nThe ball projection is a signed simplex projection of |v|:")
w = np.array([3.0, -1.0, 0.5])
print("v            =", w)
print("P_l1(v, 2)   =", project_l1_ball(w, 2.0))
print("simplex(|v|) =", project_simplex(np.abs(w), 2.0), "(signs restored afterwards)")
