"""Sweeping the l1 budget: feature counts track the constraint.

The budget is the practical tuning knob: generous budgets keep many
features, tight ones keep few, and clustering quality sits on a plateau
once enough features survive.  Mirrors the `ksparse sweep` subcommand.
"""

from ksparse import SolverConfig, SyntheticSpec, generate_synthetic, sweep_eta

ds = generate_synthetic(
    SyntheticSpec(m=300, d=1000, k=3, n_informative=40, shift=2.0, noise_sd=1.0, seed=4)
)
cfg = SolverConfig(replicates=20, inner_iters=200, outer_loops=8)
records = sweep_eta(
    ds.matrix, 3, [0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
    labels_true=ds.labels_true, cfg=cfg, n_jobs=2,
)

print(f"{'eta':>6}  {'selected':>8}  {'frobenius':>10}  {'accuracy':>8}  {'ari':>7}  {'nmi':>7}")
for r in records:
    print(f"{r.eta:6.1f}  {r.selected_count:8d}  {r.frobenius_objective:10.5f}  "
          f"{r.accuracy:8.4f}  {r.ari:7.4f}  {r.nmi:7.4f}")

in_band = [r for r in records if 40 <= r.selected_count <= 80]
if in_band:
    pick = min(in_band, key=lambda r: abs(r.selected_count - 40))
    print(f"\nto keep roughly the planted 40 features, tune the budget near "
          f"eta={pick.eta:g} ({pick.selected_count} selected)")
