"""
Recovery error against sample size
==================================

Monte Carlo frequency of a wrong truncated tree, next to the theoretical
bound.  The bound is valid but far from tight at these sizes.
"""
from pathlib import Path

from vlmc import ExperimentConfig, run_recovery_experiment

models = Path(__file__).parent / "models"
cfg = ExperimentConfig.from_dict({
    "model": str(models / "T1.json"),
    "n_grid": [2**k for k in range(10, 18)],
    "K": 3,
    "R": 100,
    "master_seed": 1,
})
curve = run_recovery_experiment(cfg)
print(f"d = {curve.d}, delta = {curve.delta:.4f}, config hash {curve.config_hash}")
for r in curve.rows:
    bound = "   -   " if r.bound is None else f"{r.bound:7.1f}"
    print(f"n = {r.n:7d}  error = {r.error_freq:.2f} +- {r.stderr:.2f}  bound = {bound}")
print()
print(curve.to_csv())
