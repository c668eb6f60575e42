"""
Sampling a path and estimating its context tree
===============================================

The estimator keeps a word when its row differs from its parent's by more
than ``delta`` while none of its observed extensions does.
"""
from pathlib import Path

from vlmc import (
    EstimationParams,
    build_counts,
    divergence_sets,
    estimate,
    load_model,
    minimal_depth,
    sample_path,
    trees_equal_truncated,
)

T1 = load_model(Path(__file__).parent / "models" / "T1.json")
K = 3
d = minimal_depth(T1, K)
delta = divergence_sets(T1, d)[1] / 2
print(f"d = {d}, delta = {delta:.4f}")

for n in (2**10, 2**13, 2**16, 2**18):
    x = sample_path(T1, n, seed=n)
    est = estimate(build_counts(x, d), EstimationParams(delta, d, K))
    ok = trees_equal_truncated(est.tree, T1, K)
    print(f"n = {n:7d}  contexts = {est.contexts}  correct at K={K}: {ok}")

# estimated rows for the last run
for w, row in est.rows.items():
    print(f"  p(.|{w:>4s}) = {row.round(3)}")
