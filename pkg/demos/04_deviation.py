"""
Count deviations and their exponential bound
============================================

For T0 we compare the frequency of ``|N(01) - (n-1) p(01)| > t`` with the
bound over a grid of ``t``.
"""
from pathlib import Path

from vlmc import load_model, run_deviation_experiment

T0 = load_model(Path(__file__).parent / "models" / "T0.json")
rows = run_deviation_experiment(T0, "0", "1", n=10**4, t_grid=[10, 25, 50, 100, 200, 400],
                                R=1000, seed=5)
print("     t   freq   bound   | t for phat  freq   bound")
for r in rows:
    cor = "   -  " if r.bound_cor32 is None else f"{r.bound_cor32:6.3g}"
    print(f"{r.t:6g}  {r.freq:.3f}  {r.bound_thm31:6.3g}  | {r.t_phat:9.4f}  {r.freq_phat:.3f}  {cor}")
