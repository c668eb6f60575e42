"""
Theoretical quantities of the three reference models
====================================================

Loss-of-memory coefficients, the renewal sums built from them, the
divergence gaps ``D_k`` and the minimal admissible depth.
"""
from pathlib import Path

import numpy as np

from vlmc import bound_report, load_model, stationary_law, word_probability

here = Path(__file__).parent / "models"

# T1 is a finite tree of height 3; its stationary law lives on {0,1}^3
T1 = load_model(here / "T1.json")
law = stationary_law(T1)
print("stationary law of T1 on 3-blocks:", np.round(law.pi, 4))
print("p(00) =", word_probability(law, "00"))

# the report collects everything in one place
for name in ("T0", "T1", "U1"):
    rep = bound_report(load_model(here / f"{name}.json"), k_max=6, K=2)
    print(f"\n{name}")
    print("  alpha_0..6  ", np.round(rep.alpha_seq[:7], 4))
    print("  sum rho     ", round(rep.rho_sum, 4), "limit", round(rep.rho_limit, 4))
    print("  D_1..6      ", [None if not np.isfinite(x) else round(x, 5) for x in rep.D])
    print("  eps_1..6    ", np.round(rep.epsilon, 5))
    print("  minimal d   ", rep.d_min)

# the comb has unbounded memory: every truncation level adds a context
U1 = load_model(here / "U1.json")
print("\nU1 truncated at K=4:", sorted(U1.truncate(4).contexts, key=lambda w: (len(w), w)))
