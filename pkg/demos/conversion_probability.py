"""Probabilistic conversions: optimal success probabilities and what the
residual branches of an optimal protocol must look like.
"""

import pathlib

import numpy as np

from bent.monotones import (
    EnsembleBranch,
    check_optimal_residuals,
    ensemble_feasible,
    success_probability,
)
from bent.regions import psucc_field, write_csv
from bent.schmidt import maximally_entangled, new_sorted

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

phi = new_sorted([0.52, 0.28, 0.2])
target = maximally_entangled(3)
p, k0 = success_probability(phi, target)
print(f"converting {phi.values} into the maximally entangled state:")
print(f"  optimal probability {p:.6f}, binding tail index k0 = {k0}")

# an optimal protocol must dump the entire bottom tail into the success
# branch; this residual saturates the remaining tail budget exactly
residual = new_sorted([0.8, 0.2, 0.0])
ensemble = [EnsembleBranch(p, target), EnsembleBranch(1 - p, residual)]
print(f"  feasible optimal ensemble with residual {residual.values}:",
      ensemble_feasible(phi, ensemble))
print("  residual branches drop the binding tail:",
      check_optimal_residuals(phi, target, ensemble))
bad = [EnsembleBranch(p, target), EnsembleBranch(1 - p, phi)]
print("  keeping tail weight in the residual is infeasible:",
      not ensemble_feasible(phi, bad))

rows = psucc_field(phi, "from", 200_000, seed=0)
write_csv(rows, ["lambda_1", "lambda_2", "lambda_3", "psucc"],
          str(OUT / "psucc_from_phi.csv"))
ps = np.array([r[-1] for r in rows])
print(f"probability field from phi: min {ps.min():.4f} "
      f"(the maximally entangled target is the hardest), "
      f"{(ps >= 1.0 - 1e-12).mean():.1%} deterministic")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    l1 = np.array([r[0] for r in rows])
    l2 = np.array([r[1] for r in rows])
    fig, ax = plt.subplots(figsize=(6, 5))
    sc = ax.scatter(l1, l2, c=ps, s=2, cmap="viridis")
    fig.colorbar(sc, label="conversion probability from the reference state")
    ax.set_xlabel("largest coefficient")
    ax.set_ylabel("middle coefficient")
    fig.tight_layout()
    fig.savefig(OUT / "psucc_field.png", dpi=150)
    print("wrote psucc_field.png")
except ImportError:
    print("matplotlib not available; CSV output only")
