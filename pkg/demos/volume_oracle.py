"""Monte Carlo volumes converging onto the closed-form measures.

The closed forms were transcribed by hand; the sampler knows nothing about
them, which is exactly what makes the agreement a meaningful check.
"""

import pathlib

from bent.geometry import mc_accessible_entanglement, mc_source_entanglement
from bent.measures import MeasureId, evaluate_closed
from bent.regions import write_csv
from bent.schmidt import new_sorted

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

states = [
    new_sorted([0.6, 0.3, 0.1]),
    new_sorted([0.5, 0.37, 0.13]),
    new_sorted([0.45, 0.35, 0.2]),
    new_sorted([0.4, 0.35, 0.2, 0.05]),
    new_sorted([0.3, 0.28, 0.22, 0.2]),
]

rows = []
for phi in states:
    es_cf = evaluate_closed(phi, MeasureId("es"))
    ea_cf = evaluate_closed(phi, MeasureId("ea"))
    for n in (10_000, 100_000, 1_000_000):
        src = mc_source_entanglement(phi, n, seed=7)
        acc = mc_accessible_entanglement(phi, n, seed=7)
        rows.append((",".join(f"{x:.3g}" for x in phi.values), n,
                     es_cf, src.fraction, src.std_error,
                     ea_cf, acc.fraction, acc.std_error))
    print(f"state ({rows[-1][0]}):")
    print(f"  Es closed {es_cf:.6f}   MC {src.fraction:.6f} +- {src.std_error:.6f}"
          f"   ({abs(src.fraction - es_cf) / src.std_error:.2f} se)")
    print(f"  Ea closed {ea_cf:.6f}   MC {acc.fraction:.6f} +- {acc.std_error:.6f}"
          f"   ({abs(acc.fraction - ea_cf) / acc.std_error:.2f} se)")

write_csv(rows,
          ["state", "samples", "es_closed", "es_mc", "es_se", "ea_closed", "ea_mc", "ea_se"],
          str(OUT / "volume_convergence.csv"))
print("wrote volume_convergence.csv")
