"""Source and accessible sets of one reference state, three ways.

The exact polygon geometry gives the set volumes to machine precision; a
labeled scan shows which sampled states can reach (or be reached from) the
reference state; the image curves bound the measure pairs those sets occupy.
"""

import pathlib
from collections import Counter

from bent.geometry import exact_polygon_3
from bent.measures import MeasureId, evaluate_closed
from bent.regions import image_boundaries, scan, scan_csv, write_csv
from bent.schmidt import new_sorted

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

phi = new_sorted([0.52, 0.28, 0.2])
ids = [MeasureId("es"), MeasureId("esgen", 4)]

for which in ("source", "accessible"):
    res = exact_polygon_3(phi, which)
    value = 1.0 - res.ratio if which == "source" else res.ratio
    print(f"{which} set: area ratio {res.ratio:.12f} "
          f"({'Es' if which == 'source' else 'Ea'} = {value:.12f}), "
          f"vertices {res.polygon.vertices}")

print("closed forms:",
      f"Es = {evaluate_closed(phi, MeasureId('es')):.12f},",
      f"Ea = {evaluate_closed(phi, MeasureId('ea')):.12f}")

rows = scan(3, ids, 30_000, seed=1, phi=phi)
scan_csv(rows, 3, ids, str(OUT / "labeled_scan_d3.csv"))
print("labels:", dict(Counter(r.label for r in rows)))

curves = image_boundaries(phi, ids, steps=300)
write_csv(curves, ["curve", "t", "lambda_1", "lambda_2", "lambda_3", "es", "esgen4"],
          str(OUT / "image_curves_d3.csv"))
print(f"wrote {len(curves)} image-curve rows")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    colors = {"source-of-phi": "goldenrod", "accessible-from-phi": "hotpink",
              "incomparable": "lightgray"}
    fig, ax = plt.subplots(figsize=(6, 5))
    for label, color in colors.items():
        pts = [(r.values[0], r.values[1]) for r in rows if r.label == label]
        if pts:
            xs, ys = zip(*pts)
            ax.scatter(xs, ys, s=2, alpha=0.4, color=color, label=label)
    for name in sorted({r[0] for r in curves}):
        xs = [r[5] for r in curves if r[0] == name]
        ys = [r[6] for r in curves if r[0] == name]
        ax.plot(xs, ys, lw=2, label=name)
    es_phi = evaluate_closed(phi, MeasureId("es"))
    eg_phi = evaluate_closed(phi, MeasureId("esgen", 4))
    ax.plot([es_phi], [eg_phi], "k*", ms=14, label="reference state")
    ax.set_xlabel("source entanglement")
    ax.set_ylabel("generalized source entanglement (k=4)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(OUT / "source_accessible_sets.png", dpi=150)
    print("wrote source_accessible_sets.png")
except ImportError:
    print("matplotlib not available; CSV output only")
