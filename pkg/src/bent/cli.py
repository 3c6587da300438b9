"""Command-line interface.

Subcommands: measure, psucc, volume, scan, boundary, image, split,
reconstruct, certify.  Exit codes: 0 success, 2 usage error, and for
certify 3 when no certificate was found at the requested degree and 4 when a
found certificate failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import certify as cert_mod
from . import regions, splittings
from .errors import BentError
from .geometry import exact_polygon_3, mc_accessible_entanglement, mc_source_entanglement
from .measures import MeasureId, measure_point
from .monotones import success_probability
from .schmidt import SchmidtVector, new_sorted

__all__ = ["main"]


def _parse_state(text: str) -> SchmidtVector:
    try:
        return new_sorted([float(x) for x in text.split(",")])
    except BentError:
        raise
    except ValueError as exc:
        raise BentError(f"cannot parse Schmidt vector {text!r}: {exc}") from exc


def _parse_ids(text: str) -> list[MeasureId]:
    return [MeasureId.parse(tok) for tok in text.split(",") if tok.strip()]


def _out_stream(path: str | None):
    return open(path, "w") if path else sys.stdout


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_measure(args) -> int:
    state = _parse_state(args.schmidt)
    ids = _parse_ids(args.ids)
    point = measure_point(state, ids)
    _emit(json.dumps(point.as_json_dict(), indent=2) + "\n", args.out)
    return 0


def cmd_psucc(args) -> int:
    if args.src is not None or args.to is not None:
        if args.src is None or args.to is None:
            raise BentError("--from and --to must be given together")
        psi, phi = _parse_state(args.src), _parse_state(args.to)
        p, k0 = success_probability(psi, phi)
        _emit(json.dumps({"p": p, "k0": k0}) + "\n", args.out)
        return 0
    if args.phi is None:
        raise BentError("give either --from/--to or --phi for a sampled field")
    phi = _parse_state(args.phi)
    rows = regions.psucc_field(phi, args.direction, args.samples, args.seed)
    header = [f"lambda_{i+1}" for i in range(phi.dim)] + ["psucc"]
    regions.write_csv(rows, header, args.out or sys.stdout)
    return 0


def cmd_volume(args) -> int:
    phi = _parse_state(args.phi)
    if args.exact:
        res = exact_polygon_3(phi, args.which)
        doc = {
            "which": args.which,
            "ratio": res.ratio,
            "entanglement": 1.0 - res.ratio if args.which == "source" else res.ratio,
            "vertices": [list(v) for v in res.polygon.vertices],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    fn = mc_source_entanglement if args.which == "source" else mc_accessible_entanglement
    est = fn(phi, args.samples, args.seed)
    _emit(json.dumps({"which": args.which, **est.as_json_dict()}, indent=2) + "\n", args.out)
    return 0


def cmd_scan(args) -> int:
    ids = _parse_ids(args.ids)
    phi = _parse_state(args.phi) if args.phi else None
    rows = regions.scan(args.dim, ids, args.samples, args.seed, phi, args.products)
    regions.scan_csv(rows, args.dim, ids, args.out or sys.stdout)
    return 0


def cmd_boundary(args) -> int:
    ids = _parse_ids(args.ids)
    phi = _parse_state(args.phi) if args.phi else None
    if args.optimize:
        if not args.max or not args.given:
            raise BentError("--optimize needs both --max and --given measures")
        objective, given = MeasureId.parse(args.max), MeasureId.parse(args.given)
        values = np.linspace(args.lo, args.hi, args.steps + 1)
        rows = []
        for v in values:
            state, best = regions.optimize_conditional(
                args.dim, objective, given, float(v), maximize=True, seed=args.seed
            )
            rows.append((float(v),) + state.values + (best, "numerical"))
        header = (
            [given.label] + [f"lambda_{i+1}" for i in range(args.dim)]
            + [objective.label, "label"]
        )
        regions.write_csv(rows, header, args.out or sys.stdout)
        return 0
    rows = regions.boundary(args.dim, args.family, args.steps, ids, phi)
    header = ["t"] + [f"lambda_{i+1}" for i in range(args.dim)] + [m.label for m in ids]
    regions.write_csv(rows, header, args.out or sys.stdout)
    return 0


def cmd_image(args) -> int:
    phi = _parse_state(args.phi)
    ids = _parse_ids(args.ids)
    rows = regions.image_boundaries(phi, ids, args.steps)
    header = (
        ["curve", "t"] + [f"lambda_{i+1}" for i in range(phi.dim)] + [m.label for m in ids]
    )
    regions.write_csv(rows, header, args.out or sys.stdout)
    return 0


def cmd_split(args) -> int:
    state = _parse_state(getattr(args, "lambda"))
    emb = splittings.from_schmidt(state)
    table = splittings.all_splittings(emb)
    _emit(json.dumps({"n": emb.n, "table": table}, indent=2) + "\n", args.out)
    return 0


def cmd_reconstruct(args) -> int:
    with open(args.table) as fh:
        doc = json.load(fh)
    if "table" in doc:
        n, table = int(doc["n"]), doc["table"]
    else:
        table = doc
        n = len(next(iter(table)))
    emb = splittings.reconstruct(n, table)
    lam = sorted(emb.lam, reverse=True)
    _emit(",".join(f"{x:.12g}" for x in lam) + "\n", args.out)
    return 0


def cmd_certify(args) -> int:
    targets = {}
    for tok in args.targets.split(","):
        label, _, value = tok.partition("=")
        if not value:
            raise BentError(f"bad target {tok!r}; expected label=value")
        targets[label.strip()] = Fraction(value.strip())
    fs, hs, gs = cert_mod.certificate_system(args.dim, targets)
    problem = cert_mod.build_certificate_problem(
        fs, hs, gs, args.degree, description=f"d={args.dim}, targets {args.targets}"
    )
    result = cert_mod.solve_feasibility(problem)
    if isinstance(result, cert_mod.NotFoundAtDegree):
        sys.stderr.write(
            f"no certificate at degree {result.degree} ({result.detail}); "
            "inconclusive: this does NOT prove the values are physical\n"
        )
        return 3
    report = cert_mod.verify_certificate(result)
    if args.out:
        cert_mod.save_certificate(result, report, args.out)
    if not report.ok:
        sys.stderr.write(f"certificate failed verification: {report.message}\n")
        return 4
    sys.stdout.write(
        f"certificate found at degree {result.degree} and verified "
        f"(residual {report.residual:.2e}, min Gram eigenvalue "
        f"{min(report.min_eigenvalues):.3e})\n"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bent", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="evaluate measures for one state")
    p.add_argument("--schmidt", required=True, help="comma-separated coefficients")
    p.add_argument("--ids", default="es,ea,ef,neg,geo")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_measure)

    p = sub.add_parser("psucc", help="conversion probability (pair or sampled field)")
    p.add_argument("--from", dest="src")
    p.add_argument("--to", dest="to")
    p.add_argument("--phi")
    p.add_argument("--direction", choices=["from", "to"], default="from")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_psucc)

    p = sub.add_parser("volume", help="source/accessible volume (MC or exact at d=3)")
    p.add_argument("--phi", required=True)
    p.add_argument("--which", choices=["source", "accessible"], required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_volume)

    p = sub.add_parser("scan", help="measure values of uniform random states")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--ids", required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi")
    p.add_argument("--products", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_scan)

    p = sub.add_parser("boundary", help="one-parameter extremal state families")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--family")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--ids", default="es,ea")
    p.add_argument("--phi")
    p.add_argument("--optimize", action="store_true",
                   help="numerical conditional extremum instead of a registered family")
    p.add_argument("--max", help="measure to maximize (with --optimize)")
    p.add_argument("--given", help="measure held fixed (with --optimize)")
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_boundary)

    p = sub.add_parser("image", help="boundary curves of source/accessible images")
    p.add_argument("--phi", required=True)
    p.add_argument("--ids", default="es,ea")
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_image)

    p = sub.add_parser("split", help="geometric measure across all qubit splittings")
    p.add_argument("--lambda", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("reconstruct", help="coefficients back from a splitting table")
    p.add_argument("--table", required=True, help="JSON file")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("certify", help="fixed-degree infeasibility certificate search")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--targets", required=True, help="e.g. es=0.2,esgen4=0.9")
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_certify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (BentError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
