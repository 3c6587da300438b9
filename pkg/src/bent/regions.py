"""Scan, boundary, image-set and success-probability data generation.

Everything here emits deterministic tabular data (CSV); plotting is left to
the consumer.  Boundary families are the one-parameter state curves that
carry the extremal measure combinations; image curves bound the measure
values reachable from (or reaching) a fixed state.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import UnknownFamily, UnsupportedDim
from .measures import MeasureId, measure_block, measure_value
from .monotones import vidal_monotones
from .schmidt import SchmidtVector, new_sorted, sample_sorted_block, spawn_rngs

__all__ = [
    "ScanRow",
    "scan",
    "boundary_families",
    "boundary",
    "image_boundaries",
    "psucc_field",
    "esgen4_envelope",
    "optimize_conditional",
    "write_csv",
]


@dataclass(frozen=True)
class ScanRow:
    state: tuple[float, ...]
    values: tuple[float, ...]
    label: str


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def write_csv(rows: Iterable[Sequence], header: Sequence[str], out=None) -> str | None:
    """Write rows with 12-significant-digit numbers; returns the text when
    ``out`` is None, otherwise writes to the given path or stream."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) if isinstance(x, float) else x for x in row])
    text = buf.getvalue()
    if out is None:
        return text
    if isinstance(out, str):
        with open(out, "w") as fh:
            fh.write(text)
    elif out is sys.stdout or hasattr(out, "write"):
        out.write(text)
    return None


# ---------------------------------------------------------------------------
# random scans

def _labels_against(block: np.ndarray, phi: SchmidtVector) -> list[str]:
    tails = np.cumsum(block[:, ::-1], axis=1)[:, ::-1]
    tphi = np.array(vidal_monotones(phi).e)
    src = np.all(tails >= tphi - 1e-12, axis=1)
    acc = np.all(tails <= tphi + 1e-12, axis=1)
    out = np.where(src, "source-of-phi", np.where(acc, "accessible-from-phi", "incomparable"))
    return out.tolist()


def _product_block(n: int, rng: np.random.Generator) -> np.ndarray:
    """Products of two independent 2-qubit states, sorted, as 4-dim rows."""
    a = np.sort(rng.dirichlet(np.ones(2), size=n), axis=1)[:, ::-1]
    b = np.sort(rng.dirichlet(np.ones(2), size=n), axis=1)[:, ::-1]
    prod = a[:, :, None] * b[:, None, :]
    return -np.sort(-prod.reshape(n, 4), axis=1)


def scan(
    d: int,
    ids: Sequence[MeasureId],
    n: int,
    seed: int = 0,
    phi: SchmidtVector | None = None,
    products: int = 0,
) -> list[ScanRow]:
    """n uniform states (plus optional product states at d = 4) with their
    measure values and LOCC relation to ``phi``; deterministic per seed."""
    if products and d != 4:
        raise UnsupportedDim("product-state rows are products of two 2-qubit states (d = 4)")
    if phi is not None and phi.dim != d:
        raise UnsupportedDim(f"reference state has dimension {phi.dim}, scan wants {d}")
    rng = spawn_rngs(seed, 1)[0]
    rows: list[ScanRow] = []
    if n > 0:
        block = sample_sorted_block(d, n, rng)
        vals = np.column_stack([measure_block(block, mid) for mid in ids]) if ids else np.zeros((n, 0))
        labels = _labels_against(block, phi) if phi is not None else ["generic"] * n
        for i in range(n):
            rows.append(ScanRow(tuple(block[i].tolist()), tuple(vals[i].tolist()), labels[i]))
    if products > 0:
        block = _product_block(products, rng)
        vals = np.column_stack([measure_block(block, mid) for mid in ids]) if ids else np.zeros((products, 0))
        for i in range(products):
            rows.append(ScanRow(tuple(block[i].tolist()), tuple(vals[i].tolist()), "product-state"))
    return rows


def scan_csv(rows: list[ScanRow], d: int, ids: Sequence[MeasureId], out=None):
    header = [f"lambda_{i+1}" for i in range(d)] + [mid.label for mid in ids] + ["label"]
    return write_csv((r.state + r.values + (r.label,) for r in rows), header, out)


# ---------------------------------------------------------------------------
# boundary families
#
# Each family is a curve t -> state; ranges are the sortedness windows.  The
# first three d=3 entries (and the four lam-* entries at d=4) are the extremal
# families with all but two barycentric weights zero; the ea-* entries bound
# the accessible measure given the source measure; the white line carries the
# extremal measure pairs at constant conversion probability towards phi.

@dataclass(frozen=True)
class Family:
    name: str
    dim: int
    t_range: tuple[float, float]
    fn: Callable[[float], tuple[float, ...]]
    needs_phi: bool = False


def _fam3_pink(t):
    return (t, (1 - t) / 2, (1 - t) / 2)


def _fam3_black(t):
    return (t, 1 - t, 0.0)


def _fam3_green(t):
    return (t, t, 1 - 2 * t)


def _fam3_red(t):
    return (2.0 / 3.0 - t, 1.0 / 3.0, t)


def _fam3_orange(t):
    l2 = math.sqrt(max(t * (1 - 2 * t), 0.0))
    return (1 - l2 - t, l2, t)


def _fam4_a(t):
    r = (1 - t) / 3
    return (t, r, r, r)


def _fam4_b(t):
    return (t, 1 - t, 0.0, 0.0)


def _fam4_c(t):
    return (t, t, 1 - 2 * t, 0.0)


def _fam4_d(t):
    return (t, t, t, 1 - 3 * t)


def _fam4_product_square(t):
    return tuple(sorted((t * t, t * (1 - t), t * (1 - t), (1 - t) ** 2), reverse=True))


def _fam4_product_pair(t):
    # one factor swept, the other fixed maximally entangled
    return (t / 2, t / 2, (1 - t) / 2, (1 - t) / 2)


_FAMILIES: dict[tuple[int, str], Family] = {
    (3, "lam2=lam3"): Family("lam2=lam3", 3, (1 / 3, 1.0), _fam3_pink),
    (3, "lam3=0"): Family("lam3=0", 3, (0.5, 1.0), _fam3_black),
    (3, "lam1=lam2"): Family("lam1=lam2", 3, (1 / 3, 0.5), _fam3_green),
    (3, "ea-upper-red"): Family("ea-upper-red", 3, (1 / 6, 1 / 3), _fam3_red),
    (3, "ea-upper-orange"): Family("ea-upper-orange", 3, (0.0, 1 / 6), _fam3_orange),
    (3, "white-line"): Family("white-line", 3, (0.0, 1 / 3), None, needs_phi=True),
    (4, "lam-a-max"): Family("lam-a-max", 4, (0.25, 1.0), _fam4_a),
    (4, "lam-b-min"): Family("lam-b-min", 4, (0.5, 1.0), _fam4_b),
    (4, "lam-c-min"): Family("lam-c-min", 4, (1 / 3, 0.5), _fam4_c),
    (4, "lam-d-min"): Family("lam-d-min", 4, (0.25, 1 / 3), _fam4_d),
    (4, "product-square"): Family("product-square", 4, (0.5, 1.0), _fam4_product_square),
    (4, "product-pair"): Family("product-pair", 4, (0.5, 1.0), _fam4_product_pair),
}


def boundary_families(d: int) -> list[str]:
    return [name for (dim, name) in _FAMILIES if dim == d]


def _white_line_fn(phi: SchmidtVector) -> Callable[[float], tuple[float, ...]]:
    l2p, l3p = phi.values[1], phi.values[2]
    if l3p <= 0.0:
        raise UnknownFamily("white-line needs a reference state with lambda_3 > 0")
    tstar = l3p / (2 * l2p + l3p)

    def fn(t: float) -> tuple[float, ...]:
        if t <= tstar:
            l2 = (l2p / l3p) * t
            return (1 - l2 - t, l2, t)
        return ((1 - t) / 2, (1 - t) / 2, t)

    return fn


def get_family(d: int, name: str, phi: SchmidtVector | None = None) -> Family:
    fam = _FAMILIES.get((d, name))
    if fam is None:
        raise UnknownFamily(f"no family {name!r} at d = {d}; know {boundary_families(d)}")
    if fam.needs_phi:
        if phi is None or phi.dim != d:
            raise UnknownFamily(f"family {name!r} needs a reference state of dimension {d}")
        fam = Family(fam.name, fam.dim, fam.t_range, _white_line_fn(phi))
    return fam


def boundary(
    d: int,
    name: str,
    steps: int,
    ids: Sequence[MeasureId],
    phi: SchmidtVector | None = None,
) -> list[tuple]:
    """steps+1 states uniform in the family parameter, with measure values.

    Rows are (t, lambda_1..lambda_d, values...).
    """
    fam = get_family(d, name, phi)
    lo, hi = fam.t_range
    rows = []
    for i in range(steps + 1):
        t = lo + (hi - lo) * i / steps if steps else lo
        state = new_sorted(fam.fn(t))
        vals = tuple(measure_value(state, mid) for mid in ids)
        rows.append((t,) + state.values + vals)
    return rows


def family_states(d: int, name: str, steps: int, phi: SchmidtVector | None = None) -> np.ndarray:
    """(steps+1, d) coefficient array along a family, for envelope work."""
    fam = get_family(d, name, phi)
    lo, hi = fam.t_range
    ts = np.linspace(lo, hi, steps + 1)
    return np.array([new_sorted(fam.fn(float(t))).values for t in ts])


# ---------------------------------------------------------------------------
# envelope of the (source, generalized-source) region at d = 3
#
# Given a source-entanglement value, the reachable band of the k=4 measure is
# closed-form invertible: the lam2=lam3 family is the lower edge; lam3=0 is
# the upper edge up to its endpoint value 3/4, where lam1=lam2 takes over.

def _esgen43(l2, l3):
    return (27.0 / 13.0) * (2 * l2**3 + 6 * l2**2 * l3 + 3 * (3 - 4 * l2) * l3**2 - 10 * l3**3)


def esgen4_envelope(es) -> tuple[np.ndarray, np.ndarray]:
    """(lower, upper) bounds of the generalized measure at the given source
    values, from the registered boundary families."""
    es = np.asarray(es, dtype=float)
    root = np.sqrt(np.clip(1.0 - es, 0.0, None))
    s = (1.0 - root) / 3.0  # lam2=lam3 weight solving -9 s^2 + 6 s = es
    lower = _esgen43(s, s)
    upper = np.empty_like(es)
    left = es <= 0.75
    l2 = np.sqrt(np.clip(es[left], 0.0, None) / 3.0)
    upper[left] = _esgen43(l2, np.zeros_like(l2))
    t = (1.0 + root[~left]) / 3.0  # lam1=lam2 weight, larger root
    upper[~left] = _esgen43(t, 1 - 2 * t)
    return lower, upper


# ---------------------------------------------------------------------------
# image-set boundary curves

def _segment(p0, p1, steps):
    if steps <= 0:
        return [tuple(p0)]
    return [tuple(a + (b - a) * i / steps for a, b in zip(p0, p1)) for i in range(steps + 1)]


def _image_curves_3(phi: SchmidtVector) -> list[tuple[str, tuple, tuple]]:
    a = phi.values[0]
    c3 = phi.values[2]
    curves = []
    lo, hi = (1 - a) / 2, min(a, 1 - a)
    if hi >= lo:
        curves.append(("E2-fixed", (a, lo, 1 - a - lo), (a, hi, 1 - a - hi)))
    lo, hi = (1 - c3) / 2, 1 - 2 * c3
    if hi >= lo:
        curves.append(("E3-fixed", (lo, 1 - c3 - lo, c3), (hi, 1 - c3 - hi, c3)))
    return curves


def _image_curves_4(phi: SchmidtVector) -> list[tuple[str, tuple, tuple]]:
    a, b, c, dd = phi.values
    e4 = dd
    out = []

    def seg(name, mk, lo, hi):
        if hi >= lo - 1e-15:
            hi = max(hi, lo)
            out.append((name, mk(lo), mk(hi)))

    seg("E4-fixed,lam2=lam3", lambda t: (1 - 2 * t - e4, t, t, e4), e4, (1 - e4) / 3)
    seg("E3,E4-fixed", lambda s: (s, 1 - c - dd - s, c, dd), (1 - c - dd) / 2, 1 - 2 * c - dd)
    seg("E4-fixed,lam3=lam4", lambda s: (s, 1 - s - 2 * e4, e4, e4), (1 - 2 * e4) / 2, 1 - 3 * e4)
    seg("E2,E3-fixed", lambda t: (a, b, t, 1 - a - b - t), (1 - a - b) / 2, min(b, 1 - a - b))
    seg("E2-fixed,lam4=0", lambda t: (a, t, 1 - a - t, 0.0), (1 - a) / 2, min(a, 1 - a))
    seg("E2-fixed,lam3=lam4", lambda t: (a, 1 - a - 2 * t, t, t), max((1 - 2 * a) / 2, 0.0), (1 - a) / 3)
    seg("E4-fixed,lam1=lam2", lambda t: (t, t, 1 - 2 * t - e4, e4), (1 - e4) / 3, (1 - 2 * e4) / 2)
    return out


def image_boundaries(
    phi: SchmidtVector, ids: Sequence[MeasureId], steps: int = 200
) -> list[tuple]:
    """Boundary curves of the source/accessible image in measure space.

    At d = 3 these fix one tail sum to its value at phi; at d = 4 the seven
    curves fix one or two tail sums plus one coefficient equality.  Rows are
    (curve, t, lambda..., values...).
    """
    if phi.dim == 3:
        curves = _image_curves_3(phi)
    elif phi.dim == 4:
        curves = _image_curves_4(phi)
    else:
        raise UnsupportedDim("image boundaries are registered for d in {3, 4}")
    rows = []
    for name, p0, p1 in curves:
        for i, pt in enumerate(_segment(p0, p1, steps)):
            state = new_sorted(pt)
            vals = tuple(measure_value(state, mid) for mid in ids)
            rows.append((name, i / steps if steps else 0.0) + state.values + vals)
    return rows


# ---------------------------------------------------------------------------
# success-probability fields

def psucc_field(
    phi: SchmidtVector, direction: str, n: int, seed: int = 0
) -> list[tuple]:
    """(lambda..., P) for n uniform states: P(phi -> psi) when direction is
    'from', P(psi -> phi) when 'to'."""
    if direction not in ("from", "to"):
        raise ValueError("direction must be 'from' or 'to'")
    d = phi.dim
    rng = spawn_rngs(seed, 1)[0]
    block = sample_sorted_block(d, n, rng)
    tails = np.cumsum(block[:, ::-1], axis=1)[:, ::-1]
    tphi = np.array(vidal_monotones(phi).e)
    with np.errstate(divide="ignore", invalid="ignore"):
        if direction == "from":
            ratios = tphi[None, :] / tails
            ratios = np.where(tails > 0.0, ratios, np.inf)
        else:
            ratios = np.where(tphi[None, :] > 0.0, tails / tphi[None, :], np.inf)
    p = np.clip(ratios.min(axis=1), 0.0, 1.0)
    return [tuple(block[i].tolist()) + (float(p[i]),) for i in range(n)]


# ---------------------------------------------------------------------------
# numerical boundary search (for segments without a registered family)

def _project_simplex(x: np.ndarray) -> np.ndarray:
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, len(x) + 1)
    cond = u - css / idx > 0
    rho = idx[cond][-1]
    theta = css[cond][-1] / rho
    return np.maximum(x - theta, 0.0)


def optimize_conditional(
    d: int,
    objective: MeasureId,
    given: MeasureId,
    value: float,
    maximize: bool = True,
    restarts: int = 20,
    tol: float = 1e-9,
    seed: int = 0,
) -> tuple[SchmidtVector, float]:
    """Numerically extremize one measure at a fixed value of another.

    Projected gradient (finite differences) on the simplex with a quadratic
    penalty ramp; the result is labeled numerical by callers, never golden.
    """
    sign = -1.0 if maximize else 1.0
    rng = spawn_rngs(seed, 1)[0]
    best_lam, best_val = None, math.inf

    def total(lam_arr, mu):
        state = new_sorted(np.maximum(lam_arr, 0.0))
        f = measure_value(state, objective)
        g = measure_value(state, given)
        return sign * f + mu * (g - value) ** 2, f, g

    for _ in range(restarts):
        x = np.sort(rng.dirichlet(np.ones(d)))[::-1]
        for mu in (1e2, 1e4, 1e6):
            step = 0.05
            fx, _, _ = total(x, mu)
            for _ in range(400):
                if step <= tol:
                    break
                grad = np.zeros(d)
                h = 1e-7
                for i in range(d):
                    e = np.zeros(d)
                    e[i] = h
                    fp, _, _ = total(_project_simplex(x + e), mu)
                    fm, _, _ = total(_project_simplex(x - e), mu)
                    grad[i] = (fp - fm) / (2 * h)
                cand = _project_simplex(x - step * grad)
                cand = np.sort(cand)[::-1]
                fc, _, _ = total(cand, mu)
                if fc < fx - 1e-15:
                    x, fx = cand, fc
                else:
                    step *= 0.5
        ft, fobj, gval = total(x, 0.0)
        if abs(gval - value) < 1e-5 and sign * fobj < best_val:
            best_val = sign * fobj
            best_lam = x
    if best_lam is None:
        raise RuntimeError("no feasible point found for the conditional optimum")
    state = new_sorted(best_lam)
    return state, measure_value(state, objective)
