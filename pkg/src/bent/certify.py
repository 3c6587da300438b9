"""Sum-of-squares decomposition and fixed-degree infeasibility certificates.

A system {f_i >= 0, h_j = 0, g_k != 0} of polynomial constraints has no real
solution iff some f from the cone of the f_i, some h from the ideal of the
h_j and some monoid power g of the g_k satisfy f + g^2 + h = 0.  At a fixed
total degree the search for such an identity is a semidefinite feasibility
problem over the Gram matrices of the cone's SOS multipliers; this module
builds that problem, solves it, rounds the solution to exact rationals, and
verifies the identity independently of the solver.

A found certificate is a proof.  ``NotFoundAtDegree`` is not: it only says
the search at this degree failed, which is expected whenever the system does
have a real solution.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .errors import (
    DegreeTooSmall,
    NumericalBreakdown,
    SolverDidNotConverge,
    UnsupportedClosedForm,
)
from .polynomials import SparsePolynomial, es_poly_in_p, monomials_up_to

__all__ = [
    "GramBlock",
    "FreeMultiplier",
    "GramProblem",
    "Certificate",
    "DualWitness",
    "NotFoundAtDegree",
    "VerificationReport",
    "sos_decompose",
    "build_certificate_problem",
    "solve_feasibility",
    "verify_certificate",
    "es_in_q",
    "esgen_in_q",
    "measure_q_polynomial",
    "certificate_system",
]

#: Gram matrices are accepted down to this eigenvalue
PSD_TOL = -1e-8
#: coefficientwise identity residual allowed at verification time
RESIDUAL_TOL = 1e-6
#: largest monomial basis a single Gram block may use
BASIS_CAP = 50
#: denominator bound when rounding solver output to rationals
ROUND_DENOM = 10**12

_SDP_OPTIONS = {
    "show_progress": False,
    "maxiters": 500,
    "abstol": 1e-9,
    "reltol": 1e-9,
    "feastol": 1e-9,
}
#: fallback when the tight gap tolerance stalls; solver output is rounded to
#: rationals and re-verified independently, so looser solves stay sound
_SDP_OPTIONS_RELAXED = {
    "show_progress": False,
    "maxiters": 500,
    "abstol": 1e-7,
    "reltol": 1e-6,
    "feastol": 1e-7,
}


# ---------------------------------------------------------------------------
# problem and result types

@dataclass(frozen=True)
class GramBlock:
    """One SOS multiplier s = z^T Q z attached to a cone product ``factor``."""

    label: str
    factor: SparsePolynomial
    basis: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[Fraction, ...], ...] = ()

    def gram_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])

    def polynomial(self) -> SparsePolynomial:
        nv = self.factor.nvars
        out = SparsePolynomial(nv)
        for a, ea in enumerate(self.basis):
            for b, eb in enumerate(self.basis):
                c = self.gram[a][b]
                if c:
                    mono = tuple(x + y for x, y in zip(ea, eb))
                    out = out + SparsePolynomial(nv, {mono: c})
        return out


@dataclass(frozen=True)
class FreeMultiplier:
    """Unconstrained polynomial multiplier t attached to an equality constraint."""

    label: str
    constraint: SparsePolynomial
    monomials: tuple[tuple[int, ...], ...]
    coeffs: tuple[Fraction, ...] = ()

    def polynomial(self) -> SparsePolynomial:
        nv = self.constraint.nvars
        return SparsePolynomial(nv, dict(zip(self.monomials, self.coeffs)))


@dataclass(frozen=True)
class GramProblem:
    """Feasibility problem: find PSD Grams and free multipliers such that
    sum_blocks s * factor + sum_mults t * constraint + remainder == 0."""

    nvars: int
    degree: int
    blocks: tuple[GramBlock, ...]
    multipliers: tuple[FreeMultiplier, ...]
    remainder: SparsePolynomial
    description: str = ""


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    residual: float
    min_eigenvalues: tuple[float, ...]
    message: str

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Certificate:
    """Exact-identity infeasibility proof (or SOS decomposition)."""

    nvars: int
    degree: int
    blocks: tuple[GramBlock, ...]
    multipliers: tuple[FreeMultiplier, ...]
    remainder: SparsePolynomial
    description: str = ""
    solver_min_eig: float = float("nan")

    def identity_polynomial(self) -> SparsePolynomial:
        total = SparsePolynomial(self.nvars) + self.remainder
        for blk in self.blocks:
            total = total + blk.polynomial() * blk.factor
        for mult in self.multipliers:
            total = total + mult.polynomial() * mult.constraint
        return total

    def as_json_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "degree": self.degree,
            "description": self.description,
            "blocks": [
                {
                    "label": b.label,
                    "factor": _poly_json(b.factor),
                    "basis": [list(e) for e in b.basis],
                    "gram": [[f"{float(x):.17g}" for x in row] for row in b.gram],
                    "gram_exact": [[_frac_str(x) for x in row] for row in b.gram],
                }
                for b in self.blocks
            ],
            "multipliers": [
                {
                    "label": m.label,
                    "constraint": _poly_json(m.constraint),
                    "monomials": [list(e) for e in m.monomials],
                    "coeffs": [_frac_str(c) for c in m.coeffs],
                }
                for m in self.multipliers
            ],
            "remainder": _poly_json(self.remainder),
        }


@dataclass(frozen=True)
class DualWitness:
    """Separating functional proving no PSD Gram matrix represents the target.

    W shares the linear entry identifications of the monomial outer product
    z z^T (equal entries wherever z_a z_b = z_c z_d), is PSD, and pairs
    negatively with every Gram representation of the polynomial.
    """

    basis: tuple[tuple[int, ...], ...]
    entry_values: dict[tuple[int, ...], float]
    matrix: np.ndarray
    pairing: float  # tr(W Q), identical for every Gram representation Q

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


@dataclass(frozen=True)
class NotFoundAtDegree:
    """Inconclusive outcome: no certificate exists at this truncation degree
    or the solver could not locate one.  Never evidence of feasibility."""

    degree: int
    detail: str = ""
    best_min_eig: float = float("nan")


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _poly_json(p: SparsePolynomial) -> dict:
    return {
        "nvars": p.nvars,
        "terms": {" ".join(map(str, e)): _frac_str(c) for e, c in p.terms.items()},
    }


# ---------------------------------------------------------------------------
# SDP assembly and solving (cvxopt conelp backend)

def _triu_pairs(n: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(n) for b in range(a, n)]


def _classes(basis) -> dict[tuple[int, ...], list[tuple[int, int]]]:
    """Group upper-triangle Gram positions by the monomial z_a * z_b."""
    out: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for a, b in _triu_pairs(len(basis)):
        mono = tuple(x + y for x, y in zip(basis[a], basis[b]))
        out.setdefault(mono, []).append((a, b))
    return out


class _Layout:
    """Variable layout: [t_eig | svec(Q_0) | svec(Q_1) | ... | multiplier coeffs]."""

    def __init__(self, problem: GramProblem):
        self.problem = problem
        self.block_offsets = []
        off = 1
        for blk in problem.blocks:
            self.block_offsets.append(off)
            off += len(_triu_pairs(len(blk.basis)))
        self.mult_offsets = []
        for mult in problem.multipliers:
            self.mult_offsets.append(off)
            off += len(mult.monomials)
        self.nx = off

    def assemble(self):
        """Equality rows (one per monomial up to the problem degree) and the
        PSD block maps for the cvxopt cone program."""
        prob = self.problem
        rows = monomials_up_to(prob.nvars, prob.degree)
        row_index = {m: i for i, m in enumerate(rows)}
        A = np.zeros((len(rows), self.nx))
        b = np.zeros(len(rows))
        for mono, coeff in prob.remainder.terms.items():
            b[row_index[mono]] -= float(coeff)
        for blk, off in zip(prob.blocks, self.block_offsets):
            pairs = _triu_pairs(len(blk.basis))
            for k, (a, bb) in enumerate(pairs):
                base = tuple(x + y for x, y in zip(blk.basis[a], blk.basis[bb]))
                w = 1.0 if a == bb else 2.0
                for fe, fc in blk.factor.terms.items():
                    mono = tuple(x + y for x, y in zip(base, fe))
                    A[row_index[mono], off + k] += w * float(fc)
        for mult, off in zip(prob.multipliers, self.mult_offsets):
            for k, u in enumerate(mult.monomials):
                for he, hc in mult.constraint.terms.items():
                    mono = tuple(x + y for x, y in zip(u, he))
                    A[row_index[mono], off + k] += float(hc)
        # drop all-zero rows (monomials untouched by any part of the identity)
        keep = [i for i in range(len(rows)) if np.any(A[i] != 0.0) or b[i] != 0.0]
        return A[keep], b[keep]

    def psd_maps(self):
        """cvxopt Gs/hs data: Gs[k] x + slack = hs[k] with slack PSD, encoding
        Q_block - t I >= 0."""
        Gs, hs = [], []
        for blk, off in zip(self.problem.blocks, self.block_offsets):
            nb = len(blk.basis)
            G = np.zeros((nb * nb, self.nx))
            for k, (a, bb) in enumerate(_triu_pairs(nb)):
                G[a * nb + bb, off + k] = -1.0
                G[bb * nb + a, off + k] = -1.0
            G[:: nb + 1, 0] = 1.0
            Gs.append(G)
            hs.append(np.zeros((nb, nb)))
        return Gs, hs

    def trace_row(self) -> np.ndarray:
        row = np.zeros(self.nx)
        for blk, off in zip(self.problem.blocks, self.block_offsets):
            for k, (a, bb) in enumerate(_triu_pairs(len(blk.basis))):
                if a == bb:
                    row[off + k] = 1.0
        return row

    def extract(self, x: np.ndarray):
        grams = []
        for blk, off in zip(self.problem.blocks, self.block_offsets):
            nb = len(blk.basis)
            Q = np.zeros((nb, nb))
            for k, (a, bb) in enumerate(_triu_pairs(nb)):
                Q[a, bb] = Q[bb, a] = x[off + k]
            grams.append(Q)
        coeffs = [
            x[off : off + len(mult.monomials)]
            for mult, off in zip(self.problem.multipliers, self.mult_offsets)
        ]
        return grams, coeffs


def _solve_cvxopt(layout: _Layout, trace_bound: float | None, options: dict):
    from cvxopt import matrix, solvers

    A, b = layout.assemble()
    Gs, hs = layout.psd_maps()
    obj = np.zeros(layout.nx)
    obj[0] = -1.0  # maximize the uniform eigenvalue shift
    kwargs = {}
    if trace_bound is not None:
        kwargs["Gl"] = matrix(layout.trace_row().reshape(1, -1))
        kwargs["hl"] = matrix(np.array([trace_bound]))
    old = dict(solvers.options)
    solvers.options.clear()
    solvers.options.update(options)
    try:
        return solvers.sdp(
            matrix(obj),
            Gs=[matrix(G) for G in Gs],
            hs=[matrix(h) for h in hs],
            A=matrix(A),
            b=matrix(b),
            **kwargs,
        )
    except (ArithmeticError, ValueError) as exc:
        raise NumericalBreakdown(f"SDP solver failed: {exc}") from exc
    finally:
        solvers.options.clear()
        solvers.options.update(old)


# ---------------------------------------------------------------------------
# exact rounding and verification

def _round_fraction(x: float) -> Fraction:
    return Fraction(x).limit_denominator(ROUND_DENOM)


def _absorb_into_block(blk: GramBlock, residual: SparsePolynomial) -> GramBlock:
    """Cancel the residual exactly inside a factor-1 block, spreading each
    monomial's correction uniformly over all Gram positions in its class (the
    spread keeps the spectral perturbation small)."""
    classes = _classes(blk.basis)
    gram = [list(row) for row in blk.gram]
    for mono, coeff in residual.terms.items():
        members = classes[mono]
        weight = sum(1 if a == b else 2 for a, b in members)
        share = coeff / weight
        for a, b in members:
            gram[a][b] -= share
            if a != b:
                gram[b][a] -= share
    return GramBlock(blk.label, blk.factor, blk.basis, tuple(map(tuple, gram)))


def _clip_psd(Q: np.ndarray) -> np.ndarray:
    """Zero out negative eigenvalues; the induced identity drift is absorbed later."""
    w, V = np.linalg.eigh(Q)
    if w[0] >= 0.0:
        return Q
    return (V * np.maximum(w, 0.0)) @ V.T


def _exact_certificate(problem: GramProblem, grams, coeffs, min_eig: float) -> Certificate:
    """Round the solver output to rationals and restore the identity exactly.

    Negative eigenvalue dust is clipped before rounding; the resulting
    coefficient drift, together with the solver's equality residual, is
    cancelled inside the constant block, whose basis products reach every
    monomial of the identity.
    """
    blocks = []
    for blk, Q in zip(problem.blocks, grams):
        nb = len(blk.basis)
        Qc = _clip_psd(Q)
        gram = [[_round_fraction(Qc[a, b]) for b in range(nb)] for a in range(nb)]
        for a in range(nb):
            for b in range(a + 1, nb):
                gram[b][a] = gram[a][b]
        blocks.append(GramBlock(blk.label, blk.factor, blk.basis, tuple(map(tuple, gram))))
    mults = tuple(
        FreeMultiplier(
            m.label, m.constraint, m.monomials, tuple(_round_fraction(c) for c in cs)
        )
        for m, cs in zip(problem.multipliers, coeffs)
    )
    const_idx = next(
        i for i, blk in enumerate(blocks)
        if blk.factor == SparsePolynomial.constant(1, problem.nvars)
    )
    cert = Certificate(
        problem.nvars, problem.degree, tuple(blocks), mults,
        problem.remainder, problem.description, min_eig,
    )
    residual = cert.identity_polynomial()
    if not residual.is_zero():
        blocks[const_idx] = _absorb_into_block(blocks[const_idx], residual)
        cert = Certificate(
            problem.nvars, problem.degree, tuple(blocks), mults,
            problem.remainder, problem.description, min_eig,
        )
    assert cert.identity_polynomial().is_zero()
    return cert


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Independent check: expand the identity symbolically and test every
    coefficient, then check each Gram matrix is PSD within tolerance.

    Uses only the polynomial engine; no solver state is consulted.
    """
    residual = cert.identity_polynomial().max_abs_coefficient()
    eigs = tuple(
        float(np.linalg.eigvalsh(blk.gram_array())[0]) if blk.basis else 0.0
        for blk in cert.blocks
    )
    if residual > RESIDUAL_TOL:
        return VerificationReport(False, residual, eigs, f"identity residual {residual:.3e}")
    bad = [e for e in eigs if e < PSD_TOL]
    if bad:
        return VerificationReport(False, residual, eigs, f"Gram eigenvalue {min(bad):.3e} < 0")
    return VerificationReport(True, residual, eigs, "certificate verified")


# ---------------------------------------------------------------------------
# plain SOS decomposition

def _newton_filter(candidates, support):
    """Keep exponents e with 2e inside the convex hull of the support.

    Squares outside the Newton polytope cannot appear in any decomposition;
    dropping them removes forced-singular Gram rows.  Membership is decided
    by a small LP feasibility problem per candidate.
    """
    from scipy.optimize import linprog

    verts = np.array(sorted(support), dtype=float)
    if len(verts) == 1:
        return [e for e in candidates if tuple(2 * np.array(e)) == tuple(verts[0])]
    nv = verts.shape[1]
    A_eq = np.vstack([verts.T, np.ones(len(verts))])
    kept = []
    for e in candidates:
        b_eq = np.concatenate([2.0 * np.array(e, dtype=float), [1.0]])
        res = linprog(
            np.zeros(len(verts)), A_eq=A_eq, b_eq=b_eq,
            bounds=[(0, None)] * len(verts), method="highs",
        )
        if res.status == 0:
            kept.append(e)
    return kept


def _sos_basis(F: SparsePolynomial, d0: int):
    half = d0 // 2
    degs = {sum(e) for e in F.terms}
    if degs and degs == {d0}:
        # homogeneous target: only degree-d0/2 monomials can contribute
        basis = [e for e in monomials_up_to(F.nvars, half) if sum(e) == half]
    else:
        basis = monomials_up_to(F.nvars, half)
    basis = _newton_filter(basis, set(F.terms)) or basis
    if len(basis) > BASIS_CAP:
        raise ValueError(f"monomial basis of size {len(basis)} exceeds cap {BASIS_CAP}")
    return tuple(basis)


def _pow2_scale(F: SparsePolynomial) -> Fraction:
    """Power-of-two magnitude of the largest coefficient (exact to rescale by)."""
    m = F.max_abs_coefficient()
    if m == 0.0:
        return Fraction(1)
    return Fraction(2) ** int(math.ceil(math.log2(m)))


def sos_decompose(F: SparsePolynomial, d0: int | None = None):
    """Decide whether F is a sum of squares.

    Returns a :class:`Certificate` holding an exact PSD Gram representation
    (identity z^T Q z - F = 0), or a :class:`DualWitness` proving none
    exists.  Raises SolverDidNotConverge when the solver is inconclusive.

    Several solve strategies are tried (with and without coefficient
    rescaling, tight and then relaxed interior-point tolerances); whatever
    the solver produced, acceptance is decided solely by the independent
    verifier, so looser solves cannot leak unsound certificates.
    """
    if d0 is None:
        d0 = F.degree()
    if d0 % 2 or F.degree() > d0:
        raise ValueError(f"need even degree bound >= deg F, got {d0}")
    basis = _sos_basis(F, d0)
    classes = _classes(basis)
    if any(mono not in classes for mono in F.terms):
        # support sticks out of the even Newton polytope: no Gram form exists;
        # fall back to a separating functional over the unreduced basis
        full = tuple(monomials_up_to(F.nvars, d0 // 2))
        return _dual_witness(F, full, _classes(full))
    block = GramBlock("s0", SparsePolynomial.constant(1, F.nvars), basis)
    scale = _pow2_scale(F)
    saw_negative = False
    for fac, options in (
        (Fraction(1), _SDP_OPTIONS),
        (scale, _SDP_OPTIONS),
        (Fraction(1), _SDP_OPTIONS_RELAXED),
        (scale, _SDP_OPTIONS_RELAXED),
    ):
        problem = GramProblem(
            F.nvars, d0, (block,), (), -(F * (1 / fac)),
            description="sum-of-squares decomposition",
        )
        layout = _Layout(problem)
        try:
            sol = _solve_cvxopt(layout, trace_bound=None, options=options)
        except NumericalBreakdown:
            continue
        status = sol["status"]
        if status in ("primal infeasible", "dual infeasible"):
            saw_negative = True
            break
        if status != "optimal":
            continue
        tstar = sol["x"][0]
        if tstar < PSD_TOL:
            # likely not SOS, but let the remaining strategies have a say
            saw_negative = True
            continue
        grams, coeffs = layout.extract(np.array(sol["x"]).ravel())
        cert = _exact_certificate(problem, grams, coeffs, float(fac) * tstar)
        if fac != 1:
            blk = cert.blocks[0]
            gram = tuple(tuple(fac * x for x in row) for row in blk.gram)
            cert = Certificate(
                cert.nvars, cert.degree,
                (GramBlock(blk.label, blk.factor, blk.basis, gram),),
                (), -F, cert.description, cert.solver_min_eig,
            )
        if verify_certificate(cert).ok:
            return cert
    if saw_negative:
        return _dual_witness(F, basis, classes)
    raise SolverDidNotConverge(
        "no strategy produced a verifiable Gram matrix or an infeasibility signal"
    )


def _dual_witness(F: SparsePolynomial, basis, classes) -> DualWitness:
    """Search for W >= 0 with the zz^T entry identifications and tr(WQ) < 0.

    Solved as its own small SDP over one variable per monomial class,
    normalized by unit trace.  Success proves no PSD Gram exists; failure is
    inconclusive and raises.
    """
    from cvxopt import matrix, solvers

    monos = sorted(classes, key=lambda e: (sum(e), e))
    nb = len(basis)
    ny = len(monos)
    obj = np.array([float(F.coefficient(m)) for m in monos])
    G = np.zeros((nb * nb, ny))
    trace_row = np.zeros(ny)
    for k, mono in enumerate(monos):
        for a, b in classes[mono]:
            G[a * nb + b, k] = -1.0
            G[b * nb + a, k] = -1.0
            if a == b:
                G[a * nb + a, k] = -1.0  # diagonal written once
                trace_row[k] += 1.0
    old = dict(solvers.options)
    solvers.options.clear()
    solvers.options.update(_SDP_OPTIONS)
    try:
        sol = solvers.sdp(
            matrix(obj),
            Gs=[matrix(G)],
            hs=[matrix(np.zeros((nb, nb)))],
            A=matrix(trace_row.reshape(1, -1)),
            b=matrix(np.array([1.0])),
        )
    except (ArithmeticError, ValueError) as exc:
        raise NumericalBreakdown(f"witness SDP failed: {exc}") from exc
    finally:
        solvers.options.clear()
        solvers.options.update(old)
    if sol["status"] != "optimal":
        raise SolverDidNotConverge(f"witness SDP status {sol['status']!r}")
    y = np.array(sol["x"]).ravel()
    pairing = float(obj @ y)
    if pairing >= -1e-9:
        raise SolverDidNotConverge(
            "no separating functional found; SOS membership undecided"
        )
    W = np.zeros((nb, nb))
    for k, mono in enumerate(monos):
        for a, b in classes[mono]:
            W[a, b] = W[b, a] = y[k]
    if float(np.linalg.eigvalsh(W)[0]) < PSD_TOL:
        raise NumericalBreakdown("witness matrix failed the PSD check")
    return DualWitness(tuple(basis), dict(zip(monos, y.tolist())), W, pairing)


# ---------------------------------------------------------------------------
# Positivstellensatz problems at fixed degree

def build_certificate_problem(
    fs: list[SparsePolynomial],
    hs: list[SparsePolynomial],
    gs: list[SparsePolynomial],
    d0: int,
    description: str = "",
) -> GramProblem:
    """Assemble the fixed-degree identity search for {f >= 0, h = 0, g != 0}.

    The cone is truncated to products of distinct f's with total degree at
    most d0; every product gets an SOS multiplier whose basis fills the
    remaining degree.  Ideal multipliers are free polynomials capped the same
    way.  The monoid contributes the fixed square (prod g_k)^2, which is the
    constant 1 when no g's are given.
    """
    if d0 % 2 or d0 < 0:
        raise ValueError(f"total degree must be even and nonnegative, got {d0}")
    nv = None
    for p in (*fs, *hs, *gs):
        nv = p.nvars if nv is None else nv
        if p.nvars != nv:
            raise ValueError("constraint polynomials disagree on variable count")
    if nv is None:
        raise ValueError("empty constraint system")

    remainder = SparsePolynomial.constant(1, nv)
    for g in gs:
        remainder = remainder * g
    remainder = remainder * remainder
    if remainder.degree() > d0:
        raise DegreeTooSmall(
            f"monoid square has degree {remainder.degree()} > d0 = {d0}"
        )

    blocks = []
    for r in range(len(fs) + 1):
        for subset in combinations(range(len(fs)), r):
            factor = SparsePolynomial.constant(1, nv)
            for i in subset:
                factor = factor * fs[i]
            room = d0 - factor.degree()
            if room < 0:
                continue  # cone product truncated away at this degree
            basis = monomials_up_to(nv, room // 2)
            if len(basis) > BASIS_CAP:
                raise ValueError(f"monomial basis of size {len(basis)} exceeds cap {BASIS_CAP}")
            label = "s0" if not subset else "s" + "".join(str(i + 1) for i in subset)
            blocks.append(GramBlock(label, factor, tuple(basis)))

    mults = []
    for j, h in enumerate(hs, start=1):
        room = d0 - h.degree()
        if room < 0:
            raise DegreeTooSmall(
                f"equality constraint of degree {h.degree()} does not fit in d0 = {d0}"
            )
        mults.append(FreeMultiplier(f"t{j}", h, tuple(monomials_up_to(nv, room))))

    return GramProblem(nv, d0, tuple(blocks), tuple(mults), remainder, description)


def solve_feasibility(
    problem: GramProblem, trace_bound: float = 1000.0
) -> Certificate | NotFoundAtDegree:
    """Search for PSD Gram matrices satisfying the identity of ``problem``.

    Interior-point on the max-min-eigenvalue form (maximize t subject to
    Q >= t I and the coefficient equalities).  The Gram trace is capped to
    keep the objective bounded: the cone blocks can trade freely against each
    other, so without the cap the eigenvalue shift would be unbounded.

    Only the found-certificate direction is a proof; NotFoundAtDegree is
    inconclusive for emptiness.
    """
    layout = _Layout(problem)
    last_status = None
    for options in (_SDP_OPTIONS, _SDP_OPTIONS_RELAXED):
        try:
            sol = _solve_cvxopt(layout, trace_bound=trace_bound, options=options)
        except NumericalBreakdown:
            if options is _SDP_OPTIONS_RELAXED:
                raise
            continue
        last_status = sol["status"]
        if last_status == "optimal":
            tstar = sol["x"][0]
            if tstar >= PSD_TOL:
                grams, coeffs = layout.extract(np.array(sol["x"]).ravel())
                return _exact_certificate(problem, grams, coeffs, tstar)
            return NotFoundAtDegree(
                problem.degree,
                f"best uniform Gram eigenvalue {tstar:.3e} is negative",
                tstar,
            )
        if last_status == "primal infeasible":
            return NotFoundAtDegree(problem.degree, "coefficient system infeasible")
        if last_status == "dual infeasible":
            raise NumericalBreakdown("unbounded feasibility SDP despite trace cap")
    raise NumericalBreakdown(f"SDP ended with status {last_status!r}")


# ---------------------------------------------------------------------------
# measure polynomials in the squared-coordinate chart
#
# Barycentric weights p_i over the sorted-simplex extreme points are
# parametrized as p_i = q_i^2 (killing the p_i >= 0 constraints) with the
# last weight eliminated through p_d = 1 - sum q_i^2, whose nonnegativity is
# the single remaining inequality.

@lru_cache(maxsize=None)
def es_in_q(d: int) -> SparsePolynomial:
    """Source entanglement of a d x d state as a polynomial in q_1..q_{d-1}."""
    base = es_poly_in_p(d)  # variables p_1..p_{d-1}; p_d absent
    squares = {i: SparsePolynomial.variable(i, d - 1) ** 2 for i in range(d - 1)}
    return base.substitute(squares)


@lru_cache(maxsize=None)
def esgen_in_q(d: int, k: int) -> SparsePolynomial:
    """Normalized embedded source entanglement in the same chart.

    The embedded state's barycentric weights extend the original ones by
    zeros, with weight d staying p_d = 1 - sum_i q_i^2; normalization divides
    by the value at the maximally entangled state (p_d = 1), computed exactly
    from the same construction.
    """
    if k <= d:
        raise ValueError("need k > d for a nontrivial embedding")
    base = es_poly_in_p(k)  # variables p_1..p_{k-1}
    nv = d - 1
    norm = base.evaluate_exact([0] * (d - 1) + [1] + [0] * (k - 1 - d))
    p_last = SparsePolynomial.constant(1, nv)
    mapping: dict[int, SparsePolynomial] = {}
    for i in range(nv):
        sq = SparsePolynomial.variable(i, nv) ** 2
        mapping[i] = sq
        p_last = p_last - sq
    mapping[d - 1] = p_last
    for j in range(d, k - 1):
        mapping[j] = SparsePolynomial(nv)
    return base.substitute(mapping) * (1 / norm)


def measure_q_polynomial(d: int, label: str) -> SparsePolynomial:
    """Look up a measure by CLI label as a q-chart polynomial."""
    label = label.strip().lower()
    if label == "es":
        return es_in_q(d)
    if label.startswith("esgen"):
        k = int(label[5:].lstrip(":"))
        return esgen_in_q(d, k)
    raise UnsupportedClosedForm(
        f"measure {label!r} is not polynomial in this chart; certificates support es/esgenK"
    )


def certificate_system(d: int, targets: dict[str, Fraction | float]):
    """Constraint system asserting 'some d x d state attains these values':
    one norm inequality plus one equality per targeted measure."""
    nv = d - 1
    ball = SparsePolynomial.constant(1, nv)
    for i in range(nv):
        ball = ball - SparsePolynomial.variable(i, nv) ** 2
    fs = [ball]
    hs = []
    for label, value in targets.items():
        hs.append(measure_q_polynomial(d, label) - SparsePolynomial.constant(Fraction(value), nv))
    return fs, hs, []


def save_certificate(cert: Certificate, report: VerificationReport, path: str):
    doc = cert.as_json_dict()
    doc["verification"] = {
        "ok": report.ok,
        "identity_residual": report.residual,
        "gram_min_eigenvalues": list(report.min_eigenvalues),
        "message": report.message,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
