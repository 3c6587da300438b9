"""Proving measure-value combinations unphysical, with checkable artifacts.

A dense scan suggests no 3x3 state has source entanglement 0.2 together with
generalized source entanglement 0.9; the certificate machinery turns the
suggestion into a proof: an exact polynomial identity that no real point can
satisfy.  Values taken from an actual state correctly refuse to certify.
"""

import pathlib
from fractions import Fraction

import numpy as np

from bent.certify import (
    Certificate,
    NotFoundAtDegree,
    build_certificate_problem,
    certificate_system,
    esgen_in_q,
    save_certificate,
    solve_feasibility,
    sos_decompose,
    verify_certificate,
)
from bent.measures import MeasureId, measure_block
from bent.polynomials import SparsePolynomial
from bent.schmidt import sample_sorted_block

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

rng = np.random.default_rng(0)
block = sample_sorted_block(3, 500_000, rng)
es = measure_block(block, MeasureId("es"))
eg = measure_block(block, MeasureId("esgen", 4))
near = int(np.count_nonzero((np.abs(es - 0.2) < 1e-3) & (np.abs(eg - 0.9) < 1e-3)))
print(f"dense scan: {near} of 500000 states near (es, esgen4) = (0.2, 0.9)")

fs, hs, gs = certificate_system(3, {"es": Fraction(1, 5), "esgen4": Fraction(9, 10)})
problem = build_certificate_problem(fs, hs, gs, 6, description="es=0.2, esgen4=0.9")
result = solve_feasibility(problem)
assert isinstance(result, Certificate)
report = verify_certificate(result)
save_certificate(result, report, str(OUT / "certificate_02_09.json"))
print(f"degree-6 certificate found; verified: {report.ok} "
      f"(identity residual {report.residual:.1e}, "
      f"Gram eigenvalue floor {min(report.min_eigenvalues):.3e})")
print("  SOS multiplier degrees:",
      [2 * max(sum(e) for e in b.basis) for b in result.blocks],
      "ideal multiplier degrees:",
      [max(sum(e) for e in m.monomials) for m in result.multipliers])

# the exact values of a physical state must never certify
s = Fraction(1, 4)
targets = {
    "es": -9 * s * s + 6 * s,
    "esgen4": esgen_in_q(3, 4).evaluate_exact([Fraction(1, 2), 0]),
}
fs, hs, gs = certificate_system(3, targets)
outcome = solve_feasibility(build_certificate_problem(fs, hs, gs, 6))
assert isinstance(outcome, NotFoundAtDegree)
print(f"values of the state (0.5, 0.25, 0.25): {outcome.detail} — inconclusive "
      "by design (a real solution exists, so no certificate can)")

# plain sum-of-squares decisions through the same engine
x, y, z = (SparsePolynomial.variable(i, 3) for i in range(3))
motzkin = x**4 * y**2 + x**2 * y**4 + z**6 - 3 * x**2 * y**2 * z**2
witness = sos_decompose(motzkin)
print(f"the classic nonnegative-but-not-SOS sextic: separating functional "
      f"with pairing {witness.pairing:.3e} < 0")
