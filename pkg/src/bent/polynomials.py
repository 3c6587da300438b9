"""Sparse multivariate polynomials over exact rationals.

Monomials are exponent tuples; coefficients are Fractions so that identity
checks in the certificate machinery are free of rounding questions.  Floating
point appears only in :meth:`SparsePolynomial.evaluate`.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .errors import VariableMismatch

__all__ = ["SparsePolynomial", "es_poly_in_p", "monomials_up_to"]


class SparsePolynomial:
    """Immutable polynomial: {exponent tuple: Fraction}, zero coefficients dropped."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        clean = {}
        for expo, coeff in (terms or {}).items():
            if len(expo) != nvars:
                raise VariableMismatch(f"exponent {expo} has wrong arity for {nvars} vars")
            coeff = Fraction(coeff)
            if coeff:
                clean[tuple(expo)] = coeff
        self.terms = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, nvars: int) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, i: int, nvars: int) -> "SparsePolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    # -- ring operations ----------------------------------------------------
    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            if other.nvars != self.nvars:
                raise VariableMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        return SparsePolynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return SparsePolynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SparsePolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative power")
        result = SparsePolynomial.constant(1, self.nvars)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- queries ------------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, expo) -> Fraction:
        return self.terms.get(tuple(expo), Fraction(0))

    def max_abs_coefficient(self) -> float:
        return max((abs(float(c)) for c in self.terms.values()), default=0.0)

    # -- substitution and evaluation ----------------------------------------
    def substitute(self, mapping: dict[int, "SparsePolynomial"]) -> "SparsePolynomial":
        """Replace variables by polynomials; unmapped variables keep their index.

        All replacement polynomials must share one variable count, which
        becomes the arity of the result.
        """
        targets = list(mapping.values())
        out_nvars = targets[0].nvars if targets else self.nvars
        for t in targets:
            if t.nvars != out_nvars:
                raise VariableMismatch("replacement polynomials disagree on arity")
        cache: dict[tuple[int, int], SparsePolynomial] = {}

        def var_power(i: int, e: int) -> SparsePolynomial:
            key = (i, e)
            if key not in cache:
                base = mapping.get(i)
                if base is None:
                    base = SparsePolynomial.variable(i, out_nvars)
                cache[key] = base**e
            return cache[key]

        total = SparsePolynomial(out_nvars)
        for expo, coeff in self.terms.items():
            term = SparsePolynomial.constant(coeff, out_nvars)
            for i, e in enumerate(expo):
                if e:
                    term = term * var_power(i, e)
            total = total + term
        return total

    def evaluate(self, point) -> float:
        x = [float(v) for v in point]
        if len(x) != self.nvars:
            raise VariableMismatch(f"point has {len(x)} coords, need {self.nvars}")
        total = 0.0
        for expo, coeff in self.terms.items():
            v = float(coeff)
            for xi, e in zip(x, expo):
                if e:
                    v *= xi**e
            total += v
        return total

    def evaluate_exact(self, point) -> Fraction:
        x = [Fraction(v) for v in point]
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            v = coeff
            for xi, e in zip(x, expo):
                if e:
                    v *= xi**e
            total += v
        return total

    def __repr__(self):
        if not self.terms:
            return "SparsePolynomial(0)"
        bits = []
        for expo in sorted(self.terms, key=lambda e: (sum(e), e)):
            c = self.terms[expo]
            mono = "*".join(f"x{i}^{p}" for i, p in enumerate(expo) if p)
            bits.append(f"{c}" if not mono else f"{c}*{mono}")
        return "SparsePolynomial(" + " + ".join(bits) + ")"


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of total degree <= degree, graded lexicographic."""
    out: list[tuple[int, ...]] = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, slots - 1)

    for total in range(degree + 1):
        rec((), total, nvars)
    return out


def es_poly_in_p(k: int) -> SparsePolynomial:
    """Source entanglement of a k x k state as an exact polynomial in the
    first k-1 barycentric coordinates (the last one never enters).

    Built straight from the permutation sum: the linear form per permutation
    is sum_{j<k} p_j * S_j(sigma)/j with S_j the partial sums of sigma.
    """
    nv = k - 1
    total = SparsePolynomial(nv)
    for sig in permutations(range(1, k + 1)):
        lin = SparsePolynomial(nv)
        partial = 0
        for j in range(nv):
            partial += sig[j]
            lin = lin + SparsePolynomial(
                nv, {tuple(1 if t == j else 0 for t in range(nv)): Fraction(partial, j + 1)}
            )
        den = 1
        for j in range(k - 1):
            den *= sig[j] - sig[j + 1]
        total = total + lin ** (k - 1) * Fraction(1, den)
    return SparsePolynomial.constant(1, nv) - total
