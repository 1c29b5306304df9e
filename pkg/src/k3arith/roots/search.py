"""Roots orthogonal to a positive 3-plane: constraint splitting, integer
kernel, definiteness certificate and enumeration of norm -2 vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from ..lattice import (
    GramLattice,
    IntVector,
    as_scalar_vector,
    evaluate_vector,
    k3_lattice,
    vector_degree,
)
from ..scalars import Monomial, MultiquadraticNumber, ScalarPolynomial, fraction_str, radicand
from .enumerate import canonical_key, enumerate_norm
from .linalg import gram_of, integer_kernel, ldl_certificate

ROOT_NORM = -2


class NotAPositivePlane(ValueError):
    """The input vectors do not span a positive definite subspace."""


@dataclass(frozen=True)
class LinearForm:
    """Integer linear form in the coordinates of the unknown vector.

    ``source`` records where it came from: (vector index, power of s or
    None when s was specialized, monomial of the splitting).
    """

    coeffs: Tuple[int, ...]
    source: Tuple[int, Optional[int], Monomial]

    def __call__(self, x: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(self.coeffs, x))

    def describe(self, labels: Sequence[str] | None = None) -> str:
        labels = labels or [f"d{i}" for i in range(len(self.coeffs))]
        terms = []
        for a, lab in zip(self.coeffs, labels):
            if a == 0:
                continue
            coef = "" if a == 1 else "-" if a == -1 else f"{a}*"
            terms.append(f"{coef}{lab}")
        return (" + ".join(terms).replace("+ -", "- ") or "0") + " = 0"


@dataclass
class LinearConstraintSystem:
    rank: int
    forms: List[LinearForm] = field(default_factory=list)

    def matrix(self) -> List[Tuple[int, ...]]:
        return [f.coeffs for f in self.forms]

    def satisfied_by(self, x: Sequence[int]) -> bool:
        return all(f(x) == 0 for f in self.forms)


def primitive_row(row: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational row to a primitive integer row with the same kernel."""
    den = math.lcm(*(q.denominator for q in row)) if row else 1
    ints = [int(q * den) for q in row]
    g = math.gcd(*ints)
    return tuple(a // g for a in ints) if g else tuple(ints)


def split_constraints(vectors: Sequence[Sequence], lat: GramLattice | None = None, s=None) -> LinearConstraintSystem:
    """Integer linear forms whose common kernel is {delta : <delta, w> = 0 for all w}.

    Each pairing <delta, w> = sum_i delta_i (G w)_i is expanded over the
    monomials sqrt(prod S); by their rational independence each monomial's
    coefficient must vanish separately.  When ``s`` is None and coordinates
    depend on s, the powers of s are split as well (s as an indeterminate).
    """
    lat = lat or k3_lattice()
    system = LinearConstraintSystem(lat.rank)
    for j, w in enumerate(vectors):
        w = as_scalar_vector(w)
        if len(w) != lat.rank:
            raise ValueError(f"vector {j} has length {len(w)}, expected {lat.rank}")
        gw = lat.apply_gram(w)
        if s is not None:
            parts = {None: [MultiquadraticNumber.coerce(c.evaluate(s) if c else 0) for c in _polys(gw)]}
        else:
            degree = max((c.degree for c in _polys(gw)), default=-1)
            parts = {k: [c.coefficient(k) for c in _polys(gw)] for k in range(degree + 1)}
        for k, column in parts.items():
            monomials = sorted({m for c in column for m in c.terms}, key=lambda m: (radicand(m), m))
            for m in monomials:
                row = [c.coefficient(m) for c in column]
                system.forms.append(LinearForm(primitive_row(row), (j, k, m)))
    return system


def _polys(gw):
    return [ScalarPolynomial.coerce(c if c else 0) for c in gw]


def kernel_lattice(system: LinearConstraintSystem) -> List[IntVector]:
    """Basis of the integer solutions of ``system`` (a saturated sublattice)."""
    if not system.forms:
        return [tuple(int(i == j) for j in range(system.rank)) for i in range(system.rank)]
    kernel, _ = integer_kernel(system.matrix(), system.rank)
    return kernel


def gram_matrix_scalar(vectors: Sequence[Sequence], lat: GramLattice):
    return [[MultiquadraticNumber.coerce(lat.pair(a, b) or 0) for b in vectors] for a in vectors]


def _det_expand(a) -> MultiquadraticNumber:
    # Laplace expansion: division-free, fine for the 3x3 matrices used here
    n = len(a)
    if n == 1:
        return a[0][0]
    total = MultiquadraticNumber.coerce(0)
    for j in range(n):
        if a[0][j]:
            minor = [row[:j] + row[j + 1:] for row in a[1:]]
            term = a[0][j] * _det_expand(minor)
            total = total + term if j % 2 == 0 else total - term
    return total


def is_positive_definite_scalar(gram) -> bool:
    """Sylvester's criterion: every leading principal minor has exact sign +1."""
    a = [[MultiquadraticNumber.coerce(x) for x in row] for row in gram]
    return all(_det_expand([row[:k] for row in a[:k]]).sign() > 0 for k in range(1, len(a) + 1))


def verify_root(delta: Sequence[int], vectors: Sequence[Sequence], lat: GramLattice) -> bool:
    """Independent re-check: plain integer norm and direct multiquadratic pairings."""
    n = lat.rank
    norm = sum(lat.gram[i][j] * delta[i] * delta[j] for i in range(n) for j in range(n))
    if norm != ROOT_NORM:
        return False
    for w in vectors:
        w = [ScalarPolynomial.coerce(c if c else 0).constant() for c in w]
        total = MultiquadraticNumber.coerce(0)
        for i in range(n):
            if not delta[i]:
                continue
            for j in range(n):
                if lat.gram[i][j] and w[j]:
                    total = total + MultiquadraticNumber.coerce(w[j]) * (lat.gram[i][j] * delta[i])
        if not total.is_zero():
            return False
    return True


@dataclass
class RootSearchResult:
    outcome: str  # "empty" | "witness"
    witness: Optional[IntVector]
    count: int
    kernel_basis: List[IntVector]
    restricted_gram: List[List[int]]
    certificate: dict
    roots: List[IntVector] = field(default_factory=list)
    s: Optional[Fraction] = None

    @property
    def kernel_rank(self) -> int:
        return len(self.kernel_basis)

    @property
    def is_empty(self) -> bool:
        return self.outcome == "empty"

    def to_json(self, list_witnesses: bool = False) -> dict:
        out = {
            "outcome": self.outcome,
            "witness": list(self.witness) if self.witness is not None else None,
            "kernel_rank": self.kernel_rank,
            "count": self.count,
            "definiteness": "certified",
            "kernel_basis": [list(b) for b in self.kernel_basis],
            "leading_minors": [fraction_str(m) for m in self.certificate["leading_minors"]],
            "target_norm": ROOT_NORM,
        }
        if self.s is not None:
            out["s"] = fraction_str(self.s)
        if list_witnesses:
            out["witnesses"] = [list(r) for r in self.roots]
        return out


def find_roots_orthogonal_to(
    vectors: Sequence[Sequence],
    at=None,
    lat: GramLattice | None = None,
    reduce: bool = False,
) -> RootSearchResult:
    """Decide whether a root of ``lat`` is orthogonal to all ``vectors``.

    Vectors with polynomial coordinates are specialized at ``s = at`` first.
    The vectors must span a positive definite subspace; the orthogonal
    sublattice is then negative definite and the search is finite.
    """
    lat = lat or k3_lattice()
    vectors = [as_scalar_vector(w) for w in vectors]
    if any(vector_degree(w) > 0 for w in vectors) and at is None:
        raise ValueError("vectors depend on s; pass a value for `at`")
    point = [evaluate_vector(w, at if at is not None else 0) for w in vectors]
    if not is_positive_definite_scalar(gram_matrix_scalar(point, lat)):
        raise NotAPositivePlane("Gram matrix of the input vectors is not positive definite")

    system = split_constraints(point, lat)
    basis = kernel_lattice(system)
    restricted = gram_of(basis, lat.gram) if basis else []
    certificate = ldl_certificate([[-a for a in row] for row in restricted])
    roots = enumerate_norm(basis, lat, ROOT_NORM, reduce=reduce) if basis else []
    for r in roots:
        if not system.satisfied_by(r):
            raise AssertionError(f"enumerated vector {r} violates the constraint system")
    witness = roots[0] if roots else None
    if witness is not None and not verify_root(witness, point, lat):
        raise AssertionError(f"witness {witness} failed independent verification")
    return RootSearchResult(
        outcome="witness" if roots else "empty",
        witness=witness,
        count=len(roots),
        kernel_basis=basis,
        restricted_gram=restricted,
        certificate=certificate,
        roots=roots,
        s=Fraction(at) if at is not None else None,
    )


__all__ = [
    "LinearForm",
    "LinearConstraintSystem",
    "NotAPositivePlane",
    "RootSearchResult",
    "canonical_key",
    "find_roots_orthogonal_to",
    "kernel_lattice",
    "split_constraints",
    "verify_root",
]
