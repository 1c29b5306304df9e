"""The one-parameter family s -> (2u+v+sy, [x-su+2y+e, z+2t+f]) and the
checks that make its quotient by <phi> a valid construction."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .isometry import LatticeIsometry, apply
from .lattice import (
    FIRST_E8,
    SECOND_E8,
    GramLattice,
    ScalarVector,
    as_scalar_vector,
    embed,
    evaluate_vector,
    inner,
    k3_lattice,
    minus_E8,
    scalar_vector,
    vector_coefficient,
    vector_degree,
    vector_to_json,
)
from .period import MarkedPairPoint, PeriodPoint, in_k_omega_zero, in_omega
from .roots.linalg import rank_rational
from .scalars import (
    S,
    MultiquadraticNumber,
    ScalarPolynomial,
    as_fraction,
    fraction_str,
)

log = logging.getLogger(__name__)

E_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def e_prime(scale) -> Tuple[MultiquadraticNumber, ...]:
    """scale * (sqrt 2, sqrt 3, ..., sqrt 19) in the -E8 basis."""
    c = as_fraction(scale)
    return tuple(MultiquadraticNumber.sqrt(p) * c for p in E_PRIMES)


def e_prime_norm(scale) -> MultiquadraticNumber:
    return MultiquadraticNumber.coerce(minus_E8().norm(e_prime(scale)) or 0)


@lru_cache(maxsize=None)
def default_e_scale() -> Fraction:
    """Largest power of 1/2 with <e', e'> > -4, so that <w1, w1> > 0."""
    c = Fraction(1)
    while (e_prime_norm(c) + 4).sign() <= 0:
        c /= 2
    return c


@dataclass(frozen=True)
class AffineFamily:
    """kappa(s), w1(s), w2(s) with polynomial coordinates."""

    kappa: ScalarVector
    w1: ScalarVector
    w2: ScalarVector
    parameter_dim: int = 1
    name: str = "family"
    e_scale: Optional[Fraction] = None

    def __post_init__(self):
        for attr in ("kappa", "w1", "w2"):
            object.__setattr__(self, attr, as_scalar_vector(getattr(self, attr)))

    @property
    def vectors(self) -> List[ScalarVector]:
        return [self.kappa, self.w1, self.w2]

    def at(self, s) -> MarkedPairPoint:
        return MarkedPairPoint(
            evaluate_vector(self.kappa, s),
            PeriodPoint(evaluate_vector(self.w1, s), evaluate_vector(self.w2, s)),
        )

    def shifted(self, sigma) -> List[ScalarVector]:
        """The vectors of s -> f(s + sigma)."""
        return [tuple(c.shift(sigma) for c in v) for v in self.vectors]

    def symbolic_point(self) -> MarkedPairPoint:
        return MarkedPairPoint(self.kappa, PeriodPoint(self.w1, self.w2))

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "parameter_dim": self.parameter_dim,
            "kappa": vector_to_json(self.kappa),
            "w1": vector_to_json(self.w1),
            "w2": vector_to_json(self.w2),
        }
        if self.e_scale is not None:
            out["e_scale"] = fraction_str(self.e_scale)
        return out


def paper_family(e_scale=None, lat: GramLattice | None = None) -> AffineFamily:
    """kappa = 2u+v+sy, w1 = x-su+2y+e, w2 = z+2t+f with e=(e',0), f=(0,e').

    ``e_scale`` defaults to :func:`default_e_scale`; 0 gives the degenerate
    family without the irrational perturbation.
    """
    lat = lat or k3_lattice()
    c = default_e_scale() if e_scale is None else as_fraction(e_scale)
    ep = e_prime(c)
    e = embed(lat, FIRST_E8, ep)
    f = embed(lat, SECOND_E8, ep)
    kappa = scalar_vector(lat, u=2, v=1, y=S)
    w1 = _add(scalar_vector(lat, x=1, u=-S, y=2), e)
    w2 = _add(scalar_vector(lat, z=1, t=2), f)
    return AffineFamily(kappa, w1, w2, name="standard" if e_scale is None else f"standard(e_scale={fraction_str(c)})", e_scale=c)


def perturbed_family(lat: GramLattice | None = None) -> AffineFamily:
    """The standard family with kappa = 2u+v+s(y + sqrt(2) e8a1).

    Its direction line contains no nonzero integral vector, so the affine
    integrality check fails.
    """
    lat = lat or k3_lattice()
    base = paper_family(lat=lat)
    direction = scalar_vector(lat, y=1, e8a1=MultiquadraticNumber.sqrt(2))
    kappa = _add(scalar_vector(lat, u=2, v=1), tuple(S * c for c in direction))
    return AffineFamily(kappa, base.w1, base.w2, name="perturbed", e_scale=base.e_scale)


def _add(a: Sequence, b: Sequence) -> ScalarVector:
    return tuple(ScalarPolynomial.coerce(x) + ScalarPolynomial.coerce(y) for x, y in zip(a, b))


def vectors_equal(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    return all(
        ScalarPolynomial.coerce(x) == ScalarPolynomial.coerce(y) for va, vb in zip(a, b) for x, y in zip(va, vb)
    )


def _solve_shift(fam: AffineFamily, images: List[ScalarVector]) -> Optional[Fraction]:
    """Rational sigma with images == f(s + sigma), read off a degree-1 coordinate."""
    for img, vec in zip(images, fam.vectors):
        for target, c in zip(img, vec):
            if c.degree == 1:
                # c = a0 + a1 s, so c(s + sigma) - c(s) = a1 sigma
                diff = target.coefficient(0) - c.coefficient(0)
                ratio = diff / c.coefficient(1)
                return ratio.to_fraction() if ratio.is_rational() else None
    return Fraction(0)


def check_equivariance(fam: AffineFamily, g: LatticeIsometry) -> Tuple[bool, Optional[Fraction]]:
    """Is g . f(s) = f(s + sigma) identically in s for some rational sigma?"""
    images = [apply(g, v) for v in fam.vectors]
    if any(vector_degree(v) > 1 for v in fam.vectors):
        return False, None
    sigma = _solve_shift(fam, images)
    if sigma is None:
        return False, None
    return vectors_equal(images, fam.shifted(sigma)), sigma


def integral_affine_rank(fam: AffineFamily) -> Tuple[int, int]:
    """(rank of the integral vectors in the direction space of kappa, its dimension).

    The direction space D is spanned by the coefficients of s^k (k >= 1) in
    kappa.  A rational vector lies in D iff it is Euclidean-orthogonal to
    every vector of D's orthogonal complement; splitting those complement
    vectors over the monomials turns this into rational linear conditions.
    """
    directions = [vector_coefficient(fam.kappa, k) for k in range(1, vector_degree(fam.kappa) + 1)]
    return integral_rank_of_directions(directions)


def integral_rank_of_directions(directions: Sequence[Sequence]) -> Tuple[int, int]:
    """(rank of the integral vectors in span(directions), dim of the span)."""
    directions = [
        [ScalarPolynomial.coerce(c).constant() for c in d] for d in directions if any(d)
    ]
    if not directions:
        return 0, 0
    n = len(directions[0])
    complement, dim = _orthogonal_complement(directions, n)
    rows = []
    for c in complement:
        monomials = {m for x in c for m in x.terms}
        for m in monomials:
            rows.append([x.coefficient(m) for x in c])
    rational_rank = n - rank_rational(rows) if rows else n
    return rational_rank, dim


def _orthogonal_complement(rows: Sequence[Sequence[MultiquadraticNumber]], n: int):
    """Basis of {c : sum_i r_i c_i = 0 for every row r} over the multiquadratic field."""
    m = [[MultiquadraticNumber.coerce(x) for x in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][col].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        pivots.append(col)
        rank += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        vec = [MultiquadraticNumber.coerce(0)] * n
        vec[free] = MultiquadraticNumber.coerce(1)
        for r, p in enumerate(pivots):
            vec[p] = -m[r][free]
        basis.append(vec)
    return basis, rank


def check_action_discreteness(shift) -> bool:
    """A nonzero translation s -> s + sigma generates a free, proper and
    cocompact Z-action on the line (quotient a circle)."""
    return shift is not None and as_fraction(shift) != 0


def kappa_injective(fam: AffineFamily) -> bool:
    """pr_1 restricted to the family is injective iff kappa is non-constant
    (degree-1 coefficient nonzero for an affine family)."""
    return vector_degree(fam.kappa) == 1 and any(vector_coefficient(fam.kappa, 1))


def default_sweep() -> List[Fraction]:
    return [Fraction(k, 100) for k in range(-500, 501)]


def sweep_point(fam: AffineFamily, s) -> dict:
    """Membership data at one parameter value; JSON-ready."""
    point = fam.at(s)
    omega = in_omega(point.period)
    member = in_k_omega_zero(point)
    out = {
        "s": fraction_str(as_fraction(s)),
        "in_omega": omega.ok,
        "in_k_omega_zero": member.ok,
        "diagnostic": member.diagnostic,
    }
    if member.search is not None:
        out["outcome"] = member.search.outcome
        out["kernel_rank"] = member.search.kernel_rank
        out["count"] = member.search.count
        if member.witness is not None:
            out["witness"] = list(member.witness)
    return out


def _sweep_chunk(args):
    fam, values = args
    return [sweep_point(fam, s) for s in values]


def run_sweep(fam: AffineFamily, sweep: Sequence, workers: int = 1) -> List[dict]:
    """Per-point results in input order, independent of the worker count."""
    values = [as_fraction(s) for s in sweep]
    if workers <= 1 or len(values) < 2:
        return [sweep_point(fam, s) for s in values]
    chunks = [values[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_sweep_chunk, [(fam, c) for c in chunks]))
    by_index: Dict[int, dict] = {}
    for w, part in enumerate(parts):
        for k, row in enumerate(part):
            by_index[w + k * workers] = row
    return [by_index[i] for i in range(len(values))]


def symbolic_identities(fam: AffineFamily, lat: GramLattice | None = None) -> dict:
    """The six pairings of kappa, w1, w2 as polynomials in s."""
    lat = lat or k3_lattice()
    names = ("kappa", "w1", "w2")
    out = {}
    for i in range(3):
        for j in range(i, 3):
            out[f"{names[i]}.{names[j]}"] = inner(fam.vectors[i], fam.vectors[j], lat)
    return out


@dataclass
class VerificationCertificate:
    family: str
    invariance: dict
    affine_integrality: dict
    action_properties: dict
    inclusion: dict
    consistency_violation: Optional[str] = None

    @property
    def all_pass(self) -> bool:
        return all(
            part["pass"]
            for part in (self.invariance, self.affine_integrality, self.action_properties, self.inclusion)
        )

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "invariance": self.invariance,
            "affine_integrality": self.affine_integrality,
            "action_properties": self.action_properties,
            "inclusion": self.inclusion,
            "all_pass": self.all_pass,
        }


def verify_theorem_hypotheses(
    fam: AffineFamily,
    g: LatticeIsometry,
    sweep: Sequence | None = None,
    workers: int = 1,
    symbolic: bool = True,
    samples: bool = True,
) -> VerificationCertificate:
    """Run every arithmetic check; a failing check never stops the others."""
    from .roots.symbolic import symbolic_root_obstruction

    sweep = default_sweep() if sweep is None else list(sweep)

    try:
        ok, sigma = check_equivariance(fam, g)
    except Exception as exc:  # recorded, not fatal
        ok, sigma = False, None
        log.warning("equivariance check failed: %s", exc)
    if not ok:
        sigma = None
    invariance = {"pass": ok, "shift": fraction_str(sigma) if sigma is not None else None}

    rank, dim = integral_affine_rank(fam)
    injective = kappa_injective(fam)
    affine = {
        "pass": rank == dim and injective,
        "integral_rank": rank,
        "dimension": dim,
        "section_injective": injective,
    }

    discrete = ok and check_action_discreteness(sigma)
    action = {"pass": discrete, "translation": fraction_str(sigma) if sigma is not None else None}

    identities = symbolic_identities(fam)
    cross_zero = all(identities[k].is_zero() for k in ("kappa.w1", "kappa.w2", "w1.w2"))
    equal_norms = identities["w1.w1"] == identities["w2.w2"]
    inclusion: dict = {
        "identities": {k: str(v) for k, v in identities.items()},
        "identities_pass": cross_zero and equal_norms,
    }
    symbolic_ok = True
    if symbolic:
        trace = symbolic_root_obstruction(fam)
        inclusion["symbolic"] = trace.to_json()
        symbolic_ok = trace.success
    else:
        inclusion["symbolic"] = None
    sweep_ok = True
    violation = None
    if samples:
        rows = run_sweep(fam, sweep, workers)
        failures = [r for r in rows if not r["in_k_omega_zero"]]
        witnesses = [r for r in rows if r.get("outcome") == "witness"]
        sweep_ok = not failures
        inclusion["sweep"] = {
            "points": len(rows),
            "in_k_omega_zero": len(rows) - len(failures),
            "empty": sum(1 for r in rows if r.get("outcome") == "empty"),
            "kernel_ranks": sorted({r["kernel_rank"] for r in rows if "kernel_rank" in r}),
            "failures": failures[:10],
        }
        if symbolic and symbolic_ok and witnesses:
            violation = "symbolic obstruction succeeded but a sample point has a root"
    else:
        inclusion["sweep"] = None
    inclusion["pass"] = inclusion["identities_pass"] and symbolic_ok and sweep_ok
    cert = VerificationCertificate(fam.name, invariance, affine, action, inclusion)
    cert.consistency_violation = violation
    return cert
