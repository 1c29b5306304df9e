"""Membership in the period domain and in the space of marked pairs.

A period point is the real pair (w1, w2) standing for the complex line
[w1 + i w2]; the conditions <v,v> = 0 and <v, v-bar> > 0 become
<w1,w1> = <w2,w2> > 0 and <w1,w2> = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .lattice import (
    GramLattice,
    ScalarVector,
    as_scalar_vector,
    inner,
    k3_lattice,
    vector_degree,
    vector_from_json,
    vector_to_json,
)
from .scalars import MultiquadraticNumber
from .roots.search import RootSearchResult, find_roots_orthogonal_to


@dataclass(frozen=True)
class PeriodPoint:
    w1: ScalarVector
    w2: ScalarVector

    def __post_init__(self):
        object.__setattr__(self, "w1", as_scalar_vector(self.w1))
        object.__setattr__(self, "w2", as_scalar_vector(self.w2))

    def rotate(self, a, b) -> "PeriodPoint":
        """(w1, w2) -> (a w1 - b w2, b w1 + a w2): the same complex line."""
        if a == 0 and b == 0:
            raise ValueError("a and b must not both vanish")
        return PeriodPoint(
            tuple(a * p - b * q for p, q in zip(self.w1, self.w2)),
            tuple(b * p + a * q for p, q in zip(self.w1, self.w2)),
        )


@dataclass(frozen=True)
class MarkedPairPoint:
    kappa: ScalarVector
    period: PeriodPoint

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_scalar_vector(self.kappa))

    @property
    def plane(self):
        return [self.kappa, self.period.w1, self.period.w2]

    def to_json(self) -> dict:
        return {
            "kappa": vector_to_json(self.kappa),
            "w1": vector_to_json(self.period.w1),
            "w2": vector_to_json(self.period.w2),
        }

    @classmethod
    def from_json(cls, data) -> "MarkedPairPoint":
        return cls(
            vector_from_json(data["kappa"]),
            PeriodPoint(vector_from_json(data["w1"]), vector_from_json(data["w2"])),
        )


@dataclass
class Membership:
    ok: bool
    diagnostic: Optional[str] = None
    witness: Optional[tuple] = None
    search: Optional[RootSearchResult] = None

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        out = {"ok": self.ok, "diagnostic": self.diagnostic}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _pairing(x, y, lat) -> MultiquadraticNumber:
    p = inner(x, y, lat)
    if not p.is_constant():
        raise ValueError("point depends on s; evaluate it first")
    return p.constant()


def _require_concrete(*vectors):
    if any(vector_degree(v) > 0 for v in vectors):
        raise ValueError("point depends on s; evaluate it first")


def in_omega(p: PeriodPoint, lat: GramLattice | None = None) -> Membership:
    lat = lat or k3_lattice()
    _require_concrete(p.w1, p.w2)
    n1 = _pairing(p.w1, p.w1, lat)
    if n1.sign() <= 0:
        return Membership(False, "positivity")
    if n1 != _pairing(p.w2, p.w2, lat):
        return Membership(False, "equal-norms")
    if not _pairing(p.w1, p.w2, lat).is_zero():
        return Membership(False, "orthogonality")
    return Membership(True)


def in_k_omega_zero(m: MarkedPairPoint, lat: GramLattice | None = None, reduce: bool = False) -> Membership:
    """Positivity and orthogonality of kappa, the period conditions, then the
    root condition: no root orthogonal to span{kappa, w1, w2}.

    For delta in the period plane's orthogonal complement, <kappa, delta> = 0
    exactly when delta is orthogonal to the whole 3-plane, so the root
    condition is checked in that form.
    """
    lat = lat or k3_lattice()
    _require_concrete(m.kappa, m.period.w1, m.period.w2)
    if _pairing(m.kappa, m.kappa, lat).sign() <= 0:
        return Membership(False, "positivity")
    if not (_pairing(m.kappa, m.period.w1, lat).is_zero() and _pairing(m.kappa, m.period.w2, lat).is_zero()):
        return Membership(False, "kappa-orthogonality")
    omega = in_omega(m.period, lat)
    if not omega:
        return Membership(False, f"omega:{omega.diagnostic}")
    result = find_roots_orthogonal_to(m.plane, lat=lat, reduce=reduce)
    if result.is_empty:
        return Membership(True, search=result)
    return Membership(False, "root", witness=result.witness, search=result)


def pairing_summary(m: MarkedPairPoint, lat: GramLattice | None = None) -> dict:
    """All six pairings of kappa, w1, w2 (symbolic in s when applicable)."""
    lat = lat or k3_lattice()
    names = ("kappa", "w1", "w2")
    vecs = (m.kappa, m.period.w1, m.period.w2)
    out = {}
    for i in range(3):
        for j in range(i, 3):
            out[f"{names[i]}.{names[j]}"] = inner(vecs[i], vecs[j], lat)
    return out


__all__ = ["PeriodPoint", "MarkedPairPoint", "Membership", "in_omega", "in_k_omega_zero"]
