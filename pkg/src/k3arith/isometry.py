"""Integer isometries of a Gram lattice, the O+ orientation test, and phi.

Matrices act on column coordinate vectors: ``apply(m, x) = M x``.  The
composite ``compose(a, b)`` applies ``b`` first, then ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .lattice import (
    DimensionMismatch,
    GramLattice,
    ScalarVector,
    as_scalar_vector,
    determinant,
    int_vector,
    k3_lattice,
)
from .scalars import ScalarPolynomial

Matrix = Tuple[Tuple[int, ...], ...]


class NotAnIsometry(ValueError):
    pass


def _as_matrix(m: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(a) for a in row) for row in m)


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    n, k, p = len(a), len(b), len(b[0])
    if any(len(row) != k for row in a):
        raise DimensionMismatch("inner dimensions differ")
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(a[i], bt[j])) for j in range(p)) for i in range(n))


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def is_isometry(m: Sequence[Sequence[int]], lat: GramLattice) -> bool:
    """True iff m^T G m = G exactly."""
    n = lat.rank
    if len(m) != n or any(len(row) != n for row in m):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    m = _as_matrix(m)
    return matmul(matmul(transpose(m), lat.gram), m) == lat.gram


@dataclass(frozen=True)
class LatticeIsometry:
    matrix: Matrix
    ambient: GramLattice

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_matrix(self.matrix))
        if not is_isometry(self.matrix, self.ambient):
            raise NotAnIsometry("matrix does not preserve the Gram form")

    @classmethod
    def identity(cls, lat: GramLattice) -> "LatticeIsometry":
        return cls(identity_matrix(lat.rank), lat)

    @property
    def determinant(self) -> int:
        return determinant(self.matrix)

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        return compose(self, other)

    def __pow__(self, k: int) -> "LatticeIsometry":
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = LatticeIsometry.identity(self.ambient)
        for _ in range(k):
            result = compose(self, result)
        return result

    def apply_int(self, x: Sequence[int]) -> Tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, x)) for row in self.matrix)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, data, lat: GramLattice | None = None) -> "LatticeIsometry":
        return cls(_as_matrix(data["matrix"]), lat or k3_lattice())


def compose(a: LatticeIsometry, b: LatticeIsometry) -> LatticeIsometry:
    """``a`` after ``b``."""
    if a.ambient != b.ambient:
        raise DimensionMismatch("isometries of different lattices")
    return LatticeIsometry(matmul(a.matrix, b.matrix), a.ambient)


def apply(m: LatticeIsometry, x: Sequence) -> ScalarVector:
    """M x for a vector with polynomial coordinates."""
    if len(x) != m.ambient.rank:
        raise DimensionMismatch(f"expected length {m.ambient.rank}, got {len(x)}")
    x = as_scalar_vector(x)
    out = []
    for row in m.matrix:
        acc = ScalarPolynomial()
        for a, c in zip(row, x):
            if a and c:
                acc = acc + a * c
        out.append(acc)
    return tuple(out)


def reference_plane(lat: GramLattice | None = None):
    """u+v, x+y, z+t: pairwise orthogonal, each of norm 2."""
    lat = lat or k3_lattice()
    return (
        int_vector(lat, u=1, v=1),
        int_vector(lat, x=1, y=1),
        int_vector(lat, z=1, t=1),
    )


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def orientation_matrix(m: LatticeIsometry):
    """Matrix of (projection onto P) . m restricted to P, in the basis p1, p2, p3."""
    lat = m.ambient
    plane = reference_plane(lat)
    norms = [lat.norm(p) for p in plane]
    images = [m.apply_int(p) for p in plane]
    return [
        [Fraction(lat.pair(images[j], plane[i]), norms[i]) for j in range(3)]
        for i in range(3)
    ]


def is_o_plus(m: LatticeIsometry) -> bool:
    """True iff m preserves the orientation of positive 3-planes.

    The orthogonal projection of m(P) onto the reference positive 3-plane P
    is an isomorphism (its kernel would be a positive vector inside the
    negative definite complement), so the sign of its determinant decides.
    """
    if not isinstance(m, LatticeIsometry):
        raise NotAnIsometry("expected a LatticeIsometry")
    if m.ambient.rank != 22:
        raise DimensionMismatch("O+ is defined here for the K3 lattice")
    d = _det3(orientation_matrix(m))
    if d == 0:
        raise AssertionError("projection of a positive 3-plane degenerated")
    return d > 0


def phi() -> LatticeIsometry:
    """u -> u, v -> v+y, x -> x-u, y -> y; identity on z, t and both -E8 copies."""
    lat = k3_lattice()
    images = {
        "u": int_vector(lat, u=1),
        "v": int_vector(lat, v=1, y=1),
        "x": int_vector(lat, x=1, u=-1),
        "y": int_vector(lat, y=1),
    }
    cols = []
    for i, label in enumerate(lat.labels):
        cols.append(images.get(label, tuple(int(i == j) for j in range(lat.rank))))
    return LatticeIsometry(transpose(cols), lat)


def minus_identity(lat: GramLattice | None = None) -> LatticeIsometry:
    lat = lat or k3_lattice()
    return LatticeIsometry(tuple(tuple(-a for a in row) for row in identity_matrix(lat.rank)), lat)


def e8_block_swap() -> LatticeIsometry:
    """Exchange the two -E8 copies coordinatewise."""
    lat = k3_lattice()
    perm = list(range(6)) + list(range(14, 22)) + list(range(6, 14))
    return permutation_isometry(perm, lat)


def permutation_isometry(perm: Sequence[int], lat: GramLattice, signs: Sequence[int] | None = None):
    """Column i of the matrix is signs[i] * e_{perm[i]}."""
    n = lat.rank
    signs = signs or [1] * n
    cols = [tuple(signs[i] if j == perm[i] else 0 for j in range(n)) for i in range(n)]
    return LatticeIsometry(transpose(cols), lat)


def reflection(r: Sequence[int], lat: GramLattice | None = None) -> LatticeIsometry:
    """x -> x - 2<x,r>/<r,r> r, for r with <r,r> = +-2 or +-1."""
    lat = lat or k3_lattice()
    rr = lat.norm(r)
    if rr == 0 or 2 % rr:
        raise ValueError("reflection is integral only for norm +-1, +-2 vectors")
    gr = lat.apply_gram(r)
    n = lat.rank
    cols = []
    for i in range(n):
        # image of e_i: e_i - (2 * (G r)_i / rr) * r
        f = 2 * gr[i] // rr
        cols.append(tuple(int(i == j) - f * r[j] for j in range(n)))
    return LatticeIsometry(transpose(cols), lat)
