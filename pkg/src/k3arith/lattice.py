"""Integer lattices given by Gram matrices, and the K3 lattice 3H + 2(-E8)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Mapping, Optional, Sequence, Tuple

from .scalars import ScalarPolynomial, ZERO

IntVector = Tuple[int, ...]
ScalarVector = Tuple[ScalarPolynomial, ...]

# Bourbaki numbering: chain 1-3-4-5-6-7-8, node 2 hangs off node 4.
E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))

# -E8 Gram matrix in the Bourbaki basis, written out as ground truth.
MINUS_E8_GRAM = (
    (-2, 0, -1, 0, 0, 0, 0, 0),
    (0, -2, 0, -1, 0, 0, 0, 0),
    (-1, 0, -2, -1, 0, 0, 0, 0),
    (0, -1, -1, -2, -1, 0, 0, 0),
    (0, 0, 0, -1, -2, -1, 0, 0),
    (0, 0, 0, 0, -1, -2, -1, 0),
    (0, 0, 0, 0, 0, -1, -2, -1),
    (0, 0, 0, 0, 0, 0, -1, -2),
)

K3_LABELS = (
    ("u", "v", "x", "y", "z", "t")
    + tuple(f"e8a{i}" for i in range(1, 9))
    + tuple(f"e8b{i}" for i in range(1, 9))
)
FIRST_E8 = tuple(range(6, 14))
SECOND_E8 = tuple(range(14, 22))


class DimensionMismatch(ValueError):
    pass


class DegenerateFormError(ValueError):
    """The bilinear form has a nontrivial radical."""


@dataclass(frozen=True)
class GramLattice:
    gram: Tuple[Tuple[int, ...], ...]
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        g = tuple(tuple(int(a) for a in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise ValueError("one label per basis vector")
            object.__setattr__(self, "labels", labels)
        # sparse rows, used by every pairing
        object.__setattr__(
            self, "_rows", tuple(tuple((j, a) for j, a in enumerate(row) if a) for row in g)
        )

    @property
    def rank(self) -> int:
        return len(self.gram)

    def index(self, label: str) -> int:
        if self.labels is None:
            raise KeyError("lattice has no basis labels")
        return self.labels.index(label)

    def pair(self, x: Sequence, y: Sequence):
        """x^T G y for vectors with any ring-valued coordinates."""
        if len(x) != self.rank or len(y) != self.rank:
            raise DimensionMismatch(f"expected length {self.rank}, got {len(x)} and {len(y)}")
        total = 0
        for i, row in enumerate(self._rows):
            xi = x[i]
            if not xi:
                continue
            acc = 0
            for j, a in row:
                if y[j]:
                    acc = acc + a * y[j]
            if acc:
                total = total + xi * acc
        return total

    def norm(self, x: Sequence):
        return self.pair(x, x)

    def apply_gram(self, x: Sequence) -> list:
        """G x as a list."""
        if len(x) != self.rank:
            raise DimensionMismatch(f"expected length {self.rank}, got {len(x)}")
        out = []
        for row in self._rows:
            acc = 0
            for j, a in row:
                if x[j]:
                    acc = acc + a * x[j]
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram]}

    @classmethod
    def from_json(cls, data: Mapping) -> "GramLattice":
        lat = cls(tuple(tuple(r) for r in data["gram"]), data.get("labels"))
        if "rank" in data and int(data["rank"]) != lat.rank:
            raise ValueError("rank field disagrees with the Gram matrix")
        return lat


def direct_sum(*lattices: GramLattice) -> GramLattice:
    n = sum(lat.rank for lat in lattices)
    gram = [[0] * n for _ in range(n)]
    labels: List[str] = []
    offset = 0
    for lat in lattices:
        for i in range(lat.rank):
            for j in range(lat.rank):
                gram[offset + i][offset + j] = lat.gram[i][j]
        labels.extend(lat.labels or [f"b{offset + i}" for i in range(lat.rank)])
        offset += lat.rank
    return GramLattice(tuple(map(tuple, gram)), tuple(labels))


def hyperbolic_H(labels: Tuple[str, str] = ("u", "v")) -> GramLattice:
    return GramLattice(((0, 1), (1, 0)), labels)


def minus_E8(prefix: str = "e8_") -> GramLattice:
    return GramLattice(MINUS_E8_GRAM, tuple(f"{prefix}{i}" for i in range(1, 9)))


@lru_cache(maxsize=None)
def k3_lattice() -> GramLattice:
    """L = 3H + 2(-E8), basis (u, v, x, y, z, t, e8a1..8, e8b1..8)."""
    return direct_sum(
        hyperbolic_H(("u", "v")),
        hyperbolic_H(("x", "y")),
        hyperbolic_H(("z", "t")),
        minus_E8("e8a"),
        minus_E8("e8b"),
    )


def determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def inertia(matrix: Sequence[Sequence]) -> Tuple[int, int, int]:
    """(positive, negative, zero) counts of a symmetric rational matrix.

    Symmetric Gaussian elimination by congruence; a block with zero
    diagonal but a nonzero entry a_ij is handled by replacing e_i with
    e_i + e_j, which puts 2*a_ij on the diagonal.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    live = list(range(n))
    pos = neg = 0
    while live:
        k = next((i for i in live if a[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in live for j in live if i < j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for m in range(n):
                a[i][m] += a[j][m]
            for m in range(n):
                a[m][i] += a[m][j]
            k = i
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        live.remove(k)
        for i in live:
            if a[i][k]:
                f = a[i][k] / d
                for j in live:
                    a[i][j] -= f * a[k][j]
        for i in live:
            a[i][k] = a[k][i] = Fraction(0)
    return pos, neg, len(live)


def signature(lat: GramLattice | Sequence[Sequence]) -> Tuple[int, int]:
    gram = lat.gram if isinstance(lat, GramLattice) else lat
    pos, neg, zero = inertia(gram)
    if zero:
        raise DegenerateFormError(f"form has a radical of rank {zero}")
    return pos, neg


def is_even(lat: GramLattice) -> bool:
    # x^T G x = sum G_ii x_i^2 + 2 * (cross terms), so even diagonal suffices
    return all(lat.gram[i][i] % 2 == 0 for i in range(lat.rank))


def is_unimodular(lat: GramLattice) -> bool:
    return determinant(lat.gram) in (1, -1)


def int_vector(lat: GramLattice, coords: Mapping[str, int] | None = None, **kw) -> IntVector:
    """Integer vector from label coefficients, e.g. ``int_vector(L, u=2, v=1)``."""
    out = [0] * lat.rank
    for label, c in {**(coords or {}), **kw}.items():
        out[lat.index(label)] += int(c)
    return tuple(out)


def scalar_vector(lat: GramLattice, coords: Mapping[str, object] | None = None, **kw) -> ScalarVector:
    """Vector with polynomial coordinates from label coefficients."""
    out = [ScalarPolynomial() for _ in range(lat.rank)]
    for label, c in {**(coords or {}), **kw}.items():
        i = lat.index(label)
        out[i] = out[i] + ScalarPolynomial.coerce(c)
    return tuple(out)


def as_scalar_vector(x: Sequence) -> ScalarVector:
    return tuple(ScalarPolynomial.coerce(c) for c in x)


def embed(lat: GramLattice, block: Sequence[int], values: Sequence) -> ScalarVector:
    """Place ``values`` in the coordinates listed in ``block``."""
    out = [ScalarPolynomial() for _ in range(lat.rank)]
    for i, v in zip(block, values):
        out[i] = ScalarPolynomial.coerce(v)
    return tuple(out)


def inner(x: Sequence, y: Sequence, lat: GramLattice) -> ScalarPolynomial:
    """Exact pairing x^T G y of two scalar vectors, as a polynomial in s."""
    return ScalarPolynomial.coerce(lat.pair(as_scalar_vector(x), as_scalar_vector(y)) or ZERO)


def evaluate_vector(x: Sequence, s) -> tuple:
    """Specialize polynomial coordinates at ``s`` (multiquadratic results)."""
    return tuple(ScalarPolynomial.coerce(c).evaluate(s) for c in x)


def vector_degree(x: Sequence) -> int:
    return max((ScalarPolynomial.coerce(c).degree for c in x), default=-1)


def vector_coefficient(x: Sequence, k: int) -> tuple:
    """The coefficient vector of s^k."""
    return tuple(ScalarPolynomial.coerce(c).coefficient(k) for c in x)


def vector_to_json(x: Sequence) -> list:
    return [ScalarPolynomial.coerce(c).to_json() for c in x]


def vector_from_json(data: Sequence, rank: int = 22) -> ScalarVector:
    if not isinstance(data, list) or len(data) != rank:
        raise DimensionMismatch(f"expected an array of {rank} coordinates")
    return tuple(ScalarPolynomial.from_json(c) for c in data)
