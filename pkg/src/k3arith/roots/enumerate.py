"""Fincke-Pohst enumeration of lattice vectors of a fixed norm."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from ..lattice import GramLattice, IntVector
from .linalg import gram_of, ldl_certificate, lll_transform


def _decompose(q: Sequence[Sequence[Fraction]]):
    """q_ii, q_ij with Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    for i in range(n):
        for j in range(i + 1, n):
            a[j][i] = a[i][j]
            a[i][j] /= a[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                a[k][m] -= a[k][i] * a[i][m]
    return a


def _floor_sqrt_fraction(m: Fraction) -> int:
    """Largest integer r with r*r <= m, for m >= 0."""
    r = math.isqrt(m.numerator // m.denominator)
    while (r + 1) * (r + 1) <= m:
        r += 1
    return r


def _range(center: Fraction, m: Fraction) -> Tuple[int, int]:
    """Integers x with (x - center)^2 <= m."""
    r = _floor_sqrt_fraction(m) + 1
    lo = math.floor(center) - r
    hi = math.ceil(center) + r
    # the admissible set is an interval, possibly empty (then lo > hi)
    while lo <= hi and (lo - center) ** 2 > m:
        lo += 1
    while hi >= lo and (hi - center) ** 2 > m:
        hi -= 1
    return lo, hi


def fincke_pohst(q: Sequence[Sequence], target, prefix: Sequence[int] = ()) -> Iterator[Tuple[int, ...]]:
    """All integer x with x^T q x == target, for positive definite rational q.

    ``prefix`` fixes the trailing coordinates (x_{n-k}, ..., x_{n-1}); this
    is how the search tree is split between workers.  Yields in a
    deterministic order.
    """
    n = len(q)
    target = Fraction(target)
    if n == 0:
        if target == 0:
            yield ()
        return
    if target < 0:
        return
    d = _decompose(q)
    x = [0] * n

    def center(i: int) -> Fraction:
        return -sum((d[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))

    fixed = list(prefix)
    remaining = target
    for offset, value in enumerate(reversed(fixed)):
        i = n - 1 - offset
        x[i] = value
    for i in range(n - 1, n - 1 - len(fixed), -1):
        remaining -= d[i][i] * (x[i] - center(i)) ** 2
        if remaining < 0:
            return

    def search(i: int, budget: Fraction):
        if i < 0:
            if budget == 0:
                yield tuple(x)
            return
        c = center(i)
        lo, hi = _range(c, budget / d[i][i])
        for value in range(lo, hi + 1):
            x[i] = value
            rest = budget - d[i][i] * (value - c) ** 2
            if rest >= 0:
                yield from search(i - 1, rest)
        x[i] = 0

    yield from search(n - 1 - len(fixed), remaining)


def canonical_key(v: Sequence[int]):
    """Sort key: squared coordinate length, then coordinatewise."""
    return (sum(a * a for a in v), tuple(v))


def combine(basis: Sequence[Sequence[int]], coeffs: Sequence[int]) -> IntVector:
    rank = len(basis[0])
    return tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(rank))


def enumerate_norm(
    basis: Sequence[Sequence[int]],
    lat: GramLattice,
    target: int,
    reduce: bool = False,
) -> List[IntVector]:
    """Every v in the span of ``basis`` with <v, v> == target (< 0).

    The form restricted to the sublattice must be negative definite; this is
    certified before searching and :class:`IndefiniteRestriction` raised
    otherwise.  With ``reduce`` the basis is LLL-reduced first, which never
    changes the returned list.
    """
    if target >= 0:
        raise ValueError("target norm must be negative")
    basis = [tuple(b) for b in basis]
    if not basis:
        return []
    restricted = gram_of(basis, lat.gram)
    positive = [[-a for a in row] for row in restricted]
    ldl_certificate(positive)
    if reduce:
        u = lll_transform(positive)
        basis = [combine(basis, col) for col in zip(*u)]
        positive = [[-a for a in row] for row in gram_of(basis, lat.gram)]
    found = [combine(basis, c) for c in fincke_pohst(positive, -target)]
    return sorted(found, key=canonical_key)


def standard_basis(n: int) -> List[IntVector]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]
