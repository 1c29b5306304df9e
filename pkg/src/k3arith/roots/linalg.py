"""Exact integer linear algebra: kernels by column Hermite reduction,
LDL definiteness certificates and LLL reduction with respect to a Gram form."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

IntMatrix = List[List[int]]


class IndefiniteRestriction(ValueError):
    """The restricted form is not definite, so a fixed-norm search would be infinite."""


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def column_echelon(a: Sequence[Sequence[int]], n: int) -> Tuple[IntMatrix, IntMatrix, int]:
    """Unimodular column reduction ``A U = [H | 0]``.

    Returns ``(AU, U, r)`` where the first ``r`` columns of ``AU`` are in
    lower echelon form with positive pivots and the rest are zero.  Columns
    ``r..n-1`` of ``U`` are a basis of the integer kernel of ``A`` and the
    first ``r`` columns complete it to a basis of Z^n.
    """
    h = [list(map(int, row)) for row in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(i: int, j: int, p: int, q: int, r: int, s: int):
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (h, u):
            for row in mat:
                ci, cj = row[i], row[j]
                row[i] = p * ci + q * cj
                row[j] = r * ci + s * cj

    c = 0
    for row_idx in range(len(h)):
        if c == n:
            break
        row = h[row_idx]
        for j in range(c + 1, n):
            if row[j] == 0:
                continue
            ai, aj = row[c], row[j]
            g, p, q = _xgcd(ai, aj)
            # [p, -aj/g; q, ai/g] has determinant 1
            colop(c, j, p, q, -aj // g, ai // g)
        if row[c] != 0:
            if row[c] < 0:
                _negate_col(h, u, c)
            for j in range(c):
                # reduce entries left of the pivot into [0, pivot)
                f = row[j] // row[c]
                if f:
                    _add_col(h, u, j, c, -f)
            c += 1
    return h, u, c


def _negate_col(h: IntMatrix, u: IntMatrix, c: int):
    for mat in (h, u):
        for row in mat:
            row[c] = -row[c]


def _add_col(h: IntMatrix, u: IntMatrix, dst: int, src: int, f: int):
    for mat in (h, u):
        for row in mat:
            row[dst] += f * row[src]


def integer_kernel(a: Sequence[Sequence[int]], n: int) -> Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]:
    """Basis of {x in Z^n : A x = 0} and a complementary set of vectors.

    Both are returned as lists of length-n tuples; together they form a
    basis of Z^n, so the kernel basis spans a saturated sublattice.
    """
    _, u, r = column_echelon(a, n)
    cols = [tuple(u[i][j] for i in range(n)) for j in range(n)]
    return cols[r:], cols[:r]


def rank_rational(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over Q by Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                f = m[i][c] / m[rank][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


def gram_of(basis: Sequence[Sequence[int]], gram: Sequence[Sequence[int]]) -> IntMatrix:
    """B^T G B for basis vectors given as rows of ``basis``."""
    gb = [[sum(g * b for g, b in zip(row, vec)) for row in gram] for vec in basis]
    return [[sum(x * y for x, y in zip(bi, gbj)) for gbj in gb] for bi in basis]


def ldl_certificate(q: Sequence[Sequence]) -> dict:
    """Certify that a symmetric rational matrix is positive definite.

    Returns the LDL^T pivots and the leading principal minors (their running
    products); raises :class:`IndefiniteRestriction` at the first pivot <= 0.
    """
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    pivots: List[Fraction] = []
    minors: List[Fraction] = []
    running = Fraction(1)
    for k in range(n):
        d = a[k][k]
        if d <= 0:
            raise IndefiniteRestriction(f"pivot {k} is {d}; form is not definite")
        pivots.append(d)
        running *= d
        minors.append(running)
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / d
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
    return {"pivots": pivots, "leading_minors": minors}


def _gso(g: Sequence[Sequence[Fraction]]):
    """Gram-Schmidt coefficients mu and squared lengths from a Gram matrix."""
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            mu[i][j] = (g[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))) / bstar[j]
        bstar[i] = g[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
    return mu, bstar


def lll_transform(q: Sequence[Sequence], delta: Fraction = Fraction(3, 4)) -> IntMatrix:
    """Unimodular U (columns = new basis in old coordinates) that LLL-reduces
    the positive definite form ``q``."""
    n = len(q)
    g = [[Fraction(x) for x in row] for row in q]
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # rows are basis vectors

    k = 1
    mu, bstar = _gso(g)
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                # update Gram: row/col k of B^T Q B
                u[k] = [a - r * b for a, b in zip(u[k], u[j])]
                gkj = g[k][j]
                gjj = g[j][j]
                new_kk = g[k][k] - 2 * r * gkj + r * r * gjj
                for i in range(n):
                    g[k][i] -= r * g[j][i]
                g[k][k] = new_kk
                for i in range(n):
                    g[i][k] = g[k][i]
                mu, bstar = _gso(g)
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            g[k], g[k - 1] = g[k - 1], g[k]
            for row in g:
                row[k], row[k - 1] = row[k - 1], row[k]
            mu, bstar = _gso(g)
            k = max(k - 1, 1)
    return [list(col) for col in zip(*u)]


def inverse_rational(q: Sequence[Sequence]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse over Q."""
    n = len(q)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(q)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]
