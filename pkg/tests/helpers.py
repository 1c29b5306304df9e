"""Shared constructions for the test modules."""

from __future__ import annotations

import random
from typing import Tuple

from k3arith.isometry import LatticeIsometry, permutation_isometry
from k3arith.lattice import k3_lattice

HYPERBOLIC_BLOCKS = [(0, 1), (2, 3), (4, 5)]


def random_block_isometry(rng: random.Random) -> Tuple[LatticeIsometry, bool]:
    """Permute the three hyperbolic planes and the two -E8 copies, then
    negate whole -E8 copies at random.

    Returns the isometry and whether it lies in O+: the reference positive
    3-plane has one basis vector per hyperbolic plane, so the orientation
    is the sign of the permutation of those planes.
    """
    lat = k3_lattice()
    order = rng.sample(range(3), 3)
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if order[i] > order[j])
    order = [HYPERBOLIC_BLOCKS[k] for k in order]
    perm = [i for block in order for i in block]
    e8 = [list(range(6, 14)), list(range(14, 22))]
    rng.shuffle(e8)
    perm += e8[0] + e8[1]
    signs = [1] * 6 + [rng.choice((1, -1))] * 8 + [rng.choice((1, -1))] * 8
    return permutation_isometry(perm, lat, signs), inversions % 2 == 0


def box_search(gram, target: int):
    """All integer x with x^T gram x == target for negative definite gram.

    Naive oracle: |x_i| <= sqrt(target * (Q^{-1})_{ii}) with Q = -gram, by
    Cauchy-Schwarz in the Q-inner product; every lattice point in that box
    is tested with exact integer arithmetic.
    """
    import itertools

    import numpy as np

    g = np.array(gram, dtype=np.int64)
    n = len(g)
    qinv = np.linalg.inv(-g.astype(float))
    bounds = [int(np.floor(np.sqrt(-target * qinv[i, i]) + 1e-9)) for i in range(n)]
    # inner block vectorized, outer block looped
    split = max(0, n - 4)
    inner = np.array(list(itertools.product(*[range(-b, b + 1) for b in bounds[split:]])), dtype=np.int64)
    if inner.size == 0:
        inner = np.zeros((1, 0), dtype=np.int64)
    g_ii = g[split:, split:]
    g_oi = g[:split, split:]
    inner_norm = np.einsum("ij,jk,ik->i", inner, g_ii, inner)
    found = []
    for outer in itertools.product(*[range(-b, b + 1) for b in bounds[:split]]):
        o = np.array(outer, dtype=np.int64)
        base = int(o @ g[:split, :split] @ o) if split else 0
        cross = inner @ (2 * (o @ g_oi)) if split else 0
        hits = np.nonzero(base + cross + inner_norm == target)[0]
        for h in hits:
            found.append(tuple(int(a) for a in outer) + tuple(int(a) for a in inner[h]))
    return found


def random_negative_definite(rng: random.Random, rank: int, bound: int = 6):
    """Random symmetric integer matrix with entries in [-bound, bound],
    rejected until negative definite (checked by exact leading minors)."""
    from fractions import Fraction

    while True:
        m = [[0] * rank for _ in range(rank)]
        for i in range(rank):
            m[i][i] = rng.randint(-bound, -1)
            for j in range(i):
                m[i][j] = m[j][i] = rng.randint(-bound, bound)
        # -m positive definite iff all leading minors of -m are positive
        ok = True
        for k in range(1, rank + 1):
            a = [[Fraction(-m[i][j]) for j in range(k)] for i in range(k)]
            det = Fraction(1)
            for c in range(k):
                piv = a[c][c]
                if piv <= 0:
                    ok = False
                    break
                det *= piv
                for r in range(c + 1, k):
                    f = a[r][c] / piv
                    for cc in range(c, k):
                        a[r][cc] -= f * a[c][cc]
            if not ok:
                break
        if ok:
            return m
