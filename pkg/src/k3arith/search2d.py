"""Experimental: two-parameter families over a 2-dimensional base.

The family

    kappa = p u + v + s1 y + s2 t
    w1    = x - s1 u + p y + e
    w2    = z - s2 u + p t + f

has <kappa, kappa> = 2p and <w1, w1> = <w2, w2> = 2p + <e', e'>, with all
cross pairings zero.  phi1 (v -> v+y, x -> x-u) shifts s1 by one and phi2
(v -> v+t, z -> z-u) shifts s2 by one.  Grid sampling only gives evidence;
the symbolic obstruction is run on one-parameter slices s2 = const.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

from .family import (
    AffineFamily,
    _add,
    check_equivariance,
    default_e_scale,
    e_prime,
    integral_rank_of_directions,
    run_sweep,
    vectors_equal,
)
from .isometry import LatticeIsometry, apply, phi
from .lattice import FIRST_E8, SECOND_E8, embed, k3_lattice, scalar_vector
from .scalars import S, as_fraction, fraction_str


def phi2() -> LatticeIsometry:
    """v -> v + t, z -> z - u, identity on the other basis vectors."""
    lat = k3_lattice()
    n = lat.rank
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    u, v, z, t = (lat.index(x) for x in "uvzt")
    m[t][v] = 1  # column v gains t
    m[u][z] = -1  # column z gains -u
    return LatticeIsometry(tuple(tuple(r) for r in m), lat)


def slice_family(p: int, s2, e_scale=None) -> AffineFamily:
    """The 2-parameter family restricted to s2 = const, parametrized by s1."""
    lat = k3_lattice()
    c = default_e_scale() if e_scale is None else as_fraction(e_scale)
    s2 = as_fraction(s2)
    ep = e_prime(c)
    e = embed(lat, FIRST_E8, ep)
    f = embed(lat, SECOND_E8, ep)
    kappa = scalar_vector(lat, u=p, v=1, y=S, t=s2)
    w1 = _add(scalar_vector(lat, x=1, u=-S, y=p), e)
    w2 = _add(scalar_vector(lat, z=1, u=-s2, t=p), f)
    return AffineFamily(kappa, w1, w2, parameter_dim=1, name=f"2d(p={p},s2={fraction_str(s2)})", e_scale=c)


def grid(s_min, s_max, samples: int) -> List[Fraction]:
    lo, hi = as_fraction(s_min), as_fraction(s_max)
    if samples == 1:
        return [lo]
    return [lo + (hi - lo) * k / (samples - 1) for k in range(samples)]


def evaluate_candidate(p: int, values: Sequence[Fraction], workers: int = 1, symbolic: bool = True, samples: bool = True) -> dict:
    from .roots.symbolic import symbolic_root_obstruction

    lat = k3_lattice()
    probe = slice_family(p, 0)
    eq1, sigma1 = check_equivariance(probe, phi())
    # phi2 maps the slice at s2 to the slice at s2 + 1
    g2 = phi2()
    eq2 = vectors_equal([apply(g2, v) for v in probe.vectors], slice_family(p, 1).vectors)
    directions = [scalar_vector(lat, y=1), scalar_vector(lat, t=1)]
    rank, dim = integral_rank_of_directions(directions)
    out: dict = {
        "p": p,
        "equivariance": {"phi1": eq1 and sigma1 == 1, "phi2": eq2},
        "integral_rank": [rank, dim],
        "translations": [["1", "0"], ["0", "1"]],
    }
    root_points = []
    if samples:
        for s2 in values:
            rows = run_sweep(slice_family(p, s2), values, workers)
            for r in rows:
                if not r["in_k_omega_zero"]:
                    root_points.append({"s1": r["s"], "s2": fraction_str(s2), "diagnostic": r["diagnostic"], "witness": r.get("witness")})
        out["grid"] = {"points": len(values) ** 2, "failures": len(root_points), "first_failures": root_points[:5]}
    if symbolic:
        slices = {}
        for s2 in values:
            trace = symbolic_root_obstruction(slice_family(p, s2))
            slices[fraction_str(s2)] = trace.success
        out["symbolic"] = {"two_parameter": "not attempted", "slices": slices}
    structural = eq1 and eq2 and rank == dim
    out["status"] = "refuted" if (root_points or not structural) else "evidence"
    return out


def search2d(p_values: Sequence[int], s_min, s_max, samples: int, workers: int = 1, symbolic: bool = True, run_samples: bool = True) -> dict:
    values = grid(s_min, s_max, samples)
    candidates = [evaluate_candidate(p, values, workers, symbolic, run_samples) for p in p_values]
    return {
        "experimental": True,
        "note": "grid evidence and slice-wise symbolic checks, not a proof over the 2-dimensional base",
        "grid": [fraction_str(v) for v in values],
        "candidates": candidates,
        "passing": [c["p"] for c in candidates if c["status"] == "evidence"],
    }
