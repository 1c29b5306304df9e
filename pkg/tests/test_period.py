from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from k3arith.family import default_e_scale, e_prime_norm, paper_family
from k3arith.isometry import apply, phi
from k3arith.lattice import FIRST_E8, scalar_vector
from k3arith.period import MarkedPairPoint, PeriodPoint, in_k_omega_zero, in_omega, pairing_summary
from k3arith.roots.search import verify_root
from k3arith.scalars import S

from helpers import random_block_isometry


def _transform(g, m: MarkedPairPoint) -> MarkedPairPoint:
    return MarkedPairPoint(apply(g, m.kappa), PeriodPoint(apply(g, m.period.w1), apply(g, m.period.w2)))


def test_e_scale_and_norm_bound():
    c = default_e_scale()
    assert c == Fraction(1, 16)
    n = e_prime_norm(c)
    assert n.sign() == -1 and (n + 4).sign() == 1
    # twice the scale would leave the admissible range
    assert (e_prime_norm(2 * c) + 4).sign() <= 0


def test_e_norm_against_floating_oracle():
    from k3arith.lattice import MINUS_E8_GRAM

    with mpmath.workdps(50):
        v = [mpmath.sqrt(p) / 16 for p in (2, 3, 5, 7, 11, 13, 17, 19)]
        expected = mpmath.fsum(MINUS_E8_GRAM[i][j] * v[i] * v[j] for i in range(8) for j in range(8))
        assert abs(float(e_prime_norm(Fraction(1, 16)).approx()) - float(expected)) < 1e-12
        assert -4 < expected < 0


def test_in_omega_examples(k3):
    fam = paper_family()
    assert in_omega(fam.at(0).period).ok
    u = scalar_vector(k3, u=1)
    v = scalar_vector(k3, v=1)
    bad = in_omega(PeriodPoint(u, v))
    assert not bad.ok and bad.diagnostic == "positivity"
    uv = scalar_vector(k3, u=1, v=1)
    bad = in_omega(PeriodPoint(uv, uv))
    assert not bad.ok and bad.diagnostic == "orthogonality"
    bad = in_omega(PeriodPoint(uv, scalar_vector(k3, x=1, y=2)))
    assert not bad.ok and bad.diagnostic == "equal-norms"


def test_in_k_omega_zero_examples(k3):
    assert in_k_omega_zero(paper_family().at(0)).ok
    control = in_k_omega_zero(paper_family(0).at(0))
    assert not control.ok and control.diagnostic == "root"
    delta = control.witness
    assert all(delta[i] == 0 for i in range(22) if i not in FIRST_E8)
    assert verify_root(delta, paper_family(0).at(0).plane, k3)
    point = paper_family().at(0)
    null = MarkedPairPoint(scalar_vector(k3, u=1), point.period)
    res = in_k_omega_zero(null)
    assert not res.ok and res.diagnostic == "positivity"


def test_kappa_orthogonality_diagnostic(k3):
    point = paper_family().at(0)
    m = MarkedPairPoint(scalar_vector(k3, u=2, v=1, x=1, y=1), point.period)
    assert in_k_omega_zero(m).diagnostic == "kappa-orthogonality"


def test_symbolic_points_rejected():
    with pytest.raises(ValueError):
        in_omega(paper_family().symbolic_point().period)


def test_pairing_identities_symbolic(k3):
    fam = paper_family()
    pairs = pairing_summary(fam.symbolic_point(), k3)
    assert pairs["kappa.kappa"] == 4
    assert pairs["w1.w1"] == pairs["w2.w2"] == 4 + e_prime_norm(default_e_scale())
    for key in ("kappa.w1", "kappa.w2", "w1.w2"):
        assert pairs[key].is_zero()


def test_rotation_invariance():
    rng = random.Random(2)
    for fam in (paper_family(), paper_family(0)):
        for s in (Fraction(0), Fraction(-7, 3)):
            point = fam.at(s)
            a, b = Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(1, 5), 2)
            rotated = MarkedPairPoint(point.kappa, point.period.rotate(a, b))
            assert in_omega(rotated.period).ok == in_omega(point.period).ok
            assert in_k_omega_zero(rotated).ok == in_k_omega_zero(point).ok
    with pytest.raises(ValueError):
        paper_family().at(0).period.rotate(0, 0)


def test_membership_invariant_under_isometries():
    rng = random.Random(4)
    gens = [phi()] + [random_block_isometry(rng)[0] for _ in range(3)]
    for fam in (paper_family(), paper_family(0)):
        point = fam.at(Fraction(1, 3))
        base = in_k_omega_zero(point).ok
        for g in gens:
            assert in_k_omega_zero(_transform(g, point)).ok == base


def test_point_json_roundtrip():
    point = paper_family().at(Fraction(2, 5))
    again = MarkedPairPoint.from_json(point.to_json())
    assert again == point
    assert set(point.to_json()) == {"kappa", "w1", "w2"}


def test_family_point_at_zero(k3):
    point = paper_family().at(0)
    assert point.kappa == scalar_vector(k3, u=2, v=1)
    assert point.kappa != scalar_vector(k3, u=2, v=1, y=S)
