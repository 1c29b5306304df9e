from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from k3arith.family import (
    AffineFamily,
    VerificationCertificate,
    check_action_discreteness,
    check_equivariance,
    integral_affine_rank,
    kappa_injective,
    paper_family,
    perturbed_family,
    run_sweep,
    symbolic_identities,
    verify_theorem_hypotheses,
)
from k3arith.isometry import LatticeIsometry, compose, e8_block_swap, minus_identity, phi
from k3arith.lattice import inner, k3_lattice, scalar_vector, vector_degree
from k3arith.scalars import S


def test_paper_family_examples(k3):
    fam = paper_family()
    assert fam.at(0).kappa == scalar_vector(k3, u=2, v=1)
    assert vector_degree(fam.w2) == 0
    assert vector_degree(fam.kappa) == 1 and vector_degree(fam.w1) == 1
    assert fam.kappa == scalar_vector(k3, u=2, v=1, y=S)


def test_equivariance_examples(k3):
    fam = paper_family()
    assert check_equivariance(fam, phi()) == (True, 1)
    assert check_equivariance(fam, LatticeIsometry.identity(k3)) == (True, 0)
    assert check_equivariance(fam, e8_block_swap())[0] is False
    assert check_equivariance(fam, minus_identity())[0] is False


def test_shift_is_additive():
    fam = paper_family()
    g = phi()
    for k in range(1, 5):
        assert check_equivariance(fam, g ** k) == (True, k)
    assert check_equivariance(fam, compose(g, g)) == (True, 2)


def test_phi_shifts_family_symbolically():
    from k3arith.isometry import apply

    fam = paper_family()
    for vec, shifted in zip(fam.vectors, fam.shifted(1)):
        assert apply(phi(), vec) == shifted


def test_integral_affine_rank():
    assert integral_affine_rank(paper_family()) == (1, 1)
    assert integral_affine_rank(perturbed_family()) == (0, 1)
    fam = paper_family()
    constant = AffineFamily(fam.at(0).kappa, fam.at(0).period.w1, fam.w2)
    assert integral_affine_rank(constant) == (0, 0)


def test_action_discreteness():
    assert check_action_discreteness(1)
    assert not check_action_discreteness(0)
    assert check_action_discreteness(-2)
    assert not check_action_discreteness(None)


def test_kappa_injective():
    assert kappa_injective(paper_family())
    fam = paper_family()
    assert not kappa_injective(AffineFamily(fam.at(0).kappa, fam.w1, fam.w2))


def test_symbolic_identities():
    ids = symbolic_identities(paper_family())
    assert ids["kappa.kappa"] == 4
    norm = ids["w1.w1"]
    assert norm == ids["w2.w2"] and norm.is_constant()
    e_norm = norm - 4
    assert e_norm.constant().sign() == -1 and (e_norm + 4).constant().sign() == 1
    assert all(ids[k].is_zero() for k in ("kappa.w1", "kappa.w2", "w1.w2"))


def test_sweep_deterministic_across_workers():
    fam = paper_family()
    values = [Fraction(k, 7) for k in range(-6, 7)]
    assert run_sweep(fam, values, 1) == run_sweep(fam, values, 3)


def test_headline_certificate_small_sweep():
    sweep = [Fraction(k, 4) for k in range(-8, 9)]
    cert = verify_theorem_hypotheses(paper_family(), phi(), sweep=sweep)
    assert cert.all_pass
    assert cert.consistency_violation is None
    data = cert.to_json()
    assert data["inclusion"]["symbolic"]["success"]
    assert data["inclusion"]["sweep"]["points"] == len(sweep)


def test_negative_control_certificate():
    cert = verify_theorem_hypotheses(paper_family(0), phi(), sweep=[0])
    assert not cert.all_pass
    assert not cert.inclusion["pass"]
    assert cert.inclusion["sweep"]["failures"][0]["witness"]
    assert cert.invariance["pass"]


def test_minus_identity_certificate():
    cert = verify_theorem_hypotheses(paper_family(), minus_identity(), sweep=[0])
    assert not cert.all_pass
    assert not cert.invariance["pass"]
    assert not cert.action_properties["pass"]
    # the other checks still ran
    assert cert.inclusion["pass"] and cert.affine_integrality["pass"]


def test_perturbed_family_fails_integrality():
    cert = verify_theorem_hypotheses(perturbed_family(), phi(), sweep=[0], symbolic=False)
    assert not cert.affine_integrality["pass"]
    assert not cert.all_pass


@given(st.lists(st.booleans(), min_size=4, max_size=4))
def test_certificate_is_conjunction(flags):
    parts = [{"pass": f} for f in flags]
    cert = VerificationCertificate("x", *parts)
    assert cert.all_pass == all(flags)
    assert cert.to_json()["all_pass"] == all(flags)


def test_identities_hold_at_random_points():
    rng = random.Random(6)
    fam = paper_family()
    lat = k3_lattice()
    for _ in range(10):
        s = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
        p = fam.at(s)
        assert inner(p.kappa, p.kappa, lat) == 4
        assert inner(p.kappa, p.period.w1, lat).is_zero()
