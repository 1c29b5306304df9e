from __future__ import annotations

import json
from fractions import Fraction

from k3arith.family import AffineFamily, paper_family, run_sweep
from k3arith.lattice import scalar_vector
from k3arith.roots.search import verify_root
from k3arith.roots.symbolic import symbolic_root_obstruction
from k3arith.scalars import S
from k3arith.search2d import slice_family


def _trace():
    return symbolic_root_obstruction(paper_family())


def test_paper_family_succeeds():
    trace = _trace()
    assert trace.success and trace.reason is None and trace.witness is None


def test_split_step_lists_monomials():
    split = _trace().step("split")
    monomials = {p["vector"]: p["monomials"] for p in split["pairings"]}
    assert monomials["kappa"] == ["1"]
    assert monomials["w1"] == ["1", "2", "3", "5", "7", "11", "13", "17", "19"]


def test_rational_case_forces_both_e8_blocks_to_vanish():
    step = _trace().step("case_rational")
    assert step["vanishing_blocks"] == {"first_e8": True, "second_e8": True}
    assert len(step["forced_zero"]) == 16
    assert step["free_variables"] == ["D", "A", "B"]
    assert step["pivot_expressions"]["U"] == "-2*D + (-s)*A"


def test_residual_and_parity_contradiction():
    step = _trace().step("case_rational")
    residual = step["residual"]
    # the cross terms in s appear in the expansion and cancel in pairs
    assert len(residual["s_dependent_contributions"]) == 4
    assert residual["s_dependence_cancels"]
    assert residual["normalized_coefficients"] == {"D^2": 2, "A^2": 2, "B^2": 2}
    assert residual["normalized_target"] == 1
    assert residual["normalized"] == "2*D^2 + 2*A^2 + 2*B^2 = 1"
    assert step["contradiction"]["kind"] == "parity"
    assert "integrality_side_conditions" in step


def test_irrational_case_subcases_close():
    step = _trace().step("case_irrational")
    results = [sub["result"] for sub in step["subcases"]]
    assert results == ["closed", "closed"]
    split_all, dropped = step["subcases"]
    assert split_all["kernel_rank"] == 1
    assert dropped["roots_before_conditions"] > 0 and dropped["roots_after_conditions"] == 0


def test_reference_comparison_is_reported():
    cmp = _trace().step("reference_comparison")
    forms = cmp["forms"]
    assert forms["u"]["agrees"]
    assert not forms["w1"]["agrees"] and not forms["w2"]["agrees"]
    assert "D*s" in forms["w1"]["mechanized"]
    assert cmp["reference_residual"]["s_free"] is False
    assert cmp["notes"]


def test_degenerate_family_fails_with_genuine_witness(k3):
    trace = symbolic_root_obstruction(paper_family(0))
    assert not trace.success
    assert trace.witness is not None
    for s in (Fraction(0), Fraction(5, 3), Fraction(-2)):
        assert verify_root(trace.witness, paper_family(0).at(s).plane, k3)


def test_trivial_family_fails(k3):
    fam = AffineFamily(
        scalar_vector(k3, u=1, v=1), scalar_vector(k3, x=1, y=1), scalar_vector(k3, z=1, t=1), name="trivial"
    )
    trace = symbolic_root_obstruction(fam)
    assert not trace.success and trace.witness is not None
    assert trace.step("case_irrational") is None  # no s-dependence to analyse


def test_two_parameter_family_not_supported(k3):
    fam = paper_family()
    fam2 = AffineFamily(fam.kappa, fam.w1, fam.w2, parameter_dim=2)
    trace = symbolic_root_obstruction(fam2)
    assert not trace.success and "one-parameter" in trace.reason


def test_nonlinear_family_not_supported(k3):
    fam = paper_family()
    bent = AffineFamily(tuple(c * S for c in fam.kappa), fam.w1, fam.w2)
    assert not symbolic_root_obstruction(bent).success


def test_sample_symbolic_consistency():
    samples = [Fraction(k, 3) for k in range(-4, 5)]
    families = [paper_family(), paper_family(0), slice_family(1, 0), slice_family(2, 1), slice_family(2, Fraction(1, 2))]
    for fam in families:
        trace = symbolic_root_obstruction(fam)
        rows = run_sweep(fam, samples)
        has_root = any(r.get("outcome") == "witness" for r in rows)
        if trace.success:
            assert not has_root, fam.name
        if has_root:
            assert not trace.success, fam.name


def test_pivot_search_finds_s_free_residual():
    trace = symbolic_root_obstruction(slice_family(2, 1))
    assert trace.success
    assert trace.step("case_rational")["pivot_sets_tried"] > 1


def test_trace_json_is_deterministic():
    a = json.dumps(_trace().to_json(), sort_keys=True)
    b = json.dumps(symbolic_root_obstruction(paper_family()).to_json(), sort_keys=True)
    assert a == b
