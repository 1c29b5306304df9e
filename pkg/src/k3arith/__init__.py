"""Exact arithmetic for the K3 lattice, marked pairs and root avoidance."""

from .family import (
    AffineFamily,
    VerificationCertificate,
    check_equivariance,
    integral_affine_rank,
    paper_family,
    verify_theorem_hypotheses,
)
from .isometry import LatticeIsometry, is_isometry, is_o_plus, phi
from .lattice import GramLattice, k3_lattice, minus_E8
from .period import MarkedPairPoint, PeriodPoint, in_k_omega_zero, in_omega
from .roots.search import RootSearchResult, find_roots_orthogonal_to
from .roots.symbolic import SymbolicTrace, symbolic_root_obstruction
from .scalars import MultiquadraticNumber, ScalarPolynomial

__all__ = [
    "AffineFamily",
    "GramLattice",
    "LatticeIsometry",
    "MarkedPairPoint",
    "MultiquadraticNumber",
    "PeriodPoint",
    "RootSearchResult",
    "ScalarPolynomial",
    "SymbolicTrace",
    "VerificationCertificate",
    "check_equivariance",
    "find_roots_orthogonal_to",
    "in_k_omega_zero",
    "in_omega",
    "integral_affine_rank",
    "is_isometry",
    "is_o_plus",
    "k3_lattice",
    "minus_E8",
    "paper_family",
    "phi",
    "symbolic_root_obstruction",
    "verify_theorem_hypotheses",
]
