"""tdlab: exact verification toolkit for tridiagonal systems of q-Racah type."""

from .linalg import Matrix, Rational, Subspace, rat, rat_str
from .report import CheckResult, VerificationReport
from .tdsystem import QRacahParams, TDSystemInstance, second_inversion
from .split import SplitApparatus, build_apparatus
from .psi import OperatorSet, build_operator_set
from .suite import full_suite

__all__ = [
    "CheckResult",
    "Matrix",
    "OperatorSet",
    "QRacahParams",
    "Rational",
    "SplitApparatus",
    "Subspace",
    "TDSystemInstance",
    "VerificationReport",
    "build_apparatus",
    "build_operator_set",
    "full_suite",
    "rat",
    "rat_str",
    "second_inversion",
]
