"""Modular graded Lie algebras over F_p.

Construction of classical, Cartan-type and Melikyan algebras, verification of
structure and grading, Weisfeiler radical and minimal ideal, g_0-module
analysis, and recognition against a fingerprinted catalog.
"""
from .fplinalg import FpError, Subspace
from .liecore import LieAlgebraFp, check_structure, is_simple
from .graded import GradedLieAlgebra, check_grading, minimal_ideal, weisfeiler_radical
from .classical import chevalley_algebra, standard_grading
from .cartan import ResourceLimit, build_cartan, build_H, build_K, build_S, build_W
from .melikyan import build_M
from .recognizer import build_catalog, check_hypotheses, fingerprint, recognize
from .document import parse, serialize

__version__ = "0.1.0"

__all__ = [
    "FpError",
    "Subspace",
    "LieAlgebraFp",
    "check_structure",
    "is_simple",
    "GradedLieAlgebra",
    "check_grading",
    "minimal_ideal",
    "weisfeiler_radical",
    "chevalley_algebra",
    "standard_grading",
    "ResourceLimit",
    "build_cartan",
    "build_W",
    "build_S",
    "build_H",
    "build_K",
    "build_M",
    "build_catalog",
    "check_hypotheses",
    "fingerprint",
    "recognize",
    "parse",
    "serialize",
]
