"""polyprism: machine verification of the commutation faces linking the
Grassmannian configuration complex, the classical polylogarithmic complexes
in weights 2 and 3, and their infinitesimal (derivation-weighted) variants.

Three independent oracle backends check every face: a formal determinant
lattice, exact rational-function arithmetic over Q(t), and floating-point
polylogarithm functionals.
"""

from .configs import Config, boundary, cross_ratio, project_from, random_generic, triple_ratio_arg
from .conventions import LITERAL_PAPER, SHIPPED, ConventionTable
from .scalars import DualC, Poly, Rat, RatFunc, coprime_basis, derive, eval_at, factor_over_basis
from .verifier import CLAIMS, FACES, FaceReport, run_face, run_faces, sign_audit

__version__ = "0.1.0"

__all__ = [
    "CLAIMS",
    "Config",
    "ConventionTable",
    "DualC",
    "FACES",
    "FaceReport",
    "LITERAL_PAPER",
    "Poly",
    "Rat",
    "RatFunc",
    "SHIPPED",
    "boundary",
    "coprime_basis",
    "cross_ratio",
    "derive",
    "eval_at",
    "factor_over_basis",
    "project_from",
    "random_generic",
    "run_face",
    "run_faces",
    "sign_audit",
    "triple_ratio_arg",
]
