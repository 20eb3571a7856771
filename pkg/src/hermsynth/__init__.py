"""Polynomial functions of Hermitian matrices through a simulated GQSP circuit.

``P(A) = sum c_n A^n`` is rewritten as ``Pt(U) + Pt(U^dag)`` over the dilation
``U = A + i sqrt(I - A^2)`` and realized with two ancillas and post-selection.
"""

from .circuit import SynthesisReport, run_pipeline
from .complement import ComplementPair, complement_polynomial, fejer_riesz, poly_roots
from .config import RunConfig
from .errors import SynthesisError
from .gqsp import AngleSequence, assemble_gqsp, gqsp_angles
from .linalg import HermitianMatrix, UnitaryDilation, halmos_dilation, hermitian_eig, validate_hermitian
from .sympoly import ComplexPolynomial, aggregate_ptilde, normalize_for_gqsp, rn_coefficients

__version__ = "0.1.0"

__all__ = [
    "AngleSequence", "ComplementPair", "ComplexPolynomial", "HermitianMatrix", "RunConfig",
    "SynthesisError", "SynthesisReport", "UnitaryDilation", "aggregate_ptilde", "assemble_gqsp",
    "complement_polynomial", "fejer_riesz", "gqsp_angles", "halmos_dilation", "hermitian_eig",
    "normalize_for_gqsp", "poly_roots", "rn_coefficients", "run_pipeline", "validate_hermitian",
]
