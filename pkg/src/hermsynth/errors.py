"""Exception hierarchy.

Every failure the pipeline can report is a :class:`SynthesisError` subclass carrying
the pipeline ``stage`` it belongs to and the process ``exit_code`` the CLI maps it to.
"""

from __future__ import annotations


class SynthesisError(Exception):
    stage = "pipeline"
    exit_code = 70

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def __str__(self) -> str:
        return f"[{self.stage}] {super().__str__()}"


# input handling
class InputParseError(SynthesisError):
    stage = "input"
    exit_code = 3


class SchemaError(SynthesisError):
    stage = "input"
    exit_code = 4


class BoundsError(SynthesisError):
    stage = "input"
    exit_code = 5


# linalg-core
class NotSquare(SynthesisError):
    stage = "linalg"
    exit_code = 10


class NotHermitian(SynthesisError):
    stage = "linalg"
    exit_code = 11

    def __init__(self, residual: float):
        super().__init__(f"matrix is not Hermitian (max |A_ij - conj(A_ji)| = {residual:.3e})",
                         residual=residual)
        self.residual = residual


class NormExceedsOne(SynthesisError):
    stage = "linalg"
    exit_code = 12

    def __init__(self, norm: float):
        super().__init__(f"spectral norm {norm:.12g} exceeds 1; the dilation needs ||A|| <= 1",
                         norm=norm)
        self.norm = norm


class NotPSD(SynthesisError):
    stage = "linalg"
    exit_code = 13

    def __init__(self, min_eigenvalue: float):
        super().__init__(f"matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})",
                         min_eigenvalue=min_eigenvalue)
        self.min_eigenvalue = min_eigenvalue


class NoConvergence(SynthesisError):
    exit_code = 14

    def __init__(self, iterations: int, what: str = "iteration"):
        super().__init__(f"{what} did not converge after {iterations} iterations",
                         iterations=iterations)
        self.iterations = iterations


class EigenNoConvergence(NoConvergence):
    stage = "linalg"
    exit_code = 14


# sympoly
class EmptyCoefficients(SynthesisError):
    stage = "sympoly"
    exit_code = 20


class DegreeTooLarge(SynthesisError):
    stage = "sympoly"
    exit_code = 21


class ZeroPolynomial(SynthesisError):
    stage = "sympoly"
    exit_code = 2


# complement
class RootNoConvergence(NoConvergence):
    stage = "complement"
    exit_code = 30


class DegenerateLeadingCoefficient(SynthesisError):
    stage = "complement"
    exit_code = 31


class UnitCircleRoot(SynthesisError):
    stage = "complement"
    exit_code = 32

    def __init__(self, root: complex, reason: str = "root lies on the unit circle"):
        super().__init__(f"{reason}: r = {root!r}, |r| = {abs(root):.12g}; increase the margin",
                         root=root)
        self.root = root


class ResidualTooLarge(SynthesisError):
    stage = "complement"
    exit_code = 33

    def __init__(self, residual: float, tol: float):
        super().__init__(f"complement residual {residual:.3e} exceeds {tol:.1e}",
                         residual=residual, tol=tol)
        self.residual = residual


# gqsp
class PeelingBreakdown(SynthesisError):
    stage = "gqsp"
    exit_code = 40

    def __init__(self, step: int):
        super().__init__(f"layer peeling degenerate at degree {step}", step=step)
        self.step = step


class NonUnitaryInput(SynthesisError):
    stage = "gqsp"
    exit_code = 41


class OddDimension(SynthesisError):
    stage = "gqsp"
    exit_code = 42


# circuit
class DimensionMismatch(SynthesisError):
    stage = "circuit"
    exit_code = 50


class UnnormalizedInput(SynthesisError):
    stage = "circuit"
    exit_code = 51


class NullOutcome(SynthesisError):
    """Post-selection on the requested outcome has (numerically) zero probability."""

    stage = "circuit"
    exit_code = 52

    def __init__(self, probability: float):
        super().__init__(f"post-selection probability {probability:.3e} is null",
                         probability=probability)
        self.probability = probability


class FidelityFailure(SynthesisError):
    stage = "circuit"
    exit_code = 53


class ZeroVector(SynthesisError):
    stage = "circuit"
    exit_code = 54
