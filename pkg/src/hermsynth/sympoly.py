"""Symmetric polynomial expansion of Hermitian powers.

For the dilation ``U = A + i sqrt(I - A^2)`` every power splits as
``A^n = R_n(U) + R_n(U^dagger)``, where ``R_n`` collects the non-negative powers of
``((z + 1/z) / 2)^n`` and half of its constant term. A target ``P(x) = sum c_n x^n`` thus
becomes ``P(A) = Pt(U) + Pt(U^dagger)`` with ``Pt = sum c_n R_n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import BoundsError, DegreeTooLarge, EmptyCoefficients, SchemaError, ZeroPolynomial

# 2^-n underflows past n = 1074; leave headroom.
MAX_RN_DEGREE = 1000
DEFAULT_GRID = 2048
DEFAULT_MARGIN = 1e-6


@dataclass(frozen=True, eq=False)
class ComplexPolynomial:
    """Dense complex polynomial, ``coeffs[k]`` multiplies ``z**k``.

    Trailing exact zeros are trimmed on construction, so ``degree`` is the true degree
    (``-1`` for the zero polynomial).
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.array(self.coeffs, dtype=complex))
        if c.ndim != 1:
            raise SchemaError("polynomial coefficients must be a flat sequence")
        if not np.all(np.isfinite(c)):
            raise SchemaError("polynomial coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree < 0

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out

    def __call__(self, z):
        return eval_scalar(self, z)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __mul__(self, scalar: complex) -> "ComplexPolynomial":
        return ComplexPolynomial(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "ComplexPolynomial":
        return ComplexPolynomial(self.coeffs / scalar)

    def __repr__(self) -> str:
        return f"ComplexPolynomial({self.coeffs.tolist()!r})"


@dataclass(frozen=True)
class ScaledTarget:
    """A polynomial rescaled so that ``max |ptilde(e^{it})| <= 1 - margin``.

    ``scale`` is the factor the original was divided by; it is never absorbed
    silently, downstream results are multiplied back by it.
    """

    ptilde: ComplexPolynomial
    scale: float
    circle_max: float
    margin: float


def _check_degree(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise BoundsError(f"degree must be an integer, got {n!r}")
    if n < 0:
        raise BoundsError(f"degree must be non-negative, got {n}")
    if n > MAX_RN_DEGREE:
        raise DegreeTooLarge(f"R_n is only represented for n <= {MAX_RN_DEGREE}, got {n}")


def _halved_binomial_row(n: int) -> np.ndarray:
    # Row n of Pascal's triangle divided by 2^n, built by halving sums so that no
    # entry exceeds 1. Exact in float64 while C(n, k) < 2^53 (n <= 56).
    row = np.ones(1)
    for _ in range(n):
        nxt = np.empty(len(row) + 1)
        nxt[0] = row[0] / 2
        nxt[-1] = row[-1] / 2
        nxt[1:-1] = (row[:-1] + row[1:]) / 2
        row = nxt
    return row


def rn_coefficients(n: int) -> ComplexPolynomial:
    """Coefficients of ``R_n``.

    ``R_n(z) = 2^-n sum_{k < n/2} C(n, k) z^(n - 2k)``, plus ``C(n, n/2) / 2^(n+1)`` as
    the constant term when ``n`` is even (half of the central binomial term goes to each
    of ``R_n(U)`` and ``R_n(U^dagger)``).

    Raises:
        BoundsError: ``n`` is negative or not an integer.
        DegreeTooLarge: ``n > MAX_RN_DEGREE``.
    """
    _check_degree(n)
    row = _halved_binomial_row(n)
    coeffs = np.zeros(n + 1)
    for k in range((n + 1) // 2):
        coeffs[n - 2 * k] = row[k]
    if n % 2 == 0:
        coeffs[0] = row[n // 2] / 2
    return ComplexPolynomial(coeffs)


def aggregate_ptilde(c: Sequence[complex]) -> ComplexPolynomial:
    """``sum_j c[j] R_j``: the polynomial applied to both ``U`` and ``U^dagger``."""
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.size == 0:
        raise EmptyCoefficients("no polynomial coefficients given")
    out = np.zeros(len(c), dtype=complex)
    for j, cj in enumerate(c):
        if cj != 0:
            out[: j + 1] += cj * rn_coefficients(j).coeffs
    return ComplexPolynomial(out)


def eval_scalar(p: ComplexPolynomial, z):
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for coeff in p.coeffs[::-1]:
        acc = acc * z + coeff
    return acc


def eval_circle(p: ComplexPolynomial, theta) -> complex | np.ndarray:
    """Horner evaluation at ``exp(i theta)``; ``theta`` may be an array."""
    val = eval_scalar(p, np.exp(1j * np.asarray(theta, dtype=float)))
    return complex(val) if val.ndim == 0 else val


def eval_matrix(p: ComplexPolynomial, m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SchemaError(f"matrix polynomial needs a square matrix, got shape {m.shape}")
    eye = np.eye(m.shape[0], dtype=complex)
    acc = np.zeros_like(m)
    for coeff in p.coeffs[::-1]:
        acc = acc @ m + coeff * eye
    return acc


def power_to_chebyshev(n: int) -> np.ndarray:
    """Coefficients ``a[k]`` with ``x^n = sum_k a[k] T_k(x)``.

    Built by repeated multiplication by ``x`` using ``x T_0 = T_1`` and
    ``x T_k = (T_{k+1} + T_{k-1}) / 2``; no binomials are involved.
    """
    _check_degree(n)
    a = np.array([1.0])
    for _ in range(n):
        nxt = np.zeros(len(a) + 1)
        for k, ak in enumerate(a):
            if k == 0:
                nxt[1] += ak
            else:
                nxt[k + 1] += ak / 2
                nxt[k - 1] += ak / 2
        a = nxt
    return a


def circle_max_modulus(p: ComplexPolynomial, grid_points: int = DEFAULT_GRID) -> float:
    """``max |p(e^{it})|``: grid scan followed by bounded refinement of each local peak."""
    if p.is_zero():
        return 0.0
    thetas = 2 * np.pi * np.arange(grid_points) / grid_points
    mod = np.abs(eval_circle(p, thetas))
    best = float(mod.max())
    if best - float(mod.min()) <= 1e-14 * best:
        # constant modulus (monomials): every grid point is a rounding-noise peak
        return best
    step = 2 * np.pi / grid_points
    peaks = np.flatnonzero((mod >= np.roll(mod, 1)) & (mod >= np.roll(mod, -1)))
    # Only peaks that could beat the current best after refinement matter.
    slack = 0.5 * (step * p.degree) ** 2 * float(np.sum(np.abs(p.coeffs)))
    for k in peaks[mod[peaks] >= best - slack]:
        res = minimize_scalar(lambda t: -abs(eval_circle(p, t)),
                              bounds=(thetas[k] - step, thetas[k] + step),
                              method="bounded", options={"xatol": 1e-13})
        best = max(best, -float(res.fun))
    return best


def normalize_for_gqsp(
    p: ComplexPolynomial,
    grid_points: int = DEFAULT_GRID,
    margin: float = DEFAULT_MARGIN,
) -> ScaledTarget:
    """Rescale ``p`` so that it is bounded by ``1 - margin`` on the unit circle.

    The scale is ``s = max(1, m / (1 - margin))`` with ``m`` the circle maximum, so
    polynomials already inside the bound are left untouched.

    Raises:
        ZeroPolynomial: nothing to synthesize.
        BoundsError: grid too coarse for the degree, or margin outside ``(0, 0.1]``.
    """
    if p.is_zero():
        raise ZeroPolynomial("the target polynomial is identically zero")
    if not 0 < margin <= 0.1:
        raise BoundsError(f"margin must lie in (0, 0.1], got {margin}")
    if grid_points < 8 * (p.degree + 1):
        raise BoundsError(f"grid of {grid_points} points is too coarse for degree {p.degree}")
    m = circle_max_modulus(p, grid_points)
    scale = max(1.0, m / (1 - margin))
    while True:
        ptilde = p / scale if scale != 1.0 else p
        cmax = circle_max_modulus(ptilde, grid_points)
        if cmax <= 1 - margin:
            return ScaledTarget(ptilde, float(scale), cmax, margin)
        # rounding put the rescaled maximum a few ulps above the bound
        scale = float(np.nextafter(scale * (1 + 2 * np.finfo(float).eps), np.inf))
