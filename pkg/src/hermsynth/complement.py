"""Complementary polynomial by spectral factorization.

Given ``Pt`` bounded below one on the unit circle, ``F = 1 - |Pt|^2`` is a strictly
positive Laurent polynomial there. ``G(z) = z^d F(z)`` has its roots in reciprocal
pairs ``(r, 1/conj(r))``; keeping the root of each pair inside the disk gives
``Qt = c prod (z - r)`` with ``|Pt|^2 + |Qt|^2 = 1`` on the circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import (
    DegenerateLeadingCoefficient,
    ResidualTooLarge,
    RootNoConvergence,
    SchemaError,
    UnitCircleRoot,
)
from .sympoly import DEFAULT_GRID, ComplexPolynomial, ScaledTarget, eval_circle

ROOT_TOL = 1e-12
ROOT_MAX_ITER = 500
CERTIFY_TOL = 1e-8
UNIT_CIRCLE_BAND = 1e-7
PAIRING_TOL = 1e-7
# Coefficients of G this small relative to its largest are treated as exact zeros.
ZERO_COEFF_RTOL = 1e-14


@dataclass(frozen=True)
class RootSet:
    roots: np.ndarray
    # backward error |p(r)| / sum_k |p_k| |r|^k, meaningful for very large roots too
    residuals: np.ndarray
    iterations: int


@dataclass(frozen=True)
class ComplementPair:
    ptilde: ComplexPolynomial
    qtilde: ComplexPolynomial
    residual: float
    grid_points: int
    scale: float = 1.0


def _horner_with_derivative(coeffs_desc: np.ndarray, z: np.ndarray):
    p = np.full_like(z, coeffs_desc[0])
    dp = np.zeros_like(z)
    for a in coeffs_desc[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _backward_error(coeffs_asc: np.ndarray, roots: np.ndarray) -> np.ndarray:
    if roots.size == 0:
        return np.zeros(0)
    value = npoly.polyval(roots, coeffs_asc)
    scale = npoly.polyval(np.abs(roots), np.abs(coeffs_asc))
    return np.abs(value) / np.where(scale > 0, scale, 1.0)


def poly_roots(
    p: Union[ComplexPolynomial, np.ndarray],
    tol: float = ROOT_TOL,
    max_iter: int = ROOT_MAX_ITER,
) -> RootSet:
    """All roots of ``p`` by Aberth-Ehrlich simultaneous iteration.

    Start points sit on the circle of radius ``1 + max |p_k / p_d|`` at angles
    ``2 pi k / d + 0.4``, so the result is deterministic. Converged roots get two
    Newton polishing steps on the undeflated polynomial.

    Raises:
        SchemaError: degree below one.
        DegenerateLeadingCoefficient: ``|p_d| <= 1e-14``.
        RootNoConvergence: corrections still above ``tol`` after ``max_iter`` sweeps.
    """
    coeffs = p.coeffs if isinstance(p, ComplexPolynomial) else np.asarray(p, dtype=complex)
    if len(coeffs) < 2:
        raise SchemaError("root finding needs a polynomial of degree at least 1")
    lead = coeffs[-1]
    if abs(lead) <= 1e-14:
        raise DegenerateLeadingCoefficient(f"leading coefficient {lead!r} is degenerate")
    desc = (coeffs / lead)[::-1]
    n = len(coeffs) - 1
    radius = 1.0 + float(np.max(np.abs(desc[1:])))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    offdiag = ~np.eye(n, dtype=bool)
    iterations = 0
    converged = n == 1
    if n == 1:
        z = np.array([-desc[1]])
    for iterations in range(1, max_iter + 1) if not converged else ():
        val, der = _horner_with_derivative(desc, z)
        diff = z[:, None] - z[None, :]
        inv = np.zeros_like(diff)
        inv[offdiag] = 1.0 / diff[offdiag]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = val / der
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(val == 0, 0, step)
        if not np.all(np.isfinite(step)):
            raise RootNoConvergence(iterations, "Aberth iteration")
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            converged = True
            break
    if not converged:
        raise RootNoConvergence(max_iter, "Aberth iteration")
    for _ in range(2):
        val, der = _horner_with_derivative(desc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            polished = z - val / der
        better = np.isfinite(polished) & (
            _backward_error(coeffs, polished) <= _backward_error(coeffs, z)
        )
        z = np.where(better, polished, z)
    return RootSet(z, _backward_error(coeffs, z), iterations)


def _auxiliary_coefficients(ptilde: ComplexPolynomial) -> np.ndarray:
    # G(z) = z^d - Pt(z) * conj-reversed Pt(z), ascending coefficients, length 2d + 1.
    p = ptilde.coeffs
    d = ptilde.degree
    g = -np.convolve(p, np.conj(p[::-1]))
    g[d] += 1.0
    return g


def _pair_roots(roots: np.ndarray) -> np.ndarray:
    """Select the inside root of every reciprocal pair; fail loudly if pairing is unclear."""
    moduli = np.abs(roots)
    near = np.flatnonzero(np.abs(moduli - 1.0) < UNIT_CIRCLE_BAND)
    if near.size:
        raise UnitCircleRoot(complex(roots[near[0]]))
    inside = list(roots[moduli < 1])
    outside = list(roots[moduli > 1])
    if len(inside) != len(outside):
        bad = inside[0] if len(inside) > len(outside) else outside[0]
        raise UnitCircleRoot(complex(bad), "roots do not split evenly across the unit circle")
    # Greedy pairing by the scale-free mismatch |r conj(r') - 1|.
    remaining = list(outside)
    for r in sorted(inside, key=lambda x: -abs(x)):
        mismatch = [abs(r * np.conj(w) - 1) for w in remaining]
        k = int(np.argmin(mismatch))
        if mismatch[k] > PAIRING_TOL:
            raise UnitCircleRoot(complex(r), "root has no reciprocal partner")
        remaining.pop(k)
    return np.array(inside, dtype=complex)


def complement_polynomial(ptilde: ComplexPolynomial) -> ComplexPolynomial:
    """``Qt`` for a ``Pt`` with ``max |Pt| < 1`` on the circle (no certification)."""
    if ptilde.is_zero():
        return ComplexPolynomial([1.0])
    g = _auxiliary_coefficients(ptilde)
    big = np.max(np.abs(g))
    nonzero = np.flatnonzero(np.abs(g) > ZERO_COEFF_RTOL * big)
    if nonzero.size == 0:
        raise UnitCircleRoot(1.0 + 0j, "1 - |Pt|^2 vanishes identically")
    # G is self-reciprocal (g[2d-k] = conj(g[k])), so as many roots sit at the origin as
    # at infinity. Those pairs are dropped: the factor z^t would not change |Qt|.
    t = min(nonzero[0], len(g) - 1 - nonzero[-1])
    g = g[t: len(g) - t]
    if len(g) == 1:
        monic = np.ones(1, dtype=complex)
    else:
        inside = _pair_roots(poly_roots(g).roots)
        monic = npoly.polyfromroots(inside) if inside.size else np.ones(1, dtype=complex)
    # |c|^2 from the zeroth Laurent coefficient (Parseval): mean of F over the circle
    # is 1 - sum |p_k|^2, mean of |monic|^2 is sum |m_k|^2.
    f0 = 1.0 - float(np.sum(np.abs(ptilde.coeffs) ** 2))
    if f0 <= 0:
        raise UnitCircleRoot(1.0 + 0j, "1 - |Pt|^2 has non-positive mean on the circle")
    c = np.sqrt(f0 / float(np.sum(np.abs(monic) ** 2)))
    return ComplexPolynomial(c * monic)


def verify_complement(pair: ComplementPair, grid_points: int = DEFAULT_GRID, offset: float = 0.0) -> float:
    """``max | |Pt|^2 + |Qt|^2 - 1 |`` on a uniform grid shifted by ``offset`` steps."""
    thetas = 2 * np.pi * (np.arange(grid_points) + offset) / grid_points
    total = np.abs(eval_circle(pair.ptilde, thetas)) ** 2 + np.abs(eval_circle(pair.qtilde, thetas)) ** 2
    return float(np.max(np.abs(total - 1.0)))


def fejer_riesz(
    target: Union[ScaledTarget, ComplexPolynomial],
    grid_points: int = DEFAULT_GRID,
    tol: float = CERTIFY_TOL,
) -> ComplementPair:
    """Certified complementary pair for a normalized target.

    The residual is checked on the grid and on the grid shifted by half a step;
    the reported residual is the larger of the two.

    Raises:
        UnitCircleRoot: ``1 - |Pt|^2`` (numerically) touches zero on the circle.
        ResidualTooLarge: the certified residual exceeds ``tol``.
        RootNoConvergence: propagated from :func:`poly_roots`.
    """
    if isinstance(target, ScaledTarget):
        ptilde, scale = target.ptilde, target.scale
    else:
        ptilde, scale = target, 1.0
    qtilde = complement_polynomial(ptilde)
    pair = ComplementPair(ptilde, qtilde, np.nan, grid_points, scale)
    residual = max(verify_complement(pair, grid_points), verify_complement(pair, grid_points, 0.5))
    if residual > tol:
        raise ResidualTooLarge(residual, tol)
    return ComplementPair(ptilde, qtilde, residual, grid_points, scale)
