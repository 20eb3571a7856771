"""Dense Hermitian linear algebra: validation, Jacobi eigensolver, PSD square root,
the dilation ``U = A + i sqrt(I - A^2)`` and a spectral-calculus oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    EigenNoConvergence,
    NormExceedsOne,
    NotHermitian,
    NotPSD,
    NotSquare,
    SchemaError,
)

TOL_HERM = 1e-10
TOL_NORM = 1e-10
TOL_PSD = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


def max_abs(m: np.ndarray) -> float:
    """Entrywise max norm, the residual measure used throughout the package."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def _as_square(entries) -> np.ndarray:
    a = np.array(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise NotSquare(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SchemaError("matrix entries must be finite")
    return a


@dataclass(frozen=True)
class HermitianMatrix:
    """A certified Hermitian contraction.

    Only :func:`validate_hermitian` should construct these; the stored matrix is
    exactly Hermitian (averaged with its adjoint) and read-only.
    """

    entries: np.ndarray
    hermiticity_residual: float
    norm_bound: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    ortho_residual: float

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class UnitaryDilation:
    entries: np.ndarray
    unitarity_residual: float
    source: SpectralDecomposition

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def dagger(self) -> np.ndarray:
        return self.entries.conj().T


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def validate_hermitian(entries, tol: float = TOL_HERM, tol_norm: float = TOL_NORM) -> HermitianMatrix:
    """Certify that ``entries`` is a Hermitian matrix with spectral norm at most one.

    Raises:
        NotSquare: the input is not a non-empty square matrix.
        NotHermitian: ``max |A_ij - conj(A_ji)| > tol``.
        NormExceedsOne: the spectral norm exceeds ``1 + tol_norm``.
    """
    a = _as_square(entries)
    residual = max_abs(a - a.conj().T)
    if residual > tol:
        raise NotHermitian(residual)
    a = (a + a.conj().T) / 2
    values, _ = _jacobi(a, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    norm = float(np.max(np.abs(values)))
    if norm > 1 + tol_norm:
        raise NormExceedsOne(norm)
    return HermitianMatrix(_readonly(a), residual, norm)


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> tuple[np.ndarray, np.ndarray]:
    # Cyclic complex Jacobi. Each 2x2 pivot [[app, r e^{ia}], [r e^{-ia}, aqq]] is
    # first made real by diag(1, e^{-ia}) and then zeroed by a real Givens rotation.
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, max_abs(a))
    if n == 1:
        return a.diagonal().real.copy(), v
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        if np.max(np.abs(a[iu])) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < threshold * 1e-3:
                    continue
                phase = apq / r
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1 + tau * tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ rot
                a[cols, :] = rot.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, cols] = v[:, cols] @ rot
    else:
        if np.max(np.abs(a[iu])) >= threshold:
            raise EigenNoConvergence(max_sweeps, "Jacobi sweep")
    values = a.diagonal().real
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


def hermitian_eig(
    a: Union[HermitianMatrix, np.ndarray],
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> SpectralDecomposition:
    """Eigendecomposition by cyclic Jacobi rotations, eigenvalues ascending.

    Accepts a certified :class:`HermitianMatrix` or any Hermitian ndarray (the latter
    is used for intermediate operators such as ``I - A^2`` which need not be contractions).
    """
    m = a.entries if isinstance(a, HermitianMatrix) else _as_square(a)
    values, vectors = _jacobi(m, tol, max_sweeps)
    ortho = max_abs(vectors.conj().T @ vectors - np.eye(len(values)))
    return SpectralDecomposition(_readonly(values), _readonly(vectors), ortho)


def _sqrt_spectrum(values: np.ndarray, tol_psd: float) -> np.ndarray:
    lo = float(np.min(values))
    if lo < -tol_psd:
        raise NotPSD(lo)
    return np.sqrt(np.clip(values, 0.0, None))


def sqrt_psd(a: Union[HermitianMatrix, np.ndarray], tol_psd: float = TOL_PSD) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol_psd, 0)`` are clamped to zero before the root is taken.
    """
    m = a.entries if isinstance(a, HermitianMatrix) else _as_square(a)
    residual = max_abs(m - m.conj().T)
    if residual > TOL_HERM:
        raise NotHermitian(residual)
    dec = hermitian_eig((m + m.conj().T) / 2)
    roots = _sqrt_spectrum(dec.eigenvalues, tol_psd)
    v = dec.eigenvectors
    return (v * roots) @ v.conj().T


def halmos_dilation(a: HermitianMatrix, tol_psd: float = TOL_PSD) -> UnitaryDilation:
    """Build ``U = A + i sqrt(I - A^2)`` from the spectral decomposition of ``A``.

    ``I - A^2`` shares the eigenvectors of ``A`` with eigenvalues ``1 - lambda^2``, so the
    square root is taken on that spectrum directly (same clamping rule as :func:`sqrt_psd`).
    Each eigenvalue of ``U`` is ``exp(i arccos(lambda))``.
    """
    dec = hermitian_eig(a)
    lam = dec.eigenvalues
    sines = _sqrt_spectrum(1.0 - lam * lam, tol_psd)
    v = dec.eigenvectors
    u = (v * (lam + 1j * sines)) @ v.conj().T
    unitarity = max_abs(u.conj().T @ u - np.eye(a.dim))
    return UnitaryDilation(_readonly(u), unitarity, dec)


def matrix_function_oracle(
    a: HermitianMatrix,
    f: Callable[[np.ndarray], np.ndarray],
    decomposition: SpectralDecomposition | None = None,
) -> np.ndarray:
    """Reference value ``V diag(f(lambda)) V^dagger``; ``f`` is applied to the eigenvalue array."""
    dec = decomposition if decomposition is not None else hermitian_eig(a)
    fvals = np.asarray(f(dec.eigenvalues), dtype=complex)
    if fvals.shape == ():
        fvals = np.full(len(dec.eigenvalues), fvals)
    v = dec.eigenvectors
    return (v * fvals) @ v.conj().T


def spectral_norm(a: Union[HermitianMatrix, SpectralDecomposition]) -> float:
    dec = a if isinstance(a, SpectralDecomposition) else hermitian_eig(a)
    return float(np.max(np.abs(dec.eigenvalues)))
