"""GQSP angle synthesis by layer peeling, and explicit operator assembly.

Convention (fixed here, only the block contract below is normative)::

    R(theta, phi, lam) = [[exp(i(lam + phi)) cos(theta),  exp(i phi) sin(theta)],
                          [exp(i lam) sin(theta),         -cos(theta)        ]]

    C(U) = |0><0| (x) U + |1><1| (x) I

    W = R(theta_d, phi_d, 0) C(U) R(theta_{d-1}, phi_{d-1}, 0) C(U) ... C(U) R(theta_0, phi_0, lam)

on ``ancilla (x) system`` with the ancilla most significant. Then ``<0|W|0> = Pt(U)``
and ``<1|W|0> = Qt(U)`` for the pair the angles were peeled from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .complement import ComplementPair
from .errors import NonUnitaryInput, OddDimension, PeelingBreakdown, SchemaError
from .linalg import UnitaryDilation, max_abs
from .sympoly import eval_matrix

PEEL_DEGENERACY = 1e-13
UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class AngleSequence:
    thetas: np.ndarray
    phis: np.ndarray
    lam: float

    def __post_init__(self):
        if len(self.thetas) != len(self.phis) or len(self.thetas) == 0:
            raise SchemaError("theta and phi sequences must have equal, non-zero length")
        if not (np.all(np.isfinite(self.thetas)) and np.all(np.isfinite(self.phis)) and np.isfinite(self.lam)):
            raise SchemaError("angles must be finite")

    @property
    def degree(self) -> int:
        return len(self.thetas) - 1


@dataclass(frozen=True)
class GqspOperator:
    matrix: np.ndarray
    block_p: np.ndarray
    block_q: np.ndarray
    unitarity_residual: float


def su2_rotation(theta: float, phi: float, lam: float = 0.0) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([
        [np.exp(1j * (lam + phi)) * c, np.exp(1j * phi) * s],
        [np.exp(1j * lam) * s, -c],
    ])


def _angle(x: complex) -> float:
    return 0.0 if x == 0 else float(np.angle(x))


def gqsp_angles(pair: ComplementPair) -> AngleSequence:
    """Angles realizing ``(Pt, Qt)`` with :func:`assemble_gqsp`.

    Peeling runs from the top degree down. With ``(a, b)`` the degree-``j`` coefficients
    of the current pair, ``theta_j = atan2(|b|, |a|)`` and ``phi_j = arg(a) - arg(b)``
    make ``R^dagger`` clear ``b``; by unitarity the same rotation clears the constant of
    the top component, which is then divided by ``z``. When ``(a, b)`` both vanish the
    rotation is taken from the constant coefficients instead, which must be orthogonal
    to it anyway. The remaining constant pair fixes ``theta_0, phi_0`` and ``lam``.

    Raises:
        PeelingBreakdown: both the leading and the constant pair are degenerate.
    """
    d = max(pair.ptilde.degree, pair.qtilde.degree, 0)
    p = pair.ptilde.padded(d + 1)
    q = pair.qtilde.padded(d + 1)
    thetas = np.zeros(d + 1)
    phis = np.zeros(d + 1)
    for j in range(d, 0, -1):
        a, b = p[j], q[j]
        if max(abs(a), abs(b)) >= max(abs(p[0]), abs(q[0])):
            if max(abs(a), abs(b)) < PEEL_DEGENERACY:
                raise PeelingBreakdown(j)
            theta, phi = np.arctan2(abs(b), abs(a)), _angle(a) - _angle(b)
        else:
            # First row of R^dagger must annihilate (p0, q0): a direction parallel to
            # (-conj(q0), conj(p0)) for the leading pair.
            a0, b0 = -np.conj(q[0]), np.conj(p[0])
            if max(abs(a0), abs(b0)) < PEEL_DEGENERACY:
                raise PeelingBreakdown(j)
            theta, phi = np.arctan2(abs(b0), abs(a0)), _angle(a0) - _angle(b0)
        thetas[j], phis[j] = theta, phi
        rdag = su2_rotation(theta, phi).conj().T
        p, q = rdag @ np.vstack([p, q])
        p, q = p[1:], q[:-1]
    a, b = p[0], q[0]
    thetas[0] = np.arctan2(abs(b), abs(a))
    lam = _angle(b)
    phis[0] = _angle(a) - lam
    return AngleSequence(thetas, np.angle(np.exp(1j * phis)), lam)


def extract_blocks(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(<0|G|0>, <1|G|0>)`` over the most significant qubit."""
    g = np.asarray(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise SchemaError(f"expected a square operator, got shape {g.shape}")
    if g.shape[0] % 2:
        raise OddDimension(f"operator dimension {g.shape[0]} is odd")
    n = g.shape[0] // 2
    return g[:n, :n], g[n:, :n]


def assemble_gqsp(angles: AngleSequence, u: Union[UnitaryDilation, np.ndarray]) -> GqspOperator:
    """Explicit ``2n x 2n`` GQSP operator for the signal unitary ``u``.

    Raises:
        NonUnitaryInput: ``u`` is not unitary within ``1e-9``.
    """
    m = u.entries if isinstance(u, UnitaryDilation) else np.asarray(u, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonUnitaryInput(f"signal operator must be square, got shape {m.shape}")
    n = m.shape[0]
    eye = np.eye(n)
    if max_abs(m.conj().T @ m - eye) > UNITARY_TOL:
        raise NonUnitaryInput("signal operator is not unitary")

    def rot(theta, phi, lam=0.0):
        return np.kron(su2_rotation(theta, phi, lam), eye)

    ctrl = np.block([[m, np.zeros((n, n))], [np.zeros((n, n)), eye]])
    w = rot(angles.thetas[0], angles.phis[0], angles.lam)
    for j in range(1, angles.degree + 1):
        w = rot(angles.thetas[j], angles.phis[j]) @ (ctrl @ w)
    block_p, block_q = extract_blocks(w)
    residual = max_abs(w.conj().T @ w - np.eye(2 * n))
    return GqspOperator(w, block_p, block_q, residual)


def block_errors(op: GqspOperator, pair: ComplementPair, u: np.ndarray) -> tuple[float, float]:
    """Distance of the blocks from ``Pt(U)`` and of ``B_q B_q^dagger`` from ``Qt(U) Qt(U)^dagger``."""
    pu = eval_matrix(pair.ptilde, u)
    qu = eval_matrix(pair.qtilde, u)
    return (max_abs(op.block_p - pu),
            max_abs(op.block_q @ op.block_q.conj().T - qu @ qu.conj().T))

