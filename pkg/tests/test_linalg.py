import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermsynth import linalg
from hermsynth.errors import NormExceedsOne, NotHermitian, NotPSD, NotSquare, SchemaError
from hermsynth.instances import FAMILIES, random_hermitian

X = np.array([[0, 1], [1, 0]], dtype=complex)


def _random(seed, dim, family="dense", cap=1.0):
    return random_hermitian(np.random.default_rng(seed), dim, family, cap)


@pytest.mark.parametrize("dim", [1, 2, 5, 16, 33])
@pytest.mark.parametrize("family", FAMILIES)
def test_jacobi_matches_lapack(dim, family):
    a = _random(dim, dim, family)
    dec = linalg.hermitian_eig(a)
    np.testing.assert_allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-12)
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert linalg.max_abs(dec.reconstruct() - a) < 1e-12
    assert dec.ortho_residual < 1e-12


def test_jacobi_handles_degenerate_spectrum():
    v = np.linalg.qr(np.random.default_rng(3).normal(size=(6, 6)))[0]
    a = v @ np.diag([0.5, 0.5, 0.5, -0.2, -0.2, 0.9]) @ v.T
    dec = linalg.hermitian_eig(a)
    np.testing.assert_allclose(dec.eigenvalues, [-0.2, -0.2, 0.5, 0.5, 0.5, 0.9], atol=1e-13)
    assert linalg.max_abs(dec.reconstruct() - a) < 1e-13


def test_validate_hermitian_accepts_pauli_x():
    h = linalg.validate_hermitian(X)
    assert h.dim == 2
    assert h.hermiticity_residual == 0
    assert h.norm_bound == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("entries, err", [
    ([[0, 1], [0, 0]], NotHermitian),
    ([[2, 0], [0, 0]], NormExceedsOne),
    ([[1, 0, 0], [0, 1, 0]], NotSquare),
    (np.zeros((0, 0)), NotSquare),
    ([[np.nan, 0], [0, 0]], SchemaError),
])
def test_validate_hermitian_rejects(entries, err):
    with pytest.raises(err):
        linalg.validate_hermitian(entries)


def test_norm_tolerance_boundary():
    linalg.validate_hermitian(np.diag([1 + 5e-11, 0]))
    with pytest.raises(NormExceedsOne):
        linalg.validate_hermitian(np.diag([1 + 1e-9, 0]))


def test_sqrt_psd_squares_back():
    g = np.random.default_rng(0).normal(size=(5, 5))
    p = g @ g.T
    r = linalg.sqrt_psd(p)
    assert linalg.max_abs(r @ r - p) < 1e-12
    assert linalg.max_abs(r - r.conj().T) < 1e-14


def test_sqrt_psd_clamps_tiny_negative_and_rejects_real_negative():
    r = linalg.sqrt_psd(np.diag([4.0, -5e-11]))
    np.testing.assert_allclose(np.diag(r).real, [2.0, 0.0])
    with pytest.raises(NotPSD):
        linalg.sqrt_psd(np.diag([1.0, -1e-6]))


def test_dilation_of_pauli_x_over_two():
    a = linalg.validate_hermitian(X / 2)
    u = linalg.halmos_dilation(a)
    expected = X / 2 + 1j * np.sqrt(3) / 2 * np.eye(2)
    assert linalg.max_abs(u.entries - expected) < 1e-15
    assert u.unitarity_residual < 1e-15


def test_dilation_at_norm_one_boundary():
    u = linalg.halmos_dilation(linalg.validate_hermitian(np.diag([1.0, -1.0, 0.0])))
    np.testing.assert_allclose(u.entries, np.diag([1, -1, 1j]), atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(1, 10),
       family=st.sampled_from(FAMILIES), cap=st.floats(0.05, 1.0))
def test_dilation_properties(seed, dim, family, cap):
    a = linalg.validate_hermitian(_random(seed, dim, family, cap))
    u = linalg.halmos_dilation(a)
    assert u.unitarity_residual <= 1e-9
    assert linalg.max_abs((u.entries + u.dagger) / 2 - a.entries) <= 1e-9
    # U and A commute since both are functions of A
    assert linalg.max_abs(u.entries @ a.entries - a.entries @ u.entries) <= 1e-9


def test_matrix_function_oracle_matches_expm_like_power():
    a = linalg.validate_hermitian(_random(7, 6))
    cube = linalg.matrix_function_oracle(a, lambda lam: lam ** 3)
    assert linalg.max_abs(cube - np.linalg.matrix_power(a.entries, 3)) < 1e-13


def test_spectral_norm():
    a = linalg.validate_hermitian(np.diag([0.3, -0.8]))
    assert linalg.spectral_norm(a) == pytest.approx(0.8)
    assert linalg.spectral_norm(linalg.hermitian_eig(a)) == pytest.approx(0.8)
