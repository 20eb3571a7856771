import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as npoly

from hermsynth import complement, sympoly
from hermsynth.complement import ComplementPair
from hermsynth.errors import (DegenerateLeadingCoefficient, ResidualTooLarge, RootNoConvergence,
                              SchemaError, UnitCircleRoot)
from hermsynth.sympoly import ComplexPolynomial

SQ3 = np.sqrt(3)


def _match_roots(found, expected):
    found = list(found)
    for r in expected:
        k = int(np.argmin([abs(f - r) for f in found]))
        assert abs(found.pop(k) - r) < 1e-10 * max(1, abs(r))


@pytest.mark.parametrize("roots", [
    [2.0],
    [1, 2, 3],
    [1j, -1j, 0.5],
    [0.1 + 0.2j, -3, 10, 1e-3],
    list(np.exp(2j * np.pi * np.arange(7) / 7)),
])
def test_poly_roots_recovers_known_roots(roots):
    rs = complement.poly_roots(npoly.polyfromroots(roots))
    _match_roots(rs.roots, roots)
    assert np.max(rs.residuals) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 30))
def test_poly_roots_random_backward_error(seed, degree):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    rs = complement.poly_roots(c)
    assert rs.roots.shape == (degree,)
    assert np.max(rs.residuals) < 1e-12
    np.testing.assert_allclose(np.sort_complex(rs.roots), np.sort_complex(np.roots(c[::-1])),
                               atol=1e-6)


def test_poly_roots_errors():
    with pytest.raises(SchemaError):
        complement.poly_roots(np.array([1.0]))
    with pytest.raises(DegenerateLeadingCoefficient):
        complement.poly_roots(np.array([1.0, 2.0, 1e-16]))
    with pytest.raises(RootNoConvergence):
        complement.poly_roots(np.array([-1.0, 0, 0, 0, 1.0]), max_iter=1)


def test_exact_pair_quadratic():
    pair = complement.fejer_riesz(ComplexPolynomial([0.25, 0, 0.25]))
    np.testing.assert_allclose(pair.qtilde.padded(3), [-(2 - SQ3) / 4, 0, (2 + SQ3) / 4], atol=1e-12)
    assert pair.residual <= 1e-12


def test_half_z_gives_constant_complement():
    pair = complement.fejer_riesz(ComplexPolynomial([0, 0.5]))
    np.testing.assert_allclose(pair.qtilde.coeffs, [SQ3 / 2], atol=1e-15)
    assert pair.residual <= 1e-12


def test_zero_target_gives_unit_complement():
    assert complement.complement_polynomial(ComplexPolynomial([])) == ComplexPolynomial([1.0])


def test_constant_target():
    pair = complement.fejer_riesz(ComplexPolynomial([0.6j]))
    np.testing.assert_allclose(pair.qtilde.coeffs, [0.8], atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 16), st.booleans())
def test_complement_constraint_holds(seed, degree, aggregated):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    p = sympoly.aggregate_ptilde(c) if aggregated else ComplexPolynomial(c)
    pair = complement.fejer_riesz(sympoly.normalize_for_gqsp(p))
    assert pair.qtilde.degree <= max(pair.ptilde.degree, 0)
    for offset in (0.0, 0.25, 0.5):
        assert complement.verify_complement(pair, 2048, offset) <= 1e-8
    # Qt is a positive multiple of a monic polynomial
    lead = pair.qtilde.coeffs[-1]
    assert lead.real > 0 and abs(lead.imag) <= 1e-15 * abs(lead)


def test_complement_roots_lie_inside_disk():
    pair = complement.fejer_riesz(sympoly.normalize_for_gqsp(ComplexPolynomial([0.3, 1, -0.4j, 0.2])))
    if pair.qtilde.degree > 0:
        assert np.all(np.abs(np.roots(pair.qtilde.coeffs[::-1])) < 1)


def test_unnormalized_target_hits_unit_circle():
    with pytest.raises(UnitCircleRoot):
        complement.fejer_riesz(ComplexPolynomial([0.5, 0.5]))


def test_tiny_margin_hits_unit_circle():
    target = sympoly.normalize_for_gqsp(ComplexPolynomial([0.5, 0.5]), margin=1e-15)
    with pytest.raises(UnitCircleRoot):
        complement.fejer_riesz(target)


def test_residual_tolerance_is_enforced():
    bogus = ComplementPair(ComplexPolynomial([0.5]), ComplexPolynomial([0.5]), 0.0, 2048)
    assert complement.verify_complement(bogus) == pytest.approx(0.5)
    target = sympoly.normalize_for_gqsp(ComplexPolynomial([0.3, 0.4, 0.1]))
    with pytest.raises(ResidualTooLarge):
        complement.fejer_riesz(target, tol=0.0)


def test_scale_is_carried_through():
    target = sympoly.normalize_for_gqsp(ComplexPolynomial([0, 3.0]))
    pair = complement.fejer_riesz(target)
    assert pair.scale == pytest.approx(3 / (1 - 1e-6))
