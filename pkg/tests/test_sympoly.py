from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import chebyshev

from hermsynth import sympoly
from hermsynth.errors import BoundsError, DegreeTooLarge, EmptyCoefficients, SchemaError, ZeroPolynomial
from hermsynth.sympoly import ComplexPolynomial


def laurent_half(n):
    """Exact coefficients of the nonnegative-power half of ((z + 1/z) / 2)^n.

    The z^0 term of the Laurent expansion is shared equally between the two halves.
    """
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        power = n - 2 * k
        term = Fraction(comb(n, k), 2 ** n)
        if power > 0:
            coeffs[power] += term
        elif power == 0:
            coeffs[0] += term / 2
    return coeffs


@pytest.mark.parametrize("n, expected", [
    (0, [0.5]),
    (1, [0, 0.5]),
    (2, [0.25, 0, 0.25]),
    (3, [0, 0.375, 0, 0.125]),
    (4, [0.1875, 0, 0.25, 0, 0.0625]),
])
def test_rn_small_cases(n, expected):
    np.testing.assert_array_equal(sympoly.rn_coefficients(n).coeffs, expected)


@pytest.mark.parametrize("n", [5, 12, 13, 31, 56])
def test_rn_is_exact_against_rational_expansion(n):
    exact = np.array([float(c) for c in laurent_half(n)])
    np.testing.assert_array_equal(sympoly.rn_coefficients(n).coeffs.real, exact)


@pytest.mark.parametrize("n", [80, 200, 1000])
def test_rn_large_degree_stays_accurate(n):
    exact = np.array([float(c) for c in laurent_half(n)])
    np.testing.assert_allclose(sympoly.rn_coefficients(n).coeffs.real, exact, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("n, err", [(-1, BoundsError), (1001, DegreeTooLarge), (2.0, BoundsError)])
def test_rn_rejects_bad_degree(n, err):
    with pytest.raises(err):
        sympoly.rn_coefficients(n)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 40), x=st.floats(-1, 1))
def test_rn_scalar_identity(n, x):
    z = complex(x, np.sqrt(1 - x * x))
    rn = sympoly.rn_coefficients(n)
    total = rn(z) + rn(z.conjugate())
    assert abs(total - x ** n) <= 1e-12
    assert abs(total.imag) <= 1e-13


@pytest.mark.parametrize("n", range(0, 20))
def test_power_to_chebyshev_matches_numpy(n):
    ref = chebyshev.poly2cheb([0] * n + [1])
    np.testing.assert_allclose(sympoly.power_to_chebyshev(n), ref, atol=1e-15)


def test_aggregate_ptilde_is_linear_combination():
    c = [1 + 1j, 0, -2, 0.5j]
    expected = sum(cj * sympoly.rn_coefficients(j).padded(4) for j, cj in enumerate(c))
    np.testing.assert_allclose(sympoly.aggregate_ptilde(c).coeffs, expected)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=10),
       st.floats(-1, 1))
def test_aggregate_reproduces_target_on_interval(c, x):
    z = complex(x, np.sqrt(1 - x * x))
    pt = sympoly.aggregate_ptilde(c)
    target = sum(cj * x ** j for j, cj in enumerate(c))
    assert abs(pt(z) + pt(z.conjugate()) - target) <= 1e-11 * (1 + sum(abs(v) for v in c))


def test_aggregate_rejects_empty():
    with pytest.raises(EmptyCoefficients):
        sympoly.aggregate_ptilde([])


def test_polynomial_trims_and_compares():
    p = ComplexPolynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert p == ComplexPolynomial([1, 2])
    assert ComplexPolynomial([0, 0]).is_zero()
    assert ComplexPolynomial([0, 0]).degree == -1
    with pytest.raises(ValueError):
        p.coeffs[0] = 3
    with pytest.raises(SchemaError):
        ComplexPolynomial([np.inf])


def test_eval_matrix_matches_scalar_on_diagonal():
    p = ComplexPolynomial([0.5, -1j, 2])
    d = np.array([0.3, -0.7 + 0.1j])
    np.testing.assert_allclose(np.diag(sympoly.eval_matrix(p, np.diag(d))), p(d))


def test_eval_circle():
    p = ComplexPolynomial([0, 1])
    assert sympoly.eval_circle(p, np.pi / 2) == pytest.approx(1j)


def test_circle_max_finds_peak_between_grid_points():
    # peak of |1 + z^k| sits at theta = 0 only after a rotation off the grid
    rot = np.exp(1j * 0.0012345)
    p = ComplexPolynomial([1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, rot])
    assert sympoly.circle_max_modulus(p, 256) == pytest.approx(2.0, abs=1e-12)


def test_normalize_leaves_small_polynomials_alone():
    t = sympoly.normalize_for_gqsp(ComplexPolynomial([0, 0.5]))
    assert t.scale == 1.0
    assert t.ptilde == ComplexPolynomial([0, 0.5])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=17))
def test_normalize_bound_holds(c):
    p = ComplexPolynomial(c)
    if p.is_zero():
        return
    t = sympoly.normalize_for_gqsp(p)
    assert t.circle_max <= 1 - t.margin
    assert t.scale >= 1
    thetas = np.linspace(0, 2 * np.pi, 8191)
    assert np.max(np.abs(sympoly.eval_circle(t.ptilde, thetas))) <= 1 - t.margin
    np.testing.assert_allclose(t.ptilde.coeffs * t.scale, p.coeffs, rtol=1e-14)


@pytest.mark.parametrize("kwargs, err", [
    ({"p": ComplexPolynomial([0])}, ZeroPolynomial),
    ({"p": ComplexPolynomial([1]), "margin": 0}, BoundsError),
    ({"p": ComplexPolynomial([1]), "margin": 0.2}, BoundsError),
    ({"p": ComplexPolynomial(np.ones(20)), "grid_points": 64}, BoundsError),
])
def test_normalize_errors(kwargs, err):
    with pytest.raises(err):
        sympoly.normalize_for_gqsp(**kwargs)
