import numpy as np
import pytest
from hypothesis import given, strategies as st

from genfunc.chebyshev import (
    cheb_diff,
    cheb_nodes,
    chebyshev_y,
    clenshaw_curtis_weights,
    coeffs_to_values,
    derivatives_up_to,
    elliptic_constant,
    poisson_channel_solve,
    values_to_coeffs,
)
from genfunc.spectral import make_field

Y = cheb_nodes(33)


def test_nodes_descend_from_one():
    assert Y[0] == 1.0 and Y[-1] == -1.0
    assert np.all(np.diff(Y) < 0)


def test_poisson_constant_source():
    phi = poisson_channel_solve(np.ones(33))
    np.testing.assert_allclose(phi, 0.5 * (Y ** 2 - 1), atol=1e-10)


def test_poisson_linear_source():
    phi = poisson_channel_solve(Y)
    np.testing.assert_allclose(phi, (Y ** 3 - Y) / 6, atol=1e-10)


def test_poisson_zero_source():
    assert np.all(poisson_channel_solve(np.zeros(33)) == 0)


def test_poisson_per_mode_on_fields():
    tr = chebyshev_y(33)
    w = make_field([((1,), Y), ((0,), np.ones(33))], 1, 2, transverse=tr)
    phi = poisson_channel_solve(w)
    np.testing.assert_allclose(phi.coeff(1), (Y ** 3 - Y) / 6, atol=1e-10)
    np.testing.assert_allclose(phi.coeff(0), 0.5 * (Y ** 2 - 1), atol=1e-10)
    assert np.all(phi.coeff(2) == 0)


def test_poisson_needs_enough_nodes():
    with pytest.raises(ValueError):
        poisson_channel_solve(np.ones(5))


def test_diff_matrix_exact_on_polynomials():
    D = cheb_diff(17)
    y = cheb_nodes(17)
    np.testing.assert_allclose(D @ y ** 5, 5 * y ** 4, atol=1e-12)


@given(st.integers(0, 2**32 - 1))
def test_coefficient_round_trip(seed):
    v = np.random.default_rng(seed).normal(size=(3, 21))
    np.testing.assert_allclose(coeffs_to_values(values_to_coeffs(v)), v, atol=1e-12)


def test_derivatives_of_smooth_function():
    d = derivatives_up_to(np.sin(2 * Y), 4)
    exact = [np.sin(2 * Y), 2 * np.cos(2 * Y), -4 * np.sin(2 * Y),
             -8 * np.cos(2 * Y), 16 * np.sin(2 * Y)]
    for b in range(5):
        np.testing.assert_allclose(d[b], exact[b], atol=1e-8 * 2 ** b)


def test_clenshaw_curtis_exact_on_polynomials():
    w = clenshaw_curtis_weights(33)
    for k in range(0, 20, 2):
        assert w @ Y ** k == pytest.approx(2.0 / (k + 1), rel=1e-13)
    assert abs(w @ Y ** 3) < 1e-14


def test_elliptic_constant_bounds_solution():
    c = elliptic_constant(33)
    rng = np.random.default_rng(3)
    D = cheb_diff(33)
    for _ in range(20):
        w = rng.uniform(-1, 1, 33)
        phi = poisson_channel_solve(w)
        lhs = np.max(np.abs(phi)) + np.max(np.abs(D @ phi)) + np.max(np.abs(w))
        assert lhs <= c * np.max(np.abs(w)) * (1 + 1e-12)
