import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genfunc.chebyshev import cheb_nodes, chebyshev_y
from genfunc.errors import (
    DimensionMismatch,
    GridNotDecayed,
    NegativeZ,
    OutsideConvergence,
    TaylorCapTooLarge,
    TooFewModes,
    WeightTooSmall,
)
from genfunc.generator import (
    GeneratorCurve,
    MajorantSeries,
    check_calculus,
    compose_series,
    curves_from_csv,
    fit_decay,
    gen_compose_majorant,
    gen_fourier,
    gen_kinetic,
    gen_mixed,
    generator,
    membership,
    radius_estimate,
    velocity_derivative,
)
from genfunc.spectral import (
    SpectralField,
    Transverse,
    convolve,
    make_field,
    mode_norm,
    truncate,
)
from tests.helpers import direct_gen, random_poly

Z = np.linspace(0.0, 1.0, 33)
COS = [((1,), 0.5), ((-1,), 0.5)]


def test_constant_and_cosine():
    assert np.all(gen_fourier(make_field([((0,), 3.0)], 1, 2), Z).values == 3.0)
    np.testing.assert_allclose(gen_fourier(make_field(COS, 1, 2), Z).values,
                               np.exp(Z), rtol=1e-15)


@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_matches_direct_summation(seed, dim):
    f = random_poly(np.random.default_rng(seed), dim, 5)
    z = np.array([0.3])
    assert gen_fourier(f, z).values[0] == pytest.approx(direct_gen(f, z)[0], rel=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_monotone_and_convex(seed):
    f = random_poly(np.random.default_rng(seed), 2, 6)
    v = gen_fourier(f, Z).values
    assert np.all(np.diff(v) >= 0)
    assert np.all(np.diff(v, 2) >= -1e-12 * v[-1])


def test_negative_z_rejected():
    with pytest.raises(NegativeZ):
        gen_fourier(make_field(COS, 1, 1), [-0.1, 0.0])


@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_derivative_identity(seed, dim):
    f = random_poly(np.random.default_rng(seed), dim, 8)
    rep = check_calculus(f, f, Z)
    assert rep.derivative_residual <= 1e-12


def test_product_slack_cosine_equality_at_zero():
    c = make_field(COS, 1, 1)
    rep = check_calculus(c, c, Z)
    assert rep.product_slack[0] == pytest.approx(0.0, abs=1e-15)
    assert rep.passed


def test_sum_equality_for_nonnegative_coefficients(rng):
    n = mode_norm(1, 5)
    f = SpectralField(1, 5, rng.uniform(0, 1, n.shape)[None, ..., None])
    g = SpectralField(1, 5, rng.uniform(0, 1, n.shape)[None, ..., None])
    rep = check_calculus(f, g, Z)
    np.testing.assert_allclose(rep.sum_slack, 0.0, atol=1e-14)


@given(st.integers(0, 2**32 - 1), st.integers(1, 2))
def test_calculus_on_random_pairs(seed, dim):
    rng = np.random.default_rng(seed)
    f = random_poly(rng, dim, int(rng.integers(1, 9)))
    g = random_poly(rng, dim, int(rng.integers(1, 9)))
    rep = check_calculus(f, g, Z)
    assert rep.passed, rep.failures


@given(st.integers(0, 2**32 - 1), st.integers(1, 2), st.sampled_from([2, 4, 8]))
def test_truncation_lowers_generator(seed, dim, N):
    f = random_poly(np.random.default_rng(seed), dim, 10)
    low = gen_fourier(truncate(f, N), Z).values
    high = gen_fourier(f, Z).values
    assert np.all(high - low >= -1e-14 * np.maximum(1, high))


def test_mixed_hand_example():
    tr = chebyshev_y(33)
    y = cheb_nodes(33)
    w = make_field([((1,), 0.5 * y), ((-1,), 0.5 * y)], 1, 2, transverse=tr)
    c = gen_mixed(w, Z, B=4)
    np.testing.assert_allclose(c.values, np.exp(Z) * (1 + Z), rtol=1e-12)


def test_mixed_reduces_to_fourier_without_y_dependence(rng):
    tr = chebyshev_y(17)
    f = random_poly(rng, 1, 5)
    w = SpectralField(1, 5, np.repeat(f.coeffs, 17, axis=-1), tr)
    np.testing.assert_allclose(gen_mixed(w, Z, B=3).values,
                               gen_fourier(f, Z).values, rtol=1e-12)
    assert np.all(gen_mixed(SpectralField(1, 5, 0 * w.coeffs, tr), Z, B=3).values == 0)


def test_mixed_cap_limits():
    w = make_field([((0,), 1.0)], 1, 1, transverse=chebyshev_y(33))
    with pytest.raises(TaylorCapTooLarge):
        gen_mixed(w, Z, B=13)
    with pytest.raises(DimensionMismatch):
        gen_mixed(make_field(COS, 1, 1), Z)


def _gauss_field(v, scale=1.0):
    return make_field([((0,), scale * np.exp(-v ** 2 / 2))], 1, 2,
                      transverse=Transverse("grid_v", v))


def _stencil(g, h):
    p = np.concatenate([[0, 0], g, [0, 0]])
    return np.array([(-p[i + 4] + 8 * p[i + 3] - 8 * p[i + 1] + p[i]) / (12 * h)
                     for i in range(len(g))])


def test_kinetic_single_mode_oracle():
    v = np.linspace(-8, 8, 129)
    f = _gauss_field(v)
    B, m = 4, 4.0
    w = (1 + v ** 2) ** (m / 2)
    layer = np.exp(-v ** 2 / 2)
    expect = np.zeros_like(Z)
    for b in range(B + 1):
        expect += np.max(w * np.abs(layer)) * Z ** b / math.factorial(b)
        layer = _stencil(layer, v[1] - v[0])
    np.testing.assert_allclose(gen_kinetic(f, Z, m=m, B=B).values, expect, rtol=1e-13)


def test_kinetic_close_to_analytic_derivatives():
    v = np.linspace(-8, 8, 257)
    g = np.exp(-v ** 2 / 2)
    herm = [g, -v * g, (v ** 2 - 1) * g]
    w = (1 + v ** 2) ** 2
    expect = sum(np.max(w * np.abs(h)) * Z ** b / math.factorial(b)
                 for b, h in enumerate(herm))
    got = gen_kinetic(_gauss_field(v), Z, m=4, B=2).values
    np.testing.assert_allclose(got, expect, rtol=1e-4)


def test_kinetic_homogeneous_and_zero():
    v = np.linspace(-8, 8, 129)
    a = gen_kinetic(_gauss_field(v), Z, m=4).values
    b = gen_kinetic(_gauss_field(v, 2.0), Z, m=4).values
    np.testing.assert_allclose(b, 2 * a, rtol=1e-15)
    assert np.all(gen_kinetic(_gauss_field(v, 0.0), Z).values == 0)


def test_kinetic_errors():
    v = np.linspace(-8, 8, 129)
    with pytest.raises(WeightTooSmall):
        gen_kinetic(_gauss_field(v), Z, m=3)
    narrow = np.linspace(-3, 3, 49)
    with pytest.raises(GridNotDecayed):
        gen_kinetic(_gauss_field(narrow), Z)


def test_velocity_derivative_fourth_order():
    errs = []
    for n in (65, 129):
        v = np.linspace(-8, 8, n)
        err = np.max(np.abs(velocity_derivative(np.exp(-v ** 2 / 2), v[1] - v[0])
                            + v * np.exp(-v ** 2 / 2)))
        errs.append(err)
    assert math.log2(errs[0] / errs[1]) == pytest.approx(4, abs=0.3)


def test_dispatch_and_membership():
    c = make_field(COS, 1, 1)
    assert generator(c, Z).variant == "fourier"
    m = membership(c, 1.0)
    assert m.finite and m.value == pytest.approx(math.e)


def test_majorant_series_values():
    assert gen_compose_majorant(MajorantSeries.identity(), 0.7) == pytest.approx(0.7)
    assert gen_compose_majorant(MajorantSeries.exponential(), 1.0) == pytest.approx(
        math.e, rel=1e-12)
    geo = MajorantSeries.from_coeffs(np.ones(200), radius=1.0)
    with pytest.raises(OutsideConvergence):
        gen_compose_majorant(geo, 1.0)


def test_composition_square_of_cosine():
    c = make_field(COS, 1, 1)
    sq = gen_fourier(convolve(c, c), Z).values
    np.testing.assert_allclose(sq, 0.5 + 0.5 * np.exp(2 * Z), rtol=1e-14)
    F = MajorantSeries.power(2)
    assert np.all(sq <= F(gen_fourier(c, Z).values))


@given(st.integers(0, 2**32 - 1))
def test_compose_series_below_majorant(seed):
    f = random_poly(np.random.default_rng(seed), 1, 4, decay=1.0)
    f = f * (0.5 / gen_fourier(f, [1.0]).values[0])
    F = MajorantSeries.exponential(30)
    comp = gen_fourier(compose_series(f, F, 8), Z).values
    assert np.all(comp <= np.exp(gen_fourier(f, Z).values) * (1 + 1e-13))


def test_fit_decay_exact_data():
    k = np.arange(-20, 21)
    f = SpectralField(1, 20, np.exp(-0.5 * np.abs(k))[None, :, None, None])
    assert radius_estimate(f) == pytest.approx(0.5, abs=1e-10)
    g = SpectralField(1, 20, 3 * np.exp(-1.2 * np.abs(k))[None, :, None, None])
    rho, c = fit_decay(g)
    assert rho == pytest.approx(1.2, abs=1e-10)
    assert c == pytest.approx(math.log(3), abs=1e-9)
    with pytest.raises(TooFewModes):
        radius_estimate(make_field(COS, 1, 3))


def test_curve_csv_round_trip():
    c = GeneratorCurve("kinetic", Z, np.exp(Z), {"B": 3, "m": 4.0})
    text = c.to_csv(t=0.25) + c.to_csv(t=0.5, header=False)
    parsed = curves_from_csv(text)
    assert [t for t, _ in parsed] == [0.25, 0.5]
    np.testing.assert_array_equal(parsed[1][1].values, c.values)
    assert parsed[0][1].meta == {"B": 3, "m": 4.0}
