from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from walshtri import kernels
from walshtri.grid import Grid, ResolutionError, integrate


def test_dirichlet_matches_oracle():
    m = 4
    for n in range(17):
        assert list(kernels.dirichlet(n, m).values) == oracles.dirichlet(n, m)
    assert kernels.dirichlet(0, 3).is_zero()


def test_dirichlet_power_of_two_closed_form():
    m = 6
    for i in range(m + 1):
        assert kernels.dirichlet(1 << i, m) == kernels.dirichlet_power_of_two(i, m)
    d2 = kernels.dirichlet(2, 1)
    assert list(d2.values) == [2, 0]


@given(st.integers(1, 255))
def test_dirichlet_formula_property(n):
    assert kernels.dirichlet_formula(n, 8) == kernels.dirichlet(n, 8)


def test_dirichlet_table_rows():
    t = kernels.dirichlet_table(9, 4)
    assert not t[0].any()
    for n in range(9):
        assert np.array_equal(t[n], kernels.dirichlet(n, 4).values)
    with pytest.raises(ResolutionError):
        kernels.dirichlet(9, 3)
    with pytest.raises(ValueError):
        kernels.dirichlet(-1, 3)


def test_fejer_against_oracle_and_integral():
    m = 4
    for n in range(1, 17):
        k = kernels.fejer(n, m)
        assert list(k.values) == oracles.fejer_times_n(n, m) and k.denominator == n
        assert k.integral() == Fraction(n - 1, n)
    nums = kernels.fejer_numerators(8, 3)
    assert all(np.array_equal(nums[k], kernels.fejer(k, 3).values) for k in range(1, 9))


def test_tri_kernel_small_values():
    k2 = kernels.tri_fejer(2, 1)
    assert k2.denominator == 2
    assert (k2.values == 1).all()  # D_1 (x) D_1 = 1 everywhere, so K_2 = 1/2
    assert kernels.tri_fejer(1, 2).is_zero()


def test_tri_kernel_routes_agree_with_oracle():
    m = 3
    for n in range(1, 9):
        direct = kernels.tri_fejer(n, m)
        want = oracles.tri_kernel_times_n(n, m)
        assert direct.values.tolist() == want
        assert direct == kernels.tri_fejer_symmetric(n, m)
        assert direct == kernels.tri_fejer_from_dirichlet(n, m)
        assert direct == kernels.tri_fejer_spectral(n, m)


def test_tri_kernel_is_symmetric_and_has_known_mean():
    m = 5
    for n in (3, 7, 16, 31):
        k = kernels.tri_fejer(n, m)
        assert np.array_equal(k.values, k.values.T)
        assert k.integral() == Fraction(n - 1, n)


def test_tri_dirichlet_coefficients():
    m = 3
    d = kernels.tri_dirichlet(4, m)
    spec = kernels.kernel_from_coefficients
    i = np.arange(8)
    want = spec((i[:, None] + i[None, :] <= 3).astype(np.int64))
    assert d == want


def test_marcinkiewicz_routes_agree():
    m = 3
    for n in range(1, 9):
        assert kernels.marcinkiewicz(n, m) == kernels.marcinkiewicz_spectral(n, m)


def test_dyadic_tri_kernel_weights():
    m = 4
    for n in range(1, 9):
        k = kernels.dyadic_tri_kernel(n, m)
        w = kernels.dyadic_tri_weights(n, 16)
        assert k == kernels.kernel_from_coefficients(w, n)


def test_weights_shapes_and_values():
    w = kernels.tri_weights(4, 4)
    assert w[0, 0] == 3 and w[1, 2] == 0 and w[2, 0] == 1
    assert kernels.marcinkiewicz_weights(3, 4)[1, 0] == 1
    assert list(kernels.fejer_weights(3, 4)) == [2, 1, 0, 0]


def test_rect_kernels():
    m = 3
    k = kernels.rect_fejer(3, 5, m)
    assert k == Grid.outer(kernels.fejer(3, m), kernels.fejer(5, m))
    assert integrate(kernels.rect_dirichlet(4, 2, m)) == 1


def test_interval_mask():
    mk = kernels.in_interval_mask(4, 2, {0: 1})
    assert list(np.flatnonzero(mk)) == [8, 9, 10, 11]
