from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walshtri.grid import Grid
from walshtri.lemmas import experiments as ex
from walshtri.summation import indicator, random_function, tri_fejer_mean


@settings(max_examples=15)
@given(st.integers(0, 2**20), st.integers(1, 3))
def test_mean_zero_square_functions_vanish_below_2a(seed, a):
    f = random_function(seed, 4, mean_zero=True, support=a).grid
    ex.check_quasi_input(f, a)
    for n in range(1, (1 << a) + 2):
        assert tri_fejer_mean(f, n).is_zero()


def test_quasi_rows():
    f = random_function(3, 4, mean_zero=True, support=2).grid
    rows = ex.quasi_locality_check(f, 2, 32, checkpoints=[4, 8, 16])
    assert rows[0].lemma == "quasi-vanish" and rows[0].verdict
    quasi = [r for r in rows if r.lemma == "quasi"]
    assert [r.params["N"] for r in quasi] == [4, 8, 16, 32]
    assert quasi[0].measured == 0  # sigma_n f = 0 for n <= 2^a + 1
    vals = [r.measured for r in quasi]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    trend = rows[-1]
    assert trend.lemma == "quasi-trend"
    assert trend.extra["ratios"] == [r.ratio for r in quasi if r.params["N"] >= 8]


def test_quasi_shifted_square():
    f = random_function(1, 3, mean_zero=True, support=1).grid
    v = np.roll(np.roll(f.values, 4, axis=0), 4, axis=1)
    g = Grid(v, f.denominator)
    rows = ex.quasi_locality_check(g, 1, 8, prefix1=1, prefix2=1)
    assert rows[0].verdict


def test_quasi_input_validation():
    f = random_function(1, 3, mean_zero=True, support=1).grid
    with pytest.raises(ValueError):
        ex.check_quasi_input(f, 2)
    with pytest.raises(ValueError):
        ex.check_quasi_input(random_function(1, 3, support=1).grid, 1)
    with pytest.raises(ValueError):
        ex.check_quasi_input(f, 1, prefix1=2)


def test_quasi_trend_logic():
    from walshtri.lemmas.report import LemmaReport
    rows = [LemmaReport("quasi", {"N": n}, Fraction(v), Fraction(1), None) for n, v in
            [(4, 0), (8, Fraction(1, 2)), (16, Fraction(3, 4)), (32, Fraction(7, 8))]]
    t = ex.quasi_trend(rows, {})
    assert t.verdict and t.extra["increments"] == [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]
    rows[2].measured = Fraction(1, 2)
    assert not ex.quasi_trend(rows, {}).verdict


def test_walsh_error_formula():
    rows = ex.walsh_error_check(1, 2, [4, 5, 8, 16, 64])
    assert rows[0].verdict is None  # n = i + j + 1 is outside the claim
    for r in rows[1:]:
        assert r.verdict and r.measured == Fraction(4, r.params["n"])


def test_indicator_l1_errors_decrease():
    f = indicator(1, 1).grid
    rows = ex.convergence_experiment(f, [4, 8, 16, 32], "L1", "indicator:1:1:0:0")
    assert [r.measured for r in rows] == [Fraction(3, 4 * n) for n in (4, 8, 16, 32)]
    assert ex.strictly_decreasing(rows).verdict


def test_convergence_norms():
    f = indicator(1, 2, 0, 1, 4).grid
    for norm in ex.NORMS:
        rows = ex.convergence_experiment(f, [2, 4], norm)
        assert len(rows) == 2
    with pytest.raises(ValueError):
        ex.convergence_experiment(f, [2], "L2")
    with pytest.raises(ValueError):
        ex.convergence_experiment(f, [0], "L1")
