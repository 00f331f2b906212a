from fractions import Fraction

import numpy as np
import pytest

import oracles
from walshtri.lemmas import delta
from walshtri.lemmas.report import DELTA


def test_delta_constant_is_tight_over_approximation():
    base = Fraction(2**16 - 1, 2**16)
    u = DELTA.upper
    assert u < 1
    assert u**16 >= base
    assert (u - Fraction(1, 2**64)) ** 16 < base
    assert DELTA.power(3) == u**3 and DELTA.power(0) == 1


def test_shifted_sum_grid_matches_oracle():
    A = 2
    m = A + 1
    for n in range((1 << A) + 1):
        g = delta.shifted_sum_grid(A, n)
        want = [[oracles.shifted_sum(A, n, a, b, m) for b in range(1 << m)] for a in range(1 << m)]
        assert g.tolist() == want
    with pytest.raises(ValueError):
        delta.shifted_sum_grid(2, 5)


@pytest.mark.parametrize("A", [0, 1, 2, 3])
def test_delta1_integral_matches_oracle(A):
    r = delta.delta1_integral(A)
    assert r.measured == oracles.delta1_integral(A)
    assert r.verdict


def test_delta1_known_values_and_special_case():
    assert delta.delta1_integral(0).measured == 1
    for A in range(7):
        assert delta.delta1_special_case(A) == Fraction(1, 1 << A)


def test_delta1_sweep_rows():
    rows = delta.delta1_sweep([1, 2, 3])
    kinds = [r.lemma for r in rows]
    assert kinds.count("delta1") == 3 and kinds.count("delta1-decay") == 2 and kinds.count("delta1-special") == 3
    assert all(r.verdict for r in rows)


def test_delta1_parallel_matches_serial():
    assert np.array_equal(delta.delta1_sup_grid(4, workers=1), delta.delta1_sup_grid(4, workers=3))
    with pytest.raises(ValueError):
        delta.delta1_integral(11)


def test_quadruple_count_matches_enumerations():
    for A in range(4):
        assert delta.quadruple_count(A) == delta.quadruple_count_brute(A) == oracles.quadruples(A)
    assert delta.quadruple_count(4) == delta.quadruple_count_brute(4)
    assert [delta.quadruple_count(A) for A in range(3)] == [1, 16, 208]


def test_quadruple_count_equals_fourth_moments():
    for A in range(5):
        assert delta.fourth_moment_sum(A) == delta.quadruple_count(A)


def test_quadruple_report_and_bounds():
    tight, literal = delta.quadruple_bounds(4)
    assert tight == 2**16 - 1 and literal == (2**16 - 1) * 2**12
    assert delta.quadruple_bounds(8)[0] == (2**16 - 1) ** 2
    r = delta.quadruple_report(3)
    assert r.verdict and r.extra["fourth_moment_sum"] == r.measured


def test_quadruple_condition_examples():
    assert delta.quadruple_condition(0, 5, 6, 7)  # n = 0 always satisfies it
    assert delta.quadruple_condition(3, 0, 0, 0)
    assert not delta.quadruple_condition(*delta.PATTERN)


def test_pattern_quadruples_layout():
    n, k, l, i = delta.pattern_quadruples(8, 2)
    assert len(n) == 1 << 16
    assert set((n >> 4) & 0xF) == {delta.PATTERN[0]} and set((i >> 4) & 0xF) == {delta.PATTERN[3]}
    assert len(set(zip(n.tolist(), k.tolist(), l.tolist(), i.tolist()))) == 1 << 16
    with pytest.raises(ValueError):
        delta.pattern_quadruples(8, 3)


def test_pattern_exclusion_small():
    rows = delta.pattern_exclusion_check(4)
    assert len(rows) == 1 and rows[0].verdict and rows[0].extra["completions"] == 1


def test_corf_examples():
    assert delta.corf_scaled_integral(0, 1) == Fraction(1, 4)
    for t2, s in [(0, 2), (1, 3), (0, 3), (2, 4)]:
        for low in range(1 << (t2 + 1)):
            assert delta.corf_scaled_integral(t2, s, low) == oracles.corf_scaled(t2, s, low)


def test_corf_ignores_leading_digits():
    # h and high(n + h + low) are multiples of 2^(t2+1), so digits 0..t2 never matter
    t2, s = 1, 4
    full = delta.corf_grid(t2, s, reduced=False).values
    side = full.shape[0] >> (t2 + 1)
    a = np.arange(full.shape[0])
    assert np.array_equal(full, full[(a % side)[:, None], (a % side)[None, :]])
    assert np.array_equal(full[:side, :side], delta.corf_grid(t2, s).values)


def test_corf_rejects_bad_parameters():
    with pytest.raises(ValueError):
        delta.corf_grid(3, 3)
    with pytest.raises(ValueError):
        delta.corf_grid(0, 2, low_bits=2)
    assert delta.corf_bound(0, 2).verdict is None
