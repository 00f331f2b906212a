"""Maximal function of the shifted Dirichlet products ``sum_k D_k(x1) D_{n+k}(x2)``.

For a fixed ``x1`` cell write ``a_k = D_k(x1)``.  Swapping the sums gives

    sum_k a_k D_{n+k}(x2) = sum_j w_j(x2) * Suf[max(0, j - n + 1)],

with ``Suf[r] = sum_{k >= r} a_k``, so every ``n`` needs one suffix-sum lookup
and one inverse transform along ``x2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import partial

import numpy as np

from ..dyadic import bit_reverse_indices, cell_digits, shell_index, walsh_table
from ..grid import fwht
from ..kernels import dirichlet_table
from ..parallel import chunked
from .report import DELTA, LemmaReport, timed

MAX_S = 9


def _check_s(s: int) -> None:
    if not 1 <= s <= MAX_S:
        raise ValueError(f"s must be in [1, {MAX_S}], got {s}")


def _suffix_table(s: int) -> np.ndarray:
    """``Suf[r, c1]`` for ``r = 0..2^s`` at resolution ``s + 1`` (row ``2^s`` is zero)."""
    d = dirichlet_table(1 << s, s + 1)
    suf = np.zeros(((1 << s) + 1, d.shape[1]), dtype=np.int64)
    suf[:-1] = np.cumsum(d[::-1], axis=0)[::-1]
    return suf


def shifted_product(s: int, n: int, suf: np.ndarray | None = None) -> np.ndarray:
    """Integer grid ``sum_{k<2^s} D_k(x1) D_{n+k}(x2)`` at resolution ``s + 1``."""
    if not 0 <= n < 1 << s:
        raise ValueError(f"n must be in [0, 2^s), got {n}")
    suf = _suffix_table(s) if suf is None else suf
    size = 1 << (s + 1)
    j = np.arange(size, dtype=np.int64)
    r = np.clip(j - n + 1, 0, 1 << s)
    coeff = suf[r]  # [j, c1]
    g = fwht(coeff, axes=[0])[bit_reverse_indices(s + 1)]
    return g.T.copy()  # [c1, c2]


def shifted_product_direct(s: int, n: int) -> np.ndarray:
    """Oracle: the same grid as a matrix product of Dirichlet tables."""
    d = dirichlet_table(n + (1 << s), s + 1)
    return d[: 1 << s].T @ d[n:n + (1 << s)]


def _sup_chunk(s: int, ns: list[int]) -> np.ndarray:
    suf = _suffix_table(s)
    size = 1 << (s + 1)
    acc = np.zeros((size, size), dtype=np.int64)
    for n in ns:
        np.maximum(acc, np.abs(shifted_product(s, n, suf)), out=acc)
    return acc


def marc_sup_grid(s: int, workers: int = 1) -> np.ndarray:
    """Cellwise ``sup_{n<2^s} |sum_k D_k(x1) D_{n+k}(x2)|`` at resolution ``s + 1``."""
    _check_s(s)
    parts = chunked(partial(_sup_chunk, s), list(range(1 << s)), workers)
    acc = parts[0]
    for p in parts[1:]:
        np.maximum(acc, p, out=acc)
    return acc


def marc_bound(t1: int, t2: int, s: int) -> Fraction:
    """``(t2 - t1 + 1)^3 2^(t1 - t2) 2^s delta^(s - t2)``."""
    return Fraction((t2 - t1 + 1) ** 3 * (1 << s) * (1 << t1), 1 << t2) * DELTA.power(s - t2)


def _check_marc(t1: int, t2: int, s: int) -> None:
    if not 0 <= t1 <= t2 < s:
        raise ValueError(f"need 0 <= t1 <= t2 < s, got t1={t1}, t2={t2}, s={s}")
    _check_s(s)


def marc_integral_from_sup(sup: np.ndarray, t1: int, t2: int, s: int) -> Fraction:
    m = s + 1
    sh = shell_index(m)
    block = sup[sh == t1][:, sh == t2]
    return Fraction(int(block.sum()), sup.size)


def marc_integral(t1: int, t2: int, s: int, workers: int = 1, sup: np.ndarray | None = None) -> LemmaReport:
    """Exact integral over ``J_t1 x J_t2`` with the ratio to the bound expression."""
    _check_marc(t1, t2, s)
    reports: list[LemmaReport] = []
    with timed(reports):
        sup = marc_sup_grid(s, workers) if sup is None else sup
        measured = marc_integral_from_sup(sup, t1, t2, s)
        reports.append(
            LemmaReport("marc", {"t1": t1, "t2": t2, "s": s}, measured, marc_bound(t1, t2, s), None,
                        note="ratio is the measured constant")
        )
    return reports[0]


def marc_sweep(s_values, workers: int = 1) -> list[LemmaReport]:
    """All admissible ``(t1, t2)`` for each ``s``; one sup grid per ``s``."""
    out = []
    for s in s_values:
        _check_s(s)
        sup = marc_sup_grid(s, workers)
        for t2 in range(s):
            for t1 in range(t2 + 1):
                out.append(marc_integral(t1, t2, s, sup=sup))
    return out


def max_ratio(reports, s_values) -> Fraction:
    return max(r.ratio for r in reports if r.params["s"] in set(s_values))


def marc_stability(reports, early=(4, 5), late=(6, 7), factor=Fraction(11, 10)) -> LemmaReport:
    """Largest ratio over ``late`` against ``factor`` times the largest over ``early``."""
    lo, hi = max_ratio(reports, early), max_ratio(reports, late)
    return LemmaReport(
        "marc-stability",
        {"early": "/".join(map(str, early)), "late": "/".join(map(str, late))},
        hi,
        factor * lo,
        hi <= factor * lo,
    )


# ----------------------------------------------------------------------------
# B1 / B2 split


def j_ti_mask(m: int, t1: int, i: int) -> np.ndarray:
    """Cells of ``J_{t1,i}``: ``x_0..x_{t1-1} = 0``, ``x_{t1} = 1``, then ``i - 1`` zeros and a one."""
    mask = np.ones(1 << m, dtype=bool)
    for d in range(t1):
        mask &= cell_digits(m, d) == 0
    mask &= cell_digits(m, t1) == 1
    for d in range(t1 + 1, t1 + i):
        mask &= cell_digits(m, d) == 0
    mask &= cell_digits(m, t1 + i) == 1
    return mask


def _check_b1b2(t1: int, t2: int, i: int, s: int) -> None:
    if not (0 <= t1 and 1 <= i < t2 - t1 and t2 < s):
        raise ValueError(f"need 1 <= i < t2 - t1 and t2 < s, got t1={t1}, t2={t2}, i={i}, s={s}")
    _check_s(s)


def _split_factors(t1: int, t2: int, i: int, s: int, n: int):
    """Per-``k`` factors of the split; arrays indexed ``[k, cell]`` at resolution ``s + 1``."""
    m = s + 1
    k = np.arange(1 << s, dtype=np.int64)
    e = n + k
    w = walsh_table(1 << m, m)
    kbit = (k >> t1) & 1
    ebit = (e >> t2) & 1
    # D_k(x1) on J_t1 as a Walsh factor times an integer weight
    f1 = w[(k >> (t1 + 1)) << (t1 + 1)] * ((1 - 2 * kbit) * ((k & ((1 << t1) - 1)) - (kbit << t1)))[:, None]
    g = w[(e >> (t2 + 1)) << (t2 + 1)] * (1 - 2 * ebit)[:, None]
    w1 = e & ((1 << (t1 + i)) - 1)
    w2 = (e & ((1 << t2) - 1)) - w1 - (ebit << t2)
    return f1, g, w1, w2


def b1b2_grids(t1: int, t2: int, i: int, s: int, n: int):
    """``(B1, B2, full, mask)`` as integer grids ``[c1, c2]`` plus the admissible-cell mask.

    ``full`` comes from Dirichlet tables, independently of the split.
    """
    _check_b1b2(t1, t2, i, s)
    if not 0 <= n < 1 << s:
        raise ValueError(f"n must be in [0, 2^s), got {n}")
    f1, g, w1, w2 = _split_factors(t1, t2, i, s, n)
    b1 = f1.T @ (g * w1[:, None])
    b2 = f1.T @ (g * w2[:, None])
    full = shifted_product_direct(s, n)
    m = s + 1
    mask = np.outer(j_ti_mask(m, t1, i), shell_index(m) == t2)
    return b1, b2, full, mask


def b1b2_decomposition(t1: int, t2: int, i: int, s: int, n: int, c1: int, c2: int) -> tuple[int, int, int]:
    """``(B1, B2, full)`` at one admissible cell ``(c1, c2)`` of resolution ``s + 1``."""
    b1, b2, full, mask = b1b2_grids(t1, t2, i, s, n)
    if not mask[c1, c2]:
        raise ValueError(f"cell ({c1}, {c2}) is outside J_{{t1,i}} x J_t2")
    return int(b1[c1, c2]), int(b2[c1, c2]), int(full[c1, c2])


def admissible_b1b2(s_max: int):
    for s in range(1, s_max + 1):
        for t2 in range(s):
            for t1 in range(t2):
                for i in range(1, t2 - t1):
                    yield t1, t2, i, s


def b1b2_check(s_max: int = 4) -> list[LemmaReport]:
    """Additivity ``B1 + B2 = full`` and ``|full| <= |B1| + |B2|`` on every admissible cell."""
    out = []
    for t1, t2, i, s in admissible_b1b2(s_max):
        reports: list[LemmaReport] = []
        with timed(reports):
            bad = cells = 0
            for n in range(1 << s):
                b1, b2, full, mask = b1b2_grids(t1, t2, i, s, n)
                ok = (b1 + b2 == full) & (np.abs(full) <= np.abs(b1) + np.abs(b2))
                bad += int((~ok & mask).sum())
                cells += int(mask.sum())
            reports.append(
                LemmaReport("b1b2", {"t1": t1, "t2": t2, "i": i, "s": s}, Fraction(bad), Fraction(0), bad == 0,
                            extra={"checked_cells": cells})
            )
        out += reports
    return out
