"""Numerical experiments for the triangular Fejer means.

Quasi-locality: a mean-zero function on a dyadic square is annihilated by
``sigma_n`` for ``n < 2^a``; the truncated maximal function outside the
square is then compared with ``||f||_1``.  Convergence: exact errors
``||sigma_n f - f||`` for a list of ``n``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..grid import Grid, RationalGrid, fwht_forward, pointwise_abs_max
from ..kernels import tri_weights
from ..summation import apply_multiplier, continuity_mask, l1_norm, linf_norm, walsh_polynomial
from .report import LemmaReport, timed

NORMS = ("L1", "Linf", "Linf-away")


def square_mask(m: int, a: int, prefix1: int = 0, prefix2: int = 0) -> np.ndarray:
    c = np.arange(1 << m) >> (m - a)
    return (c == prefix1)[:, None] & (c == prefix2)[None, :]


def check_quasi_input(f: Grid, a: int, prefix1: int = 0, prefix2: int = 0) -> None:
    m = f.resolution
    if not 0 <= a <= m:
        raise ValueError(f"a must be in [0, {m}]")
    if not (0 <= prefix1 < 1 << a and 0 <= prefix2 < 1 << a):
        raise ValueError("square position outside [0, 1)^2")
    if f.values[~square_mask(m, a, prefix1, prefix2)].any():
        raise ValueError(f"f is not supported in the square I_{a}({prefix1}) x I_{a}({prefix2})")
    if f.integral() != 0:
        raise ValueError("f must have mean zero")


def quasi_locality_check(f: Grid, a: int, N: int, prefix1: int = 0, prefix2: int = 0,
                         checkpoints=None) -> list[LemmaReport]:
    """Vanishing of ``sigma_n f`` for ``n < 2^a`` and the truncated outside integral.

    Returns the vanishing row, one ratio row per checkpoint (increasing, ending
    at ``N``) and a trend row over the checkpoints ``N >= 2^(a+1)``: ratios
    non-decreasing with non-increasing increments.  Below ``2^a + 2`` every
    mean vanishes, so earlier checkpoints carry only zeros.
    """
    check_quasi_input(f, a, prefix1, prefix2)
    if N < 1:
        raise ValueError("N must be >= 1")
    m = f.resolution
    size = 1 << m
    spec = fwht_forward(f)
    norm = l1_norm(f)
    params = {"a": a, "u": f"{prefix1},{prefix2}"}
    out: list[LemmaReport] = []

    reports: list[LemmaReport] = []
    with timed(reports):
        nonzero = [n for n in range(1, 1 << a) if not apply_multiplier(spec, tri_weights(n, size), n).is_zero()]
        reports.append(LemmaReport("quasi-vanish", {**params, "n_max": (1 << a) - 1}, Fraction(len(nonzero)),
                                   Fraction(0), not nonzero))
    out += reports

    marks = sorted({c for c in (checkpoints or []) if 1 <= c <= N} | {N})
    outside = ~square_mask(m, a, prefix1, prefix2)
    acc: RationalGrid | None = None
    rows = []
    for n in range(1, N + 1):
        acc = pointwise_abs_max(acc, apply_multiplier(spec, tri_weights(n, size), n))
        if n in marks:
            val = acc.integral(outside)
            rows.append(LemmaReport("quasi", {**params, "N": n}, val, norm, None,
                                    note="truncated sup; ratio to ||f||_1"))
    out += rows
    tail = [r for r in rows if r.params["N"] >= 2 << a] or rows[-1:]
    out.append(quasi_trend(tail, params))
    return out


def quasi_trend(rows: list[LemmaReport], params: dict) -> LemmaReport:
    vals = [r.ratio or Fraction(0) for r in rows]
    incs = [b - a for a, b in zip(vals, vals[1:])]
    mono = all(d >= 0 for d in incs)
    shrink = all(d2 <= d1 for d1, d2 in zip(incs, incs[1:]))
    return LemmaReport("quasi-trend", {**params, "N": rows[-1].params["N"]}, vals[-1], None, mono and shrink,
                       extra={"ratios": vals, "increments": incs, "monotone": mono, "shrinking": shrink})


def _error(diff: Grid, norm: str, mask: np.ndarray | None) -> Fraction:
    if norm == "L1":
        return l1_norm(diff)
    if norm == "Linf":
        return linf_norm(diff)
    if norm == "Linf-away":
        return linf_norm(diff, mask)
    raise ValueError(f"unknown norm {norm!r}; choose from {NORMS}")


def convergence_experiment(f: Grid, n_list, norm: str = "L1", source: str = "") -> list[LemmaReport]:
    """``||sigma_n f - f||`` for each ``n`` in ``n_list`` (exact)."""
    if norm not in NORMS:
        raise ValueError(f"unknown norm {norm!r}; choose from {NORMS}")
    spec = fwht_forward(f)
    size = f.values.shape[0]
    mask = continuity_mask(f) if norm == "Linf-away" else None
    out = []
    for n in n_list:
        if n < 1:
            raise ValueError("n must be >= 1")
        reports: list[LemmaReport] = []
        with timed(reports):
            err = _error(apply_multiplier(spec, tri_weights(n, size), n) - f, norm, mask)
            reports.append(LemmaReport("converge", {"f": source, "norm": norm, "n": n}, err, None, None))
        out += reports
    return out


def walsh_error_check(i: int, j: int, n_list, m: int | None = None) -> list[LemmaReport]:
    """For ``f = w_i(x1) w_j(x2)`` the sup error equals ``(i + j + 1) / n`` when ``n > i + j + 1``."""
    f = walsh_polynomial([(i, j, 1)], m).grid
    rows = convergence_experiment(f, n_list, "Linf", f"poly:{i},{j},1")
    for r in rows:
        n = r.params["n"]
        expected = Fraction(i + j + 1, n) if n > i + j + 1 else None
        r.lemma = "converge-walsh"
        r.bound = expected
        r.verdict = None if expected is None else r.measured == expected
    return rows


def strictly_decreasing(rows: list[LemmaReport], label: str = "converge-decrease") -> LemmaReport:
    vals = [r.measured for r in rows]
    ok = all(b < a for a, b in zip(vals, vals[1:]))
    first = rows[0].params
    return LemmaReport(label, {"f": first.get("f", ""), "norm": first.get("norm", ""),
                               "n": f"{rows[0].params['n']}..{rows[-1].params['n']}"},
                       vals[-1], vals[0], ok)
