"""Maximal triangular kernel: digit-block decomposition and its truncated integrals.

For ``n`` with binary digit ``n_s = 1`` and ``N = n^(s+1)`` (bits above ``s``),

    T_s = sum_{k<2^s} D_{N+k}(x1) D_{n-N-k}(x2),

and the blocks ``[N, N + 2^s)`` tile ``[0, n)``, so ``sum_s T_s = n K_n^tri``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..dyadic import bit, min_resolution, shell_index, walsh_row
from ..grid import Grid, RationalGrid, ResolutionError, paley_synthesis, pointwise_abs_max
from ..kernels import dirichlet_table, fejer, fejer_numerators, tri_fejer, tri_weights
from .report import LemmaReport, timed

MAX_TRI_N = 512
VARIANTS = ("t1", "t2", "t3")


def set_bits(n: int) -> list[int]:
    return [s for s in range(n.bit_length()) if bit(n, s)]


def _block(n: int, s: int) -> tuple[int, int]:
    """``(N, M)`` with ``N = n^(s+1)`` and ``M = n - N``."""
    big = (n >> (s + 1)) << (s + 1)
    return big, n - big


def decomposition_term(n: int, s: int, m: int) -> Grid:
    """``T_s`` by summing Dirichlet products."""
    if not bit(n, s):
        raise ValueError(f"digit {s} of {n} is zero")
    big, rest = _block(n, s)
    d = dirichlet_table(n + 1, m)
    k = np.arange(1 << s)
    return Grid(d[big + k].T @ d[rest - k])


def decomposition_spectrum(n: int, s: int, size: int) -> np.ndarray:
    """Walsh coefficients of ``T_s``: the number of ``k`` with ``N + k > j1`` and ``M - k > j2``."""
    big, rest = _block(n, s)
    j = np.arange(size, dtype=np.int64)
    hi = np.minimum(1 << s, rest - j)[None, :]
    lo = np.maximum(0, j - big + 1)[:, None]
    return np.maximum(0, hi - lo)


def decomposition_term_spectral(n: int, s: int, m: int) -> Grid:
    if not bit(n, s):
        raise ValueError(f"digit {s} of {n} is zero")
    if n > 1 << m:
        raise ResolutionError(f"T_s of n={n} needs resolution >= {min_resolution(n)}")
    return Grid(paley_synthesis(decomposition_spectrum(n, s, 1 << m)))


def kernel_decomposition_terms(n: int, m: int, spectral: bool = False) -> dict[int, Grid]:
    """``{s: T_s}`` over the nonzero digits of ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n - 1 >= 1 << m:
        raise ResolutionError(f"n={n} needs resolution >= {min_resolution(n)}")
    make = decomposition_term_spectral if spectral else decomposition_term
    return {s: make(n, s, m) for s in set_bits(n)}


def tiling_check(n_max: int = 64, m: int = 7) -> LemmaReport:
    """``sum_s T_s == n K_n^tri`` for every ``1 <= n <= n_max``."""
    reports: list[LemmaReport] = []
    with timed(reports):
        bad = []
        for n in range(1, n_max + 1):
            total = sum(kernel_decomposition_terms(n, m).values(), Grid.zeros(m, 2))
            if not total == tri_fejer(n, m).scale(n):
                bad.append(n)
        reports.append(LemmaReport("tiling", {"n_max": n_max, "m": m}, Fraction(len(bad)), Fraction(0), not bad,
                                   extra={"failures": bad}))
    return reports[0]


# ----------------------------------------------------------------------------
# reversal chain


def reversal_dirichlet_check(s_max: int = 8) -> LemmaReport:
    """``D_{2^s - k} = D_{2^s} - w_{2^s - 1} D_k`` for ``0 <= k <= 2^s``."""
    bad = 0
    for s in range(s_max + 1):
        d = dirichlet_table((1 << s) + 1, s)
        w_top = walsh_row((1 << s) - 1, s)
        for k in range((1 << s) + 1):
            bad += int(not np.array_equal(d[(1 << s) - k], d[1 << s] - w_top * d[k]))
    return LemmaReport("reversal-dirichlet", {"s_max": s_max}, Fraction(bad), Fraction(0), bad == 0)


def reversal_term_check(A: int) -> LemmaReport:
    """Off ``I_s`` in ``x1``: ``|T_s| = |sum_{k<2^s} D_k(x1) D_{n_(s-1)+k}(x2)|`` for all ``|n| = A``."""
    m = A + 1
    d = dirichlet_table(1 << m, m)
    first = np.arange(1 << m)
    bad = 0
    for n in range(1 << A, 1 << (A + 1)):
        for s in set_bits(n):
            if s == 0:
                continue
            t = decomposition_term(n, s, m).values
            low = n & ((1 << s) - 1)
            k = np.arange(1 << s)
            rev = d[k].T @ d[low + k]
            off = (first >> (m - s)) != 0  # x1 outside I_s
            bad += int((np.abs(t[off]) != np.abs(rev[off])).sum())
    return LemmaReport("reversal-term", {"A": A}, Fraction(bad), Fraction(0), bad == 0)


# ----------------------------------------------------------------------------
# truncated sums over the three digit ranges


def _variant_mask(variant: str, s: int, A: int, t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    if variant == "t1":
        return s <= t1
    if variant == "t2":
        return (t1 < s) & (s <= t2)
    if variant == "t3":
        return (t2 < s) & (s <= A)
    raise ValueError(f"unknown variant {variant!r}")


def sup_parts_grid(variant: str, A_range, m: int | None = None) -> Grid:
    """``sup_{A} sup_{|n|=A} 2^-A sum_{s in range} n_s |T_s|`` cellwise.

    The digit range depends on the cell's shells ``(t1, t2)``; the tail cell
    ``I_m`` is shell ``m`` and behaves like ``t = infinity`` for ``s <= A < m``.
    """
    A_values = sorted(set(A_range))
    if not A_values or A_values[0] < 0 or A_values[-1] > 8:
        raise ValueError("A-range must be a non-empty subset of [0, 8]")
    top = A_values[-1]
    m = top + 1 if m is None else m
    if m < top + 1:
        raise ResolutionError(f"resolution must be >= {top + 1}")
    sh = shell_index(m)
    t1, t2 = sh[:, None], sh[None, :]
    acc = np.zeros((1 << m, 1 << m), dtype=np.int64)
    for A in A_values:
        scale = 1 << (top - A)
        for n in range(1 << A, 1 << (A + 1)):
            total = np.zeros_like(acc)
            for s in set_bits(n):
                mask = _variant_mask(variant, s, A, t1, t2)
                if mask.any():
                    total += np.abs(decomposition_term_spectral(n, s, m).values) * mask
            np.maximum(acc, total * scale, out=acc)
    return Grid(acc, 1 << top)


def sup_kernel_parts(a: int, A_range, variant: str, m: int | None = None) -> list[LemmaReport]:
    """Per-``(t1, t2)`` integrals over ``J_t1 x J_t2`` for ``t1 <= a``, plus their total.

    The supremum over ``A`` is truncated to ``A_range``, so every value is a
    lower bound of the untruncated quantity.
    """
    if min(A_range) < a:
        raise ValueError("A-range must satisfy A >= a")
    g = sup_parts_grid(variant, A_range, m)
    m = g.resolution
    sh = shell_index(m)
    out, total = [], Fraction(0)
    for t1 in range(min(a, m) + 1):
        for t2 in range(t1, m + 1):
            block = g.values[sh == t1][:, sh == t2]
            val = Fraction(int(block.sum()), g.denominator * g.cell_count)
            total += val
            out.append(LemmaReport(f"supparts-{variant}", {"a": a, "t1": t1, "t2": t2,
                                                           "A": _range_text(A_range)}, val, None, None,
                                   note="truncated sup"))
    out.append(LemmaReport(f"supparts-{variant}-total", {"a": a, "A": _range_text(A_range)}, total, None, None,
                           note="truncated sup"))
    return out


def _range_text(values) -> str:
    v = sorted(set(values))
    return f"{v[0]}..{v[-1]}" if v == list(range(v[0], v[-1] + 1)) and len(v) > 1 else "/".join(map(str, v))


def crude_term_bound(t1: int, t2: int, A: int) -> LemmaReport:
    """Largest ``|T_s| / (2^(t1 + min(t2, A)) 2^s)`` over ``J_t1 x J_t2``, ``|n| = A``, ``s <= t1``."""
    if not 0 <= t1 <= t2:
        raise ValueError("need t1 <= t2")
    m = A + 1
    if t2 > m:
        raise ResolutionError(f"J_{t2} is finer than resolution {m}")
    sh = shell_index(m)
    rows, cols = sh == t1, sh == t2
    best = Fraction(0)
    for n in range(1 << A, 1 << (A + 1)):
        for s in set_bits(n):
            if s > t1:
                continue
            block = decomposition_term_spectral(n, s, m).values[rows][:, cols]
            if block.size:
                best = max(best, Fraction(int(np.abs(block).max()), 1 << (t1 + min(t2, A) + s)))
    return LemmaReport("crude-term", {"t1": t1, "t2": t2, "A": A}, best, Fraction(1), None,
                       note="measured constant")


# ----------------------------------------------------------------------------
# one-dimensional estimates


def yano_check(t1: int, s: int) -> LemmaReport:
    """On ``J_t1``, ``K_{2^s}`` vanishes off ``I_s(e_t1)``; reports ``max |K_{2^s}| / 2^t1`` there."""
    if not 0 <= t1 < s <= 12:
        raise ValueError(f"need 0 <= t1 < s <= 12, got t1={t1}, s={s}")
    reports: list[LemmaReport] = []
    with timed(reports):
        k = fejer(1 << s, s)
        sh = shell_index(s)
        target = 1 << (s - 1 - t1)  # the cell of e_t1 = 2^-(t1+1)
        on_j = sh == t1
        off = on_j.copy()
        off[target] = False
        vanishes = not k.values[off].any()
        c = Fraction(int(abs(k.values[target])), k.denominator << t1)
        reports.append(LemmaReport("yano", {"t1": t1, "s": s}, c, None, vanishes,
                                   note="support claim is the verdict; measured is the constant"))
    return reports[0]


def mem_maximal_check(t1: int, A: int, N: int) -> LemmaReport:
    """``integral_{J_t1} max_{2^A <= n <= N} |K_n|`` against ``2^t1 / 2^A (A - t1 + 1)``."""
    if not (0 <= t1 <= A and N >= 1 << A):
        raise ValueError(f"need t1 <= A and N >= 2^A, got t1={t1}, A={A}, N={N}")
    reports: list[LemmaReport] = []
    with timed(reports):
        m = max(min_resolution(N), t1 + 1)
        rows = fejer_numerators(N, m)
        acc = None
        for n in range(1 << A, N + 1):
            acc = pointwise_abs_max(acc, rows[n], n)
        sh = shell_index(m)
        measured = acc.integral(sh == t1)
        bound = Fraction((1 << t1) * (A - t1 + 1), 1 << A)
        reports.append(LemmaReport("mem", {"t1": t1, "A": A, "N": N}, measured, bound, None,
                                   note="truncated sup is a lower bound"))
    return reports[0]


# ----------------------------------------------------------------------------
# the triangular kernel itself


def tri_kernel_grid(n: int, m: int | None = None) -> Grid:
    """``K_n^tri`` by spectral synthesis at (by default) the smallest usable resolution."""
    if not 1 <= n <= MAX_TRI_N:
        raise ValueError(f"n must be in [1, {MAX_TRI_N}]")
    m = min_resolution(n) if m is None else m
    return Grid(paley_synthesis(tri_weights(n, 1 << m)), n)


def tri_kernel_l1(n: int) -> Fraction:
    """``||K_n^tri||_1`` exactly."""
    return tri_kernel_grid(n).lp_norm1()


def l1_table(n_values) -> list[LemmaReport]:
    """One row per ``n``: the norm against the lower bound ``(n-1)/n`` from the mean."""
    out = []
    for n in n_values:
        reports: list[LemmaReport] = []
        with timed(reports):
            g = tri_kernel_grid(n)
            norm, mean = g.lp_norm1(), g.integral()
            reports.append(LemmaReport("l1", {"n": n}, norm, Fraction(n - 1, n),
                                       norm >= Fraction(n - 1, n) and mean == Fraction(n - 1, n)))
        out += reports
    return out


def l1_trend(table: list[LemmaReport], early=(32, 64), late=(256, 512), factor=Fraction(11, 10)) -> LemmaReport:
    lo = max(r.measured for r in table if early[0] <= r.params["n"] <= early[1])
    hi = max(r.measured for r in table if late[0] <= r.params["n"] <= late[1])
    return LemmaReport("l1-trend", {"early": f"{early[0]}..{early[1]}", "late": f"{late[0]}..{late[1]}"},
                       hi, factor * lo, hi <= factor * lo)


def sup_tri_kernel_integral(a: int, N: int, checkpoints=None) -> list[LemmaReport]:
    """``integral_{I^2 minus I_a^2} max_{2^a <= n <= N} |K_n^tri|``, one row per checkpoint.

    Rows come in increasing order of the truncation bound; the last is ``N``.
    """
    if a < 0:
        raise ValueError("a must be >= 0")
    if N > MAX_TRI_N:
        raise ResolutionError(f"N is capped at {MAX_TRI_N}")
    if a == 0:
        return [LemmaReport("supkernel", {"a": 0, "N": N}, Fraction(0), None, None, note="empty region")]
    if N < 1 << a:
        raise ValueError("N must be >= 2^a")
    marks = sorted({c for c in (checkpoints or []) if (1 << a) <= c <= N} | {N})
    m = max(min_resolution(N), a)
    size = 1 << m
    c = np.arange(size)
    inside = (c >> (m - a)) == 0
    outside = ~(inside[:, None] & inside[None, :])
    acc: RationalGrid | None = None
    out = []
    reports: list[LemmaReport] = []
    with timed(reports):
        for n in range(1 << a, N + 1):
            acc = pointwise_abs_max(acc, paley_synthesis(tri_weights(n, size)), n)
            if n in marks:
                out.append(LemmaReport("supkernel", {"a": a, "N": n}, acc.integral(outside), None, None,
                                       note="truncated sup"))
    return out


def supkernel_trend(rows: list[LemmaReport]) -> LemmaReport:
    """Non-decreasing values and successive ratios moving towards 1."""
    vals = [r.measured for r in rows]
    mono = all(b >= a for a, b in zip(vals, vals[1:]))
    ratios = [b / a for a, b in zip(vals, vals[1:]) if a]
    settling = all(r2 <= r1 for r1, r2 in zip(ratios, ratios[1:]))
    last = ratios[-1] if ratios else Fraction(1)
    return LemmaReport("supkernel-trend", {"a": rows[0].params["a"], "N": rows[-1].params["N"]}, last,
                       Fraction(1), mono, extra={"ratios_non_increasing": settling, "values": vals})
