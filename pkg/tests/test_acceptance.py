"""Acceptance suite: fourteen exact checks, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are printed
at the end of the session (and directly with ``-s``).  Running the file as a
script prints the same lines without pytest.
"""

import time
from fractions import Fraction

import pytest

from walshtri import kernels
from walshtri import summation as sm
from walshtri.lemmas import delta, experiments, marc, maximal
from walshtri.lemmas.report import render_decimal

RESULTS: dict[int, str] = {}


def record(number, name, ok, detail, elapsed, budget):
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"{status} criterion {number:2d} {name}: {detail} [{elapsed:.1f}s / budget {budget:.0f}s]"
    RESULTS[number] = line
    print(line)
    assert in_time, line
    assert ok, line


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_01_triangular_kernel_identity():
    with Clock() as c:
        bad = [n for n in range(1, 33) if kernels.tri_fejer_from_dirichlet(n, 6) != kernels.tri_fejer(n, 6)]
    record(1, "triangular kernel identity", not bad, f"n=1..32 at m=6, mismatches {bad}", c.elapsed, 10)


def test_02_dirichlet_closed_form():
    with Clock() as c:
        table = kernels.dirichlet_table(512, 9)
        bad = [n for n in range(1, 512) if not (kernels.dirichlet_formula(n, 9).values == table[n]).all()]
        if table[0].any():
            bad.insert(0, 0)
    record(2, "Dirichlet closed form", not bad, f"n=0..511 at m=9, mismatches {bad}", c.elapsed, 30)


def test_03_multiplier_convolution_agreement():
    with Clock() as c:
        bad = []
        rect_pairs = [(n, 33 - n) for n in range(1, 33)] + [(n, n) for n in range(1, 33)]
        for seed in range(20):
            f = sm.random_function(seed, 5).grid
            for n in range(1, 33):
                if sm.tri_fejer_mean(f, n, "multiplier") != sm.tri_fejer_mean(f, n, "convolution"):
                    bad.append(("tri", seed, n))
                if sm.marcinkiewicz_mean(f, n, "multiplier") != sm.marcinkiewicz_mean(f, n, "convolution"):
                    bad.append(("marcinkiewicz", seed, n))
                if sm.dyadic_tri_mean(f, n, "multiplier") != sm.dyadic_tri_mean(f, n, "convolution"):
                    bad.append(("dyadic-tri", seed, n))
            for n1, n2 in rect_pairs:
                if sm.fejer_mean_rect(f, n1, n2, "multiplier") != sm.fejer_mean_rect(f, n1, n2, "convolution"):
                    bad.append(("rect", seed, n1, n2))
    record(3, "multiplier/convolution agreement", not bad,
           f"20 functions at m=5, four operators, n<=32, mismatches {bad[:5]}", c.elapsed, 60)


def test_04_delta1_special_case():
    with Clock() as c:
        vals = {A: delta.delta1_special_case(A) for A in range(9)}
        bad = [A for A, v in vals.items() if v != Fraction(1, 1 << A)]
    record(4, "delta1 n=2^A term", not bad, f"A=0..8 equal 2^-A, mismatches {bad}", c.elapsed, 120)


@pytest.mark.slow
def test_05_delta1_bound_and_decay():
    with Clock() as c:
        rows = delta.delta1_sweep(range(0, 10))
    bound_rows = [r for r in rows if r.lemma == "delta1"]
    decay = [r for r in rows if r.lemma == "delta1-decay" and 2 <= r.params["A"] <= 9]
    ok = all(r.verdict for r in bound_rows) and len(decay) == 8 and all(r.verdict for r in decay)
    worst = max(r.ratio for r in bound_rows)
    values = ", ".join(f"{r.params['A']}:{r.measured}" for r in bound_rows)
    record(5, "delta1 bound and decay", ok,
           f"max measured/(8 delta^A) {render_decimal(worst, 6)}, measured {values}", c.elapsed, 600)


def test_06_quadruple_count():
    with Clock() as c:
        r8 = delta.quadruple_report(8)
        small = [delta.quadruple_report(A) for A in range(5)]
    limit = (2**16 - 1) ** 2
    ok = r8.measured <= limit < 2**32 and all(r.verdict for r in small)
    record(6, "quadruple count", ok,
           f"A=8 count {r8.measured} <= {limit}; fourth moments agree for A<=4: {all(r.verdict for r in small)}",
           c.elapsed, 600)


def test_07_pattern_exclusion():
    with Clock() as c:
        rows = delta.pattern_exclusion_check(8)
    ok = len(rows) == 2 and all(r.verdict for r in rows) and all(r.extra["completions"] == 1 << 16 for r in rows)
    detail = ", ".join(f"block {r.params['block']}: {r.measured} of {r.extra['completions']}" for r in rows)
    record(7, "pattern exclusion", ok, f"satisfying quadruples {detail}", c.elapsed, 10)


def test_08_marc_constant_stability():
    with Clock() as c:
        rows = marc.marc_sweep(range(1, 8))
        st = marc.marc_stability(rows)
    finite = all(r.ratio is not None for r in rows)
    record(8, "marc constant stability", finite and st.verdict,
           f"max ratio s in 6,7 {render_decimal(st.measured, 6)} <= 1.1 x max s in 4,5 "
           f"{render_decimal(st.bound, 6)}; overall max {render_decimal(marc.max_ratio(rows, range(1, 8)), 6)}",
           c.elapsed, 900)


def test_09_b1b2_split():
    with Clock() as c:
        rows = marc.b1b2_check(4)
    cells = sum(r.extra["checked_cells"] for r in rows)
    record(9, "B1/B2 split", rows and all(r.verdict for r in rows),
           f"{len(rows)} admissible (t1,t2,i,s), {cells} cell checks, failures {sum(r.measured for r in rows)}",
           c.elapsed, 120)


def test_10_tiling_identity():
    with Clock() as c:
        r = maximal.tiling_check(64, 7)
    record(10, "tiling identity", r.verdict, f"n=1..64 at m=7, failures {r.extra['failures']}", c.elapsed, 60)


def test_11_yano_support():
    with Clock() as c:
        rows = [maximal.yano_check(t1, s) for s in range(1, 9) for t1 in range(s)]
    bad = [(r.params["t1"], r.params["s"]) for r in rows if not r.verdict]
    record(11, "Yano support", not bad, f"{len(rows)} pairs t1<s<=8, violations {bad}", c.elapsed, 60)


@pytest.mark.slow
def test_12_tri_kernel_l1_trend():
    with Clock() as c:
        rows = maximal.l1_table(range(1, 513))
        trend = maximal.l1_trend(rows)
    lower = all(r.verdict for r in rows)
    record(12, "triangular kernel L1 trend", lower and trend.verdict,
           f"lower bound (n-1)/n holds: {lower}; max n in 256..512 {render_decimal(trend.measured, 6)} "
           f"vs 1.1 x max n in 32..64 {render_decimal(trend.bound, 6)}", c.elapsed, 600)


def test_13_quasi_locality():
    with Clock() as c:
        vanish_bad, trend_bad, mono_bad, total = [], [], [], 0
        for a in (1, 2, 3):
            for seed in range(10):
                f = sm.random_function(seed, 5, mean_zero=True, support=a).grid
                rows = experiments.quasi_locality_check(f, a, 256, checkpoints=[1 << k for k in range(9)])
                total += 1
                if not rows[0].verdict:
                    vanish_bad.append((a, seed))
                trend = rows[-1]
                if not trend.extra["monotone"]:
                    mono_bad.append((a, seed))
                if not trend.verdict:
                    trend_bad.append((a, seed))
    ok = not vanish_bad and not trend_bad
    record(13, "quasi-locality", ok,
           f"{total} functions; vanishing failures {vanish_bad}; non-monotone {mono_bad}; "
           f"increments not shrinking {len(trend_bad)}: {trend_bad}", c.elapsed, 300)


def test_14_convergence():
    with Clock() as c:
        walsh_bad = []
        for i, j in [(0, 0), (1, 0), (0, 3), (2, 5), (7, 7)]:
            ns = [n for n in range(i + j + 2, 70)] + [128, 256]
            walsh_bad += [(i, j, r.params["n"]) for r in experiments.walsh_error_check(i, j, ns) if not r.verdict]
        ind_bad = []
        for spec in ["indicator:1:1:0:0", "indicator:2:1:3:1", "indicator:3:2:5:2", "indicator:0:2:0:1"]:
            f = sm.parse_test_function(spec).grid
            rows = experiments.convergence_experiment(f, [1 << m for m in range(2, 9)], "L1", spec)
            if not experiments.strictly_decreasing(rows).verdict:
                ind_bad.append(spec)
    record(14, "convergence", not walsh_bad and not ind_bad,
           f"Walsh sup errors (i+j+1)/n mismatches {walsh_bad[:5]}; non-decreasing L1 indicators {ind_bad}",
           c.elapsed, 120)


if __name__ == "__main__":
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            pass
