"""Command-line runner: one subcommand per check, exact CSV/JSON reports.

Exit status is 0 when every exact verdict passes, 1 when any fails and 2 on
invalid input.  Rows whose verdict is ``recorded`` (ratios against bounds with
a free constant) never affect the exit status.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from . import kernels
from .dyadic import min_resolution
from .grid import Grid, ResolutionError
from .lemmas import delta, experiments, marc, maximal
from .lemmas.report import CSV_COLUMNS, LemmaReport, timed
from .summation import (
    dyadic_tri_mean,
    fejer_mean_rect,
    marcinkiewicz_mean,
    parse_test_function,
    random_function,
    tri_fejer_mean,
)

OUT_ENV = "WALSHTRI_OUT"
FORMATS = ("csv", "json")


class UsageError(ValueError):
    """Invalid parameters; maps to exit status 2."""


# ----------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    """One invocation: a subcommand with its parameters and run options."""

    subcommand: str
    params: dict = field(default_factory=dict)
    threads: int = 1
    format: str = "csv"
    output: str | None = None
    seed: int = 0
    sweep: bool = False
    timing: bool = False

    def __post_init__(self):
        if self.subcommand not in COMMANDS:
            raise UsageError(f"unknown subcommand {self.subcommand!r}")
        if self.format not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.threads < 1:
            raise UsageError(f"threads must be >= 1, got {self.threads}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise UsageError(f"unknown run-config keys {sorted(extra)}")
        if "subcommand" not in d:
            raise UsageError("run-config entry needs a subcommand")
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls.from_dict(json.loads(text))


def parse_int_list(text) -> list[int]:
    """``"3"``, ``"1,2,5"`` or ``"0..8"`` (inclusive) as a list of ints."""
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {part!r}")
            out += range(lo, hi + 1)
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


# ----------------------------------------------------------------------------
# commands


@dataclass(frozen=True)
class Command:
    help: str
    arguments: tuple
    run: Callable[[dict, RunConfig], list[LemmaReport]]
    sweep: dict = field(default_factory=dict)


def _arg(name, **kw):
    return (name, kw)


def _p(params: dict, key: str):
    v = params.get(key)
    if v is None:
        raise UsageError(f"missing parameter --{key.replace('_', '-')}")
    return v


def _ints(params: dict, key: str) -> list[int]:
    try:
        return parse_int_list(_p(params, key))
    except ValueError as exc:
        raise UsageError(f"--{key.replace('_', '-')}: {exc}") from exc


def _int(params: dict, key: str) -> int:
    v = _ints(params, key)
    if len(v) != 1:
        raise UsageError(f"--{key.replace('_', '-')} expects a single integer")
    return v[0]


def _mismatch_row(name: str, params: dict, failures: list) -> LemmaReport:
    return LemmaReport(name, params, Fraction(len(failures)), Fraction(0), not failures,
                       extra={"failures": failures[:20]})


def run_identities(p: dict, cfg: RunConfig) -> list[LemmaReport]:
    n_max, m = _int(p, "n_max"), _int(p, "resolution")
    if n_max < 1 or n_max > 1 << m:
        raise UsageError(f"--n-max must be in [1, 2^resolution], got {n_max}")
    if m > 10:
        raise UsageError("--resolution is capped at 10 for the identity families")
    rows = []

    def family(name, params, check):
        reps: list[LemmaReport] = []
        with timed(reps):
            reps.append(_mismatch_row(name, params, [x for x in check() if x is not None]))
        rows.extend(reps)

    family("identity-tri-kernel", {"n_max": n_max, "m": m},
           lambda: (n for n in range(1, n_max + 1)
                    if not sum((kernels.tri_dirichlet(k, m) for k in range(n)), Grid.zeros(m, 2))
                    == kernels.tri_fejer(n, m).scale(n)))
    family("identity-dirichlet-formula", {"n_max": (1 << m) - 1, "m": m},
           lambda: (n for n in range(1, 1 << m) if not kernels.dirichlet_formula(n, m) == kernels.dirichlet(n, m)))
    family("identity-dirichlet-power", {"m": m},
           lambda: (i for i in range(m + 1) if not kernels.dirichlet_power_of_two(i, m) == kernels.dirichlet(1 << i, m)))
    family("identity-tri-routes", {"n_max": n_max, "m": m},
           lambda: (n for n in range(1, n_max + 1)
                    if not (kernels.tri_fejer(n, m) == kernels.tri_fejer_spectral(n, m)
                            == kernels.tri_fejer_from_dirichlet(n, m) == kernels.tri_fejer_symmetric(n, m))))
    family("identity-marcinkiewicz", {"n_max": n_max, "m": m},
           lambda: (n for n in range(1, n_max + 1)
                    if not kernels.marcinkiewicz(n, m) == kernels.marcinkiewicz_spectral(n, m)))
    rows.append(maximal.reversal_dirichlet_check(min(m, 8)))
    tile_n = min(n_max, 1 << m)
    rows.append(maximal.tiling_check(tile_n, max(m, min_resolution(tile_n + 1))))
    mm = min(m, 5)
    n_ops = min(n_max, 32)

    def ops():
        for seed in range(3):
            f = random_function(cfg.seed + seed, mm).grid
            for n in range(1, n_ops + 1):
                same = (tri_fejer_mean(f, n, "multiplier") == tri_fejer_mean(f, n, "convolution")
                        and fejer_mean_rect(f, n, n, "multiplier") == fejer_mean_rect(f, n, n, "convolution")
                        and marcinkiewicz_mean(f, n, "multiplier") == marcinkiewicz_mean(f, n, "convolution")
                        and dyadic_tri_mean(f, n, "multiplier") == dyadic_tri_mean(f, n, "convolution"))
                yield None if same else f"{seed}:{n}"

    family("identity-multiplier-convolution", {"n_max": n_ops, "m": mm, "functions": 3}, ops)
    return rows


def run_delta1(p, cfg):
    As = _ints(p, "A")
    for A in As:
        if not 0 <= A <= delta.MAX_A:
            raise UsageError(f"--A must be in [0, {delta.MAX_A}], got {A}")
    return delta.delta1_sweep(As, cfg.threads)


def run_quadruples(p, cfg):
    out = []
    for A in _ints(p, "A"):
        if not 0 <= A <= 10:
            raise UsageError(f"--A must be in [0, 10], got {A}")
        out.append(delta.quadruple_report(A, cfg.threads, p.get("moments")))
    return out


def run_patterns(p, cfg):
    A = _int(p, "A")
    if A < 4 or A % 4 or A > 8:
        raise UsageError(f"--A must be 4 or 8, got {A}")
    return delta.pattern_exclusion_check(A)


def run_corf(p, cfg):
    out = []
    for s in _ints(p, "s"):
        t2s = _ints(p, "t2") if p.get("t2") is not None else range(s)
        for t2 in t2s:
            if not 0 <= t2 < s <= 10:
                raise UsageError(f"need 0 <= t2 < s <= 10, got t2={t2}, s={s}")
            low = int(p.get("low_bits") or 0)
            if not 0 <= low < 1 << (t2 + 1):
                raise UsageError(f"--low-bits must fit in {t2 + 1} bits")
            out.append(delta.corf_bound(t2, s, low))
    return out


def run_marc(p, cfg):
    out = []
    ss = _ints(p, "s")
    for s in ss:
        if not 1 <= s <= 8:
            raise UsageError(f"--s must be in [1, 8], got {s}")
    for s in ss:
        sup = marc.marc_sup_grid(s, cfg.threads)
        pairs = [(t1, t2) for t2 in range(s) for t1 in range(t2 + 1)]
        if p.get("t1") is not None or p.get("t2") is not None:
            t1s = set(_ints(p, "t1")) if p.get("t1") is not None else None
            t2s = set(_ints(p, "t2")) if p.get("t2") is not None else None
            pairs = [(a, b) for a, b in pairs if (t1s is None or a in t1s) and (t2s is None or b in t2s)]
            if not pairs:
                raise UsageError(f"no 0 <= t1 <= t2 < s={s} matches --t1/--t2")
        out += [marc.marc_integral(t1, t2, s, sup=sup) for t1, t2 in pairs]
    if {4, 5} <= set(ss) and {6, 7} & set(ss):
        out.append(marc.marc_stability(out, late=tuple(sorted({6, 7} & set(ss)))))
    return out


def run_b1b2(p, cfg):
    s_max = _int(p, "s_max")
    if not 1 <= s_max <= 6:
        raise UsageError(f"--s-max must be in [1, 6], got {s_max}")
    return marc.b1b2_check(s_max)


def run_decompose(p, cfg):
    n_max, m = _int(p, "n_max"), _int(p, "resolution")
    if not 1 <= n_max <= 1 << m or m > 10:
        raise UsageError(f"need 1 <= n-max <= 2^resolution and resolution <= 10, got {n_max}, {m}")
    return [maximal.tiling_check(n_max, m)]


def run_supparts(p, cfg):
    a = _int(p, "a")
    A_range = _ints(p, "A_range")
    if min(A_range) < a or max(A_range) > 8:
        raise UsageError("need a <= A <= 8 for every A in --A-range")
    variant = p.get("variant") or "all"
    variants = maximal.VARIANTS if variant == "all" else (variant,)
    if any(v not in maximal.VARIANTS for v in variants):
        raise UsageError(f"--variant must be one of {maximal.VARIANTS + ('all',)}")
    out = []
    for v in variants:
        out += maximal.sup_kernel_parts(a, A_range, v)
    for A in sorted(set(A_range)):
        out.append(maximal.reversal_term_check(A))
    return out


def run_yano(p, cfg):
    out = []
    for s in _ints(p, "s"):
        t1s = _ints(p, "t1") if p.get("t1") is not None else range(s)
        for t1 in t1s:
            if not 0 <= t1 < s <= 12:
                raise UsageError(f"need 0 <= t1 < s <= 12, got t1={t1}, s={s}")
            out.append(maximal.yano_check(t1, s))
    return out


def run_mem(p, cfg):
    out = []
    N = _int(p, "N")
    for A in _ints(p, "A"):
        for t1 in _ints(p, "t1") if p.get("t1") is not None else range(A + 1):
            if not (0 <= t1 <= A and N >= 1 << A and N <= 1 << 14):
                raise UsageError(f"need t1 <= A, 2^A <= N <= 2^14, got t1={t1}, A={A}, N={N}")
            out.append(maximal.mem_maximal_check(t1, A, N))
    return out


def run_supkernel(p, cfg):
    N = _int(p, "N")
    if N > maximal.MAX_TRI_N:
        raise UsageError(f"--N is capped at {maximal.MAX_TRI_N}")
    out = []
    for a in _ints(p, "a"):
        if a < 0 or (a > 0 and N < 1 << a):
            raise UsageError(f"need a >= 0 and N >= 2^a, got a={a}, N={N}")
        marks = [1 << k for k in range(a, 10) if 1 << k <= N]
        rows = maximal.sup_tri_kernel_integral(a, N, marks)
        out += rows
        if a > 0 and len(rows) > 1:
            out.append(maximal.supkernel_trend(rows))
    return out


def run_l1(p, cfg):
    lo, hi = _int(p, "n_min"), _int(p, "n_max")
    if not 1 <= lo <= hi <= maximal.MAX_TRI_N:
        raise UsageError(f"need 1 <= n-min <= n-max <= {maximal.MAX_TRI_N}")
    rows = maximal.l1_table(range(lo, hi + 1))
    if lo <= 32 and hi >= 512:
        rows.append(maximal.l1_trend(rows))
    return rows


def run_quasi(p, cfg):
    a, N = _int(p, "a"), _int(p, "N")
    m = _int(p, "resolution")
    if not 0 <= a <= m <= 8 or N < 1 or N > 1024:
        raise UsageError(f"need 0 <= a <= resolution <= 8 and 1 <= N <= 1024, got a={a}, m={m}, N={N}")
    marks = [1 << k for k in range(11) if 1 << k <= N]
    if p.get("f"):
        fs = [(p["f"], parse_test_function(p["f"], m).grid)]
    else:
        count = _int(p, "functions")
        fs = [(f"mean-zero-random:{cfg.seed + i}:{m}:{a}", random_function(cfg.seed + i, m, mean_zero=True, support=a).grid)
              for i in range(count)]
    out = []
    for name, f in fs:
        rows = experiments.quasi_locality_check(f, a, N, checkpoints=marks)
        for r in rows:
            r.params = {"f": name, **r.params}
        out += rows
    return out


def run_converge(p, cfg):
    ns = _ints(p, "n_list")
    norm = p.get("norm") or "L1"
    if norm not in experiments.NORMS:
        raise UsageError(f"--norm must be one of {experiments.NORMS}")
    text = _p(p, "f")
    m = p.get("resolution")
    f = parse_test_function(text, None if m is None else int(m))
    rows = experiments.convergence_experiment(f.grid, ns, norm, text)
    # strict decrease is only claimed for the L1 error
    if norm == "L1" and len(rows) > 1 and ns == sorted(ns):
        rows.append(experiments.strictly_decreasing(rows))
    return rows


_RANGE = dict(type=str)
_INT = dict(type=int)

COMMANDS: dict[str, Command] = {
    "identities": Command(
        "exact kernel and operator identities",
        (_arg("--n-max", default="32", **_RANGE), _arg("--resolution", default="6", **_RANGE)),
        run_identities, {"n_max": "32", "resolution": "6"}),
    "delta1": Command(
        "integral of sup_n |2^-A sum_k w_k(x1) w_(k+n)(x2)|",
        (_arg("--A", default="3", **_RANGE),),
        run_delta1, {"A": "0..8"}),
    "quadruples": Command(
        "count index quadruples satisfying the carry identity",
        (_arg("--A", default="4", **_RANGE),
         _arg("--moments", action=argparse.BooleanOptionalAction, default=None)),
        run_quadruples, {"A": "0..8"}),
    "patterns": Command(
        "block-pattern exclusion",
        (_arg("--A", default="8", **_RANGE),),
        run_patterns, {"A": "8"}),
    "corf": Command(
        "integral of the maximal function F_{t2,s}",
        (_arg("--t2", default=None, **_RANGE), _arg("--s", default="4", **_RANGE),
         _arg("--low-bits", default=0, **_INT)),
        run_corf, {"s": "1..7"}),
    "marc": Command(
        "integral over J_t1 x J_t2 of sup_n |sum_k D_k(x1) D_(n+k)(x2)|",
        (_arg("--t1", default=None, **_RANGE), _arg("--t2", default=None, **_RANGE),
         _arg("--s", default="4", **_RANGE)),
        run_marc, {"s": "1..7"}),
    "b1b2": Command(
        "additivity of the B1/B2 split",
        (_arg("--s-max", default="4", **_RANGE),),
        run_b1b2, {"s_max": "4"}),
    "decompose": Command(
        "digit-block tiling of n K_n^tri",
        (_arg("--n-max", default="64", **_RANGE), _arg("--resolution", default="7", **_RANGE)),
        run_decompose, {"n_max": "64", "resolution": "7"}),
    "supparts": Command(
        "truncated maximal integrals over the three digit ranges",
        (_arg("--a", default="1", **_RANGE), _arg("--A-range", dest="A_range", default="1..3", **_RANGE),
         _arg("--variant", default="all", choices=maximal.VARIANTS + ("all",))),
        run_supparts, {"a": "1", "A_range": "1..5"}),
    "yano": Command(
        "support of K_(2^s) on J_t1",
        (_arg("--t1", default=None, **_RANGE), _arg("--s", default="4", **_RANGE)),
        run_yano, {"s": "1..8"}),
    "mem": Command(
        "integral over J_t1 of max_{2^A <= n <= N} |K_n|",
        (_arg("--t1", default=None, **_RANGE), _arg("--A", default="4", **_RANGE),
         _arg("--N", default="64", **_RANGE)),
        run_mem, {"A": "0..6", "N": "256"}),
    "supkernel": Command(
        "truncated maximal triangular kernel outside I_a x I_a",
        (_arg("--a", default="1", **_RANGE), _arg("--N", default="64", **_RANGE)),
        run_supkernel, {"a": "1..3", "N": "512"}),
    "l1-table": Command(
        "exact L1 norms of K_n^tri",
        (_arg("--n-min", default="2", **_RANGE), _arg("--n-max", default="64", **_RANGE)),
        run_l1, {"n_min": "2", "n_max": "512"}),
    "quasi": Command(
        "quasi-locality of the truncated maximal operator",
        (_arg("--a", default="2", **_RANGE), _arg("--N", default="64", **_RANGE),
         _arg("--resolution", default="5", **_RANGE), _arg("--functions", default="3", **_RANGE),
         _arg("--f", default=None, type=str)),
        run_quasi, {"functions": "10", "N": "256"}),
    "converge": Command(
        "exact errors of the triangular means",
        (_arg("--f", default="indicator:1:1:0:0", type=str), _arg("--n-list", default="4,8,16,32", **_RANGE),
         _arg("--norm", default="L1", choices=experiments.NORMS), _arg("--resolution", default=None, **_INT)),
        run_converge, {"n_list": "4,8,16,32,64,128,256"}),
}


# ----------------------------------------------------------------------------
# output


def render(rows: list[LemmaReport], fmt: str, timing: bool = False) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow(r.row(timing))
        return buf.getvalue()
    return json.dumps([r.to_json(timing) for r in rows], indent=2, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def exit_status(rows: list[LemmaReport]) -> int:
    return 1 if any(r.verdict is False for r in rows) else 0


def output_path(cfg: RunConfig) -> Path | None:
    if cfg.output:
        return Path(cfg.output)
    base = os.environ.get(OUT_ENV)
    if base:
        return Path(base) / f"{cfg.subcommand}.{cfg.format}"
    return None


def execute(cfg: RunConfig, stdout=None) -> int:
    """Run one configuration and write its report; returns the exit status."""
    cmd = COMMANDS[cfg.subcommand]
    params = {**cfg.params, **(cmd.sweep if cfg.sweep else {})}
    rows = cmd.run(params, cfg)
    text = render(rows, cfg.format, cfg.timing)
    path = output_path(cfg)
    if path is None:
        (stdout or sys.stdout).write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return exit_status(rows)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--format", choices=FORMATS, default="csv")
    common.add_argument("--output", default=None, help=f"output file (default: ${OUT_ENV}/<cmd>.<fmt> or stdout)")
    common.add_argument("--seed", type=int, default=0, help="base seed for random test functions")
    common.add_argument("--sweep", action="store_true", help="expand to the default parameter grid")
    common.add_argument("--timing", action="store_true", help="fill the ms column (output then varies by run)")

    parser = _Parser(prog="walshtri", description="Exact checks for two-dimensional Walsh-Fourier kernels.")
    parser.add_argument("--config", default=None, help="JSON run file with a list of runs")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    for name, cmd in COMMANDS.items():
        sp = sub.add_parser(name, help=cmd.help, parents=[common])
        for flag, kw in cmd.arguments:
            sp.add_argument(flag, **kw)
    return parser


_COMMON_KEYS = ("threads", "format", "output", "seed", "sweep", "timing")


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    d.pop("config", None)
    name = d.pop("subcommand")
    opts = {k: d.pop(k) for k in _COMMON_KEYS}
    return RunConfig(name, d, **opts)


def load_config_file(path: str) -> list[RunConfig]:
    """``{"defaults": {...}, "runs": [{"subcommand": ..., "params": {...}}, ...]}`` or a bare list."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    runs = data if isinstance(data, list) else data.get("runs", [])
    defaults = {} if isinstance(data, list) else data.get("defaults", {})
    if not runs:
        raise UsageError("config lists no runs")
    out = []
    for entry in runs:
        merged = {**defaults, **entry}
        merged["params"] = _with_defaults(merged["subcommand"], {**defaults.get("params", {}), **entry.get("params", {})}) \
            if merged.get("subcommand") in COMMANDS else entry.get("params", {})
        out.append(RunConfig.from_dict(merged))
    return out


def _with_defaults(name: str, params: dict) -> dict:
    parser = build_parser()
    ns = parser.parse_args([name])
    base = config_from_args(ns).params
    unknown = set(params) - set(base)
    if unknown:
        raise UsageError(f"{name}: unknown parameters {sorted(unknown)}")
    return {**base, **params}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        ns = build_parser().parse_args(argv)
        if ns.config:
            configs = load_config_file(ns.config)
        elif ns.subcommand is None:
            raise UsageError("a subcommand or --config is required")
        else:
            configs = [config_from_args(ns)]
        status = 0
        for cfg in configs:
            status = max(status, execute(cfg))
        return status
    except (UsageError, ResolutionError, ValueError) as exc:
        print(f"walshtri: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
