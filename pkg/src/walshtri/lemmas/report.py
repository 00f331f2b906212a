"""Exact report records and the rational over-approximation of delta."""

from __future__ import annotations

import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cached_property

CSV_COLUMNS = (
    "lemma",
    "params",
    "measured_num",
    "measured_den",
    "bound_num",
    "bound_den",
    "ratio_decimal",
    "verdict",
    "ms",
)


def render_decimal(q: Fraction | None, digits: int = 15) -> str:
    """Decimal rendering of an exact rational, marked with ``~`` as a rendering."""
    if q is None:
        return ""
    with localcontext() as ctx:
        ctx.prec = digits
        return "~" + str(Decimal(q.numerator) / Decimal(q.denominator))


@dataclass
class LemmaReport:
    """One exact measurement against one bound expression.

    ``verdict`` is ``True``/``False`` for exact comparisons and ``None`` when the
    row only records a ratio against an expression with a free constant.
    """

    lemma: str
    params: dict
    measured: Fraction
    bound: Fraction | None = None
    verdict: bool | None = None
    note: str = ""
    ms: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Fraction | None:
        if self.bound is None or self.bound == 0:
            return None
        return Fraction(self.measured) / self.bound

    @property
    def verdict_text(self) -> str:
        return {True: "pass", False: "fail", None: "recorded"}[self.verdict]

    def row(self, timing: bool = False) -> dict:
        m = Fraction(self.measured)
        b = self.bound
        return {
            "lemma": self.lemma,
            "params": ";".join(f"{k}={v}" for k, v in self.params.items()),
            "measured_num": str(m.numerator),
            "measured_den": str(m.denominator),
            "bound_num": "" if b is None else str(b.numerator),
            "bound_den": "" if b is None else str(b.denominator),
            "ratio_decimal": render_decimal(self.ratio),
            "verdict": self.verdict_text,
            "ms": f"{self.ms:.1f}" if timing and self.ms is not None else "",
        }

    def to_json(self, timing: bool = False) -> dict:
        out = self.row(timing)
        if self.note:
            out["note"] = self.note
        if self.extra:
            out["extra"] = {k: _json_value(v) for k, v in self.extra.items()}
        return out


def _json_value(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    return v


@contextmanager
def timed(report_holder: list):
    """Fill ``ms`` of every report appended to ``report_holder`` inside the block."""
    start = time.perf_counter()
    yield
    ms = (time.perf_counter() - start) * 1000
    for r in report_holder:
        if r.ms is None:
            r.ms = ms


def _iroot_floor(x: int, k: int) -> int:
    """floor(x ** (1/k)) for a positive integer x."""
    lo, hi = 0, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid ** k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass(frozen=True)
class DeltaConstant:
    """``delta = (base)**(1/root)`` with a rational upper bound on a ``2**-bits`` grid."""

    base: Fraction = Fraction(2**16 - 1, 2**16)
    root: int = 16
    bits: int = 64

    @cached_property
    def upper(self) -> Fraction:
        # smallest U with (U / 2^bits)^root >= base
        scale = 1 << (self.bits * self.root)
        target = self.base * scale
        x = math.floor(target)
        u = _iroot_floor(x, self.root)
        if Fraction(u) ** self.root < target:
            u += 1
        return Fraction(u, 1 << self.bits)

    def power(self, k: int) -> Fraction:
        return self.upper ** k

    def description(self) -> str:
        return f"({self.base})^(1/{self.root}) <= {self.upper}"


DELTA = DeltaConstant()
