"""Exact piecewise-constant functions on I and I^2 and their Walsh transforms.

A :class:`Grid` stores integer cell values over one shared positive
denominator.  All arithmetic is integer arithmetic: int64 while the worst-case
magnitude provably fits, Python integers (object arrays) beyond that.  Nothing
in this module ever touches a float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .dyadic import bit_reverse_indices

# headroom below 2**63 for one extra addition
INT64_LIMIT = 1 << 62


class ResolutionError(ValueError):
    pass


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.max(np.abs(a)))


def exact_array(values, bound: int | None = None) -> np.ndarray:
    """Integer array in int64 if ``bound`` (default: max |value|) fits, else object."""
    a = np.asarray(values)
    if a.dtype == object:
        if bound is None:
            bound = _max_abs(a)
        if bound < INT64_LIMIT:
            return a.astype(np.int64)
        return a
    if a.dtype.kind not in "iub":
        raise TypeError(f"grid values must be integers, got dtype {a.dtype}")
    a = a.astype(np.int64, copy=False)
    if bound is not None and bound >= INT64_LIMIT:
        return a.astype(object)
    return a


def widen_for(a: np.ndarray, factor: int) -> np.ndarray:
    """Switch to arbitrary precision if ``max|a| * factor`` could leave int64."""
    if a.dtype != object and _max_abs(a) * factor >= INT64_LIMIT:
        return a.astype(object)
    return a


def _gcd_all(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return reduce(math.gcd, (int(v) for v in a.ravel()), 0)
    return int(np.gcd.reduce(a.ravel()))


def _log2_len(n: int) -> int:
    m = n.bit_length() - 1
    if n != 1 << m:
        raise ResolutionError(f"axis length {n} is not a power of two")
    return m


def fwht(values: np.ndarray, axes: Sequence[int] | None = None) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform (natural order) along ``axes``."""
    a = np.asarray(values)
    if axes is None:
        axes = range(a.ndim)
    axes = list(axes)
    total = sum(_log2_len(a.shape[ax]) for ax in axes)
    a = widen_for(exact_array(a), 1 << total).copy()
    for ax in axes:
        a = np.ascontiguousarray(np.moveaxis(a, ax, -1))
        n = a.shape[-1]
        h = 1
        while h < n:
            v = a.reshape(a.shape[:-1] + (n // (2 * h), 2, h))
            lo = v[..., 0, :].copy()
            hi = v[..., 1, :]
            v[..., 0, :] += hi
            v[..., 1, :] = lo - hi
            h *= 2
        a = np.moveaxis(a, -1, ax)
    return a


def _permute_cells(a: np.ndarray) -> np.ndarray:
    for ax in range(a.ndim):
        rev = bit_reverse_indices(_log2_len(a.shape[ax]))
        a = np.take(a, rev, axis=ax)
    return a


def paley_analysis(values: np.ndarray) -> np.ndarray:
    """``P[j] = sum_c v[c] w_j(c)`` for every Walsh-Paley index ``j`` (all axes)."""
    return fwht(_permute_cells(np.asarray(values)))


def paley_synthesis(coeffs: np.ndarray) -> np.ndarray:
    """``g[c] = sum_j a[j] w_j(c)``; inverse of :func:`paley_analysis` up to ``2**(m*ndim)``."""
    return _permute_cells(fwht(coeffs))


@dataclass(frozen=True, eq=False)
class Grid:
    """Function ``cell -> values[cell] / denominator`` on ``I`` or ``I^2``."""

    values: np.ndarray
    denominator: int = 1

    def __post_init__(self):
        vals = exact_array(self.values)
        if vals.ndim not in (1, 2):
            raise ResolutionError("only one- and two-dimensional grids are supported")
        _log2_len(vals.shape[0])
        if any(s != vals.shape[0] for s in vals.shape):
            raise ResolutionError(f"two-dimensional grids must be square, got {vals.shape}")
        d = int(self.denominator)
        if d <= 0:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "denominator", d)

    # -- construction -------------------------------------------------------

    @classmethod
    def zeros(cls, m: int, ndim: int = 1) -> "Grid":
        return cls(np.zeros((1 << m,) * ndim, dtype=np.int64))

    @classmethod
    def constant(cls, c, m: int, ndim: int = 1) -> "Grid":
        c = Fraction(c)
        return cls(np.full((1 << m,) * ndim, c.numerator, dtype=np.int64), c.denominator)

    @classmethod
    def from_fractions(cls, values) -> "Grid":
        arr = np.asarray(values, dtype=object)
        fr = [Fraction(v) for v in arr.ravel()]
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
        nums = np.array([f.numerator * (den // f.denominator) for f in fr], dtype=object)
        return cls(nums.reshape(arr.shape), den).reduced()

    @classmethod
    def outer(cls, g1: "Grid", g2: "Grid") -> "Grid":
        """Tensor product ``g1(x1) * g2(x2)``."""
        if g1.ndim != 1 or g2.ndim != 1:
            raise ResolutionError("outer product takes two one-dimensional grids")
        if g1.resolution != g2.resolution:
            raise ResolutionError("outer product needs equal resolutions")
        bound = _max_abs(g1.values) * _max_abs(g2.values)
        a = exact_array(g1.values, bound)
        b = exact_array(g2.values, bound)
        return cls(np.multiply.outer(a, b), g1.denominator * g2.denominator)

    # -- shape --------------------------------------------------------------

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def resolution(self) -> int:
        return _log2_len(self.values.shape[0])

    @property
    def cell_count(self) -> int:
        return self.values.size

    # -- values -------------------------------------------------------------

    def at(self, *cell: int) -> Fraction:
        return Fraction(int(self.values[cell]), self.denominator)

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.values.shape, dtype=object)
        for idx, v in np.ndenumerate(self.values):
            out[idx] = Fraction(int(v), self.denominator)
        return out

    def reduced(self) -> "Grid":
        g = math.gcd(_gcd_all(self.values), self.denominator)
        if g <= 1:
            return self
        return Grid(self.values // g, self.denominator // g)

    def refine(self, m: int) -> "Grid":
        """Same function sampled on the finer resolution ``m``."""
        if m < self.resolution:
            raise ResolutionError(f"cannot refine resolution {self.resolution} down to {m}")
        rep = 1 << (m - self.resolution)
        v = self.values
        for ax in range(self.ndim):
            v = np.repeat(v, rep, axis=ax)
        return Grid(v, self.denominator)

    def coarsen(self, m: int) -> "Grid":
        """Inverse of :meth:`refine`; the grid must be constant on the coarse cells."""
        if m > self.resolution:
            raise ResolutionError("coarsen target is finer than the grid")
        step = 1 << (self.resolution - m)
        v = self.values[(slice(None, None, step),) * self.ndim]
        if Grid(v, self.denominator).refine(self.resolution) != self:
            raise ResolutionError(f"grid is not constant on resolution-{m} cells")
        return Grid(v, self.denominator)

    def _aligned(self, other: "Grid") -> tuple["Grid", "Grid"]:
        if self.ndim != other.ndim:
            raise ResolutionError("dimension mismatch")
        m = max(self.resolution, other.resolution)
        return self.refine(m), other.refine(m)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        if self.ndim != other.ndim or self.resolution != other.resolution:
            return False
        a = exact_array(self.values, _max_abs(self.values) * other.denominator)
        b = exact_array(other.values, _max_abs(other.values) * self.denominator)
        return bool(np.array_equal(a * other.denominator, b * self.denominator))

    __hash__ = None

    def same_function(self, other: "Grid") -> bool:
        """Equality after bringing both grids to a common resolution."""
        a, b = self._aligned(other)
        return a == b

    def _combine(self, other: "Grid", sign: int) -> "Grid":
        a, b = self._aligned(other)
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        fa, fb = d // a.denominator, d // b.denominator
        bound = _max_abs(a.values) * fa + _max_abs(b.values) * fb
        va = exact_array(a.values, bound)
        vb = exact_array(b.values, bound)
        return Grid(va * fa + sign * (vb * fb), d).reduced()

    def __add__(self, other: "Grid") -> "Grid":
        return self._combine(other, 1)

    def __sub__(self, other: "Grid") -> "Grid":
        return self._combine(other, -1)

    def __neg__(self) -> "Grid":
        return Grid(-self.values, self.denominator)

    def __abs__(self) -> "Grid":
        return Grid(np.abs(self.values), self.denominator)

    def scale(self, q) -> "Grid":
        q = Fraction(q)
        bound = _max_abs(self.values) * abs(q.numerator)
        v = exact_array(self.values, bound) * q.numerator
        return Grid(v, self.denominator * q.denominator).reduced()

    def __mul__(self, other: "Grid") -> "Grid":
        a, b = self._aligned(other)
        bound = _max_abs(a.values) * _max_abs(b.values)
        return Grid(
            exact_array(a.values, bound) * exact_array(b.values, bound),
            a.denominator * b.denominator,
        ).reduced()

    def integral(self) -> Fraction:
        return Fraction(_sum(self.values), self.denominator * self.cell_count)

    def max_abs(self) -> Fraction:
        return Fraction(_max_abs(self.values), self.denominator)

    def lp_norm1(self) -> Fraction:
        return Fraction(_sum(np.abs(self.values)), self.denominator * self.cell_count)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __repr__(self) -> str:
        return f"Grid(m={self.resolution}, ndim={self.ndim}, denominator={self.denominator})"


def _sum(a: np.ndarray) -> int:
    if a.dtype == object:
        return int(sum(int(v) for v in a.ravel()))
    # int64 sums cannot overflow when every value is below 2**62 / size
    if _max_abs(a) * a.size >= INT64_LIMIT:
        return int(sum(int(v) for v in a.ravel()))
    return int(a.sum())


# ----------------------------------------------------------------------------
# spectra


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Walsh-Paley coefficients ``values[j] / denominator`` indexed by frequency."""

    values: np.ndarray
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "values", exact_array(self.values))
        if int(self.denominator) <= 0:
            raise ValueError("denominator must be positive")
        object.__setattr__(self, "denominator", int(self.denominator))

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def resolution(self) -> int:
        return _log2_len(self.values.shape[0])

    def coefficient(self, *index: int) -> Fraction:
        return Fraction(int(self.values[index]), self.denominator)

    def to_fractions(self) -> np.ndarray:
        return Grid(self.values, self.denominator).to_fractions()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return Grid(self.values, self.denominator) == Grid(other.values, other.denominator)

    __hash__ = None

    def multiply(self, weights: np.ndarray, weight_denominator: int = 1) -> "Spectrum":
        """Pointwise multiplier ``coefficient * weights / weight_denominator``."""
        w = exact_array(weights)
        bound = _max_abs(self.values) * _max_abs(w)
        v = exact_array(self.values, bound) * exact_array(w, bound)
        return Spectrum(v, self.denominator * int(weight_denominator))

    def __mul__(self, other: "Spectrum") -> "Spectrum":
        return self.multiply(other.values, other.denominator)


def fwht_forward(f: Grid) -> Spectrum:
    """Exact Walsh-Paley coefficients ``f^(j) = integral of f * w_j``."""
    p = paley_analysis(f.values)
    return Spectrum(p, f.denominator * f.cell_count)


def fwht_inverse(spec: Spectrum) -> Grid:
    """The Walsh polynomial with the given coefficients, as a grid."""
    return Grid(paley_synthesis(spec.values), spec.denominator).reduced()


def xor_convolve(f: Grid, g: Grid) -> Grid:
    """``(f*g)(y) = integral f(x + y) g(x) dx`` with ``+`` the dyadic sum."""
    if f.ndim != g.ndim or f.resolution != g.resolution:
        raise ResolutionError(
            f"convolution needs equal shapes, got {f.values.shape} and {g.values.shape}"
        )
    pf = paley_analysis(f.values)
    pg = paley_analysis(g.values)
    bound = _max_abs(pf) * _max_abs(pg)
    prod = exact_array(pf, bound) * exact_array(pg, bound)
    raw = paley_synthesis(prod)
    size = f.cell_count
    # raw = size * sum_x f[x+y] g[x] in numerator units
    if raw.dtype == object:
        assert all(int(v) % size == 0 for v in raw.ravel())
    else:
        assert not np.any(raw % size)
    return Grid(raw // size, f.denominator * g.denominator * size).reduced()


# ----------------------------------------------------------------------------
# rational grids (suprema over families with different denominators)


@dataclass(frozen=True, eq=False)
class RationalGrid:
    """Per-cell rationals ``num[c] / den[c]`` with positive denominators."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "num", exact_array(self.num))
        object.__setattr__(self, "den", exact_array(self.den))
        if self.num.shape != self.den.shape:
            raise ValueError("numerator and denominator shapes differ")

    @classmethod
    def from_grid(cls, g: Grid) -> "RationalGrid":
        den = np.full(g.values.shape, g.denominator, dtype=np.int64 if g.denominator < INT64_LIMIT else object)
        return cls(g.values.copy(), den)

    @property
    def ndim(self) -> int:
        return self.num.ndim

    @property
    def resolution(self) -> int:
        return _log2_len(self.num.shape[0])

    def at(self, *cell: int) -> Fraction:
        return Fraction(int(self.num[cell]), int(self.den[cell]))

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.num.shape, dtype=object)
        for idx, v in np.ndenumerate(self.num):
            out[idx] = Fraction(int(v), int(self.den[idx]))
        return out

    def _masked(self, mask) -> tuple[np.ndarray, np.ndarray]:
        if mask is None:
            return self.num.ravel(), self.den.ravel()
        return self.num[mask], self.den[mask]

    def sum(self, mask=None) -> Fraction:
        """Exact sum of the cell values (optionally over a boolean mask)."""
        num, den = self._masked(mask)
        total = Fraction(0)
        for d in np.unique(den):
            total += Fraction(_sum(num[den == d]), int(d))
        return total

    def integral(self, mask=None) -> Fraction:
        return self.sum(mask) / self.num.size

    def max(self) -> Fraction:
        best = None
        for d in np.unique(self.den):
            cand = Fraction(int(np.max(self.num[self.den == d])), int(d))
            best = cand if best is None or cand > best else best
        return best

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalGrid):
            return NotImplemented
        if self.num.shape != other.num.shape:
            return False
        bound = max(_max_abs(self.num) * _max_abs(other.den), _max_abs(other.num) * _max_abs(self.den))
        a = exact_array(self.num, bound) * exact_array(other.den, bound)
        b = exact_array(other.num, bound) * exact_array(self.den, bound)
        return bool(np.array_equal(a, b))

    __hash__ = None

    def equals_grid(self, g: Grid) -> bool:
        return self == RationalGrid.from_grid(g)


def pointwise_abs_max(acc, g, g_denominator_override: int | None = None) -> RationalGrid:
    """Cellwise ``max(|acc|, |g|)`` compared exactly by cross-multiplication.

    ``acc`` may be ``None`` (start of a running maximum), a :class:`Grid` or a
    :class:`RationalGrid`.  ``g`` may be a grid or a raw integer array whose
    denominator is given by ``g_denominator_override``.
    """
    if isinstance(g, Grid):
        gv, gd = g.values, g.denominator if g_denominator_override is None else g_denominator_override
    else:
        if g_denominator_override is None:
            raise ValueError("raw arrays need g_denominator_override")
        gv, gd = exact_array(g), g_denominator_override
    gv = np.abs(gv)
    if acc is None:
        return RationalGrid(gv, np.full(gv.shape, gd, dtype=np.int64))
    if isinstance(acc, Grid):
        acc = RationalGrid.from_grid(acc)
    if acc.num.shape != gv.shape:
        raise ResolutionError(f"shape mismatch {acc.num.shape} vs {gv.shape}")
    an = np.abs(acc.num)
    bound = max(_max_abs(an) * gd, _max_abs(gv) * _max_abs(acc.den))
    an_w, ad_w, gv_w = exact_array(an, bound), exact_array(acc.den, bound), exact_array(gv, bound)
    take_g = gv_w * ad_w > an_w * gd
    num = np.where(take_g, gv_w, an_w)
    den = np.where(take_g, gd, acc.den)
    return RationalGrid(num, den)


# ----------------------------------------------------------------------------
# regions


Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Region:
    """Finite union of pairwise disjoint boxes ``prod [lo_i, hi_i)`` in ``I^ndim``."""

    boxes: tuple[tuple[Interval, ...], ...]
    ndim: int = field(default=1)

    @staticmethod
    def _iv(lo, hi) -> Interval:
        lo, hi = Fraction(lo), Fraction(hi)
        if not 0 <= lo <= hi <= 1:
            raise ValueError(f"bad interval [{lo}, {hi})")
        return lo, hi

    @classmethod
    def box(cls, *intervals) -> "Region":
        ivs = tuple(cls._iv(lo, hi) for lo, hi in intervals)
        return cls((ivs,), len(ivs))

    @classmethod
    def full(cls, ndim: int = 1) -> "Region":
        return cls.box(*[(0, 1)] * ndim)

    @classmethod
    def dyadic_interval(cls, order: int, prefix: int = 0) -> "Region":
        """``I_order(x)`` with ``prefix`` the first ``order`` digits of x."""
        w = Fraction(1, 1 << order)
        return cls.box((prefix * w, (prefix + 1) * w))

    @classmethod
    def j_shell(cls, k: int) -> "Region":
        """``J_k = [2**-(k+1), 2**-k)``."""
        return cls.box((Fraction(1, 1 << (k + 1)), Fraction(1, 1 << k)))

    def __mul__(self, other: "Region") -> "Region":
        boxes = tuple(a + b for a in self.boxes for b in other.boxes)
        return Region(boxes, self.ndim + other.ndim)

    def __or__(self, other: "Region") -> "Region":
        """Union; the caller guarantees disjointness."""
        if self.ndim != other.ndim:
            raise ValueError("dimension mismatch")
        return Region(self.boxes + other.boxes, self.ndim)

    def complement(self) -> "Region":
        """Complement of a single box, as disjoint boxes."""
        if len(self.boxes) != 1:
            raise NotImplementedError("complement is implemented for single boxes")
        (box,) = self.boxes
        out = []
        for ax, (lo, hi) in enumerate(box):
            rest = [iv for iv in ((Fraction(0), lo), (hi, Fraction(1))) if iv[0] < iv[1]]
            for iv in rest:
                out.append(box[:ax] + (iv,) + tuple((Fraction(0), Fraction(1)) for _ in box[ax + 1:]))
        return Region(tuple(out), self.ndim)

    def measure(self) -> Fraction:
        total = Fraction(0)
        for b in self.boxes:
            total += math.prod((hi - lo for lo, hi in b), start=Fraction(1))
        return total

    def slices(self, m: int) -> list[tuple[slice, ...]]:
        size = 1 << m
        out = []
        for b in self.boxes:
            sl = []
            for lo, hi in b:
                a, z = lo * size, hi * size
                if a.denominator != 1 or z.denominator != 1:
                    raise ResolutionError(f"interval [{lo}, {hi}) is not aligned to resolution {m}")
                sl.append(slice(int(a), int(z)))
            out.append(tuple(sl))
        return out

    def mask(self, m: int) -> np.ndarray:
        out = np.zeros((1 << m,) * self.ndim, dtype=bool)
        for sl in self.slices(m):
            if out[sl].any():
                raise ValueError("region boxes overlap")
            out[sl] = True
        return out


def outside_square(a: int, prefix1: int = 0, prefix2: int = 0) -> Region:
    """``I^2`` minus ``I_a(u1) x I_a(u2)``."""
    sq = Region.dyadic_interval(a, prefix1) * Region.dyadic_interval(a, prefix2)
    if a == 0:
        return Region((), 2)
    return sq.complement()


def j_rectangles_outside_square(a: int, m: int) -> list[tuple[int, int, Region]]:
    """``I^2`` minus ``I_a x I_a`` tiled by ``J_t1 x J_t2`` pieces at resolution ``m``.

    The tail ``I_m`` (the cell at 0) plays the role of ``J_t`` for ``t >= m`` and
    is labelled ``t = m``.
    """
    if a > m:
        raise ResolutionError("square finer than the grid")
    pieces = [(t, Region.j_shell(t)) for t in range(m)] + [(m, Region.dyadic_interval(m, 0))]
    out = []
    for t1, p in pieces:
        for t2, q in pieces:
            if t1 < a or t2 < a:
                out.append((t1, t2, p * q))
    return out


def integrate(f, region: Region | None = None) -> Fraction:
    """Exact integral of a grid (or rational grid) over a region (default: everything)."""
    if region is None:
        return f.integral()
    if region.ndim != f.ndim:
        raise ValueError("region and grid dimensions differ")
    m = f.resolution
    if isinstance(f, RationalGrid):
        return f.integral(region.mask(m))
    total = 0
    for sl in region.slices(m):
        total += _sum(f.values[sl])
    return Fraction(total, f.denominator * f.cell_count)


# ----------------------------------------------------------------------------
# snapshot text format


def dumps(g: Grid) -> str:
    m = g.resolution
    head = f"{m}" if g.ndim == 1 else f"{m} {m}"
    lines = [head, str(g.denominator)]
    if g.ndim == 1:
        lines += [str(int(v)) for v in g.values]
    else:
        lines += [" ".join(str(int(v)) for v in row) for row in g.values]
    return "\n".join(lines) + "\n"


def loads(text: str) -> Grid:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    m = int(head[0])
    ndim = len(head)
    den = int(lines[1])
    vals = [int(tok) for ln in lines[2:] for tok in ln.split()]
    arr = np.array(vals, dtype=object).reshape((1 << m,) * ndim)
    return Grid(arr, den)


def grid_from_cells(values: Iterable[Iterable[int]], denominator: int = 1) -> Grid:
    return Grid(np.array(values, dtype=np.int64), denominator)
