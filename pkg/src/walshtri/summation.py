"""Summation operators on two-variable Walsh series.

Every mean is available through two independent routes: dyadic convolution
with its kernel grid, and a Walsh multiplier applied to the exact spectrum.
The triangular multiplier ``max(0, n - i - j - 1) / n`` counts the ``k`` in
``[0, n)`` whose partial sum ``S_{k, n-k}`` still contains frequency ``(i, j)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import kernels
from .dyadic import min_resolution
from .grid import (
    Grid,
    RationalGrid,
    ResolutionError,
    Spectrum,
    fwht_forward,
    fwht_inverse,
    pointwise_abs_max,
    xor_convolve,
)


# ----------------------------------------------------------------------------
# test functions


@dataclass(frozen=True, eq=False)
class TestFunction:
    grid: Grid
    kind: str
    source: str

    __test__ = False  # not a pytest class


def indicator(t1: int, t2: int, c1: int = 0, c2: int = 0, m: int | None = None) -> TestFunction:
    """Indicator of ``I_t1(c1 / 2^t1) x I_t2(c2 / 2^t2)``."""
    if not (0 <= c1 < 1 << t1 and 0 <= c2 < 1 << t2):
        raise ValueError("interval position outside [0, 1)")
    m = max(t1, t2) if m is None else m
    if m < max(t1, t2):
        raise ResolutionError(f"indicator needs resolution >= {max(t1, t2)}")
    v = np.zeros((1 << m, 1 << m), dtype=np.int64)
    w1, w2 = 1 << (m - t1), 1 << (m - t2)
    v[c1 * w1:(c1 + 1) * w1, c2 * w2:(c2 + 1) * w2] = 1
    return TestFunction(Grid(v), "indicator", f"indicator:{t1}:{t2}:{c1}:{c2}")


def walsh_polynomial(terms: Iterable[tuple[int, int, Fraction]], m: int | None = None) -> TestFunction:
    """``sum q * w_i(x1) w_j(x2)`` over ``(i, j, q)`` terms."""
    terms = [(int(i), int(j), Fraction(q)) for i, j, q in terms]
    if not terms:
        raise ValueError("empty polynomial")
    top = max(max(i, j) for i, j, _ in terms)
    m = min_resolution(top + 1) if m is None else m
    size = 1 << m
    if top >= size:
        raise ResolutionError(f"frequency {top} needs resolution > {m}")
    coeffs = np.zeros((size, size), dtype=object)
    for i, j, q in terms:
        coeffs[i, j] += q
    g = Grid.from_fractions(coeffs)
    grid = kernels.kernel_from_coefficients(g.values, g.denominator).reduced()
    src = "poly:" + ";".join(f"{i},{j},{q}" for i, j, q in terms)
    return TestFunction(grid, "walsh-polynomial", src)


def random_function(seed: int, m: int, mean_zero: bool = False, support: int = 0) -> TestFunction:
    """Seeded rational-valued grid with small denominators.

    ``support = a`` confines the function to ``I_a x I_a``; ``mean_zero``
    subtracts the mean inside that square.
    """
    rng = np.random.default_rng(seed)
    den = int(rng.integers(1, 7))
    side = 1 << (m - support)
    block = rng.integers(-9, 10, size=(side, side)).astype(np.int64)
    if mean_zero:
        # scale so the mean is an integer, then subtract it
        block = block * block.size - block.sum()
        den *= block.size
    v = np.zeros((1 << m, 1 << m), dtype=np.int64)
    v[:side, :side] = block
    return TestFunction(Grid(v, den).reduced(), "seeded-random", f"random:{seed}:{m}")


_INDICATOR = re.compile(r"^indicator:(\d+):(\d+):(\d+):(\d+)$")
_RANDOM = re.compile(r"^random:(-?\d+):(\d+)$")


def parse_test_function(text: str, m: int | None = None) -> TestFunction:
    """Parse ``indicator:t1:t2:c1:c2``, ``poly:i,j,q;...`` or ``random:seed:m``."""
    text = text.strip()
    if mt := _INDICATOR.match(text):
        t1, t2, c1, c2 = map(int, mt.groups())
        return indicator(t1, t2, c1, c2, m)
    if mt := _RANDOM.match(text):
        seed, mm = map(int, mt.groups())
        return random_function(seed, mm if m is None else m)
    if text.startswith("poly:"):
        terms = []
        for part in text[5:].split(";"):
            if not part.strip():
                continue
            i, j, q = part.split(",")
            terms.append((int(i), int(j), Fraction(q)))
        return walsh_polynomial(terms, m)
    raise ValueError(f"cannot parse test function {text!r}")


# ----------------------------------------------------------------------------
# operators


def coefficients_2d(f: Grid) -> Spectrum:
    if f.ndim != 2:
        raise ValueError("expected a two-dimensional grid")
    return fwht_forward(f)


def apply_multiplier(f: Grid | Spectrum, weights: np.ndarray, denominator: int = 1) -> Grid:
    """``sum_j f^(j) weights[j] / denominator w_j``."""
    spec = f if isinstance(f, Spectrum) else fwht_forward(f)
    if weights.shape != spec.values.shape:
        raise ResolutionError(f"weights {weights.shape} do not match spectrum {spec.values.shape}")
    return fwht_inverse(spec.multiply(weights, denominator))


def _index_masks(size: int) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(size, dtype=np.int64)
    return j[:, None], j[None, :]


def _check_nonneg(*ns: int) -> None:
    if any(n < 0 for n in ns):
        raise ValueError(f"partial sum indices must be non-negative, got {ns}")


def partial_sum_rect(f: Grid, n1: int, n2: int) -> Grid:
    """``S_{n1,n2} f``: coefficients with ``i < n1`` and ``j < n2``."""
    _check_nonneg(n1, n2)
    i, j = _index_masks(f.values.shape[0])
    return apply_multiplier(f, ((i < n1) & (j < n2)).astype(np.int64))


def partial_sum_tri(f: Grid, k: int) -> Grid:
    """``S_k^tri f``: coefficients with ``i + j <= k - 1``."""
    _check_nonneg(k)
    i, j = _index_masks(f.values.shape[0])
    return apply_multiplier(f, (i + j <= k - 1).astype(np.int64))


def _convolve_with(f: Grid, kernel: Grid) -> Grid:
    m = max(f.resolution, kernel.resolution)
    out = xor_convolve(f.refine(m), kernel.refine(m))
    return out.coarsen(f.resolution) if m > f.resolution else out


def tri_fejer_mean(f: Grid, n: int, method: str = "multiplier") -> Grid:
    """``sigma_n^tri f = (1/n) sum_{k<n} S_{k, n-k} f``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "multiplier":
        return apply_multiplier(f, kernels.tri_weights(n, f.values.shape[0]), n)
    if method == "convolution":
        return _convolve_with(f, kernels.tri_fejer(n, max(f.resolution, min_resolution(n))))
    if method == "direct":
        acc = None
        for k in range(n):
            s = partial_sum_rect(f, k, n - k)
            acc = s if acc is None else acc + s
        return acc.scale(Fraction(1, n))
    raise ValueError(f"unknown method {method!r}")


def fejer_mean_rect(f: Grid, n1: int, n2: int, method: str = "multiplier") -> Grid:
    """``sigma_{n1,n2} f``, the rectangular (C,1) mean."""
    if n1 < 1 or n2 < 1:
        raise ValueError("indices must be >= 1")
    size = f.values.shape[0]
    if method == "multiplier":
        w = np.multiply.outer(kernels.fejer_weights(n1, size), kernels.fejer_weights(n2, size))
        return apply_multiplier(f, w, n1 * n2)
    if method == "convolution":
        m = max(f.resolution, min_resolution(n1), min_resolution(n2))
        return _convolve_with(f, kernels.rect_fejer(n1, n2, m))
    raise ValueError(f"unknown method {method!r}")


def marcinkiewicz_mean(f: Grid, n: int, method: str = "multiplier") -> Grid:
    """``t_n f = (1/n) sum_{k<n} S_{k,k} f``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "multiplier":
        return apply_multiplier(f, kernels.marcinkiewicz_weights(n, f.values.shape[0]), n)
    if method == "convolution":
        return _convolve_with(f, kernels.marcinkiewicz(n, max(f.resolution, min_resolution(n))))
    raise ValueError(f"unknown method {method!r}")


def dyadic_tri_mean(f: Grid, n: int, method: str = "direct") -> Grid:
    """``(1/n) sum_{k<n} S_{k, n xor k} f``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if method == "direct":
        acc = None
        for k in range(n):
            s = partial_sum_rect(f, k, n ^ k)
            acc = s if acc is None else acc + s
        return acc.scale(Fraction(1, n))
    if method == "multiplier":
        return apply_multiplier(f, kernels.dyadic_tri_weights(n, f.values.shape[0]), n)
    if method == "convolution":
        top = max(n ^ k for k in range(n))
        return _convolve_with(f, kernels.dyadic_tri_kernel(n, max(f.resolution, min_resolution(top + 1))))
    raise ValueError(f"unknown method {method!r}")


def conditional_expectation(f: Grid, n) -> Grid:
    """Block average over dyadic (rectangles of) intervals of order ``n``."""
    ns = (n,) * f.ndim if isinstance(n, int) else tuple(n)
    if len(ns) != f.ndim:
        raise ValueError("one order per axis expected")
    m = f.resolution
    if any(k < 0 or k > m for k in ns):
        raise ResolutionError(f"expectation order {ns} outside [0, {m}]")
    v = f.values
    den = f.denominator
    for ax, k in enumerate(ns):
        width = 1 << (m - k)
        shape = v.shape[:ax] + (1 << k, width) + v.shape[ax + 1:]
        block = v.reshape(shape).sum(axis=ax + 1, keepdims=True)
        v = np.repeat(block, width, axis=ax + 1).reshape(v.shape)
        den *= width
    return Grid(v, den).reduced()


_OPERATORS: dict[str, Callable[[Grid, int], Grid]] = {
    "tri": tri_fejer_mean,
    "marcinkiewicz": marcinkiewicz_mean,
    "dyadic-tri": lambda f, n: dyadic_tri_mean(f, n, "multiplier"),
}


def truncated_maximal(f: Grid, index_set: Iterable[int], operator: str = "tri") -> RationalGrid:
    """Cellwise ``max_{n in index_set} |T_n f|`` for a finite index set."""
    ns = sorted(set(index_set))
    if not ns:
        raise ValueError("index set must be non-empty")
    if operator == "tri":
        spec = fwht_forward(f)
        size = f.values.shape[0]

        def op(_f, n):
            return apply_multiplier(spec, kernels.tri_weights(n, size), n)
    else:
        op = _OPERATORS[operator]
    acc = None
    for n in ns:
        acc = pointwise_abs_max(acc, op(f, n))
    return acc


def l1_norm(g: Grid) -> Fraction:
    return g.lp_norm1()


def linf_norm(g: Grid, mask: np.ndarray | None = None) -> Fraction:
    if mask is None:
        return g.max_abs()
    if not mask.any():
        return Fraction(0)
    return Fraction(int(np.max(np.abs(g.values[mask]))), g.denominator)


def continuity_mask(f: Grid, radius: int = 1) -> np.ndarray:
    """Cells whose square neighbourhood of ``radius`` cells sees only one value of f."""
    v = f.values
    size = v.shape[0]
    ok = np.ones(v.shape, dtype=bool)
    padded = np.pad(v, radius, mode="edge")
    for di in range(-radius, radius + 1):
        for dj in range(-radius, radius + 1):
            shifted = padded[radius + di:radius + di + size, radius + dj:radius + dj + size]
            ok &= shifted == v
    return ok
