"""Bit-level arithmetic of the dyadic group.

Integers play the role of Walsh indices; points of [0, 1) are represented at a
finite resolution ``m`` by a cell index ``c`` with ``x = c / 2**m``.  Digit
``x_i`` (the coefficient of ``2**-(i+1)``) is bit ``m - 1 - i`` of ``c``, so the
most significant bit of the cell index is ``x_0``.  Dyadic rationals therefore
always get the expansion terminating in zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def dyadic_add(a: int, b: int) -> int:
    """Digitwise sum mod 2 of two naturals (the group operation of indices)."""
    if a < 0 or b < 0:
        raise ValueError("dyadic addition is defined on naturals only")
    return a ^ b


def bit(n: int, i: int) -> int:
    return (n >> i) & 1


def low_part(n: int, k: int) -> int:
    """Keep bits ``0..k`` inclusive of ``n``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return n & ((1 << (k + 1)) - 1)


def high_part(n: int, k: int) -> int:
    """Keep bits ``>= k`` of ``n``."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return (n >> k) << k


def order(n: int) -> int:
    """Index of the leading binary digit, ``2**order(n) <= n < 2**(order(n)+1)``."""
    if n < 1:
        raise ValueError(f"order is undefined for n={n}")
    return n.bit_length() - 1


def min_resolution(n_indices: int) -> int:
    """Smallest resolution on which Walsh functions with index < ``n_indices`` are cell-constant."""
    return order(max(n_indices - 1, 1)) + 1


@dataclass(frozen=True)
class DyadicPoint:
    resolution: int
    cell: int

    def __post_init__(self):
        if self.resolution < 0:
            raise ValueError("resolution must be non-negative")
        if not 0 <= self.cell < (1 << self.resolution):
            raise ValueError(f"cell {self.cell} outside [0, 2**{self.resolution})")

    @classmethod
    def from_fraction(cls, x: Fraction, resolution: int) -> "DyadicPoint":
        """The cell of resolution ``resolution`` containing ``x``."""
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError("point must lie in [0, 1)")
        return cls(resolution, int(x * (1 << resolution)))

    def digit(self, i: int) -> int:
        if i < 0:
            raise ValueError("digit index must be >= 0")
        if i >= self.resolution:
            return 0
        return (self.cell >> (self.resolution - 1 - i)) & 1

    def value(self) -> Fraction:
        return Fraction(self.cell, 1 << self.resolution)

    def __xor__(self, other: "DyadicPoint") -> "DyadicPoint":
        if self.resolution != other.resolution:
            raise ValueError("dyadic sum needs equal resolutions")
        return DyadicPoint(self.resolution, self.cell ^ other.cell)


def e_point(i: int, resolution: int) -> DyadicPoint:
    """The point ``1 / 2**(i+1)``: digit ``i`` is one, all others zero."""
    if i >= resolution:
        raise ValueError(f"e_{i} is not representable at resolution {resolution}")
    return DyadicPoint(resolution, 1 << (resolution - 1 - i))


@dataclass(frozen=True)
class DyadicInterval:
    """``I_n(x)``: points sharing the first ``order`` digits with ``center``."""

    order: int
    center: DyadicPoint

    def contains(self, y: DyadicPoint) -> bool:
        return all(y.digit(i) == self.center.digit(i) for i in range(self.order))

    def bounds(self) -> tuple[Fraction, Fraction]:
        prefix = 0
        for i in range(self.order):
            prefix = 2 * prefix + self.center.digit(i)
        return Fraction(prefix, 1 << self.order), Fraction(prefix + 1, 1 << self.order)


def rademacher(i: int, x: DyadicPoint) -> int:
    """``r_i(x) = (-1)**x_i``; digits beyond the resolution are zero, giving +1."""
    return -1 if x.digit(i) else 1


def walsh(n: int, x: DyadicPoint) -> int:
    """Walsh-Paley function ``w_n`` at ``x``."""
    if n < 0:
        raise ValueError("Walsh index must be >= 0")
    if n and order(n) >= x.resolution:
        raise ValueError(
            f"w_{n} is not constant on cells of resolution {x.resolution}; "
            f"need resolution > {order(n)}"
        )
    parity = 0
    for k in range(n.bit_length()):
        if (n >> k) & 1:
            parity ^= x.digit(k)
    return -1 if parity else 1


# ----------------------------------------------------------------------------
# vectorised helpers used by the grid layer


def bit_reverse_indices(m: int) -> np.ndarray:
    """Permutation ``c -> reverse of the m-bit word c``."""
    idx = np.arange(1 << m, dtype=np.int64)
    rev = np.zeros_like(idx)
    for b in range(m):
        rev |= ((idx >> b) & 1) << (m - 1 - b)
    return rev


def popcount_parity(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64).copy()
    parity = np.zeros_like(a)
    while np.any(a):
        parity ^= a & 1
        a >>= 1
    return parity


def walsh_row(n: int, m: int) -> np.ndarray:
    """Values of ``w_n`` on all cells of resolution ``m`` as an int64 vector of +-1."""
    if n and order(n) >= m:
        raise ValueError(f"w_{n} needs resolution > {order(n)}, got {m}")
    cells_rev = bit_reverse_indices(m)
    return 1 - 2 * popcount_parity(cells_rev & n)


def walsh_table(count: int, m: int) -> np.ndarray:
    """Matrix ``W[k, c] = w_k(c)`` for ``k < count`` at resolution ``m``."""
    if count > (1 << m):
        raise ValueError(f"{count} Walsh functions need resolution > {m}")
    k = np.arange(count, dtype=np.int64)[:, None]
    cells_rev = bit_reverse_indices(m)[None, :]
    return 1 - 2 * popcount_parity(k & cells_rev)


def cell_digits(m: int, i: int) -> np.ndarray:
    """Digit ``x_i`` of every cell at resolution ``m``."""
    if i >= m:
        return np.zeros(1 << m, dtype=np.int64)
    return (np.arange(1 << m, dtype=np.int64) >> (m - 1 - i)) & 1


def interval_cells(m: int, order_: int, prefix: int) -> slice:
    """Cells of ``I_order(x)`` where ``prefix`` holds the first ``order`` digits of x."""
    if order_ > m:
        raise ValueError(f"I_{order_} is finer than resolution {m}")
    width = 1 << (m - order_)
    return slice(prefix * width, (prefix + 1) * width)


def j_cells(m: int, k: int) -> slice:
    """Cells of ``J_k = I_k minus I_(k+1) = [2**-(k+1), 2**-k)``."""
    if k + 1 > m:
        raise ValueError(f"J_{k} needs resolution > {k}, got {m}")
    return slice(1 << (m - k - 1), 1 << (m - k))


def shell_index(m: int) -> np.ndarray:
    """``t`` with cell in ``J_t``, for every cell at resolution ``m`` (cell 0 gets ``m``)."""
    out = np.full(1 << m, m, dtype=np.int64)
    for k in range(m):
        out[j_cells(m, k)] = k
    return out
