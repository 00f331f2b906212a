"""Dirichlet, Fejer, triangular and Marcinkiewicz kernels as exact grids.

Every kernel has a direct construction from its defining sum and, where one
exists, a second construction from its Walsh coefficients.  The two routes
share nothing beyond the Walsh tables, so each serves as the other's oracle.
Averaged kernels are returned with the average's denominator, e.g. the grid of
``n * K_n`` over denominator ``n``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .dyadic import bit, cell_digits, dyadic_add, order, walsh_table
from .grid import Grid, ResolutionError, paley_synthesis


def _check_indices(count: int, m: int, what: str) -> None:
    # Walsh indices 0..count-1 must be cell-constant at resolution m
    if count - 1 >= (1 << m):
        raise ResolutionError(f"{what} uses Walsh indices up to {count - 1}; resolution {m} is too small")


@lru_cache(maxsize=32)
def _walsh(count: int, m: int) -> np.ndarray:
    w = walsh_table(count, m)
    w.flags.writeable = False
    return w


@lru_cache(maxsize=32)
def dirichlet_table(count: int, m: int) -> np.ndarray:
    """Rows ``D_0, ..., D_{count-1}`` at resolution ``m`` (read-only int64)."""
    if count < 1:
        raise ValueError("count must be positive")
    _check_indices(count - 1, m, f"D_{count - 1}")
    w = _walsh(max(count - 1, 1), m)
    table = np.zeros((count, 1 << m), dtype=np.int64)
    np.cumsum(w[: count - 1], axis=0, out=table[1:])
    table.flags.writeable = False
    return table


def walsh_grid(n: int, m: int) -> Grid:
    _check_indices(n + 1, m, f"w_{n}")
    return Grid(_walsh(n + 1, m)[n].copy())


def dirichlet(n: int, m: int) -> Grid:
    """``D_n = sum_{k<n} w_k`` by direct summation (``D_0 = 0``)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    _check_indices(n, m, f"D_{n}")
    if n == 0:
        return Grid.zeros(m)
    return Grid(_walsh(n, m)[:n].sum(axis=0))


def dirichlet_power_of_two(i: int, m: int) -> Grid:
    """Closed form of ``D_{2^i}``: ``2^i`` on ``I_i``, zero elsewhere."""
    if i > m:
        raise ResolutionError(f"D_{{2^{i}}} needs resolution >= {i}")
    v = np.zeros(1 << m, dtype=np.int64)
    v[: 1 << (m - i)] = 1 << i
    return Grid(v)


def dirichlet_formula(n: int, m: int) -> Grid:
    """``D_n = w_n * sum_i n_i r_i D_{2^i}``, evaluated without summing ``n`` terms.

    ``w_n r_i`` is computed as ``w_{n xor 2^i}`` so that ``n = 2^m`` stays
    representable at resolution ``m``.
    """
    if n < 1:
        raise ValueError("the closed formula needs n >= 1")
    _check_indices(n, m, f"D_{n}")
    total = np.zeros(1 << m, dtype=np.int64)
    for i in range(order(n) + 1):
        if bit(n, i):
            j = dyadic_add(n, 1 << i)
            w = _walsh(j + 1, m)[j]
            total += w * dirichlet_power_of_two(i, m).values
    return Grid(total)


def fejer(n: int, m: int) -> Grid:
    """``K_n = (1/n) sum_{k<n} D_k`` (grid of ``n K_n`` over denominator ``n``)."""
    if n < 1:
        raise ValueError("K_n needs n >= 1")
    _check_indices(n - 1, m, f"K_{n}")
    return Grid(dirichlet_table(n, m).sum(axis=0), n)


def fejer_numerators(n_max: int, m: int) -> np.ndarray:
    """Rows ``k K_k`` for ``k = 0..n_max`` (row 0 is zero)."""
    d = dirichlet_table(n_max, m)
    out = np.zeros((n_max + 1, 1 << m), dtype=np.int64)
    np.cumsum(d, axis=0, out=out[1:])
    return out


def tri_dirichlet(k: int, m: int) -> Grid:
    """``D_k^tri = sum_{i+j<=k-1} w_i(x1) w_j(x2)`` by the literal double sum."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return Grid.zeros(m, 2)
    _check_indices(k, m, f"D_{k}^tri")
    w = _walsh(k, m)
    i = np.arange(k)
    mask = (i[:, None] + i[None, :] <= k - 1).astype(np.int64)
    return Grid(w.T @ mask @ w)


def tri_fejer(n: int, m: int) -> Grid:
    """``K_n^tri = (1/n) sum_{i=1}^{n-1} D_i(x1) D_{n-i}(x2)``."""
    if n < 1:
        raise ValueError("K_n^tri needs n >= 1")
    _check_indices(n - 1, m, f"K_{n}^tri")
    if n == 1:
        return Grid(np.zeros((1 << m, 1 << m), dtype=np.int64), 1)
    d = dirichlet_table(n, m)
    left = d[1:n]
    right = d[n - 1:0:-1]
    return Grid(left.T @ right, n)


def tri_fejer_symmetric(n: int, m: int) -> Grid:
    """Same kernel through ``(1/n) sum_i D_{n-i}(x1) D_i(x2)``."""
    if n < 1:
        raise ValueError("K_n^tri needs n >= 1")
    _check_indices(n - 1, m, f"K_{n}^tri")
    if n == 1:
        return Grid(np.zeros((1 << m, 1 << m), dtype=np.int64), 1)
    d = dirichlet_table(n, m)
    return Grid(d[n - 1:0:-1].T @ d[1:n], n)


def tri_fejer_from_dirichlet(n: int, m: int) -> Grid:
    """``(1/n) sum_{k<n} D_k^tri`` summing the triangular Dirichlet kernels."""
    acc = np.zeros((1 << m, 1 << m), dtype=np.int64)
    for k in range(1, n):
        acc += tri_dirichlet(k, m).values
    return Grid(acc, n)


def tri_weights(n: int, size: int) -> np.ndarray:
    """Walsh coefficients of ``n K_n^tri``: ``max(0, n - j1 - j2 - 1)``."""
    j = np.arange(size, dtype=np.int64)
    return np.maximum(0, n - 1 - j[:, None] - j[None, :])


def marcinkiewicz_weights(n: int, size: int) -> np.ndarray:
    """Walsh coefficients of ``n M_n``: ``#{k<n : k > max(j1, j2)}``."""
    j = np.arange(size, dtype=np.int64)
    return np.maximum(0, n - 1 - np.maximum(j[:, None], j[None, :]))


def fejer_weights(n: int, size: int) -> np.ndarray:
    """Walsh coefficients of ``n K_n``: ``max(0, n - 1 - j)``."""
    return np.maximum(0, n - 1 - np.arange(size, dtype=np.int64))


def dyadic_tri_weights(n: int, size: int) -> np.ndarray:
    """Coefficients of ``sum_{k<n} D_k(x1) D_{n xor k}(x2)``: ``#{k<n : j1 < k, j2 < n xor k}``."""
    j = np.arange(size, dtype=np.int64)
    out = np.zeros((size, size), dtype=np.int64)
    for k in range(n):
        out += np.outer(j < k, j < (n ^ k))
    return out


def kernel_from_coefficients(coeffs: np.ndarray, denominator: int = 1) -> Grid:
    """Walsh polynomial with integer coefficients ``coeffs / denominator``."""
    return Grid(paley_synthesis(np.asarray(coeffs)), denominator)


def tri_fejer_spectral(n: int, m: int) -> Grid:
    if n < 1:
        raise ValueError("K_n^tri needs n >= 1")
    _check_indices(n - 1, m, f"K_{n}^tri")
    return kernel_from_coefficients(tri_weights(n, 1 << m), n)


def marcinkiewicz(n: int, m: int) -> Grid:
    """``M_n = (1/n) sum_{k<n} D_k(x1) D_k(x2)``."""
    if n < 1:
        raise ValueError("M_n needs n >= 1")
    _check_indices(n - 1, m, f"M_{n}")
    d = dirichlet_table(n, m)
    return Grid(d.T @ d, n)


def marcinkiewicz_spectral(n: int, m: int) -> Grid:
    _check_indices(n - 1, m, f"M_{n}")
    return kernel_from_coefficients(marcinkiewicz_weights(n, 1 << m), n)


def rect_fejer(n1: int, n2: int, m: int) -> Grid:
    """``K_{n1}(x1) K_{n2}(x2)``."""
    return Grid.outer(fejer(n1, m), fejer(n2, m))


def rect_dirichlet(n1: int, n2: int, m: int) -> Grid:
    return Grid.outer(dirichlet(n1, m), dirichlet(n2, m))


def dyadic_tri_kernel(n: int, m: int) -> Grid:
    """``(1/n) sum_{k<n} D_k(x1) D_{n xor k}(x2)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    top = max(n ^ k for k in range(n))
    _check_indices(top, m, "dyadic triangular kernel")
    d = dirichlet_table(top + 1, m)
    ks = np.arange(n)
    return Grid(d[ks].T @ d[ks ^ n], n)


def in_interval_mask(m: int, order_: int, digits: dict[int, int] | None = None) -> np.ndarray:
    """Cells whose first ``order_`` digits match ``digits`` (missing digits are 0)."""
    digits = digits or {}
    mask = np.ones(1 << m, dtype=bool)
    for i in range(order_):
        mask &= cell_digits(m, i) == digits.get(i, 0)
    return mask
