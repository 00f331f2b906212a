"""Independent brute-force references.

Nothing here imports the package: Walsh values come from digit loops and
every kernel from its literal defining sum, in plain Python integers.
"""

from fractions import Fraction
from itertools import product


def digits(cell, m):
    return [(cell >> (m - 1 - i)) & 1 for i in range(m)]


def walsh(n, cell, m):
    d = digits(cell, m)
    s = 0
    i = 0
    while n:
        if n & 1:
            if i >= m:
                raise ValueError("index too large")
            s += d[i]
        n >>= 1
        i += 1
    return -1 if s & 1 else 1


def dirichlet(n, m):
    return [sum(walsh(k, c, m) for k in range(n)) for c in range(1 << m)]


def fejer_times_n(n, m):
    return [sum(dirichlet(k, m)[c] for k in range(n)) for c in range(1 << m)]


def tri_kernel_times_n(n, m):
    """``sum_{i=1}^{n-1} D_i(x1) D_{n-i}(x2)`` as a nested list."""
    ds = [dirichlet(k, m) for k in range(n + 1)]
    size = 1 << m
    return [[sum(ds[i][a] * ds[n - i][b] for i in range(1, n)) for b in range(size)] for a in range(size)]


def coefficient_2d(values, den, i, j, m):
    size = 1 << m
    total = sum(values[a][b] * walsh(i, a, m) * walsh(j, b, m) for a in range(size) for b in range(size))
    return Fraction(total, den * size * size)


def xor_convolve_1d(f, g):
    """``(f*g)(y) = mean_x f(x xor y) g(x)`` with Fraction values."""
    size = len(f)
    return [sum(Fraction(f[x ^ y]) * g[x] for x in range(size)) / size for y in range(size)]


def tri_mean_direct(values, m, n):
    """``(1/n) sum_{k<n} S_{k, n-k} f`` from brute-force coefficients."""
    size = 1 << m
    coeffs = {(i, j): coefficient_2d(values, 1, i, j, m) for i in range(size) for j in range(size)}
    out = [[Fraction(0)] * size for _ in range(size)]
    for k in range(n):
        for (i, j), c in coeffs.items():
            if i < k and j < n - k and c:
                for a in range(size):
                    for b in range(size):
                        out[a][b] += c * walsh(i, a, m) * walsh(j, b, m)
    return [[v / n for v in row] for row in out]


def shifted_sum(A, n, a, b, m):
    """``T_n(x) = sum_{k<2^A} w_k(x1) w_{k+n}(x2)`` at one cell."""
    return sum(walsh(k, a, m) * walsh(k + n, b, m) for k in range(1 << A))


def delta1_integral(A):
    m = A + 1
    size = 1 << m
    total = 0
    for a in range(size):
        for b in range(size):
            total += max(abs(shifted_sum(A, n, a, b, m)) for n in range((1 << A) + 1))
    return Fraction(total, (1 << A) * size * size)


def quadruples(A):
    r = range(1 << A)
    return sum(1 for n, k, l, i in product(r, r, r, r) if (k + n) ^ (l + n) ^ (i + n) == (k ^ l ^ i) + n)


def marc_integral(t1, t2, s):
    m = s + 1
    ds = [dirichlet(k, m) for k in range(1 << (s + 1))]
    size = 1 << m
    total = 0
    for a in range(size >> (t1 + 1), size >> t1):
        for b in range(size >> (t2 + 1), size >> t2):
            total += max(abs(sum(ds[k][a] * ds[n + k][b] for k in range(1 << s))) for n in range(1 << s))
    return Fraction(total, size * size)


def corf_scaled(t2, s, low):
    """``2^(2 t2) integral_{I_(t2+1)^2} F_{t2,s}`` on the full grid of resolution ``s + 1``."""
    m = s + 1
    size = 1 << m
    w = size >> (t2 + 1)
    hs = range(0, 1 << s, 1 << (t2 + 1))
    total = 0
    for a in range(w):
        for b in range(w):
            total += max(abs(sum(walsh(h, a, m) * walsh(((n + h + low) >> (t2 + 1)) << (t2 + 1), b, m) for h in hs))
                         for n in range(1 << s))
    return Fraction(total * (1 << (2 * t2)), size * size)


def b1b2_point(t1, t2, i, s, n, a, b):
    """``(B1, B2, full)`` by literal loops over ``k``."""
    m = s + 1
    b1 = b2 = full = 0
    for k in range(1 << s):
        e = n + k
        kb = (k >> t1) & 1
        eb = (e >> t2) & 1
        f1 = walsh((k >> (t1 + 1)) << (t1 + 1), a, m) * (-1) ** kb * ((k % (1 << t1)) - kb * (1 << t1))
        g = walsh((e >> (t2 + 1)) << (t2 + 1), b, m) * (-1) ** eb
        w1 = sum(((e >> l) & 1) << l for l in range(t1 + i))
        w2 = sum(((e >> l) & 1) << l for l in range(t1 + i, t2)) - eb * (1 << t2)
        b1 += f1 * g * w1
        b2 += f1 * g * w2
        full += sum(walsh(u, a, m) for u in range(k)) * sum(walsh(v, b, m) for v in range(e))
    return b1, b2, full


def tri_l1(n):
    m = max(1, (n - 1).bit_length())
    g = tri_kernel_times_n(n, m)
    size = 1 << m
    return Fraction(sum(abs(v) for row in g for v in row), n * size * size)


def sup_tri_outside(a, N):
    m = max(1, (N - 1).bit_length(), a)
    size = 1 << m
    grids = {n: tri_kernel_times_n(n, m) for n in range(1 << a, N + 1)}
    inner = size >> a
    total = Fraction(0)
    for x in range(size):
        for y in range(size):
            if x < inner and y < inner:
                continue
            total += max(Fraction(abs(grids[n][x][y]), n) for n in grids)
    return total / (size * size)
