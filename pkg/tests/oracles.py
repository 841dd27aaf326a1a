"""Independent brute-force oracles used by the tests.

Everything here is deliberately naive (multi-loops, direct enumeration) and
shares no code path with the implementations it checks.
"""

from fractions import Fraction
from itertools import product
from math import factorial


def vandermonde_int(ks):
    out = 1
    for i in range(len(ks)):
        for j in range(i + 1, len(ks)):
            out *= ks[i] - ks[j]
    return out


def count_standard_tableaux(shape):
    """Count standard fillings by recursive corner removal."""
    shape = tuple(r for r in shape if r)
    if sum(shape) <= 1:
        return 1
    total = 0
    for i in range(len(shape)):
        if shape[i] > (shape[i + 1] if i + 1 < len(shape) else 0):
            child = list(shape)
            child[i] -= 1
            total += count_standard_tableaux(tuple(child))
    return total


def weyl_dimension(p_rows, m):
    """Weyl dimension product formula for Gl(m): prod (p_i - p_j + j - i)/(j - i)."""
    rows = list(p_rows) + [0] * (m - len(p_rows))
    num = den = 1
    for i in range(m):
        for j in range(i + 1, m):
            num *= rows[i] - rows[j] + j - i
            den *= j - i
    q, r = divmod(num, den)
    assert r == 0
    return q


def j0_box_sum(z, K):
    """Plain multi-loop box-truncated antisymmetric series (exact Fractions)."""
    N = len(z)
    total = Fraction(0)
    for ks in product(range(K + 1), repeat=N):
        c = Fraction(vandermonde_int(ks))
        if c == 0:
            continue
        for k in ks:
            c /= factorial(k) ** 2
        term = c
        for zi, k in zip(z, ks):
            term *= zi ** k
        total += term
    return total


def jm_box_sum(z, m, K):
    """Plain multi-loop box-truncated split series (exact Fractions)."""
    N = len(z)
    cross = Fraction(1)
    for i in range(m):
        for j in range(m, N):
            cross *= z[i] - z[j]
    total = Fraction(0)
    for ks in product(range(K + 1), repeat=N):
        c = Fraction(vandermonde_int(ks[:m]) * vandermonde_int(ks[m:]))
        if c == 0:
            continue
        for k in ks:
            c /= factorial(k) ** 2
        for i in range(m):
            for j in range(m, N):
                c /= ks[i] + ks[j] + 1
        term = c
        for zi, k in zip(z, ks):
            term *= zi ** k
        total += term
    return cross * total


def schur_polynomial(shape, nvars):
    """Schur polynomial as an exponent-tuple -> coefficient dict, via tableaux."""
    shape = tuple(r for r in shape if r)
    if len(shape) > nvars:
        return {}
    if not shape:
        return {(0,) * nvars: 1}
    poly = {}

    def fill(i, prev_row, rows_acc):
        if i == len(shape):
            expo = [0] * nvars
            for row in rows_acc:
                for v in row:
                    expo[v] += 1
            key = tuple(expo)
            poly[key] = poly.get(key, 0) + 1
            return
        length = shape[i]

        def rec(j, row):
            if j == length:
                fill(i + 1, row, rows_acc + [row])
                return
            lo = row[j - 1] if j else 0
            if prev_row is not None and j < len(prev_row):
                lo = max(lo, prev_row[j] + 1)
            for v in range(lo, nvars):
                rec(j + 1, row + [v])

        rec(0, [])

    fill(0, None, [])
    return poly


def poly_mul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}
