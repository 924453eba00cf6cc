"""Exact integer linear algebra and polynomial arithmetic helpers."""
from __future__ import annotations

import math


def bareiss_determinant(matrix) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    A = [list(map(int, row)) for row in matrix]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = A[k][k]
        for i in range(k + 1, n):
            row_i = A[i]
            row_k = A[k]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * A[n - 1][n - 1]


def cofactor_determinant(matrix) -> int:
    """Exact determinant by recursive cofactor expansion (cross-validation
    backend; exponential, use only for tiny matrices)."""
    A = [list(map(int, row)) for row in matrix]
    n = len(A)
    if n == 1:
        return A[0][0]
    total = 0
    for j in range(n):
        if A[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        total += (-1) ** j * A[0][j] * cofactor_determinant(minor)
    return total


def poly_trim(p: list[int]) -> list[int]:
    """Drop leading zeros; coefficients are low-to-high degree."""
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = math.gcd(g, abs(c))
    return g


def poly_primitive(p: list[int]) -> list[int]:
    c = poly_content(p)
    if c <= 1:
        return p[:]
    return [x // c for x in p]


def poly_pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    """Pseudo-remainder of f by g over Z (coefficients low-to-high)."""
    f = f[:]
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        shift = df - dg
        lead = f[-1]
        f = [lg * c for c in f]
        for i in range(dg + 1):
            f[shift + i] -= lead * g[i]
        poly_trim(f)
    return f


def poly_gcd_int(f: list[int], g: list[int]) -> list[int]:
    """Primitive gcd of two integer polynomials via a primitive pseudo-
    remainder sequence.  Returns the primitive gcd with positive leading
    coefficient (low-to-high coefficients)."""
    f = poly_primitive(poly_trim(f[:]))
    g = poly_primitive(poly_trim(g[:]))
    if not f:
        return g
    if not g:
        return f
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = poly_pseudo_rem(f, g)
        f, g = g, poly_primitive(r)
    if f[-1] < 0:
        f = [-c for c in f]
    return f


def poly_gcd_degree_modp(f: list[int], g: list[int], p: int) -> int:
    """Degree of gcd(f mod p, g mod p); >= deg gcd_Z(f, g) always, so a
    result of 0 certifies coprimality over Q.  Returns -1 when both vanish
    mod p."""
    fm = [c % p for c in f]
    gm = [c % p for c in g]
    poly_trim(fm)
    poly_trim(gm)
    if not fm and not gm:
        return -1
    while gm:
        inv = pow(gm[-1], p - 2, p)
        dg = len(gm) - 1
        while len(fm) - 1 >= dg and fm:
            shift = len(fm) - 1 - dg
            factor = fm[-1] * inv % p
            for i in range(dg + 1):
                fm[shift + i] = (fm[shift + i] - factor * gm[i]) % p
            poly_trim(fm)
        fm, gm = gm, fm
    return len(fm) - 1
