"""Exact integer linear algebra for systems over Z/m.

Everything here works on plain Python ints (no floats, no overflow), so the
results are exact for arbitrary entries.  The central routine is a Smith-style
diagonalization by unimodular row/column operations; on top of it sit a solver
for A @ x = b (mod m) and kernel-size counting, both of which are well defined
even when m has zero divisors.
"""

from __future__ import annotations

from math import gcd


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_diagonalize(matrix: list[list[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonalize an integer matrix by unimodular transformations.

    Returns (diag, U, V) such that U @ matrix @ V is diagonal with the entries
    of ``diag`` on the diagonal (zeros beyond its length), each nonnegative
    entry dividing the next.  U (rows x rows) and V (cols x cols) are
    unimodular, so the factorization is exact over the integers.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    m = [list(row) for row in matrix]
    for row in m:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, factor):
        mdst, msrc = m[dst], m[src]
        for k in range(cols):
            mdst[k] += factor * msrc[k]
        udst, usrc = u[dst], u[src]
        for k in range(rows):
            udst[k] += factor * usrc[k]

    def add_col(dst, src, factor):
        for row in m:
            row[dst] += factor * row[src]
        for row in v:
            row[dst] += factor * row[src]

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # Move a minimal-magnitude nonzero entry of the trailing block to (t, t).
        piv = None
        best = None
        for i in range(t, rows):
            row = m[i]
            for j in range(t, cols):
                e = row[j]
                if e != 0 and (best is None or abs(e) < best):
                    best = abs(e)
                    piv = (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])

        while True:
            # Clear column t, then row t; swaps keep shrinking the pivot.
            dirty = False
            for i in range(rows):
                if i != t and m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t] != 0:
                        swap_rows(i, t)
                        dirty = True
            for j in range(cols):
                if j != t and m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j] != 0:
                        swap_cols(j, t)
                        dirty = True
            if dirty:
                continue
            # Enforce the divisibility chain: fold in any bad remainder.
            fixed = True
            pivval = m[t][t]
            for i in range(t + 1, rows):
                row = m[i]
                for j in range(t + 1, cols):
                    if row[j] % pivval != 0:
                        add_row(t, i, 1)
                        fixed = False
                        break
                if not fixed:
                    break
            if fixed:
                break
        if m[t][t] < 0:
            add_row(t, t, -2)  # negate row t via r_t += -2 r_t
        t += 1

    diag = [m[i][i] for i in range(min(rows, cols))]
    while diag and diag[-1] == 0:
        diag.pop()
    return diag, u, v


def kernel_size_mod(diag: list[int], ncols: int, modulus: int) -> int:
    """Number of solutions of D @ z = 0 (mod modulus) for the diagonalized map."""
    size = 1
    for j in range(ncols):
        d = diag[j] if j < len(diag) else 0
        size *= gcd(d, modulus)
    return size


def solve_mod(matrix: list[list[int]], rhs: list[int], modulus: int) -> list[int] | None:
    """One solution x of matrix @ x = rhs (mod modulus), or None if there is none.

    Diagonalize U A V = D, solve the decoupled congruences d_i z_i = (U b)_i,
    and return x = V z.  Correct for composite moduli because each congruence
    is solved through gcd divisibility, never by field division.
    """
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if len(rhs) != rows:
        raise ValueError("rhs length does not match matrix rows")
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    if modulus == 1:
        return [0] * cols

    diag, u, v = smith_diagonalize(matrix)
    c = [sum(u[i][k] * rhs[k] for k in range(rows)) % modulus for i in range(rows)]

    z = [0] * cols
    for i in range(min(rows, cols)):
        d = diag[i] if i < len(diag) else 0
        g = gcd(d, modulus)
        if c[i] % g != 0:
            return None
        if g != modulus:
            msub = modulus // g
            z[i] = (c[i] // g) * pow((d // g) % msub, -1, msub) % msub
    for i in range(cols, rows):
        if c[i] != 0:
            return None

    x = [sum(v[i][k] * z[k] for k in range(cols)) % modulus for i in range(cols)]
    for i in range(rows):
        if sum(matrix[i][k] * x[k] for k in range(cols)) % modulus != rhs[i] % modulus:
            raise AssertionError("solver produced a non-solution")  # pragma: no cover
    return x
