"""Exact dense linear algebra over any field-like scalar type.

Matrices are plain lists of lists. Scalars only need +, -, *, /, == and
truthiness of nonzero values; Fraction and RatFunc both qualify. Callers pass
explicit `zero`/`one` samples where new scalars must be built.
"""

from __future__ import annotations

from fractions import Fraction

QZERO = Fraction(0)
QONE = Fraction(1)


def zeros(r, c, zero=QZERO):
    return [[zero] * c for _ in range(r)]


def identity(n, one=QONE, zero=QZERO):
    m = zeros(n, n, zero)
    for i in range(n):
        m[i][i] = one
    return m


def mat_copy(m):
    return [row[:] for row in m]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(q, a):
    return [[q * x for x in row] for row in a]


def mat_mul(a, b, zero=QZERO):
    ra = len(a)
    if ra == 0:
        return []
    ca = len(a[0])
    cb = len(b[0]) if b else 0
    if ca != len(b):
        raise ValueError(f"shape mismatch ({ra}x{ca}) @ ({len(b)}x{cb})")
    out = []
    for i in range(ra):
        arow = a[i]
        row = [zero] * cb
        for k in range(ca):
            aik = arow[k]
            if not aik:
                continue
            brow = b[k]
            for j in range(cb):
                bkj = brow[j]
                if bkj:
                    row[j] = row[j] + aik * bkj
        out.append(row)
    return out


def mat_eq(a, b):
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if x != y:
                return False
    return True


def row_echelon(m):
    """Row echelon form (in a copy). Returns (echelon, pivot_columns)."""
    a = mat_copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m):
    if not m or not m[0]:
        return 0
    return len(row_echelon(m)[1])


def invert(m, one=QONE, zero=QZERO):
    """Inverse of a square matrix, or None if singular."""
    n = len(m)
    if n == 0:
        return []
    if any(len(row) != n for row in m):
        raise ValueError("not square")
    a = [row[:] + irow[:] for row, irow in zip(m, identity(n, one, zero))]
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, n):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            return None
        a[r], a[pr] = a[pr], a[r]
        piv = a[r][c]
        a[r] = [x / piv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def solve(a, rhs_cols, one=QONE, zero=QZERO):
    """Solve a x = b for each column b of rhs_cols (a list of columns).

    Returns a list of solution columns, or None if some system is
    inconsistent. Free variables are set to zero.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    ncols_rhs = len(rhs_cols)
    aug = [a[i][:] + [rhs_cols[j][i] for j in range(ncols_rhs)] for i in range(rows)]
    ech, pivots = row_echelon(aug) if rows else ([], [])
    for pc in pivots:
        if pc >= cols:
            return None
    sols = []
    for j in range(ncols_rhs):
        x = [zero] * cols
        for r, pc in enumerate(pivots):
            x[pc] = ech[r][cols + j]
        sols.append(x)
    return sols


def nullspace(m, one=QONE, zero=QZERO):
    """Basis of the right nullspace, as a list of column vectors."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [[one if i == j else zero for i in range(cols)] for j in range(cols)]
    ech, pivots = row_echelon(m)
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = [zero] * cols
        v[free] = one
        for r, pc in enumerate(pivots):
            v[pc] = -ech[r][free]
        basis.append(v)
    return basis


def determinant(m, one=QONE, zero=QZERO):
    """Determinant by fraction-friendly Gaussian elimination."""
    n = len(m)
    if n == 0:
        return one
    if any(len(row) != n for row in m):
        raise ValueError("not square")
    a = mat_copy(m)
    det = one
    for c in range(n):
        pr = None
        for i in range(c, n):
            if a[i][c]:
                pr = i
                break
        if pr is None:
            return zero
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = -det
        piv = a[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det
