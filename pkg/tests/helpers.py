"""Shared test utilities: random instance generators and independent oracles.

The oracles here deliberately use different algorithms from the library:
ranks over Q(t) are computed by evaluating at enough rational points (exact,
since a nonzero minor of bounded degree has boundedly many roots), and
determinants by cofactor expansion.
"""

from __future__ import annotations

from fractions import Fraction

from zgraded import linalg
from zgraded.complexes import FreeChainComplex, validate_complex
from zgraded.matrices import RingMatrix, flatten_field
from zgraded.ratfunc import RatFunc
from zgraded.rings import get_ring


def rand_fraction(rng, pool=(-2, -1, 1, 2, 3, Fraction(1, 2))):
    return Fraction(rng.choice(pool))


def rand_poly(rng, ring_ident="laurent", max_deg=3, allow_zero=True, min_deg=0):
    ring = get_ring(ring_ident)
    parts = {}
    for d in range(min_deg, max_deg + 1):
        if rng.random() < 0.45:
            dim = ring.component_dim(d)
            if dim == 0:
                continue
            v = [Fraction(0)] * dim
            for i in range(dim):
                if rng.random() < 0.8:
                    v[i] = rand_fraction(rng)
            parts[d] = tuple(v)
    x = ring.element(parts)
    if x.is_zero() and not allow_zero:
        return ring.generators()[next(iter(ring.generators()))] * 0 + ring.one()
    return x


def rand_matrix(rng, ring_ident, rows, cols, max_deg=3, min_deg=0, density=0.8):
    ring = get_ring(ring_ident)
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            if rng.random() < density:
                row.append(rand_poly(rng, ring_ident, max_deg, min_deg=min_deg))
            else:
                row.append(ring.zero())
        entries.append(row)
    return RingMatrix(ring_ident, rows, cols, entries)


def _transvection(rng, ring_ident, n, max_deg=1):
    """(U, U^-1) for a random elementary matrix over R_+."""
    ring = get_ring(ring_ident)
    u = RingMatrix.identity(ring_ident, n)
    if n < 2:
        return u, u
    i, j = rng.sample(range(n), 2)
    e = rand_poly(rng, ring_ident, max_deg)
    rows = [list(r) for r in u.entries]
    rows[i][j] = rows[i][j] + e
    u2 = [list(r) for r in RingMatrix.identity(ring_ident, n).entries]
    u2[i][j] = u2[i][j] - e
    return (
        RingMatrix(ring_ident, n, n, rows),
        RingMatrix(ring_ident, n, n, u2),
    )


def tensor_complex(x: FreeChainComplex, y: FreeChainComplex) -> FreeChainComplex:
    """Total complex of the tensor product of two complexes over a commutative
    ring (blocks dX (x) 1 and (-1)^p 1 (x) dY)."""
    ring = x.ring
    levels = {}
    blocks = {}
    for p, rp in x.levels.items():
        for q, sq in y.levels.items():
            if rp and sq:
                levels[p + q] = levels.get(p + q, 0) + rp * sq
                blocks.setdefault(p + q, []).append((p, q))
    for n in blocks:
        blocks[n].sort()
    diffs = {}
    for n in sorted(levels):
        if n - 1 not in levels:
            src_blocks = blocks.get(n, [])
            if not src_blocks:
                continue
        src_blocks = blocks.get(n, [])
        dst_blocks = blocks.get(n - 1, [])
        if not src_blocks or not dst_blocks:
            continue
        src_off, off = {}, 0
        for key in src_blocks:
            src_off[key] = off
            off += x.rank(key[0]) * y.rank(key[1])
        total_src = off
        dst_off, off = {}, 0
        for key in dst_blocks:
            dst_off[key] = off
            off += x.rank(key[0]) * y.rank(key[1])
        total_dst = off
        zero = get_ring(ring).zero()
        grid = [[zero] * total_src for _ in range(total_dst)]

        def place(r0, c0, m):
            for i in range(m.rows):
                for j in range(m.cols):
                    grid[r0 + i][c0 + j] = grid[r0 + i][c0 + j] + m.entries[i][j]

        for (p, q) in src_blocks:
            rp, sq = x.rank(p), y.rank(q)
            if (p - 1, q) in dst_off:
                dx = x.diff(p)
                big = _kron(dx, RingMatrix.identity(ring, sq))
                place(dst_off[(p - 1, q)], src_off[(p, q)], big)
            if (p, q - 1) in dst_off:
                dy = y.diff(q)
                big = _kron(RingMatrix.identity(ring, rp), dy)
                if p % 2:
                    big = -big
                place(dst_off[(p, q - 1)], src_off[(p, q)], big)
        diffs[n] = RingMatrix(ring, total_dst, total_src, grid)
    return FreeChainComplex(ring, levels, diffs)


def _kron(a: RingMatrix, b: RingMatrix) -> RingMatrix:
    ring = get_ring(a.ring)
    zero = ring.zero()
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    grid = [[zero] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            e = a.entries[i][j]
            if e.is_zero():
                continue
            for k in range(b.rows):
                for l in range(b.cols):
                    f = b.entries[k][l]
                    if not f.is_zero():
                        grid[i * b.rows + k][j * b.cols + l] = e * f
    return RingMatrix(a.ring, rows, cols, grid)


def random_complex(rng, ring_ident="laurent", max_rank=3, max_deg=3) -> FreeChainComplex:
    """Random bounded complex of free modules over R_+ with d.d = 0, length
    <= 4 and varied verdicts (contractible / dominated / neither)."""
    kind = rng.choice(["two", "two", "koszul", "koszul_twist", "split_conj"])
    if kind == "two" or ring_ident.startswith("matrix_laurent"):
        r1 = rng.randint(1, max_rank)
        r0 = rng.randint(1, max_rank)
        c = FreeChainComplex(
            ring_ident,
            {1: r1, 0: r0},
            {1: rand_matrix(rng, ring_ident, r0, r1, max_deg)},
        )
    elif kind == "koszul":
        a = rand_poly(rng, ring_ident, max_deg=1, allow_zero=True)
        b = rand_poly(rng, ring_ident, max_deg=1, allow_zero=True)
        ring = get_ring(ring_ident)
        c = FreeChainComplex(
            ring_ident,
            {2: 1, 1: 2, 0: 1},
            {
                2: RingMatrix(ring_ident, 2, 1, [[-b], [a]]),
                1: RingMatrix(ring_ident, 1, 2, [[a, b]]),
            },
        )
    elif kind == "koszul_twist":
        a = rand_poly(rng, ring_ident, max_deg=1)
        b = rand_poly(rng, ring_ident, max_deg=1)
        cc = rand_poly(rng, ring_ident, max_deg=1)
        x = FreeChainComplex(
            ring_ident,
            {2: 1, 1: 2, 0: 1},
            {
                2: RingMatrix(ring_ident, 2, 1, [[-b], [a]]),
                1: RingMatrix(ring_ident, 1, 2, [[a, b]]),
            },
        )
        y = FreeChainComplex(ring_ident, {1: 1, 0: 1}, {1: RingMatrix(ring_ident, 1, 1, [[cc]])})
        c = tensor_complex(x, y)
    else:  # split_conj: conjugated sum of elementary complexes
        length = rng.randint(2, 4)
        levels = {n: 0 for n in range(length)}
        summands = []
        for _ in range(rng.randint(1, 3)):
            n = rng.randint(1, length - 1)
            g = rand_poly(rng, ring_ident, max_deg=2)
            summands.append((n, g))
            levels[n] += 1
            levels[n - 1] += 1
        offs = {n: 0 for n in levels}
        ring = get_ring(ring_ident)
        coords = []
        for n, g in summands:
            coords.append((n, offs[n], offs[n - 1], g))
            offs[n] += 1
            offs[n - 1] += 1
        diffs = {}
        for n in range(1, length):
            if levels[n] and levels[n - 1]:
                zero = ring.zero()
                grid = [[zero] * levels[n] for _ in range(levels[n - 1])]
                for (m, src, dst, g) in coords:
                    if m == n:
                        grid[dst][src] = g
                diffs[n] = RingMatrix(ring_ident, levels[n - 1], levels[n], grid)
        c = FreeChainComplex(ring_ident, {n: r for n, r in levels.items() if r}, diffs)
        us = {}
        for n in c.levels:
            us[n] = _transvection(rng, ring_ident, c.rank(n))
        new_diffs = {}
        for n, d in c.differentials.items():
            u_prev = us.get(n - 1)
            u_n = us.get(n)
            m = d
            if u_prev:
                m = u_prev[0] * m
            if u_n:
                m = m * u_n[1]
            new_diffs[n] = m
        c = FreeChainComplex(ring_ident, dict(c.levels), new_diffs)
    validate_complex(c)
    return c


# -- independent oracles ----------------------------------------------------------


def eval_rank_ratfunc(mat, bound=None):
    """Rank of a Q(t) matrix by evaluation at bound+1 non-pole points."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows == 0 or cols == 0:
        return 0
    if bound is None:
        bound = 1
        for row in mat:
            for rf in row:
                bound += rf.num.degree() + rf.den.degree() + 1
    best = 0
    point = 1
    used = 0
    while used <= bound:
        p = Fraction(point)
        point += 1
        try:
            q = [[rf.evaluate(p) for rf in row] for row in mat]
        except ZeroDivisionError:
            continue
        used += 1
        best = max(best, linalg.rank(q))
    return best


def field_acyclic_oracle(c: FreeChainComplex) -> bool:
    """Acyclicity of C over Q(t) by evaluation ranks (flat Novikov stand-in)."""
    ring = get_ring(c.ring)
    block = getattr(ring, "n", 1)
    levels = sorted(n for n, r in c.levels.items() if r)
    if not levels:
        return True
    flat = {n: flatten_field(c.diff(n)) for n in range(levels[0], levels[-1] + 2)}
    ranks = {n: eval_rank_ratfunc(m) for n, m in flat.items()}
    for n in levels:
        if ranks.get(n, 0) + ranks.get(n + 1, 0) != c.rank(n) * block:
            return False
    return True


def cofactor_det(mat, one=None, zero=None):
    """Determinant by cofactor expansion (small matrices only)."""
    n = len(mat)
    if one is None:
        one = RatFunc.one()
        zero = RatFunc.zero()
    if n == 0:
        return one
    if n == 1:
        return mat[0][0]
    total = zero
    for j in range(n):
        a = mat[0][j]
        if not a:
            continue
        minor = [[mat[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = a * cofactor_det(minor, one, zero)
        total = total + term if j % 2 == 0 else total - term
    return total
