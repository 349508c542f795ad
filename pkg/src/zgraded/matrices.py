"""Matrices over a graded ring, plus the flattenings into exact scalar models.

Three views of the same data recur throughout the detectors:

* degree-0 flattening -- a k x l matrix over R_0 acting on free right
  R_0-modules becomes a kn x ln matrix over Q (block expansion; bijective,
  so any Q-linear answer reassembles into an R_0-linear one);
* field flattening -- entries become n x n blocks over Q(t), used for rank,
  determinant and acyclicity work over the rational function field;
* polynomial model -- the positive part R_+^k as a free module over Q[z]
  (z = t, or u in the degree-2 case) with one graded slot per block row.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .errors import NotFiniteType, NotSquare, ShapeMismatch
from .ratfunc import Poly, RatFunc
from .rings import RingElement, get_ring


class RingMatrix:
    """Immutable rectangular matrix with RingElement entries."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring_ident, rows, cols, entries):
        self.ring = ring_ident
        self.rows = rows
        self.cols = cols
        self.entries = tuple(tuple(row) for row in entries)
        for row in self.entries:
            if len(row) != cols:
                raise ShapeMismatch("ragged matrix")

    @classmethod
    def from_rows(cls, ring_ident, rows):
        r = len(rows)
        c = len(rows[0]) if r else 0
        return cls(ring_ident, r, c, rows)

    @classmethod
    def zero(cls, ring_ident, rows, cols):
        z = get_ring(ring_ident).zero()
        return cls(ring_ident, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, ring_ident, n):
        ring = get_ring(ring_ident)
        one, zero = ring.one(), ring.zero()
        return cls(ring_ident, n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    def entry(self, i, j) -> RingElement:
        return self.entries[i][j]

    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __add__(self, other):
        self._check_same_shape(other)
        return RingMatrix(
            self.ring,
            self.rows,
            self.cols,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __sub__(self, other):
        self._check_same_shape(other)
        return RingMatrix(
            self.ring,
            self.rows,
            self.cols,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)],
        )

    def __neg__(self):
        return self.map_entries(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.map_entries(lambda e: e * other)
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeMismatch(
                f"({self.rows}x{self.cols}) * ({other.rows}x{other.cols})"
            )
        zero = get_ring(self.ring).zero()
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    if a.is_zero():
                        continue
                    b = other.entries[k][j]
                    if not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return RingMatrix(self.ring, self.rows, other.cols, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.map_entries(lambda e: e * other)
        return NotImplemented

    def map_entries(self, f):
        return RingMatrix(
            self.ring,
            self.rows,
            self.cols,
            [[f(e) for e in row] for row in self.entries],
        )

    def degree_slice(self, p) -> "RingMatrix":
        ring = get_ring(self.ring)
        return self.map_entries(lambda e: ring.homogeneous_part(e, p))

    def entry_degrees(self):
        degs = set()
        for row in self.entries:
            for e in row:
                degs.update(e.parts)
        return degs

    def min_degree(self):
        degs = self.entry_degrees()
        return min(degs) if degs else None

    def max_degree(self):
        degs = self.entry_degrees()
        return max(degs) if degs else None

    def _check_same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ShapeMismatch(
                f"({self.rows}x{self.cols}) vs ({other.rows}x{other.cols})"
            )

    def __repr__(self):
        from .exprs import matrix_to_str

        return f"<{self.ring} {self.rows}x{self.cols} {matrix_to_str(self)}>"


def _block_size(ring):
    ring = get_ring(ring)
    if not ring.finite_type:
        raise NotFiniteType(f"{ring.ident} is not finite type")
    return getattr(ring, "n", 1)


def flatten_deg0(m: RingMatrix):
    """k x l matrix of degree-0 entries -> kn x ln matrix over Q."""
    ring = get_ring(m.ring)
    n = _block_size(ring)
    out = linalg.zeros(m.rows * n, m.cols * n)
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.entries[i][j]
            if e.is_zero():
                continue
            v = e.part(0)
            if v is None or len(e.parts) != 1:
                raise ShapeMismatch("flatten_deg0 requires degree-0 entries")
            for a in range(n):
                for b in range(n):
                    out[i * n + a][j * n + b] = v[a * n + b] if n > 1 else v[0]
    return out


def unflatten_deg0(ring_ident, q, rows, cols) -> RingMatrix:
    """Inverse of flatten_deg0 for an arbitrary Q-matrix of matching shape."""
    ring = get_ring(ring_ident)
    n = _block_size(ring)
    if len(q) != rows * n or (q and len(q[0]) != cols * n):
        raise ShapeMismatch("unflatten_deg0 shape mismatch")
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            if n == 1:
                v = (Fraction(q[i][j]),)
            else:
                v = tuple(Fraction(q[i * n + a][j * n + b]) for a in range(n) for b in range(n))
            row.append(ring.element({0: v}))
        out.append(row)
    return RingMatrix(ring_ident, rows, cols, out)


def tr0_flat(m: RingMatrix):
    """Degree-0 slice of a matrix, flattened over Q."""
    return flatten_deg0(m.degree_slice(0))


def _entry_block_ratfunc(ring, e: RingElement):
    """n x n block of Q(t) scalars for one Laurent-family entry."""
    n = _block_size(ring)
    zdeg = 2 if ring.ident == "laurent_step2" else 1
    block = [[RatFunc.zero() for _ in range(n)] for _ in range(n)]
    for d, v in e.parts.items():
        if d % zdeg:
            raise ShapeMismatch("degree not representable in this ring")
        tp = RatFunc.t_power(d // zdeg)
        for a in range(n):
            for b in range(n):
                c = v[a * n + b] if n > 1 else v[0]
                if c != 0:
                    block[a][b] = block[a][b] + RatFunc(Poly.const(c)) * tp
    return block


def flatten_field(m: RingMatrix):
    """k x l ring matrix -> kn x ln matrix over Q(t) (t = z for step-2)."""
    ring = get_ring(m.ring)
    n = _block_size(ring)
    out = [[RatFunc.zero() for _ in range(m.cols * n)] for _ in range(m.rows * n)]
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.entries[i][j]
            if e.is_zero():
                continue
            block = _entry_block_ratfunc(ring, e)
            for a in range(n):
                for b in range(n):
                    out[i * n + a][j * n + b] = block[a][b]
    return out


def flatten_poly(m: RingMatrix, twist=0):
    """Flatten z^(twist/zdeg) * m into a polynomial matrix over Q[z].

    The twist is given in ring-degree units and must clear all negative
    entry degrees. Returns (poly_matrix, zdeg, block_size).
    """
    ring = get_ring(m.ring)
    n = _block_size(ring)
    zdeg = 2 if ring.ident == "laurent_step2" else 1
    if twist % zdeg:
        raise ShapeMismatch(f"twist {twist} not a multiple of the degree step {zdeg}")
    out = [[Poly() for _ in range(m.cols * n)] for _ in range(m.rows * n)]
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.entries[i][j]
            for d, v in e.parts.items():
                k = d + twist
                if k < 0 or k % zdeg:
                    raise ShapeMismatch(f"degree {d} not clearable by twist {twist}")
                for a in range(n):
                    for b in range(n):
                        c = v[a * n + b] if n > 1 else v[0]
                        if c != 0:
                            out[i * n + a][j * n + b] = out[i * n + a][j * n + b] + Poly.monomial(c, k // zdeg)
    return out, zdeg, n


def require_square(m: RingMatrix):
    if not m.is_square():
        raise NotSquare(f"matrix is {m.rows}x{m.cols}")
    return m
