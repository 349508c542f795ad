"""Windowed graded formal series matrices and recursive inversion.

Full power-series and Novikov rings are never materialised: a SeriesMatrix
stores exact homogeneous coefficients inside a degree window, and every
verdict that depends on a truncation carries the order used. A matrix over
the non-negative series ring is invertible iff its constant term is
invertible over R_0; the inverse is computed degree by degree via

    X_0 = M_0^-1,   X_d = -M_0^-1 * sum_{p=1..d} M_p X_{d-p}

and mirrored toward negative degrees for unit-plus-strictly-negative input.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import (
    ConstantTermSingular,
    DegreeOutOfRange,
    LeadingTermSingular,
    NegativeDegreeEntry,
    NotFiniteType,
    NotSquare,
)
from .matrices import RingMatrix, flatten_deg0, unflatten_deg0
from .rings import get_ring, truncate


@dataclass(frozen=True)
class SeriesWindow:
    """Degree window [lo, hi] with `order` bounding stored degrees; None means
    the corresponding infinity."""

    lo: int | None
    hi: int | None
    order: int

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise DegreeOutOfRange(f"window lo {self.lo} > hi {self.hi}")
        if self.order <= 0:
            raise DegreeOutOfRange("window order must be positive")

    def contains(self, d):
        return (self.lo is None or d >= self.lo) and (self.hi is None or d <= self.hi)


@dataclass
class SeriesMatrix:
    ring: str
    rows: int
    cols: int
    window: SeriesWindow
    entries: RingMatrix

    def __post_init__(self):
        for row in self.entries.entries:
            for e in row:
                for d in e.parts:
                    if not self.window.contains(d):
                        raise DegreeOutOfRange(
                            f"stored degree {d} escapes window [{self.window.lo}, {self.window.hi}]"
                        )

    def entry(self, i, j):
        return self.entries.entry(i, j)


def psp_window(order):
    """Non-negative series window: degrees 0..order stored."""
    return SeriesWindow(0, None, order)


def conegative_window(order):
    return SeriesWindow(None, 0, order)


def novm_window(hi, order):
    """Truncated Novikov window: finite top degree, tail stored to hi-order."""
    return SeriesWindow(None, hi, order)


@dataclass
class InversionCertificate:
    inverse: SeriesMatrix
    order: int
    residual_check: bool
    mode: str


def _constant_inverse(m: RingMatrix):
    flat = flatten_deg0(m.degree_slice(0))
    inv = linalg.invert(flat)
    if inv is None:
        return None
    return unflatten_deg0(m.ring, inv, m.rows, m.cols)


def invert_series_matrix(m, mode: str, order: int = 24) -> InversionCertificate:
    """Invert a square matrix over the graded series ring, through |degree| <= order.

    mode `nonneg`: entries in degrees >= 0, constant term invertible over R_0.
    mode `conegative`: entries in degrees <= 0, degree-0 part invertible.
    The certificate records that M * X and X * M equal the identity through
    the stated order, checked exactly.
    """
    if isinstance(m, SeriesMatrix):
        m = m.entries
    ring = get_ring(m.ring)
    if not ring.finite_type:
        raise NotFiniteType(f"series inversion needs a finite-type ring, not {ring.ident}")
    if not m.is_square():
        raise NotSquare(f"matrix is {m.rows}x{m.cols}")
    if mode not in ("nonneg", "conegative"):
        raise ValueError(f"unknown inversion mode {mode!r}")
    sign = 1 if mode == "nonneg" else -1
    lo = m.min_degree()
    hi = m.max_degree()
    if mode == "nonneg" and lo is not None and lo < 0:
        raise NegativeDegreeEntry(f"entry component in degree {lo} < 0")
    if mode == "conegative" and hi is not None and hi > 0:
        raise DegreeOutOfRange(f"conegative mode forbids positive degree {hi}")
    const_inv = _constant_inverse(m)
    if const_inv is None:
        if mode == "nonneg":
            raise ConstantTermSingular("tr^0 of the matrix is singular over R_0")
        raise LeadingTermSingular("degree-0 part of the matrix is singular over R_0")

    n = m.rows
    max_shift = 0
    if lo is not None:
        max_shift = hi if mode == "nonneg" else -lo
    slices = {}
    for p in range(1, max_shift + 1):
        sl = m.degree_slice(sign * p)
        if not sl.is_zero():
            slices[p] = sl
    x = {0: const_inv}
    for d in range(1, order + 1):
        acc = RingMatrix.zero(m.ring, n, n)
        for p, mp in slices.items():
            if p > d:
                break
            acc = acc + mp * x[d - p]
        if acc.is_zero():
            x[d] = acc
        else:
            x[d] = -(const_inv * acc)

    ring_zero = RingMatrix.zero(m.ring, n, n)
    total = ring_zero
    for d, xd in x.items():
        total = total + xd
    window = psp_window(order) if mode == "nonneg" else conegative_window(order)
    inverse = SeriesMatrix(m.ring, n, n, window, total)

    ident = RingMatrix.identity(m.ring, n)
    ok = True
    for prod in (m * total, total * m):
        clipped = prod.map_entries(
            lambda e: truncate(e, 0 if sign > 0 else -order, order if sign > 0 else 0)
        )
        if clipped != ident:
            ok = False
    return InversionCertificate(inverse, order, ok, mode)


def in_tilde_omega_plus(m: RingMatrix) -> bool:
    """Membership in the set of square matrices over R_+ whose constant term
    is invertible over R_0 (equivalently: invertible over the non-negative
    series ring)."""
    ring = get_ring(m.ring)
    if not ring.finite_type:
        raise NotFiniteType(ring.ident)
    if not m.is_square():
        raise NotSquare(f"matrix is {m.rows}x{m.cols}")
    lo = m.min_degree()
    if lo is not None and lo < 0:
        raise NegativeDegreeEntry(f"entry component in degree {lo} < 0")
    return _constant_inverse(m) is not None
