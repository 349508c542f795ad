"""Bounded complexes of finitely generated free modules over R_+, base change
along the canonical ring maps, contraction machinery, and the four-way
detector for contractibility over the degree-zero subring.

Conventions: differentials lower the chain level, d_n : C_n -> C_{n-1}, and a
contraction satisfies d s + s d = id levelwise. The mapping cone of f: X -> Y
has cone_n = X_{n-1} (+) Y_n with d(x, y) = (-d x, f x + d y).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (
    DeltaSingular,
    NegativeDegreeEntry,
    NotAComplex,
    NotFiniteType,
    ShapeMismatch,
    UnsupportedTarget,
)
from .matrices import RingMatrix, flatten_deg0, flatten_field, unflatten_deg0
from .ratfunc import RatFunc
from .rings import get_ring, truncate
from .series import SeriesMatrix, invert_series_matrix, psp_window, novm_window, in_tilde_omega_plus


@dataclass
class FreeChainComplex:
    """Bounded complex of free right modules over the non-negative part R_+,
    given by ranks and differential matrices (entries in degrees >= 0)."""

    ring: str
    levels: dict
    differentials: dict

    def rank(self, n) -> int:
        return self.levels.get(n, 0)

    def support(self):
        return sorted(n for n, r in self.levels.items() if r > 0)

    def diff(self, n) -> RingMatrix:
        d = self.differentials.get(n)
        if d is None:
            return RingMatrix.zero(self.ring, self.rank(n - 1), self.rank(n))
        return d

    def max_entry_degree(self):
        degs = set()
        for d in self.differentials.values():
            degs.update(d.entry_degrees())
        return max(degs) if degs else 0


def validate_complex(c: FreeChainComplex):
    """Raise NotAComplex / shape / degree errors unless both invariants hold."""
    for n, m in c.differentials.items():
        if m.rows != c.rank(n - 1) or m.cols != c.rank(n):
            raise ShapeMismatch(
                f"d_{n} is {m.rows}x{m.cols}, expected {c.rank(n - 1)}x{c.rank(n)}"
            )
        lo = m.min_degree()
        if lo is not None and lo < 0:
            raise NegativeDegreeEntry(f"d_{n} has an entry component in degree {lo}")
    for n in sorted(c.levels):
        d_n = c.diff(n)
        d_n1 = c.diff(n + 1)
        if d_n.cols and d_n1.rows and not (d_n * d_n1).is_zero():
            raise NotAComplex(n + 1)


# -- base change targets ------------------------------------------------------


@dataclass(frozen=True)
class R0Target:
    pass


@dataclass(frozen=True)
class PspWindow:
    order: int = 24


@dataclass(frozen=True)
class NovmWindow:
    order: int = 24


@dataclass(frozen=True)
class RationalFunctionField:
    pass


@dataclass(frozen=True)
class FullRing:
    pass


@dataclass
class R0Complex:
    """Complex over the degree-0 subring; differentials are degree-0 matrices."""

    ring: str
    levels: dict
    differentials: dict

    def rank(self, n):
        return self.levels.get(n, 0)

    def diff(self, n) -> RingMatrix:
        d = self.differentials.get(n)
        if d is None:
            return RingMatrix.zero(self.ring, self.rank(n - 1), self.rank(n))
        return d


@dataclass
class SeriesComplex:
    ring: str
    levels: dict
    differentials: dict
    kind: str  # "psp" or "novm"
    order: int


@dataclass
class FieldComplex:
    """Complex over the rational function field, flattened to Q(t) matrices.

    `block` is the matrix size of the coefficient ring, so the Q(t)-dimension
    of level n is levels[n] * block.
    """

    ring: str
    levels: dict
    block: int
    differentials: dict

    def dim(self, n):
        return self.levels.get(n, 0) * self.block

    def diff(self, n):
        d = self.differentials.get(n)
        if d is None:
            return [[RatFunc.zero()] * self.dim(n) for _ in range(self.dim(n - 1))]
        return d


@dataclass
class RComplex:
    """The same differential data viewed over the full Z-graded ring."""

    ring: str
    levels: dict
    differentials: dict


def base_change(c: FreeChainComplex, target):
    """Tensor the complex along tr^0 (R0), the series embeddings (Psp / Novm
    windows), the rational function field, or the inclusion into the full
    ring. Ranks are unchanged; differentials are mapped entrywise."""
    validate_complex(c)
    ring = get_ring(c.ring)
    if isinstance(target, R0Target):
        diffs = {n: m.degree_slice(0) for n, m in c.differentials.items()}
        return R0Complex(c.ring, dict(c.levels), diffs)
    if isinstance(target, (PspWindow, NovmWindow)):
        order = target.order
        if isinstance(target, PspWindow):
            window = psp_window(order)
            kind = "psp"
        else:
            hi = max(c.max_entry_degree(), 0)
            window = novm_window(hi, order + hi)
            kind = "novm"
        diffs = {
            n: SeriesMatrix(c.ring, m.rows, m.cols, window, m)
            for n, m in c.differentials.items()
        }
        return SeriesComplex(c.ring, dict(c.levels), diffs, kind, order)
    if isinstance(target, RationalFunctionField):
        if ring.ident not in ("laurent",) and not ring.ident.startswith("matrix_laurent:"):
            raise UnsupportedTarget(
                f"rational function field base change is unavailable for {ring.ident}"
            )
        block = getattr(ring, "n", 1)
        diffs = {n: flatten_field(m) for n, m in c.differentials.items()}
        return FieldComplex(c.ring, dict(c.levels), block, diffs)
    if isinstance(target, FullRing):
        return RComplex(c.ring, dict(c.levels), dict(c.differentials))
    raise UnsupportedTarget(f"unknown base change target {target!r}")


# -- contractions over a field ------------------------------------------------


def field_contraction(dims, diffs, one=linalg.QONE, zero=linalg.QZERO):
    """Explicit contraction of an acyclic bounded complex over a field.

    dims: level -> dimension; diffs: level -> matrix (dims[n-1] x dims[n]).
    Returns (True, {n: s_n}) with d s + s d = id exactly, or
    (False, first_failing_level). Construction: pick pivot columns J_n of
    d_n, so the J_n unit vectors span a complement W_n of ker d_n; on
    im d_n = d(W_n) invert d, on W_{n-1} use zero.
    """
    levels = sorted(n for n, d in dims.items() if d > 0)
    if not levels:
        return True, {}

    def dim(n):
        return dims.get(n, 0)

    def dmat(n):
        m = diffs.get(n)
        if m is None:
            return [[zero] * dim(n) for _ in range(dim(n - 1))]
        return m

    pivots = {}
    ranks = {}
    for n in range(levels[0], levels[-1] + 2):
        m = dmat(n)
        if dim(n) == 0 or dim(n - 1) == 0:
            pivots[n] = []
            ranks[n] = 0
            continue
        _, piv = linalg.row_echelon(m)
        pivots[n] = piv
        ranks[n] = len(piv)
    for n in levels:
        if ranks.get(n, 0) + ranks.get(n + 1, 0) != dim(n):
            return False, n

    s = {}
    for n in range(levels[0], levels[-1] + 1):
        tgt = dim(n)  # s_n : C_n -> C_{n+1}
        src = dim(n + 1)
        if tgt == 0:
            continue
        jn1 = pivots.get(n + 1, [])  # pivot columns of d_{n+1}, inside C_{n+1}
        jn = pivots.get(n, [])  # pivot columns of d_n, inside C_n
        cols = []
        d_n1 = dmat(n + 1)
        for j in jn1:
            cols.append([d_n1[i][j] for i in range(tgt)])
        for j in jn:
            cols.append([one if i == j else zero for i in range(tgt)])
        p = [[cols[j][i] for j in range(len(cols))] for i in range(tgt)]
        pinv = linalg.invert(p, one, zero)
        if pinv is None:
            return False, n
        sn = [[zero] * tgt for _ in range(src)]
        for row, j in enumerate(jn1):
            for cidx in range(tgt):
                sn[j][cidx] = pinv[row][cidx]
        s[n] = sn
    return True, s


@dataclass
class DegreewiseMapFamily:
    maps: dict


@dataclass
class Contraction:
    s: DegreewiseMapFamily


@dataclass
class ProtoContraction:
    s: DegreewiseMapFamily
    delta: dict
    delta_invertible: dict


@dataclass
class R0ContractionResult:
    contractible: bool
    contraction: Contraction | None
    failing_level: int | None

    def __bool__(self):
        return self.contractible


def _flat_complex(c0: R0Complex):
    ring = get_ring(c0.ring)
    n = getattr(ring, "n", 1)
    dims = {lvl: r * n for lvl, r in c0.levels.items()}
    diffs = {lvl: flatten_deg0(m) for lvl, m in c0.differentials.items()}
    return dims, diffs


def r0_contractibility(c0: R0Complex) -> R0ContractionResult:
    """Decide contractibility over R_0 (a field or matrix algebra) and return
    an explicit contraction on success.

    Matrix coefficients are handled by block expansion over Q; any Q-linear
    contraction of the expanded complex reassembles into an R_0-linear one,
    so the construction is lossless.
    """
    ring = get_ring(c0.ring)
    if not ring.finite_type:
        raise NotFiniteType(ring.ident)
    dims, diffs = _flat_complex(c0)
    ok, result = field_contraction(dims, diffs)
    if not ok:
        return R0ContractionResult(False, None, result)
    maps = {}
    for n, sn in result.items():
        maps[n] = unflatten_deg0(c0.ring, sn, c0.rank(n + 1), c0.rank(n))
    contraction = Contraction(DegreewiseMapFamily(maps))
    check = verify_contraction(c0, contraction)
    if not check:
        raise AssertionError(f"internal error: constructed contraction fails: {check}")
    return R0ContractionResult(True, contraction, None)


def verify_contraction(c0: R0Complex, contraction: Contraction):
    """Exact levelwise check of d s + s d = id for an R0 complex."""
    from .partitions import CheckResult

    maps = contraction.s.maps
    problems = []
    for n, r in c0.levels.items():
        if r == 0:
            continue
        s_n = maps.get(n, RingMatrix.zero(c0.ring, c0.rank(n + 1), r))
        s_prev = maps.get(n - 1, RingMatrix.zero(c0.ring, r, c0.rank(n - 1)))
        total = c0.diff(n + 1) * s_n + s_prev * c0.diff(n)
        if total != RingMatrix.identity(c0.ring, r):
            problems.append(f"ds+sd != id at level {n}")
    return CheckResult(not problems, problems)


def proto_to_contraction(c0: R0Complex, proto_maps) -> Contraction:
    """Convert degree-raising maps with invertible ds+sd into a genuine
    contraction via s' = s (ds+sd)^{-1}.

    Soundness uses that delta = ds+sd commutes with d (automatic from d^2=0,
    but checked here exactly); DeltaSingular(n) reports a failing level.
    """
    if isinstance(proto_maps, ProtoContraction):
        proto_maps = proto_maps.s.maps
    ring = get_ring(c0.ring)
    if not ring.finite_type:
        raise NotFiniteType(ring.ident)

    def smat(n):
        m = proto_maps.get(n)
        if m is None:
            return RingMatrix.zero(c0.ring, c0.rank(n + 1), c0.rank(n))
        return m

    deltas = {}
    for n, r in c0.levels.items():
        if r == 0:
            continue
        deltas[n] = c0.diff(n + 1) * smat(n) + smat(n - 1) * c0.diff(n)
    inverses = {}
    for n, delta in deltas.items():
        flat = flatten_deg0(delta)
        inv = linalg.invert(flat)
        if inv is None:
            raise DeltaSingular(n)
        inverses[n] = unflatten_deg0(c0.ring, inv, delta.rows, delta.cols)
    for n, delta in deltas.items():
        nxt = deltas.get(n - 1)
        if nxt is not None:
            if c0.diff(n) * delta != nxt * c0.diff(n):
                raise AssertionError(f"delta does not commute with d at level {n}")
    maps = {n: smat(n) * inverses[n] for n in deltas}
    contraction = Contraction(DegreewiseMapFamily(maps))
    check = verify_contraction(c0, contraction)
    if not check:
        raise AssertionError(f"proto conversion produced a bad contraction: {check}")
    return contraction


# -- the degree substitute map and its cone -----------------------------------


def _left_mult_block(ring, value, d_from, d_shift):
    """Q-matrix of left multiplication by a homogeneous value of degree
    d_shift, as a map R_{d_from} -> R_{d_from + d_shift}."""
    src = ring.component_dim(d_from)
    dst = ring.component_dim(d_from + d_shift)
    out = linalg.zeros(dst, src)
    for i in range(src):
        prod = ring.mul_values(d_shift, value, d_from, ring.basis_value(d_from, i))
        for k in range(dst):
            out[k][i] = prod[k]
    return out


def _slice_action(ring, m: RingMatrix, d: int):
    """Q-matrix of the degree-0 part of m acting on degree-d coordinate blocks."""
    dimd = ring.component_dim(d)
    rows, cols = m.rows, m.cols
    out = linalg.zeros(rows * dimd, cols * dimd)
    for i in range(rows):
        for j in range(cols):
            v = m.entries[i][j].part(0)
            if v is None:
                continue
            block = _left_mult_block(ring, v, d, 0)
            for a in range(dimd):
                for b in range(dimd):
                    if block[a][b]:
                        out[i * dimd + a][j * dimd + b] = block[a][b]
    return out


@dataclass
class ZetaConeReport:
    quasi_iso: bool
    first_failing_degree: int | None
    horizon: int
    slice_exact: dict

    def __bool__(self):
        return self.quasi_iso


def zeta_cone(c: FreeChainComplex, horizon: int = 24) -> ZetaConeReport:
    """Quasi-isomorphism test for the map C (x) t^1 R_+ -> C induced by the
    inclusion t^1 R_+ -> R_+ (the substitute for the action of t).

    The cone is filtered by internal degree; its associated-graded slice in
    degree d is checked for exactness by finite-dimensional linear algebra.
    For d >= 1 the slice is the cone of an identity map, for d = 0 it is the
    complex induced over R_0, so the verdict through any horizon matches
    contractibility over R_0.
    """
    validate_complex(c)
    ring = get_ring(c.ring)
    if not ring.finite_type:
        raise NotFiniteType(ring.ident)
    levels = c.support()
    slice_exact = {}
    first_fail = None
    for d in range(0, horizon + 1):
        dimd = ring.component_dim(d)
        dims = {}
        diffs = {}
        if not levels or dimd == 0:
            slice_exact[d] = True
            continue
        lo, hi = levels[0], levels[-1]
        x_dim = {n: (c.rank(n) * dimd if d >= 1 else 0) for n in range(lo - 1, hi + 2)}
        c_dim = {n: c.rank(n) * dimd for n in range(lo - 1, hi + 2)}
        for n in range(lo, hi + 2):
            dims[n] = x_dim.get(n - 1, 0) + c_dim.get(n, 0)
        slices = {n: _slice_action(ring, c.diff(n), d) for n in range(lo, hi + 2)}
        for n in range(lo, hi + 2):
            rows = x_dim.get(n - 2, 0) + c_dim.get(n - 1, 0)
            cols = x_dim.get(n - 1, 0) + c_dim.get(n, 0)
            if rows == 0 or cols == 0:
                continue
            mat = linalg.zeros(rows, cols)
            a_prev = slices.get(n - 1)
            if d >= 1 and x_dim.get(n - 1, 0) and x_dim.get(n - 2, 0):
                for i in range(len(a_prev)):
                    for j in range(len(a_prev[0])):
                        mat[i][j] = -a_prev[i][j]
            if d >= 1 and x_dim.get(n - 1, 0):
                off_r = x_dim.get(n - 2, 0)
                for i in range(x_dim[n - 1]):
                    mat[off_r + i][i] = Fraction(1)
            a_n = slices.get(n)
            if c_dim.get(n, 0) and c_dim.get(n - 1, 0):
                off_r = x_dim.get(n - 2, 0)
                off_c = x_dim.get(n - 1, 0)
                for i in range(len(a_n)):
                    for j in range(len(a_n[0])):
                        if a_n[i][j]:
                            mat[off_r + i][off_c + j] = a_n[i][j]
            diffs[n] = mat
        exact = True
        ranks = {}
        for n in sorted(dims):
            m = diffs.get(n)
            ranks[n] = linalg.rank(m) if m is not None else 0
        for n in sorted(dims):
            if dims[n] and ranks.get(n, 0) + ranks.get(n + 1, 0) != dims[n]:
                exact = False
                break
        slice_exact[d] = exact
        if not exact and first_fail is None:
            first_fail = d
    return ZetaConeReport(first_fail is None, first_fail, horizon, slice_exact)


# -- the four-route report ----------------------------------------------------


@dataclass
class Route2Certificate:
    """Constructive certificate behind the localisation route: the lift S^+ of
    an R_0 contraction, the matrices ds+sd (each with invertible constant
    term), their series inverses, and the induced contraction over the
    non-negative series ring through the stated order."""

    s_plus: dict
    delta: dict
    delta_inverses: dict
    psp_contraction: dict
    order: int
    identity_ok: bool


@dataclass
class RouteReport:
    route1: R0ContractionResult
    route2: Route2Certificate | None
    route4: ZetaConeReport
    order: int
    agree: bool

    def affirmative(self):
        return self.route1.contractible


def _series_truncate(m: RingMatrix, lo, hi) -> RingMatrix:
    return m.map_entries(lambda e: truncate(e, lo, hi))


def lift_r0_contraction(c: FreeChainComplex, contraction: Contraction):
    """View the R_0 contraction as degree-0 matrices over R_+ (verbatim lift)."""
    return {n: m for n, m in contraction.s.maps.items()}


def psp_contraction_from_lift(c: FreeChainComplex, s_plus, order: int):
    """Build a contraction of C over the non-negative series window from a
    lifted R_0 contraction, via series inversion of ds+sd."""
    deltas = {}
    for n, r in c.levels.items():
        if r == 0:
            continue
        s_n = s_plus.get(n, RingMatrix.zero(c.ring, c.rank(n + 1), r))
        s_prev = s_plus.get(n - 1, RingMatrix.zero(c.ring, r, c.rank(n - 1)))
        deltas[n] = c.diff(n + 1) * s_n + s_prev * c.diff(n)
    in_tilde = {n: in_tilde_omega_plus(m) for n, m in deltas.items()}
    inverses = {n: invert_series_matrix(m, "nonneg", order) for n, m in deltas.items()}
    prime = {}
    for n in deltas:
        s_n = s_plus.get(n, RingMatrix.zero(c.ring, c.rank(n + 1), c.rank(n)))
        prod = s_n * inverses[n].inverse.entries
        prime[n] = _series_truncate(prod, 0, order)
    identity_ok = check_psp_contraction(c, prime, order)
    return deltas, in_tilde, inverses, prime, identity_ok


def check_psp_contraction(c: FreeChainComplex, prime, order: int) -> bool:
    """Exact check of d s' + s' d = id in every stored degree 0..order."""
    for n, r in c.levels.items():
        if r == 0:
            continue
        s_n = prime.get(n, RingMatrix.zero(c.ring, c.rank(n + 1), r))
        s_prev = prime.get(n - 1, RingMatrix.zero(c.ring, r, c.rank(n - 1)))
        total = c.diff(n + 1) * s_n + s_prev * c.diff(n)
        clipped = _series_truncate(total, 0, order)
        if clipped != RingMatrix.identity(c.ring, r):
            return False
    return True


def r0_routes_report(c: FreeChainComplex, order: int = 24) -> RouteReport:
    """Run the equivalent detectors for contractibility of C (x) R_0 and
    report their agreement.

    Route 1 builds an explicit R_0 contraction (or refuses); route 2 turns it
    into a certificate over the series ring -- the lift S^+, membership of
    ds+sd in the invertible-constant-term matrices, and a verified series
    contraction (this certificate also witnesses contractibility over the
    associated universal localisation, through which the series ring
    factors); route 4 tests the degree-substitute map via its cone. A
    negative route 1 comes with no certificate, and the inversion recursion
    cannot fail once the constant terms are invertible, so finite order never
    flips an affirmative verdict.
    """
    validate_complex(c)
    route1 = r0_contractibility(base_change(c, R0Target()))
    route4 = zeta_cone(c, horizon=order)
    route2 = None
    if route1.contractible:
        s_plus = lift_r0_contraction(c, route1.contraction)
        deltas, in_tilde, inverses, prime, identity_ok = psp_contraction_from_lift(
            c, s_plus, order
        )
        route2 = Route2Certificate(
            s_plus=s_plus,
            delta=deltas,
            delta_inverses=inverses,
            psp_contraction=prime,
            order=order,
            identity_ok=identity_ok and all(in_tilde.values()),
        )
    agree = route1.contractible == route4.quasi_iso
    if route1.contractible:
        agree = agree and route2 is not None and route2.identity_ok
    return RouteReport(route1, route2, route4, order, agree)


# -- the on-disk complex format ----------------------------------------------


def complex_to_text(c: FreeChainComplex) -> str:
    from .exprs import matrix_to_str

    lines = [f"ring {c.ring}"]
    for n in sorted(c.levels):
        lines.append(f"level {n} rank {c.levels[n]}")
    for n in sorted(c.differentials):
        m = c.differentials[n]
        if m.rows and m.cols:
            lines.append(f"d {n} = {matrix_to_str(m)}")
    return "\n".join(lines) + "\n"


def parse_complex_text(text: str) -> FreeChainComplex:
    """Line format: `ring <id>`, `level <n> rank <r>`, `d <n> = [[...]]`."""
    from .errors import ParseError
    from .exprs import parse_matrix

    ring_ident = None
    levels = {}
    diffs_raw = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "ring" and len(parts) == 2:
                ring_ident = parts[1]
            elif parts[0] == "level" and len(parts) == 4 and parts[2] == "rank":
                levels[int(parts[1])] = int(parts[3])
            elif parts[0] == "d" and len(parts) >= 4 and parts[2] == "=":
                diffs_raw.append((lineno, int(parts[1]), line.split("=", 1)[1].strip()))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise ParseError(f"cannot parse complex line {raw!r}", line=lineno) from None
    if ring_ident is None:
        raise ParseError("complex file is missing a `ring` line")
    get_ring(ring_ident)
    diffs = {}
    for lineno, n, body in diffs_raw:
        try:
            diffs[n] = parse_matrix(ring_ident, body)
        except ParseError as exc:
            raise ParseError(f"bad matrix for d {n}: {exc}", line=lineno) from None
    c = FreeChainComplex(ring_ident, levels, diffs)
    validate_complex(c)
    return c
