"""Partitions of unity and strong-grading diagnostics.

A partition of unity of type (n,-n) is a finite list of pairs (alpha_j,
beta_j) of homogeneous elements, alpha_j of degree n and beta_j of degree -n,
with sum(alpha_j * beta_j) = 1. A Z-graded ring is strongly graded exactly
when partitions of types (1,-1) and (-1,1) exist; higher types follow by
composition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import NotFiniteType, NotStronglyGraded, RingMismatch
from .rings import RingElement, get_ring


@dataclass
class PartitionOfUnity:
    ring: str
    n: int
    pairs: list

    def __iter__(self):
        return iter(self.pairs)


@dataclass
class CheckResult:
    ok: bool
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_partition(p: PartitionOfUnity) -> CheckResult:
    """Check homogeneity of every pair and that the pair products sum to 1."""
    ring = get_ring(p.ring)
    problems = []
    for idx, (alpha, beta) in enumerate(p.pairs):
        if alpha.ring != p.ring or beta.ring != p.ring:
            problems.append(f"pair {idx}: element from a different ring")
            continue
        if not alpha.is_homogeneous(p.n) or alpha.is_zero():
            problems.append(f"pair {idx}: alpha not homogeneous of degree {p.n}")
        if not beta.is_homogeneous(-p.n) or beta.is_zero():
            problems.append(f"pair {idx}: beta not homogeneous of degree {-p.n}")
    total = ring.zero()
    for alpha, beta in p.pairs:
        total = total + alpha * beta
    if total != ring.one():
        problems.append("sum of alpha_j * beta_j is not 1")
    return CheckResult(not problems, problems)


def trivial_partition(ring_ident) -> PartitionOfUnity:
    one = get_ring(ring_ident).one()
    return PartitionOfUnity(get_ring(ring_ident).ident, 0, [(one, one)])


def compose_partitions(p: PartitionOfUnity, q: PartitionOfUnity) -> PartitionOfUnity:
    """Type (m,-m) and (n,-n) compose to type (m+n, -m-n).

    The new pairs are (alpha_i * alpha'_j, beta'_j * beta_i); zero products
    are dropped so the homogeneity invariant stays literal.
    """
    if p.ring != q.ring:
        raise RingMismatch(f"{p.ring} vs {q.ring}")
    pairs = []
    for alpha_i, beta_i in p.pairs:
        for alpha_j, beta_j in q.pairs:
            a = alpha_i * alpha_j
            b = beta_j * beta_i
            if a.is_zero() or b.is_zero():
                continue
            pairs.append((a, b))
    return PartitionOfUnity(p.ring, p.n + q.n, pairs)


def stored_partitions(ring_ident):
    ring = get_ring(ring_ident)
    pairs = ring.stored_partition_pairs()
    if pairs is None:
        return None
    plus, minus = pairs
    return (
        PartitionOfUnity(ring.ident, 1, list(plus)),
        PartitionOfUnity(ring.ident, -1, list(minus)),
    )


def partition_for_degree(ring_ident, n: int) -> PartitionOfUnity:
    """Verified partition of type (n,-n), built by |n|-fold composition of the
    stored type (+-1, -+1) partition; n = 0 gives [(1, 1)]."""
    ring = get_ring(ring_ident)
    if n == 0:
        return trivial_partition(ring.ident)
    stored = stored_partitions(ring.ident)
    if stored is None:
        raise NotStronglyGraded(f"{ring.ident} has no stored partitions of unity")
    step = stored[0] if n > 0 else stored[1]
    out = step
    for _ in range(abs(n) - 1):
        out = compose_partitions(out, step)
    check = verify_partition(out)
    if not check:
        raise NotStronglyGraded(
            f"stored partitions of {ring.ident} failed verification: {check.problems}"
        )
    return out


@dataclass
class StrongGradingReport:
    ring: str
    strongly_graded: bool
    witnesses: tuple | None
    failure_degree: int | None
    surjectivity_checked: int | None
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.strongly_graded


def _pi_surjective(ring, n) -> bool:
    """Surjectivity of R_n (x) R_{-n} -> R_0 over a finite-type ring, decided
    by the rank of the span of pairwise basis products."""
    dim_n = ring.component_dim(n)
    dim_mn = ring.component_dim(-n)
    dim0 = ring.component_dim(0)
    if dim0 == 0:
        return True
    if dim_n == 0 or dim_mn == 0:
        return False
    rows = []
    for i in range(dim_n):
        vi = ring.basis_value(n, i)
        for j in range(dim_mn):
            vj = ring.basis_value(-n, j)
            prod = ring.mul_values(n, vi, -n, vj)
            rows.append(list(prod))
    return linalg.rank(rows) == dim0


def check_strongly_graded(ring_ident, n_max: int = 5) -> StrongGradingReport:
    """Verdict with witnesses: stored type (1,-1)/(-1,1) partitions are
    verified, and finite-type rings additionally get degreewise surjectivity
    checks of the multiplication maps for |n| <= n_max."""
    ring = get_ring(ring_ident)
    stored = stored_partitions(ring.ident)
    problems = []
    witnesses = None
    if stored is not None:
        cp, cm = verify_partition(stored[0]), verify_partition(stored[1])
        if cp and cm:
            witnesses = stored
        else:
            problems.extend(cp.problems + cm.problems)
    if ring.finite_type:
        for n in range(1, n_max + 1):
            for sgn in (1, -1):
                if not _pi_surjective(ring, sgn * n):
                    return StrongGradingReport(
                        ring.ident, False, None, sgn * n, n_max, problems
                    )
        if witnesses is None and stored is None:
            # surjectivity holds degreewise but no witness pair was stored
            problems.append("no stored partitions to exhibit as witnesses")
            return StrongGradingReport(ring.ident, False, None, None, n_max, problems)
        return StrongGradingReport(ring.ident, witnesses is not None, witnesses, None, n_max, problems)
    if witnesses is None:
        return StrongGradingReport(ring.ident, False, None, None, None, problems)
    return StrongGradingReport(ring.ident, True, witnesses, None, None, problems)


@dataclass
class DualBasisData:
    """Dual basis for R_n: generators alpha_j and functionals x -> beta_j * x
    with sum(alpha_j * (beta_j * x)) = x for all x in R_n."""

    n: int
    generators: list
    functionals: list


def dual_basis(ring_ident, n: int) -> DualBasisData:
    pou = partition_for_degree(ring_ident, n)
    return DualBasisData(n, [a for a, _ in pou.pairs], [b for _, b in pou.pairs])


def check_dual_basis(data: DualBasisData, samples) -> CheckResult:
    problems = []
    for x in samples:
        ring = get_ring(x.ring)
        acc = ring.zero()
        for alpha, beta in zip(data.generators, data.functionals):
            acc = acc + alpha * (beta * x)
        if acc != x:
            problems.append(f"dual basis identity fails on {x}")
    return CheckResult(not problems, problems)


# -- tensor products over R_0, reduced by balancing relations ----------------


class BalancedTensor:
    """R_a (x)_{R0} R_b realised as the base-field tensor product modulo the
    balancing relations (x * r) (x) y - x (x) (r * y), r running over a basis
    of R_0. Stores a projection onto chosen quotient coordinates and a
    section back into the full tensor."""

    def __init__(self, ring_ident, a, b):
        ring = get_ring(ring_ident)
        if not ring.finite_type:
            raise NotFiniteType(ring.ident)
        self.ring = ring.ident
        self.a = a
        self.b = b
        da, db, d0 = ring.component_dim(a), ring.component_dim(b), ring.component_dim(0)
        self.full_dim = da * db
        relations = []
        for i in range(da):
            xi = ring.basis_value(a, i)
            for j in range(db):
                yj = ring.basis_value(b, j)
                for k in range(d0):
                    rk = ring.basis_value(0, k)
                    xr = ring.mul_values(a, xi, 0, rk)
                    ry = ring.mul_values(0, rk, b, yj)
                    row = [Fraction(0)] * self.full_dim
                    for ii in range(da):
                        c = xr[ii]
                        if c:
                            row[ii * db + j] += c
                    for jj in range(db):
                        c = ry[jj]
                        if c:
                            row[i * db + jj] -= c
                    if any(row):
                        relations.append(row)
        if relations:
            ech, pivots = linalg.row_echelon(relations)
        else:
            ech, pivots = [], []
        self._ech = ech
        self._pivots = pivots
        pivset = set(pivots)
        self.free_cols = [c for c in range(self.full_dim) if c not in pivset]
        self.dim = len(self.free_cols)

    def reduce(self, full_vec):
        """Coordinates of a full tensor vector in the quotient basis."""
        v = list(full_vec)
        for r, pc in enumerate(self._pivots):
            c = v[pc]
            if c:
                row = self._ech[r]
                for j in range(pc, self.full_dim):
                    if row[j]:
                        v[j] -= c * row[j]
        return [v[c] for c in self.free_cols]

    def section(self, coords):
        """Representative full tensor vector for quotient coordinates."""
        v = [Fraction(0)] * self.full_dim
        for c, val in zip(self.free_cols, coords):
            v[c] = val
        return v

    def pure_tensor(self, va, vb):
        """Full coordinates of (value of degree a) (x) (value of degree b)."""
        db = get_ring(self.ring).component_dim(self.b)
        out = [Fraction(0)] * self.full_dim
        for i, ca in enumerate(va):
            if not ca:
                continue
            for j, cb in enumerate(vb):
                if cb:
                    out[i * db + j] += ca * cb
        return out


_TENSOR_CACHE = {}


def balanced_tensor(ring_ident, a, b) -> BalancedTensor:
    key = (get_ring(ring_ident).ident, a, b)
    got = _TENSOR_CACHE.get(key)
    if got is None:
        got = BalancedTensor(*key)
        _TENSOR_CACHE[key] = got
    return got


@dataclass
class BimoduleIsoReport:
    ring: str
    n: int
    pi_kappa_ok: bool
    mult_iso_ok: bool
    checked_degrees: list
    problems: list = field(default_factory=list)

    def __bool__(self):
        return self.pi_kappa_ok and self.mult_iso_ok


def bimodule_iso_check(ring_ident, n: int, horizon: int = 12) -> BimoduleIsoReport:
    """Verify that multiplication R_n (x)_{R0} R_{-n} -> R_0 is an isomorphism
    with inverse x -> sum(alpha_j (x) beta_j * x), and that multiplication
    R_{-n} (x)_{R0} R_+ -> t^{-n} R_+ is a degreewise isomorphism up to the
    horizon."""
    ring = get_ring(ring_ident)
    if not ring.finite_type:
        raise NotFiniteType(ring.ident)
    pou = partition_for_degree(ring.ident, n)
    problems = []

    # round trips of pi_n and kappa_n
    bt = balanced_tensor(ring.ident, n, -n)
    dim0 = ring.component_dim(0)
    pi_rows = []  # quotient coords -> R_0 coords
    for coords in linalg.identity(bt.dim):
        full = bt.section(coords)
        acc = [Fraction(0)] * dim0
        db = ring.component_dim(-n)
        for i in range(ring.component_dim(n)):
            for j in range(db):
                c = full[i * db + j]
                if c:
                    prod = ring.mul_values(n, ring.basis_value(n, i), -n, ring.basis_value(-n, j))
                    for k in range(dim0):
                        acc[k] += c * prod[k]
        pi_rows.append(acc)
    pi_mat = [[pi_rows[j][i] for j in range(bt.dim)] for i in range(dim0)]
    kappa_cols = []
    for k in range(dim0):
        x = ring.basis_value(0, k)
        full = [Fraction(0)] * bt.full_dim
        for alpha, beta in pou.pairs:
            va = alpha.part(n)
            vb = beta.part(-n)
            bx = ring.mul_values(-n, vb, 0, x)
            full = [u + v for u, v in zip(full, bt.pure_tensor(va, bx))]
        kappa_cols.append(bt.reduce(full))
    kappa_mat = [[kappa_cols[j][i] for j in range(dim0)] for i in range(bt.dim)]
    pk = linalg.mat_mul(pi_mat, kappa_mat)
    kp = linalg.mat_mul(kappa_mat, pi_mat)
    pi_kappa_ok = linalg.mat_eq(pk, linalg.identity(dim0)) and linalg.mat_eq(
        kp, linalg.identity(bt.dim)
    )
    if not pi_kappa_ok:
        problems.append(f"pi/kappa round trip failed for n={n}")

    # degreewise multiplication isomorphism R_{-n} (x) R_+ = t^{-n} R_+
    pou_inv = partition_for_degree(ring.ident, -n)
    checked = []
    mult_ok = True
    for d in range(-n, horizon + 1):
        b = d + n  # second tensor factor degree, must be >= 0
        if b < 0:
            continue
        dim_d = ring.component_dim(d)
        dim_b = ring.component_dim(b)
        dim_mn = ring.component_dim(-n)
        btd = balanced_tensor(ring.ident, -n, b)
        if btd.dim != dim_d:
            mult_ok = False
            problems.append(f"tensor piece dim {btd.dim} != dim R_{d} = {dim_d}")
            continue
        # mult: quotient coords -> R_d coords
        mult_cols = []
        for coords in linalg.identity(btd.dim):
            full = btd.section(coords)
            acc = [Fraction(0)] * dim_d
            for i in range(dim_mn):
                for j in range(dim_b):
                    c = full[i * dim_b + j]
                    if c:
                        prod = ring.mul_values(-n, ring.basis_value(-n, i), b, ring.basis_value(b, j))
                        for k in range(dim_d):
                            acc[k] += c * prod[k]
            mult_cols.append(acc)
        mult_mat = [[mult_cols[j][i] for j in range(btd.dim)] for i in range(dim_d)]
        # inverse candidate rho(z) = sum alpha_j (x) beta_j * z
        rho_cols = []
        for k in range(dim_d):
            z = ring.basis_value(d, k)
            full = [Fraction(0)] * btd.full_dim
            for alpha, beta in pou_inv.pairs:
                va = alpha.part(-n)
                vb = beta.part(n)
                bz = ring.mul_values(n, vb, d, z)
                full = [u + v for u, v in zip(full, btd.pure_tensor(va, bz))]
            rho_cols.append(btd.reduce(full))
        rho_mat = [[rho_cols[j][i] for j in range(dim_d)] for i in range(btd.dim)]
        ok = linalg.mat_eq(linalg.mat_mul(mult_mat, rho_mat), linalg.identity(dim_d)) and linalg.mat_eq(
            linalg.mat_mul(rho_mat, mult_mat), linalg.identity(btd.dim)
        )
        checked.append(d)
        if not ok:
            mult_ok = False
            problems.append(f"multiplication isomorphism fails at degree {d}")
    return BimoduleIsoReport(ring.ident, n, pi_kappa_ok, mult_ok, checked, problems)


# -- the rank-2 free module isomorphism special to the Leavitt algebra -------


def leavitt_q_iso(direction: str, value, allow_any_degree: bool = False):
    """The isomorphism R_+ = Q (+) Q over the Leavitt algebra, Q = t R_+.

    forward(r) = (B*r, D*r) for r with components in degrees >= 0;
    backward(x, y) = A*x + C*y for a pair with components in degrees >= 1.
    The formulas are total on the ring and stay mutually inverse everywhere;
    `allow_any_degree` skips the degree windows of the isomorphism statement.
    """
    from .errors import DegreeOutOfRange

    ring = get_ring("leavitt11")
    gens = ring.generators()

    def check_min(v, minimum, what):
        lo = v.min_degree()
        if not allow_any_degree and lo is not None and lo < minimum:
            raise DegreeOutOfRange(
                f"{what} has a component of degree {lo}, below the minimum {minimum}"
            )

    if direction == "forward":
        r = value
        if not isinstance(r, RingElement) or r.ring != ring.ident:
            raise RingMismatch("forward input must be a leavitt11 element")
        check_min(r, 0, "forward input")
        return (gens["B"] * r, gens["D"] * r)
    if direction == "backward":
        x, y = value
        for v in (x, y):
            if not isinstance(v, RingElement) or v.ring != ring.ident:
                raise RingMismatch("backward input must be a pair of leavitt11 elements")
            check_min(v, 1, "backward input")
        return gens["A"] * x + gens["C"] * y
    raise ValueError(f"direction must be forward or backward, not {direction!r}")
