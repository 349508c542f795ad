"""Fredholm matrices, Novikov contractibility, finite domination."""

import random
from fractions import Fraction

import pytest

from helpers import cofactor_det, field_acyclic_oracle, rand_matrix, random_complex
from zgraded.complexes import FreeChainComplex, R0Target, base_change, r0_contractibility
from zgraded.domination import (
    check_findom_certificate,
    findom_detect,
    graded_cokernel,
    is_fredholm,
    leavitt_findom_example,
    novikov_contractibility,
    suitable_shift,
)
from zgraded.errors import NotSuitable, UnsupportedRing, ZeroMatrix
from zgraded.exprs import element_to_str, parse_matrix
from zgraded.matrices import RingMatrix, flatten_poly
from zgraded.ratfunc import RatFunc
from zgraded.rings import get_ring


def lm(text):
    return parse_matrix("laurent", text)


def test_suitable_shift_examples():
    assert suitable_shift(lm("[[t^-2 + 1]]")) == 2
    assert suitable_shift(lm("[[1, t],[t^2, 3]]")) == 0
    assert suitable_shift(lm("[[t^3]]")) == -3
    with pytest.raises(ZeroMatrix):
        suitable_shift(lm("[[0]]"))


def test_graded_cokernel_of_t():
    rep = graded_cokernel(lm("[[t]]"), 0, 12)
    assert rep.injective and rep.stabilized
    assert rep.cokernel_dims[0] == 1
    assert all(rep.cokernel_dims[d] == 0 for d in range(1, 13))
    assert rep.total_dim == 1

    rep1 = graded_cokernel(lm("[[t]]"), 1, 12)
    assert rep1.total_dim == 2
    # shift consistency: totals differ by dim R_-1 = 1
    assert rep1.total_dim - rep.total_dim == 1


def test_graded_cokernel_not_injective():
    rep = graded_cokernel(lm("[[0]]"), 0, 8)
    assert not rep.injective and not rep.stabilized


def test_graded_cokernel_not_suitable():
    with pytest.raises(NotSuitable):
        graded_cokernel(lm("[[t^-2]]"), 1, 8)


def test_finite_type_required():
    from zgraded.errors import NotFiniteType

    with pytest.raises(NotFiniteType):
        graded_cokernel(parse_matrix("leavitt11", "[[B]]"), 0, 4)
    with pytest.raises(NotFiniteType):
        is_fredholm(parse_matrix("leavitt11", "[[B]]"))


def test_fredholm_examples():
    v = is_fredholm(lm("[[t]]"))
    assert v.fredholm and v.total_dim == 1 and v.oracle_det_degree == 1

    v2 = is_fredholm(lm("[[t, 1],[0, t]]"))
    assert v2.fredholm and v2.total_dim == 2 and v2.oracle_det_degree == 2

    v3 = is_fredholm(lm("[[0]]"))
    assert not v3.fredholm and not v3.injective

    v4 = is_fredholm(lm("[[1 - t]]"))
    assert v4.fredholm and v4.total_dim == 1

    v5 = is_fredholm(lm("[[t^-2 + 1]]"))
    assert v5.fredholm and v5.suitable_m == 2 and v5.total_dim == v5.oracle_det_degree == 2


def test_fredholm_matrix_ring_and_step2():
    v = is_fredholm(parse_matrix("matrix_laurent:2", "[[E11*t + E22]]"))
    assert v.fredholm and v.total_dim == 2 and v.oracle_det_degree == 1
    v2 = is_fredholm(parse_matrix("laurent_step2", "[[u]]"))
    assert v2.fredholm and v2.total_dim == 1 and v2.cokernel_dims[0] == 1


def test_fredholm_det_oracle_agreement_random():
    rng = random.Random(71)
    for _ in range(40):
        n = rng.randint(1, 3)
        a = rand_matrix(rng, "laurent", n, n, max_deg=3, min_deg=-2)
        if a.is_zero():
            continue
        verdict = is_fredholm(a)  # raises CertificateFailure on backend mismatch
        m = max(0, suitable_shift(a))
        poly, _, _ = flatten_poly(a, twist=m)
        det = cofactor_det([[RatFunc(p) for p in row] for row in poly])
        assert verdict.fredholm == bool(det)
        if verdict.fredholm:
            assert verdict.total_dim == det.top_degree()


def test_fredholm_shift_consistency():
    # widening the target from t^-m R_+^k to t^-n R_+^k adds one copy of
    # (+)_{j=-n}^{-m-1} R_j per free-module column, so totals differ by
    # k * sum(dim R_j) -- the k = 1 case is the bare sum
    rng = random.Random(73)
    checked = 0
    while checked < 12:
        size = rng.randint(1, 2)
        a = rand_matrix(rng, "laurent", size, size, max_deg=2, min_deg=-1)
        if a.is_zero():
            continue
        v = is_fredholm(a)
        if not v.fredholm:
            continue
        m = v.suitable_m
        base = graded_cokernel(a, m, 24).total_dim
        for n in range(m + 1, m + 4):
            total = graded_cokernel(a, n, 24).total_dim
            assert total - base == size * (n - m)
        checked += 1


def test_novikov_examples():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[t]]")})
    assert novikov_contractibility(c).contractible
    c0 = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[0]]")})
    assert not novikov_contractibility(c0).contractible
    c1 = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[1 + t]]")})
    assert novikov_contractibility(c1).contractible
    with pytest.raises(UnsupportedRing):
        novikov_contractibility(FreeChainComplex("leavitt11", {0: 1}, {}))
    with pytest.raises(UnsupportedRing):
        novikov_contractibility(FreeChainComplex("laurent_step2", {0: 1}, {}))


def test_findom_of_t_explicit():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[t]]")})
    verdict, cert = findom_detect(c, 24)
    assert verdict.finitely_dominated
    assert element_to_str(cert.s_plus[0].entry(0, 0)) == "t^-1"
    assert cert.e[0] == RingMatrix.identity("laurent", 1)
    assert cert.e[1] == RingMatrix.identity("laurent", 1)
    assert check_findom_certificate(c, cert)


def test_findom_negative():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[0]]")})
    verdict, cert = findom_detect(c, 24)
    assert not verdict.finitely_dominated and cert is None


def test_findom_r0_contractible_instance():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[1 - t]]")})
    verdict, cert = findom_detect(c, 24)
    assert verdict.finitely_dominated
    assert check_findom_certificate(c, cert)
    # E_0 is the unit plus a single stray term at the truncation edge
    e0 = cert.e[0].entry(0, 0)
    assert e0.part(0) == (Fraction(1),)
    assert all(d < 0 for d in e0.parts if d != 0)


def test_findom_matches_field_oracle_random():
    rng = random.Random(79)
    for _ in range(25):
        c = random_complex(rng, "laurent", max_rank=2, max_deg=2)
        verdict, cert = findom_detect(c, 16)
        assert verdict.finitely_dominated == field_acyclic_oracle(c)
        if verdict.finitely_dominated:
            assert check_findom_certificate(c, cert)


def test_findom_certificate_perturbation_rejected():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: lm("[[t]]")})
    _, cert = findom_detect(c, 24)
    ring = get_ring("laurent")
    bad = dict(cert.s_plus)
    bad[0] = bad[0] + RingMatrix("laurent", 1, 1, [[ring.generators()["t"]]])
    from zgraded.domination import FinDomCertificate

    tampered = FinDomCertificate(bad, cert.e, cert.e_inverses, cert.order, True)
    assert not check_findom_certificate(c, tampered)


def test_r0_contractible_implies_findom():
    rng = random.Random(83)
    found = 0
    for _ in range(40):
        c = random_complex(rng, "laurent", max_rank=2, max_deg=2)
        if r0_contractibility(base_change(c, R0Target())).contractible:
            found += 1
            verdict, _ = findom_detect(c, 16)
            assert verdict.finitely_dominated
    assert found >= 3


def test_findom_matrix_ring():
    rng = random.Random(89)
    c = FreeChainComplex(
        "matrix_laurent:2",
        {1: 1, 0: 1},
        {1: parse_matrix("matrix_laurent:2", "[[E11*t + E12 + E22*t^2]]")},
    )
    verdict, cert = findom_detect(c, 16)
    assert verdict.finitely_dominated == field_acyclic_oracle(c)
    if cert is not None:
        assert check_findom_certificate(c, cert)


def test_leavitt_worked_example():
    rep = leavitt_findom_example()
    assert rep["ok"]
    assert rep["checks"]["AB + CD = 1"]
    assert rep["checks"]["forward(A) = (1, 0)"]
