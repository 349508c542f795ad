"""Canonical resolution identities, half-torus, and the Mather trick."""

import random
from fractions import Fraction

import pytest

from helpers import rand_matrix
from zgraded.complexes import FreeChainComplex, R0Complex
from zgraded.errors import NotFiniteType, NotStronglyGraded
from zgraded.exprs import parse_element, parse_matrix
from zgraded.matrices import RingMatrix
from zgraded.partitions import PartitionOfUnity, partition_for_degree
from zgraded.resolution import canonical_resolution, half_torus, mather_cone


def el(ring, text):
    return parse_element(ring, text)


def test_resolution_rank1_identities():
    c = FreeChainComplex("laurent", {0: 1}, {})
    pou = partition_for_degree("laurent", 1)
    res = canonical_resolution(c, pou, 16)
    assert res.identities_ok and res.ses_exact

    # hand-frozen values: on the (a, b) piece mu is the 1x1 identity block to
    # (a+1, b-1), since m (x) t^b -> m t (x) t^(b-1)
    lev = res.levels[0]
    assert lev.iota_minus_mu[(0, 2)][(0, 2)] == [[Fraction(1)]]
    assert lev.iota_minus_mu[(0, 2)][(1, 1)] == [[Fraction(-1)]]
    assert lev.pi[(2, 1)][("M", 3)] == [[Fraction(1)]]
    # rho on (0, b) stacks identity blocks at (k, b-k) for k < b
    assert set(lev.rho[(0, 3)]) == {(0, 3), (1, 2), (2, 1)}


def test_mu_independent_of_partition():
    c = FreeChainComplex("laurent", {0: 2}, {})
    pous = [
        partition_for_degree("laurent", 1),
        PartitionOfUnity("laurent", 1, [(el("laurent", "2*t"), el("laurent", "1/2*t^-1"))]),
        PartitionOfUnity(
            "laurent",
            1,
            [
                (el("laurent", "1/2*t"), el("laurent", "t^-1")),
                (el("laurent", "1/2*t"), el("laurent", "t^-1")),
            ],
        ),
    ]
    reference = canonical_resolution(c, pous[0], 10)
    for pou in pous[1:]:
        other = canonical_resolution(c, pou, 10)
        for n in reference.levels:
            assert reference.levels[n].iota_minus_mu == other.levels[n].iota_minus_mu
            assert reference.levels[n].rho == other.levels[n].rho


def test_resolution_matrix_ring():
    c = FreeChainComplex("matrix_laurent:2", {0: 1}, {})
    pou = partition_for_degree("matrix_laurent:2", 1)
    res = canonical_resolution(c, pou, 8)
    assert res.identities_ok and res.ses_exact


def test_resolution_errors():
    pou = partition_for_degree("laurent", 1)
    with pytest.raises(NotFiniteType):
        canonical_resolution(FreeChainComplex("leavitt11", {0: 1}, {}), pou, 4)
    with pytest.raises(NotStronglyGraded):
        canonical_resolution(
            FreeChainComplex("laurent_step2", {0: 1}, {}),
            PartitionOfUnity("laurent_step2", 1, []),
            4,
        )


def test_half_torus_examples():
    rep = half_torus(FreeChainComplex("laurent", {0: 1}, {}), 24)
    assert rep.ses_exact and rep.cone_d_squared_zero

    zero = half_torus(FreeChainComplex("laurent", {}, {}), 8)
    assert bool(zero) and zero.cone_dims == {}

    c = FreeChainComplex(
        "laurent", {1: 1, 0: 1}, {1: parse_matrix("laurent", "[[t]]")}
    )
    rep2 = half_torus(c, 12)
    assert rep2.ses_exact and rep2.cone_d_squared_zero


def test_half_torus_matrix_random():
    rng = random.Random(67)
    c = FreeChainComplex(
        "matrix_laurent:2",
        {1: 2, 0: 2},
        {1: rand_matrix(rng, "matrix_laurent:2", 2, 2, 2)},
    )
    rep = half_torus(c, 12)
    assert rep.ses_exact and rep.cone_d_squared_zero


def _identity_instance():
    c = FreeChainComplex(
        "laurent", {1: 1, 0: 1}, {1: parse_matrix("laurent", "[[2]]")}
    )
    one1 = RingMatrix.identity("laurent", 1)
    return c, c, {0: one1, 1: one1}, {0: one1, 1: one1}, {}, {}


def _cokernel_instance():
    c = FreeChainComplex("laurent", {1: 1, 0: 1}, {1: parse_matrix("laurent", "[[t]]")})
    d0 = R0Complex("laurent", {0: 1}, {})
    one1 = RingMatrix.identity("laurent", 1)
    alpha = {0: one1}
    beta = {0: one1}
    h = {0: parse_matrix("laurent", "[[t^-1]]")}
    return c, d0, alpha, beta, h, {}


def test_mather_identity_instance():
    c, d0, alpha, beta, h, hp = _identity_instance()
    rep = mather_cone(c, d0, alpha, beta, h, horizon=12, h_prime=hp)
    assert rep.j_identity_ok and rep.alpha_chain_ok and rep.beta_chain_ok
    assert rep.cone_xi is not None and rep.cone_xi.exact
    # psi reduces to iota - mu here, so J vanishes
    for n, bm in rep.data.j.items():
        for src, tgts in bm.items():
            for mat in tgts.values():
                assert all(v == 0 for row in mat for v in row)


def test_mather_cokernel_instance():
    c, d0, alpha, beta, h, hp = _cokernel_instance()
    rep = mather_cone(c, d0, alpha, beta, h, horizon=16, h_prime=hp)
    assert bool(rep)
    assert rep.h_homotopy_ok and rep.j_identity_ok
    assert rep.cone_xi.exact


def test_mather_perturbed_negative_control():
    c, d0, alpha, beta, h, _ = _cokernel_instance()
    bad_h = {0: parse_matrix("laurent", "[[t^-1 + t^3]]")}
    rep = mather_cone(c, d0, alpha, beta, bad_h, horizon=12)
    assert not rep.h_homotopy_ok
    assert rep.first_failure is not None
    label, level, degree = rep.first_failure
    assert label == "h homotopy" and degree <= 12


def test_mather_shape_mismatch():
    from zgraded.errors import ShapeMismatch

    c, d0, alpha, beta, h, _ = _cokernel_instance()
    with pytest.raises(ShapeMismatch):
        mather_cone(c, d0, {0: parse_matrix("laurent", "[[1, 0]]")}, beta, h, horizon=6)
