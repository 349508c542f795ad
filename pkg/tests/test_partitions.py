"""Partitions of unity, strong grading, bimodule isomorphisms, dual bases."""

import random

import pytest

from zgraded.errors import DegreeOutOfRange, NotFiniteType, NotStronglyGraded, RingMismatch
from zgraded.exprs import parse_element
from zgraded.partitions import (
    PartitionOfUnity,
    bimodule_iso_check,
    check_dual_basis,
    check_strongly_graded,
    compose_partitions,
    dual_basis,
    leavitt_q_iso,
    partition_for_degree,
    trivial_partition,
    verify_partition,
)
from zgraded.rings import get_ring

L = get_ring("leavitt11")


def el(ring, text):
    return parse_element(ring, text)


def pou(ring, n, pairs):
    return PartitionOfUnity(ring, n, [(el(ring, a), el(ring, b)) for a, b in pairs])


def test_verify_partition_examples():
    assert verify_partition(pou("laurent", 1, [("t", "t^-1")]))
    assert verify_partition(pou("leavitt11", 1, [("B", "A")]))
    assert verify_partition(pou("leavitt11", -1, [("A", "B"), ("C", "D")]))
    assert verify_partition(pou("leavitt11", 1, [("D", "C")]))


def test_verify_partition_diagnostics():
    bad = verify_partition(pou("laurent", 1, [("t^2", "t^-1")]))
    assert not bad and any("alpha" in p for p in bad.problems)
    bad2 = verify_partition(pou("leavitt11", 1, [("B", "C")]))
    assert not bad2 and any("sum" in p for p in bad2.problems)


def test_compose_partitions():
    p = pou("laurent", 1, [("t", "t^-1")])
    q = compose_partitions(p, p)
    assert q.n == 2
    assert q.pairs == [(el("laurent", "t^2"), el("laurent", "t^-2"))]
    pb = pou("leavitt11", 1, [("B", "A")])
    qb = compose_partitions(pb, pb)
    assert qb.pairs == [(el("leavitt11", "B*B"), el("leavitt11", "A*A"))]
    assert verify_partition(qb)
    # composing with the trivial type-(0,0) partition keeps the identity sum
    assert verify_partition(compose_partitions(pb, trivial_partition("leavitt11")))


def test_compose_partition_property():
    rng = random.Random(5)
    for _ in range(20):
        m = rng.randint(-3, 3)
        n = rng.randint(-3, 3)
        p = partition_for_degree("leavitt11", m)
        q = partition_for_degree("leavitt11", n)
        assert verify_partition(compose_partitions(p, q))


def test_compose_ring_mismatch():
    with pytest.raises(RingMismatch):
        compose_partitions(pou("laurent", 1, [("t", "t^-1")]), pou("leavitt11", 1, [("B", "A")]))


def test_partition_for_degree():
    p3 = partition_for_degree("laurent", 3)
    assert p3.pairs == [(el("laurent", "t^3"), el("laurent", "t^-3"))]
    p2 = partition_for_degree("leavitt11", 2)
    assert p2.pairs == [(el("leavitt11", "B*B"), el("leavitt11", "A*A"))]
    assert partition_for_degree("laurent", 0).pairs[0][0] == get_ring("laurent").one()
    with pytest.raises(NotStronglyGraded):
        partition_for_degree("laurent_step2", 1)


def test_check_strongly_graded_verdicts():
    rep = check_strongly_graded("laurent", 5)
    assert rep and rep.witnesses is not None
    plus, minus = rep.witnesses
    assert plus.pairs == [(el("laurent", "t"), el("laurent", "t^-1"))]
    assert minus.pairs == [(el("laurent", "t^-1"), el("laurent", "t"))]
    assert check_strongly_graded("leavitt11", 5)
    rep2 = check_strongly_graded("laurent_step2", 5)
    assert not rep2 and rep2.failure_degree == 1
    assert check_strongly_graded("matrix_laurent:2", 4)


def test_bimodule_iso_laurent():
    rep = bimodule_iso_check("laurent", 1, 8)
    assert rep.pi_kappa_ok and rep.mult_iso_ok


def test_bimodule_iso_matrix():
    rep = bimodule_iso_check("matrix_laurent:2", 1, 8)
    assert rep.pi_kappa_ok and rep.mult_iso_ok
    rep2 = bimodule_iso_check("matrix_laurent:2", -2, 6)
    assert rep2.pi_kappa_ok and rep2.mult_iso_ok


def test_bimodule_iso_errors():
    with pytest.raises(NotFiniteType):
        bimodule_iso_check("leavitt11", 1, 4)
    with pytest.raises(NotStronglyGraded):
        bimodule_iso_check("laurent_step2", 1, 4)


def _random_homogeneous(rng, degree, length_extra=4):
    """Random nonzero homogeneous Leavitt element of the given degree."""
    ring = get_ring("leavitt11")
    for _ in range(200):
        total = ring.zero()
        for _ in range(rng.randint(1, 2)):
            steps = abs(degree) + 2 * rng.randint(0, length_extra // 2)
            word_degree = 0
            word = []
            for _ in range(steps):
                remaining = steps - len(word)
                need = degree - word_degree
                if need >= remaining:
                    ch = rng.choice("BD")
                elif -need >= remaining:
                    ch = rng.choice("AC")
                else:
                    ch = rng.choice("ABCD")
                word.append(ch)
                word_degree += 1 if ch in "BD" else -1
            if word_degree == degree:
                total = total + ring.word_element("".join(word), rng.choice([1, 2, -1]))
        if not total.is_zero() and total.is_homogeneous(degree):
            return total
    raise AssertionError("could not sample a homogeneous element")


def test_dual_basis_identity():
    rng = random.Random(23)
    for n in range(1, 5):
        data = dual_basis("leavitt11", n)
        samples = [_random_homogeneous(rng, n) for _ in range(25)]
        assert check_dual_basis(data, samples)


def test_leavitt_q_iso_examples():
    ring = get_ring("leavitt11")
    b, d = el("leavitt11", "B"), el("leavitt11", "D")
    x, y = leavitt_q_iso("forward", ring.one())
    assert x == b and y == d
    assert leavitt_q_iso("backward", (b, d)) == ring.one()
    fx, fy = leavitt_q_iso("forward", el("leavitt11", "A"), allow_any_degree=True)
    assert fx == ring.one() and fy.is_zero()
    assert leavitt_q_iso("backward", (ring.one(), ring.zero()), allow_any_degree=True) == el("leavitt11", "A")
    assert leavitt_q_iso("backward", (ring.zero(), ring.zero())).is_zero()


def test_leavitt_q_iso_round_trips_random():
    rng = random.Random(29)
    ring = get_ring("leavitt11")
    for _ in range(15):
        r = _random_homogeneous(rng, rng.randint(0, 3))
        x, y = leavitt_q_iso("forward", r)
        assert leavitt_q_iso("backward", (x, y)) == r


def test_leavitt_q_iso_degree_errors():
    with pytest.raises(DegreeOutOfRange):
        leavitt_q_iso("forward", el("leavitt11", "A"))
    with pytest.raises(DegreeOutOfRange):
        leavitt_q_iso("backward", (get_ring("leavitt11").one(), get_ring("leavitt11").zero()))
