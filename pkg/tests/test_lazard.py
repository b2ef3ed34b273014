import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_forge.errors import ParameterError, ValuationError
from milnor_forge.lazard import (
    LazardPresentation,
    TruncatedLazardRing,
    eliminate,
    exponent_ceiling,
    km_localization_check,
    lattice_membership,
    random_presentation,
    verify_annihilates,
)
from milnor_forge.scalars import valuation


@pytest.fixture
def ring():
    return TruncatedLazardRing(2, ["v1", "x1"], [1, 1], "v1")


def one_generator(ring, r, u, grading=0):
    return LazardPresentation(ring, [grading], [r], [[ring.parse(u)]])


def two_generators(ring, u12="x1", u21="x1"):
    zero = ring.poly()
    u = [[zero, ring.parse(u12)], [ring.parse(u21), zero]]
    return LazardPresentation(ring, [0, 0], [1, 1], u)


def test_ring_validation():
    with pytest.raises(ParameterError):
        TruncatedLazardRing(3, ["v1", "x1"], [3, 4], "v1")
    with pytest.raises(ParameterError):
        TruncatedLazardRing(2, ["v1"], [0], "v1")
    with pytest.raises(ParameterError):
        TruncatedLazardRing(2, ["v1"], [1], "v2")
    assert TruncatedLazardRing(3, ["v2"], [8], "v2").m == 2


def test_polynomial_text(ring):
    f = ring.parse("3/5*v1^2*x1 - 2")
    assert str(f) == "3/5*v1^2*x1 - 2"
    assert ring.parse(str(f)) == f
    with pytest.raises(ValuationError):
        ring.parse("1/2*x1")


def test_ideal_membership(ring):
    assert ring.parse("x1 + 2*v1").in_ideal()
    assert ring.parse("2").in_ideal()
    assert not ring.parse("v1 + x1").in_ideal()
    assert not ring.parse("1").in_ideal()


def test_base_case_v(ring):
    a = eliminate(one_generator(ring, 1, "0"))
    assert str(a.element) == "v1" and a.s == 1
    assert verify_annihilates(a, one_generator(ring, 1, "0"))


def test_base_case_v_squared_minus_p(ring):
    pres = one_generator(ring, 2, "2")
    a = eliminate(pres)
    assert str(a.element) == "v1^2 - 2"
    assert a.tail == ring.parse("-2") and a.check_shape()
    assert verify_annihilates(a, pres)


def test_v_does_not_kill_v_squared_minus_p(ring):
    pres = one_generator(ring, 2, "2")
    rep = verify_annihilates(ring.parse("v1"), pres)
    assert not rep.verified
    assert rep.per_generator[0]["status"] == "not_killed"
    assert rep.per_generator[0]["within_bound_only"]


def test_two_generator_example(ring):
    pres = two_generators(ring)
    a = eliminate(pres)
    assert a.element == (ring.parse("v1^2") - ring.parse("x1") * ring.parse("x1")) ** 2
    assert str(a.element) == "v1^4 - 2*v1^2*x1^2 + x1^4"
    assert a.s == 4 <= exponent_ceiling(pres)
    assert verify_annihilates(a, pres)


def test_two_generator_intermediate_does_not_suffice(ring):
    # v^2 - x^2 kills y1 and y2 already; v alone does not
    pres = two_generators(ring)
    assert verify_annihilates(ring.parse("v1^2 - x1^2"), pres)
    assert not verify_annihilates(ring.parse("v1"), pres)


def test_zero_module(ring):
    pres = LazardPresentation(ring, [], [], [])
    a = eliminate(pres)
    assert a.degenerate and str(a.element) == "1"
    assert verify_annihilates(a, pres)


def test_u_outside_ideal_rejected(ring):
    with pytest.raises(ParameterError):
        one_generator(ring, 1, "v1")
    with pytest.raises(ParameterError):
        one_generator(ring, 1, "1")


def test_missing_relation(ring):
    pres = LazardPresentation(ring, [0], [None], [[ring.poly()]])
    with pytest.raises(ParameterError):
        eliminate(pres)
    rep = km_localization_check(pres)
    assert not rep.vanishes and not rep.syntactic


def test_localization(ring):
    assert km_localization_check(two_generators(ring)).vanishes
    assert km_localization_check(one_generator(ring, 2, "2")).vanishes


def test_partial_bound(ring):
    pres = two_generators(ring)
    rep = verify_annihilates(eliminate(pres), pres, degree_bound=2)
    assert rep.partial and not rep.verified


def test_homogeneous_detection(ring):
    assert two_generators(ring).homogeneous
    assert not one_generator(ring, 2, "2").homogeneous


def test_json_round_trip(ring):
    pres = two_generators(ring, "x1 + 2*v1", "3*x1")
    back = LazardPresentation.from_json(ring, pres.to_json())
    assert back.to_json() == pres.to_json()
    assert str(eliminate(back).element) == str(eliminate(pres).element)


# lattice membership against a Smith-form oracle

@st.composite
def lattices(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    d = draw(st.integers(1, 4))
    a = draw(st.lists(st.one_of(st.none(), st.integers(0, 3)), min_size=d, max_size=d))
    t = draw(st.lists(st.integers(-30, 30), min_size=d, max_size=d))
    # unimodular mixing: product of elementary integer matrices
    M = np.eye(d, dtype=object)
    for _ in range(draw(st.integers(0, 6))):
        i, j = draw(st.integers(0, d - 1)), draw(st.integers(0, d - 1))
        if i != j:
            E = np.eye(d, dtype=object)
            E[i, j] = draw(st.integers(-3, 3))
            M = M @ E
    units = draw(st.lists(st.sampled_from([1, -1, 7, 11]).filter(lambda u: u % p), min_size=d, max_size=d))
    return p, a, t, M, units


def _dict(vec):
    return {(0, (i,)): Fraction(int(x)) for i, x in enumerate(vec) if x}


@settings(max_examples=80)
@given(lattices())
def test_lattice_membership_matches_oracle(case):
    p, a, t, M, units = case
    d = len(a)
    cols = []
    for i, ai in enumerate(a):
        if ai is not None:
            e = np.zeros(d, dtype=object)
            e[i] = p**ai * units[i]
            cols.append(M @ e)
    if len(cols) >= 2:
        cols.append(cols[0] * 5 + cols[1])  # redundant column
    expected = all(
        (t[i] == 0) if ai is None else (t[i] == 0 or valuation(t[i], p) >= ai)
        for i, ai in enumerate(a)
    )
    res = lattice_membership([_dict(c) for c in cols], _dict(M @ np.array(t, dtype=object)), p)
    assert res.member == expected
    if not res.member:
        assert res.witness["reason"] in ("p-adic valuation obstruction", "nonzero normal form")


def test_lattice_membership_with_fractions():
    cols = [{(0, (0,)): Fraction(2, 3)}]
    assert lattice_membership(cols, {(0, (0,)): Fraction(10)}, 2).member
    res = lattice_membership(cols, {(0, (0,)): Fraction(1)}, 2)
    assert not res.member and res.witness["reason"] == "p-adic valuation obstruction"


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_random_presentations_are_annihilated(seed, g):
    pres = random_presentation(random.Random(seed), g=g)
    a = eliminate(pres)
    assert a.check_shape() and a.s <= exponent_ceiling(pres)
    assert verify_annihilates(a, pres).verified
    assert km_localization_check(pres).vanishes


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_products_are_homogeneous_before_reduction(seed):
    pres = random_presentation(random.Random(seed), g=2)
    a = eliminate(pres)
    if pres.homogeneous:
        assert len(a.element.grades()) == 1
