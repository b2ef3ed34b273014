from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnor_forge.errors import ConfigurationError, ParameterError, ResourceError
from milnor_forge.groups import (
    cyclotomic,
    GroupRingElement,
    enumerate_group,
    generators,
    gl_order,
    group_ring,
    is_idempotent,
    primitive_root,
    steinberg_idempotent,
    subgroup,
    twist,
    unipotent_order,
)
from milnor_forge.scalars import fraction_mod_p

SMALL = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]


@pytest.mark.parametrize("p,n", SMALL)
def test_enumeration_order(p, n):
    G = enumerate_group(p, n)
    assert len(G) == len(set(G)) == gl_order(p, n)
    assert G == sorted(G)
    assert all(g.det() != 0 for g in G)


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_subgroup_orders(p, n):
    assert len(subgroup(p, n, "unipotent")) == unipotent_order(p, n)
    assert len(subgroup(p, n, "borel")) == unipotent_order(p, n) * (p - 1) ** n
    assert len(subgroup(p, n, "permutation")) == [1, 1, 2, 6][n]


def test_unknown_subgroup_tag():
    with pytest.raises(ParameterError):
        subgroup(2, 2, "parabolic")


def test_cap(monkeypatch):
    monkeypatch.setenv("MILNOR_FORGE_CAP", "10")
    with pytest.raises(ResourceError):
        enumerate_group(2, 3)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_primitive_root_order(p):
    g = primitive_root(p)
    assert len({pow(g, e, p) for e in range(p - 1)}) == p - 1


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_generators_generate(p, n):
    seen = {group_ring(p, n).identity}
    frontier = list(seen)
    gens = generators(p, n)
    while frontier:
        frontier = [g * s for g in frontier for s in gens if g * s not in seen]
        seen.update(frontier)
    assert len(seen) == gl_order(p, n)


def test_e1_for_gl1_f3():
    e = steinberg_idempotent(3, 1, 1)
    assert e.to_json() == [
        {"element": [1], "t_power": 0, "coefficient": "1/2"},
        {"element": [2], "t_power": 0, "coefficient": "-1/2"},
    ]


def test_e0_for_gl2_f2():
    e = steinberg_idempotent(2, 2, 0)
    assert e.rational_coefficient(e.ring.identity) == Fraction(1, 3)
    assert len(e) == 4


def test_twist_range():
    with pytest.raises(ParameterError):
        steinberg_idempotent(2, 2, 1)
    with pytest.raises(ParameterError):
        steinberg_idempotent(5, 1, 0)
    with pytest.raises(ParameterError):
        steinberg_idempotent(2, 1, 0)
    assert steinberg_idempotent(5, 1, 0, strict=False) is not None


def test_non_local_coefficient_rejected():
    ring = group_ring(3, 1)
    with pytest.raises(ConfigurationError):
        GroupRingElement(ring, {(0, 0): Fraction(1, 3)})


@pytest.mark.parametrize("p", [5, 7, 11])
def test_gl1_idempotents_reduce_to_characters(p):
    # mod p, e_k(g) = g^{-k} / (p - 1) for GL_1; an independent description
    ring = group_ring(p, 1)
    for k in range(1, p - 1):
        red = steinberg_idempotent(p, 1, k).mod_p()
        for i, g in enumerate(ring.elements):
            a = int(g.key[0])
            want = pow(a, -k, p) * pow(p - 1, -1, p) % p
            assert red.get(i, 0) == want


@pytest.mark.parametrize("p", [3, 5, 7])
def test_gl1_idempotents_are_orthogonal_and_complete(p):
    es = [steinberg_idempotent(p, 1, k, strict=False) for k in range(p - 1)]
    total = es[0]
    for e in es[1:]:
        total = total + e
    assert total == es[0].ring.delta(es[0].ring.identity)
    for j in range(p - 1):
        for k in range(p - 1):
            if j != k:
                assert (es[j] * es[k]).terms == {}


def random_element(draw, ring, size=5):
    keys = draw(st.lists(st.tuples(st.integers(0, len(ring.elements) - 1), st.integers(0, ring.m - 1)),
                         max_size=size))
    vals = draw(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(
        lambda c: c.denominator % ring.p), min_size=len(keys), max_size=len(keys)))
    return GroupRingElement(ring, dict(zip(keys, vals)))


@st.composite
def triples(draw):
    p, n = draw(st.sampled_from([(2, 2), (3, 2), (5, 1), (7, 1)]))
    ring = group_ring(p, n)
    return tuple(random_element(draw, ring) for _ in range(3))


@settings(max_examples=30)
@given(triples())
def test_group_ring_associative_and_distributive(xyz):
    x, y, z = xyz
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@settings(max_examples=30)
@given(triples(), st.integers(0, 5))
def test_twist_is_a_ring_map(xyz, k):
    x, y, _ = xyz
    assert twist(x * y, k) == twist(x, k) * twist(y, k)


@settings(max_examples=30)
@given(triples())
def test_dense_idempotency_check_matches_product(xyz):
    x = xyz[0]
    assert is_idempotent(x) == (x * x == x)


@settings(max_examples=20)
@given(triples())
def test_reduction_is_multiplicative(xyz):
    x, y, _ = xyz
    ring, p = x.ring, x.ring.p
    prod = (x * y).mod_p()
    want: dict[int, int] = {}
    for i, a in x.mod_p().items():
        for j, b in y.mod_p().items():
            k = ring.mul_index(i, j)
            want[k] = (want.get(k, 0) + a * b) % p
    assert prod == {k: c for k, c in want.items() if c}


def test_fraction_mod_p():
    assert fraction_mod_p(Fraction(1, 3), 2) == 1
    assert fraction_mod_p(Fraction(-1, 2), 3) == 1


@pytest.mark.parametrize("n,coeffs", [(1, (-1, 1)), (2, (1, 1)), (4, (1, 0, 1)), (6, (1, -1, 1)),
                                      (12, (1, 0, -1, 0, 1))])
def test_cyclotomic(n, coeffs):
    assert cyclotomic(n) == coeffs


@pytest.mark.parametrize("p", [7, 11, 13, 31])
def test_root_reduction_mod_p(p):
    # t -> primitive root is compatible with the reduction table
    ring = group_ring(p, 1)
    g = ring.root
    for e in range(2 * (p - 1)):
        v = ring.root_vector(e)
        assert sum(int(c) * pow(g, r, p) for r, c in enumerate(v)) % p == pow(g, e, p)


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_permutation_sign_is_determinant(p, n):
    import itertools

    from milnor_forge.groups import permutation_matrix, permutation_sign

    for perm in itertools.permutations(range(n)):
        assert permutation_sign(perm) % p == permutation_matrix(perm, p).det()
