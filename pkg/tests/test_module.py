import numpy as np
import pytest

from milnor_forge._kernels import matmul_mod, rank
from milnor_forge.errors import ParameterError, StructuralError
from milnor_forge.groups import enumerate_group, generators, group_ring, steinberg_idempotent
from milnor_forge.module import (
    apply_idempotent,
    build_frobenius_module,
    build_module,
    realize_topologically,
)
from milnor_forge.scalars import BiDegree, milnor_shift

CASES = [(3, 1), (2, 2), (3, 2)]


def test_p3_n1_basis():
    mod = build_module(3, 1)
    assert mod.labels == ["1", "x1", "y1", "y1*x1"]
    assert mod.grades == [BiDegree(0, 0), BiDegree(1, 1), BiDegree(1, 2), BiDegree(2, 3)]
    # Q_0 x = y, Q_1 x = y^3 = 0 in the quotient
    x = mod.unit(1)
    assert mod.describe(mod.apply(0, x)) == "y1"
    assert not mod.apply(1, x).any()


def test_q1_on_x1_x2():
    mod = build_module(3, 2)
    v = mod.monomial_vector((0, 0), (0, 1))
    want = (mod.monomial_vector((3, 0), (1,)) - mod.monomial_vector((0, 3), (0,))) % 3
    assert np.array_equal(mod.apply(1, v), want)


@pytest.mark.parametrize("p,n", CASES)
def test_dimension(p, n):
    from milnor_forge.groups import gl_order

    assert build_module(p, n).dim == gl_order(p, n) * 2**n


@pytest.mark.parametrize("p,n", CASES)
def test_milnor_operators_square_to_zero_and_anticommute(p, n):
    mod = build_module(p, n)
    Q = mod.operators
    for i in Q:
        assert not matmul_mod(Q[i], Q[i], p).any()
        assert mod.operator_shift(i) in (None, milnor_shift(p, i))
        for j in Q:
            if i < j:
                assert not ((matmul_mod(Q[i], Q[j], p) + matmul_mod(Q[j], Q[i], p)) % p).any()


@pytest.mark.parametrize("p,n", CASES)
def test_action_is_a_homomorphism_commuting_with_q(p, n):
    mod = build_module(p, n)
    gens = generators(p, n)
    for g in gens:
        A = mod.action(g)
        for Q in mod.operators.values():
            assert np.array_equal(matmul_mod(A, Q, p), matmul_mod(Q, A, p))
        for h in gens[:3]:
            assert np.array_equal(mod.action(g * h), matmul_mod(mod.action(g), mod.action(h), p))


def test_full_group_acts_faithfully_on_degree_one():
    mod = build_module(2, 2)
    images = {mod.action(g).tobytes() for g in enumerate_group(2, 2)}
    assert len(images) == 6


def test_gl1_summands_split_the_module():
    mod = build_module(3, 1)
    e0 = apply_idempotent(mod, steinberg_idempotent(3, 1, 0, strict=False))
    e1 = apply_idempotent(mod, steinberg_idempotent(3, 1, 1))
    assert e0.dim + e1.dim == mod.dim
    assert sorted(e1.labels) == ["x1", "y1"]
    both = np.concatenate([e0.ambient_basis, e1.ambient_basis])
    assert rank(both, 3) == mod.dim


@pytest.mark.parametrize("p,n,k,dim", [(3, 1, 1, 2), (3, 2, 1, 12), (3, 2, 0, 12), (2, 2, 0, 8)])
def test_summand_dimensions(p, n, k, dim):
    sub = apply_idempotent(build_module(p, n), steinberg_idempotent(p, n, k, strict=False))
    assert sub.dim == dim
    assert sub.parent is not None and sub.projector_image


def test_summand_operators_are_restrictions():
    mod = build_module(3, 2)
    sub = apply_idempotent(mod, steinberg_idempotent(3, 2, 1))
    B = sub.ambient_basis.T
    for m, Q in sub.operators.items():
        assert np.array_equal(matmul_mod(mod.operators[m], B, 3), matmul_mod(B, Q, 3))


def test_non_idempotent_rejected():
    mod = build_module(2, 2)
    ring = group_ring(2, 2)
    two = ring.delta(ring.identity, 2)
    with pytest.raises(ParameterError):
        apply_idempotent(mod, two)


def test_mismatched_group_rejected():
    with pytest.raises(ParameterError):
        build_module(3, 1).projector(steinberg_idempotent(3, 2, 1))


def test_inhomogeneous_vector():
    mod = build_module(3, 1)
    with pytest.raises(StructuralError):
        mod.grade_of(mod.unit(0) + mod.unit(1))


def test_frobenius_module_n2():
    frob = build_frobenius_module(2)
    assert frob.dim == 24
    assert frob.realization_identity()
    for Q in frob.operators.values():
        assert not matmul_mod(Q, Q, 2).any()


def test_realization_n2():
    rep = realize_topologically(build_module(2, 2))
    assert rep.ok and rep.bijective
    assert sum(a for a, _ in rep.degree_profile.values()) == 24


def test_realization_needs_p2():
    with pytest.raises(ParameterError):
        realize_topologically(build_module(3, 1))
