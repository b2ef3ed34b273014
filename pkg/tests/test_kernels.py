import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from milnor_forge import _kernels

pytestmark = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba unavailable")

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_side=12):
    p = draw(primes)
    shape = (draw(st.integers(1, max_side)), draw(st.integers(1, max_side)))
    return draw(arrays(np.int64, shape, elements=st.integers(0, p - 1))), p


@given(matrices())
def test_paths_agree_on_rref(case):
    A, p = case
    R1, p1 = _kernels.rref(A, p, numba=True)
    R2, p2 = _kernels.rref(A, p, numba=False)
    assert np.array_equal(R1, R2) and np.array_equal(p1, p2)


@given(matrices())
def test_rref_shape(case):
    A, p = case
    R, piv = _kernels.rref(A, p)
    assert len(piv) == R.shape[0]
    assert list(piv) == sorted(set(piv.tolist()))
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
        assert not R[i, :c].any()


@given(matrices())
def test_rref_row_space(case):
    # R spans the same row space: appending A's rows does not raise the rank
    A, p = case
    R, piv = _kernels.rref(A, p)
    both = np.concatenate([R, A % p]) if R.size else A % p
    assert _kernels.rank(both, p) == len(piv)
    assert _kernels.rank(A.T, p) == len(piv)


def test_rref_does_not_modify_input():
    A = np.array([[2, 1], [1, 1]])
    _kernels.rref(A, 3)
    assert A.tolist() == [[2, 1], [1, 1]]


def test_rref_known():
    R, piv = _kernels.rref([[0, 2, 4], [1, 1, 1], [1, 3, 5]], 7)
    assert piv.tolist() == [0, 1]
    assert R.tolist() == [[1, 0, 6], [0, 1, 2]]


def test_rref_reversed_prefers_late_pivots():
    R, piv = _kernels.rref_reversed([[1, 1, 0], [0, 1, 1]], 2)
    assert piv.tolist() == [1, 2]


@given(matrices(8), st.integers(1, 8))
def test_matmul_mod_matches_exact(case, k):
    A, p = case
    B = (np.arange(A.shape[1] * k).reshape(A.shape[1], k) * 7 + 3) % p
    exact = (A.astype(object) @ B.astype(object) % p).astype(np.int64)
    assert np.array_equal(_kernels.matmul_mod(A, B, p), exact)


def test_matmul_mod_large_prime_falls_back():
    p = 2**31 - 1
    A = np.full((2, 2), p - 1, dtype=np.int64)
    assert _kernels.matmul_mod(A, A, p).tolist() == [[2, 2], [2, 2]]


@st.composite
def convolutions(draw):
    N, m = draw(st.integers(1, 6)), draw(st.integers(1, 3))
    table = np.array([draw(st.permutations(range(N))) for _ in range(N)], dtype=np.int64)

    def terms():
        k = draw(st.integers(0, 5))
        return (np.array(draw(st.lists(st.integers(0, N - 1), min_size=k, max_size=k)), dtype=np.int64),
                np.array(draw(st.lists(st.integers(0, m - 1), min_size=k, max_size=k)), dtype=np.int64),
                np.array(draw(st.lists(st.integers(-9, 9), min_size=k, max_size=k)), dtype=np.int64))

    return terms(), terms(), table, 2 * m - 1


@given(convolutions())
def test_paths_agree_on_convolve(case):
    a, b, table, width = case
    x = _kernels.convolve(a, b, table, width, numba=True)
    y = _kernels.convolve(a, b, table, width, numba=False)
    assert np.array_equal(x, y)
    z = np.zeros_like(x)
    for g, e, c in zip(*a):
        for h, f, d in zip(*b):
            z[table[g, h], e + f] += c * d
    assert np.array_equal(x, z)
