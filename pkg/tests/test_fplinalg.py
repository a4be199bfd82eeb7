import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from gradlie.fplinalg import (
    FpError,
    FpScalar,
    Subspace,
    check_prime,
    inverse,
    kernel,
    matmul,
    rank,
    rref,
    solve,
)

PRIMES = st.sampled_from([5, 7, 11])


def _sympy_rank(M, p):
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in M], M.shape, GF(p)).rank()


def _sympy_rref(M, p):
    R, piv = DomainMatrix([[GF(p)(int(x)) for x in row] for row in M], M.shape, GF(p)).rref()
    rows = [[int(x) % p for x in r] for r in R.to_Matrix().tolist()]
    return np.array(rows[: len(piv)], dtype=np.int64).reshape(len(piv), M.shape[1]), list(piv)


@st.composite
def fp_matrices(draw, max_rows=7, max_cols=7):
    p = draw(PRIMES)
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    M = draw(arrays(np.int64, (r, c), elements=st.integers(0, p - 1)))
    return M, p


def test_check_prime():
    assert check_prime(5) == 5
    for bad in (4, 1, 9):
        with pytest.raises(FpError):
            check_prime(bad)


def test_scalar_arithmetic():
    a, b = FpScalar(3, 7), FpScalar(5, 7)
    assert int(a * b) == 1
    assert int(a.inverse()) == 5
    assert int(a + b) == 1
    with pytest.raises(ZeroDivisionError):
        FpScalar(0, 7).inverse()


@given(fp_matrices())
def test_rref_matches_sympy(mp):
    M, p = mp
    R, piv = rref(M, p)
    R2, piv2 = _sympy_rref(M, p)
    assert list(piv) == piv2
    assert np.array_equal(R, R2)
    assert rank(M, p) == _sympy_rank(M, p)


@given(fp_matrices())
def test_rank_nullity_and_kernel(mp):
    M, p = mp
    K = kernel(M, p)
    assert K.dim + rank(M, p) == M.shape[1]
    if K.dim:
        assert not np.any(matmul(M, K.basis.T, p))


@given(fp_matrices(max_rows=5, max_cols=5), st.data())
def test_solve_consistent_systems(mp, data):
    M, p = mp
    x = data.draw(arrays(np.int64, (M.shape[1],), elements=st.integers(0, p - 1)))
    b = matmul(M, x, p)
    y = solve(M, b, p)
    assert y is not None and np.array_equal(matmul(M, y, p), b)


def test_solve_inconsistent():
    assert solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 5) is None


@given(st.integers(1, 6), PRIMES, st.data())
def test_inverse_roundtrip(n, p, data):
    M = data.draw(arrays(np.int64, (n, n), elements=st.integers(0, p - 1)))
    if rank(M, p) < n:
        with pytest.raises(FpError):
            inverse(M, p)
    else:
        assert np.array_equal(matmul(M, inverse(M, p), p), np.eye(n, dtype=np.int64))


def test_matmul_large_entries_exact():
    p = 1_000_003
    A = np.full((3, 40), p - 1, dtype=np.int64)
    B = np.full((40, 2), p - 1, dtype=np.int64)
    assert np.all(matmul(A, B, p) == (40 * (p - 1) ** 2) % p)


@st.composite
def subspace_pairs(draw):
    p = draw(PRIMES)
    n = draw(st.integers(1, 6))
    a = draw(arrays(np.int64, (draw(st.integers(0, n)), n), elements=st.integers(0, p - 1)))
    b = draw(arrays(np.int64, (draw(st.integers(0, n)), n), elements=st.integers(0, p - 1)))
    return Subspace(a, p, n), Subspace(b, p, n)


@given(subspace_pairs())
def test_subspace_lattice(pair):
    A, B = pair
    S, I = A.sum(B), A.intersection(B)
    assert S.dim + I.dim == A.dim + B.dim
    assert S.contains(A) and S.contains(B)
    assert A.contains(I) and B.contains(I)
    T = S.quotient_transversal(A)
    assert T.shape[0] == S.dim - A.dim
    assert A.extend(T) == S


@given(subspace_pairs())
def test_subspace_canonical_form(pair):
    A, _ = pair
    rng = np.random.default_rng(0)
    if A.dim:
        mix = rng.integers(0, A.p, size=(A.dim, A.dim))
        while rank(mix, A.p) < A.dim:
            mix = rng.integers(0, A.p, size=(A.dim, A.dim))
        assert Subspace(matmul(mix, A.basis, A.p), A.p, A.ambient) == A
    if A.dim:
        v = A.basis.sum(axis=0) % A.p
        assert np.array_equal(matmul(A.coords(v)[None, :], A.basis, A.p)[0], v)


def test_zero_ambient():
    Z = Subspace.zero(0, 5)
    assert Z.dim == 0 and Z.ambient == 0


def test_coords_outside_raises():
    A = Subspace.coordinate([0], 3, 5)
    with pytest.raises(FpError):
        A.coords(np.array([0, 1, 0]))
