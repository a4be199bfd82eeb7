import numpy as np
import pytest

from gradlie import melikyan
from gradlie.cartan import ResourceLimit
from gradlie.graded import check_grading, check_transitivity
from gradlie.liecore import check_structure, is_simple

P = 5


@pytest.fixture(scope="module")
def M():
    return melikyan.build_M(1, 1, P)


def test_dimensions(M):
    assert M.dim == 125
    assert (M.q, M.r) == (3, max(M.degs))
    assert [M.n(d) for d in range(-3, 2)] == [2, 1, 2, 4, 2]


def test_axioms(M):
    assert check_structure(M.alg).clean
    assert check_grading(M).clean
    assert check_transitivity(M)
    assert is_simple(M.alg)


def test_z3_grading(M):
    z = melikyan.z3_components(M)
    assert (z.M_0bar.dim, z.M_2bar.dim, z.M_minus2bar.dim) == (50, 50, 25)
    assert z.degrees_ok and z.products_ok


def test_g2_comparison(M):
    cmp = melikyan.g2_comparison(M)
    assert cmp.ok
    assert (cmp.local_dim, cmp.local_type) == (14, "G2")


def test_bracket_antisymmetric_on_samples(M):
    rng = np.random.default_rng(1)
    for _ in range(20):
        x, y = rng.integers(0, P, size=(2, M.dim))
        assert not np.any((M.alg.bracket(x, y) + M.alg.bracket(y, x)) % P)


def test_extend_homomorphism_identity(M):
    g0 = M.component(0).basis
    sub_ok = melikyan.extend_homomorphism(M.alg, M.alg.basis_vector(0)[None, :], M.alg, M.alg.basis_vector(0)[None, :])[1]
    assert sub_ok is False  # one vector does not generate M
    gens = np.eye(M.dim, dtype=np.int64)
    phi, ok = melikyan.extend_homomorphism(M.alg, gens, M.alg, gens)
    assert ok and np.array_equal(phi, gens)
    assert g0.shape[0] == 4


def test_jacobi_fails_away_from_5():
    rep = check_structure(melikyan.build_M(1, 1, 7).alg)
    assert not rep.clean and rep.jacobi


def test_cap():
    with pytest.raises(ResourceLimit):
        melikyan.build_M(1, 1, P, cap=100)
