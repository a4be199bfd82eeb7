import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradlie import cartan, classical
from gradlie.melikyan import build_M
from gradlie.fplinalg import Subspace
from gradlie.graded import (
    GradedLieAlgebra,
    HypothesesNotMet,
    check_grading,
    check_one_transitivity,
    check_transitivity,
    full_parts,
    local_subalgebra,
    minimal_ideal,
    one_transitivity_witness,
    p_character,
    quotient_construction,
    subquotient,
    transitivity_witness,
    weisfeiler_radical,
)
from gradlie.liecore import LieAlgebraFp, check_structure


def with_central(G: GradedLieAlgebra, deg: int) -> GradedLieAlgebra:
    """G ⊕ F·z with z central of degree ``deg`` (z is the last basis vector)."""
    a = G.alg
    alg = LieAlgebraFp(a.p, a.labels + ["z"], a.I, a.J, a.K, a.C)
    return GradedLieAlgebra(alg, list(G.degrees) + [deg])


SMALL = {
    "A2 node 1": lambda: classical.standard_grading(classical.chevalley_algebra("A2", 5), 1),
    "B2 node 2": lambda: classical.standard_grading(classical.chevalley_algebra("B2", 5), 2),
    "G2 node 1": lambda: classical.standard_grading(classical.chevalley_algebra("G2", 5), 1),
    "W(1;1)": lambda: cartan.build_W(1, 1, 5),
    "W(2;1)": lambda: cartan.build_W(2, 1, 5),
    "H(2;1)^(2)": lambda: cartan.build_H(2, 1, 5, "H2"),
}


@pytest.fixture(scope="module")
def small():
    return {k: f() for k, f in SMALL.items()}


def test_components_and_dims(small):
    W = small["W(2;1)"]
    assert (W.q, W.r) == (1, 7)
    assert W.dims() == [2, 4, 6, 8, 10, 8, 6, 4, 2]
    assert sum(W.dims()) == W.dim
    assert W.component(0).dim == 4


def test_grading_violation_detected():
    A = classical.chevalley_algebra("A1", 5).alg  # basis f, h, e
    good = GradedLieAlgebra(A, [-1, 0, 1])
    bad = GradedLieAlgebra(A, [-1, 0, 2])
    assert check_grading(good).clean
    assert not check_grading(bad).clean


@given(st.sampled_from(sorted(SMALL)), st.integers(0, 2**32 - 1))
def test_permuted_presentation_invariants(name, seed):
    G = SMALL[name]()
    perm = np.random.default_rng(seed).permutation(G.dim)
    H = G.permuted(perm)
    assert check_grading(H).clean and check_structure(H.alg).clean
    assert H.dims() == G.dims()
    assert check_transitivity(H) == check_transitivity(G)
    assert check_one_transitivity(H) == check_one_transitivity(G)
    assert weisfeiler_radical(H).dim == weisfeiler_radical(G).dim


def test_reversal(small):
    G = small["A2 node 1"]
    R = G.reversed()
    assert np.array_equal(R.degrees, -G.degrees)
    assert np.array_equal(R.reversed().degrees, G.degrees)


def test_transitivity_witnesses(small):
    for G in small.values():
        assert transitivity_witness(G) is None and one_transitivity_witness(G) is None
    Z = with_central(small["W(2;1)"], 0)
    j, x = transitivity_witness(Z)
    assert j == 0 and x[-1] != 0 and not np.any(x[:-1])


@given(st.sampled_from(sorted(SMALL)), st.integers(-3, -1))
def test_radical_of_central_extension(name, deg):
    G = with_central(SMALL[name](), deg)
    R = weisfeiler_radical(G)
    assert R == Subspace.coordinate([G.dim - 1], G.dim, 5)


def test_radical_is_graded_ideal_in_negative_part(small):
    G = with_central(small["A2 node 1"], -1)
    M = weisfeiler_radical(G)
    neg = np.flatnonzero(G.degrees < 0)
    assert np.all(M.basis[:, np.flatnonzero(G.degrees >= 0)] == 0)
    assert neg.size >= 1
    # quotient by the radical has zero radical
    Q = subquotient(G, full_parts(G), G.graded_subspace(M))
    assert weisfeiler_radical(Q).dim == 0


def test_minimal_ideal_simple_and_extended():
    W = cartan.build_W(2, 1, 5)
    I, s = minimal_ideal(W)
    assert I.dim == W.dim and s == W.r
    CH = cartan.build_H(2, 1, 5, "CH")
    I, _ = minimal_ideal(CH)
    assert I.dim == 23
    with pytest.raises(HypothesesNotMet):
        minimal_ideal(with_central(W, -1))


def test_quotient_construction_depth_one():
    W = cartan.build_W(2, 1, 5)
    B = quotient_construction(W, W.component(-1), -1)
    assert B.q == 1 and check_transitivity(B)
    M = build_M()
    B2 = quotient_construction(M, M.component(-3), -3)
    assert B2.q == 1 and check_transitivity(B2) and check_grading(B2).clean
    with pytest.raises(ValueError):
        quotient_construction(W, np.array([[1, 0, 0, 0]]), 0)


def test_local_subalgebra(small):
    # [g_1, g_1] = 0 in W(1;1), so the local part is sl_2
    Lo = local_subalgebra(small["W(1;1)"])
    assert (Lo.dim, Lo.q, Lo.r) == (3, 1, 1)
    G = small["G2 node 1"]
    assert local_subalgebra(G).dim == G.dim


def test_p_character_restricted(small):
    for name in ("A2 node 1", "W(2;1)", "H(2;1)^(2)"):
        chi = p_character(small[name])
        assert chi.vanishes
        assert all(v in (True, "not applicable") for v in chi.scaling.values())
