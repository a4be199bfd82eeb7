import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradlie import cartan as X
from gradlie.graded import check_grading, check_transitivity
from gradlie.liecore import check_structure

P = 5


# ---------------------------------------------------------------------------
# divided powers


@given(st.integers(0, 3000), st.integers(0, 3000), st.sampled_from([5, 7, 11]))
def test_binom_mod_lucas(n, k, p):
    assert X.binom_mod(n, k, p) == (math.comb(n, k) % p if k <= n else 0)


def test_divided_power_basics():
    O = X.DividedPowerAlgebra(2, (1, 2), P)
    assert O.dim == P**3 and O.tau == (4, 24)
    assert O.multiply((1, 0), (1, 0)) == (2, (2, 0))  # x x = 2 x^(2)
    assert O.multiply((3, 0), (2, 0))[0] == 0  # beyond τ
    assert O.multiply((0, 5), (0, 5)) == (math.comb(10, 5) % P, (0, 10))


def polys(O, max_terms=4):
    mono = st.sampled_from(O.monomials)
    return st.dictionaries(mono, st.integers(1, O.p - 1), max_size=max_terms)


O21 = X.DividedPowerAlgebra(2, 1, P)
O3 = X.DividedPowerAlgebra(3, 1, P)


@given(polys(O21), polys(O21), polys(O21))
def test_divided_power_commutative_associative(f, g, h):
    O = O21
    assert O.mul(f, g) == O.mul(g, f)
    assert O.mul(O.mul(f, g), h) == O.mul(f, O.mul(g, h))


@given(polys(O21), polys(O21), st.integers(0, 1))
def test_partial_is_derivation(f, g, i):
    O = O21
    lhs = O.d(i, O.mul(f, g))
    rhs = X._add(O.mul(O.d(i, f), g), O.mul(f, O.d(i, g)), P)
    assert lhs == rhs


# ---------------------------------------------------------------------------
# brackets and special maps


def fields(O, max_terms=3):
    key = st.tuples(st.sampled_from(O.monomials), st.integers(0, O.m - 1))
    return st.dictionaries(key, st.integers(1, O.p - 1), max_size=max_terms)


@given(fields(O21), fields(O21), polys(O21))
def test_w_bracket_acts_as_commutator(D, E, f):
    O = O21
    lhs = X.w_apply(X.w_bracket(D, E, O), f, O)
    rhs = X._add(X.w_apply(D, X.w_apply(E, f, O), O), X.w_apply(E, X.w_apply(D, f, O), O), P, -1)
    assert lhs == rhs


@given(polys(O3), polys(O3), st.integers(0, 2), st.integers(0, 2))
def test_special_fields_divergence_free(f, g, i, j):
    if i != j:
        assert X.divergence(X.D_ij(i, j, f, O3), O3) == {}


O4 = X.DividedPowerAlgebra(4, 1, P)


@given(polys(O4), polys(O4))
def test_hamiltonian_map_is_homomorphism(f, g):
    O = O4
    assert X.D_H(X.poisson(f, g, O), O) == X.w_bracket(X.D_H(f, O), X.D_H(g, O), O)


@given(polys(O3), polys(O3))
def test_contact_map_is_homomorphism(f, g):
    O = O3
    assert X.D_K(X.contact(f, g, O), O) == X.w_bracket(X.D_K(f, O), X.D_K(g, O), O)


def test_degree_derivation_acts_by_degree():
    W = X.build_W(2, 1, P)
    Dg = X.degree_derivation(W.meta["O"])
    for i in range(W.dim):
        D = W.meta["fields"][i]
        deg = int(W.degrees[i])
        assert X.w_bracket(Dg, D, W.meta["O"]) == X._scale(D, deg, P)


# ---------------------------------------------------------------------------
# algebras


FAMILIES = [
    ("W", 1, (1,)), ("W", 1, (2,)), ("W", 2, (1, 1)), ("W", 2, (1, 2)), ("W", 3, (1, 1, 1)),
    ("S1", 3, (1, 1, 1)), ("S", 3, (1, 1, 1)), ("CS", 3, (1, 1, 1)),
    ("H2", 2, (1, 1)), ("H", 2, (1, 1)), ("CH", 2, (1, 1)), ("H2", 2, (1, 2)),
    ("K1", 3, (1, 1, 1)),
]


@pytest.mark.parametrize("fam,m,n", FAMILIES)
def test_dimension_formula_and_axioms(fam, m, n):
    G = X.build_cartan(fam, m, n, P, cap=1000)
    assert G.dim == X.predicted_dim(fam, m, n, P)
    assert check_grading(G).clean
    assert check_transitivity(G)
    if G.dim <= 260:
        assert check_structure(G.alg).clean


@pytest.mark.parametrize("m,n", [(1, (1,)), (1, (2,)), (2, (1, 1)), (2, (1, 2)), (3, (1, 1, 1))])
def test_w_height_formula(m, n):
    # r = p^{n_1} + ... + p^{n_m} - m - 1
    G = X.build_W(m, n, P)
    assert G.r == sum(P**k for k in n) - m - 1 and G.q == 1


def test_h_and_k_heights():
    assert X.build_H(2, 1, P, "H2").r == 2 * P - 2 - 3
    assert X.build_H(2, (1, 2), P, "H2").r == P + P**2 - 2 - 3
    K = X.build_K(3, 1, P, "K1")
    top = max(X.k_degree(a) for a in K.meta["O"].monomials)
    assert (K.q, K.r) == (2, top) and top == 14


def test_k1_drops_top_when_p_divides():
    # 2m+4 ≡ 0 mod p exactly when the top generator leaves the derived algebra
    assert X.predicted_dim("K1", 3, (1, 1, 1), 5) == 125
    assert X.predicted_dim("K1", 3, (1, 1, 1), 7) == 7**3
    assert X.predicted_dim("K1", 1, (1,), 5) == 5


def test_derived_and_center_relations():
    S, S1, CS = (X.build_S(3, 1, P, lv) for lv in ("S", "S1", "CS"))
    assert (S.dim - S1.dim, CS.dim - S.dim) == (3, 1)
    for D in S.meta["fields"]:
        assert X.divergence(D, S.meta["O"]) == {}


def test_s_requires_three_variables():
    with pytest.raises(ValueError):
        X.build_S(2, 1, P)


def test_cap_enforced(monkeypatch):
    with pytest.raises(X.ResourceLimit):
        X.build_W(3, 1, P, cap=100)
    monkeypatch.setenv("GRADLIE_CAP", "40")
    with pytest.raises(X.ResourceLimit):
        X.build_W(2, 1, P)
    assert X.cap_limit(60) == 60


def test_field_and_function_coordinates():
    W = X.build_W(2, 1, P)
    for i in (0, 7, W.dim - 1):
        v = X.field_coords(W, W.meta["fields"][i])
        assert np.array_equal(v, W.alg.basis_vector(i))
    H = X.build_H(2, 1, P, "H2")
    a = next(iter(H.meta["function_index"]))
    assert X.function_coords(H, {a: 1})[H.meta["function_index"][a]] == 1


def test_sharp_dagger_guards():
    with pytest.raises(ValueError):
        X.sharp_dagger_decomposition(X.build_W(1, 1, P), 1)
    W3 = X.build_W(3, 1, P)
    sd = X.sharp_dagger_decomposition(W3, 1)
    assert sd.relation == "DirectSum" and sd.sharp.dim + sd.dagger.dim == W3.n(1)
