"""Melikyan algebras M(2;n) = O(2;n) ⊕ W(2;n) ⊕ W̃(2;n).

The bracket formulas are parameterised by p so that their failure away from
p = 5 can be observed; only p = 5 gives a Lie algebra.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cartan import (
    DividedPowerAlgebra,
    _check_cap_dim,
    _field_components,
    _from_components,
    _nstr,
    _add,
    _scale,
    divergence,
    w_apply,
    w_bracket,
)
from .classical import chevalley_algebra, standard_grading
from .fplinalg import Subspace, matmul, solve
from .graded import GradedLieAlgebra, local_subalgebra
from .liecore import LieAlgebraFp

__all__ = [
    "build_M",
    "element",
    "m_bracket",
    "z3_components",
    "Z3Report",
    "G2Comparison",
    "g2_comparison",
    "extend_homomorphism",
]


def _tilde_f(f: dict, O) -> dict:
    """D̃_f = D_1(f) D̃_2 - D_2(f) D̃_1, as W-components."""
    return _from_components([_scale(O.d(1, f), -1, O.p), O.d(0, f)])


def m_bracket(x, y, O) -> tuple:
    """Bracket of two elements given as triples (f, D, Ẽ) of dicts."""
    p = O.p
    f, D, E = x
    g, F, Et = y
    out_o, out_w, out_t = {}, {}, {}
    # W x W
    out_w = _add(out_w, w_bracket(D, F, O), p)
    # [D, F~] and -[F, E~]
    out_t = _add(out_t, _add(w_bracket(D, Et, O), _mul_field(_scale(divergence(D, O), 2, p), Et, O), p), p)
    out_t = _add(out_t, _add(w_bracket(F, E, O), _mul_field(_scale(divergence(F, O), 2, p), E, O), p), p, -1)
    # [D, g] and -[F, f]
    out_o = _add(out_o, _add(w_apply(D, g, O), O.mul(_scale(divergence(D, O), 2, p), g), p, -1), p)
    out_o = _add(out_o, _add(w_apply(F, f, O), O.mul(_scale(divergence(F, O), 2, p), f), p, -1), p, -1)
    # [E~, F~] = e1 g2 - e2 g1
    e = _field_components(E, 2)
    t = _field_components(Et, 2)
    out_o = _add(out_o, _add(O.mul(e[0], t[1]), O.mul(e[1], t[0]), p, -1), p)
    # [f, F~] = fF and -[g, E~]
    out_w = _add(out_w, _mul_field(f, Et, O), p)
    out_w = _add(out_w, _mul_field(g, E, O), p, -1)
    # [f, g] = 2(f D~_g - g D~_f)
    ff = _add(_mul_field(f, _tilde_f(g, O), O), _mul_field(g, _tilde_f(f, O), O), p, -1)
    out_t = _add(out_t, _scale(ff, 2, p), p)
    return out_o, out_w, out_t


def _mul_field(f: dict, D: dict, O) -> dict:
    return _from_components([O.mul(f, c) for c in _field_components(D, O.m)])


def _label(O, a):
    return O.label(a)


def build_M(n1: int = 1, n2: int = 1, p: int = 5, cap=None) -> GradedLieAlgebra:
    """M(2;(n1,n2)) with its natural grading; basis O-block, W-block, W̃-block (lex)."""
    n = (int(n1), int(n2))
    O = DividedPowerAlgebra(2, n, p)
    _check_cap_dim(f"M(2;{_nstr(n)})", 5 * O.dim, cap)
    monos = O.monomials
    fields = [(a, i) for a in monos for i in range(2)]
    basis = [("O", a) for a in monos] + [("W", b) for b in fields] + [("T", b) for b in fields]
    index = {b: k for k, b in enumerate(basis)}

    def triple(b):
        kind, key = b
        if kind == "O":
            return ({key: 1}, {}, {})
        if kind == "W":
            return ({}, {key: 1}, {})
        return ({}, {}, {key: 1})

    trip = [triple(b) for b in basis]
    I, J, K, C = [], [], [], []
    for s in range(len(basis)):
        for t in range(s + 1, len(basis)):
            fo, fw, ft = m_bracket(trip[s], trip[t], O)
            for kind, part in (("O", fo), ("W", fw), ("T", ft)):
                for key, c in part.items():
                    I.append(s); J.append(t); K.append(index[(kind, key)]); C.append(c)
    labels = []
    degs = []
    for kind, key in basis:
        if kind == "O":
            labels.append(_label(O, key))
            degs.append(3 * sum(key) - 2)
        else:
            a, i = key
            mono = _label(O, a)
            base = f"D{i + 1}" if mono == "1" else f"{mono}D{i + 1}"
            labels.append(base if kind == "W" else f"~{base}")
            degs.append(3 * (sum(a) - 1) + (0 if kind == "W" else 2))
    alg = LieAlgebraFp(p, labels, I, J, K, C)
    G = GradedLieAlgebra(alg, degs, name=f"M(2;{_nstr(n)})")
    G.meta.update(family="M", n=n, O=O, m_index=index, m_basis=basis)
    return G


def element(M: GradedLieAlgebra, f=None, D=None, E=None) -> np.ndarray:
    """Coordinates of f + D + Ẽ (dicts as in the cartan module)."""
    idx = M.meta["m_index"]
    v = np.zeros(M.dim, dtype=np.int64)
    for kind, part in (("O", f), ("W", D), ("T", E)):
        for key, c in (part or {}).items():
            v[idx[(kind, key)]] = (v[idx[(kind, key)]] + c) % M.p
    return v


@dataclass
class Z3Report:
    M_0bar: Subspace
    M_2bar: Subspace
    M_minus2bar: Subspace
    degrees_ok: bool
    products_ok: bool


def z3_components(M: GradedLieAlgebra) -> Z3Report:
    """The Z/3 grading W ⊕ W̃ ⊕ O, checked against degrees and products."""
    p = M.p
    kinds = [k for k, _ in M.meta["m_basis"]]
    sel = {c: np.array([i for i, k in enumerate(kinds) if k == c]) for c in ("W", "T", "O")}
    sub = {c: Subspace(np.eye(M.dim, dtype=np.int64)[ix], p, M.dim) for c, ix in sel.items()}
    want = {"W": 0, "T": 2, "O": 1}
    degrees_ok = all(int(M.degrees[i]) % 3 == want[c] for c, ix in sel.items() for i in ix)
    cls = {"W": 0, "T": 2, "O": 1}
    inv = {0: "W", 2: "T", 1: "O"}
    products_ok = True
    for a in sel:
        for b in sel:
            target = sub[inv[(cls[a] + cls[b]) % 3]]
            rows = M.alg.brackets(sub[a].basis, sub[b].basis)
            if not target.contains_vectors(rows):
                products_ok = False
    return Z3Report(sub["W"], sub["T"], sub["O"], degrees_ok, products_ok)


def extend_homomorphism(src: LieAlgebraFp, gens_src, tgt: LieAlgebraFp, gens_tgt):
    """Linear map determined by sending generators to generators, if it is a homomorphism.

    Returns ``(matrix, ok)`` with ``matrix`` of shape (src.dim, tgt.dim) mapping
    source coordinates (rows) to target coordinates; ``ok`` is False when the
    generators do not span ``src`` as an algebra, the assignment is not well
    defined, or brackets are not preserved.
    """
    p = src.p
    gs = np.asarray(gens_src, dtype=np.int64) % p
    gt = np.asarray(gens_tgt, dtype=np.int64) % p
    words_s, words_t = [], []
    S = Subspace.zero(src.dim, p)
    frontier = list(zip(gs, gt))
    while frontier:
        nxt = []
        for u, v in frontier:
            if S.contains_vectors(u[None, :]):
                continue
            S = S.extend(u[None, :])
            words_s.append(u)
            words_t.append(v)
            for a, b in zip(gs, gt):
                nxt.append((src.bracket(a, u), tgt.bracket(b, v)))
        frontier = nxt
    if S.dim != src.dim:
        return None, False
    A = np.array(words_s)
    B = np.array(words_t)
    X = solve(A.T, np.eye(src.dim, dtype=np.int64), p)  # columns: basis vectors in words
    phi = matmul(X.T, B, p)
    # well defined and bracket preserving on the full basis
    for i in range(src.dim):
        e = src.basis_vector(i)
        lhs = matmul(src.brackets(e[None, :], np.eye(src.dim, dtype=np.int64)), phi, p)
        rhs = tgt.brackets(phi[i][None, :], phi)
        if np.any((lhs - rhs) % p):
            return phi, False
    for u, v in zip(words_s, words_t):
        if np.any((matmul(u[None, :], phi, p)[0] - v) % p):
            return phi, False
    return phi, True


@dataclass
class G2Comparison:
    dims_M: tuple
    dims_G2: tuple
    relations: dict = field(default_factory=dict)
    isomorphic_nonpositive: bool = False
    local_dim: int = 0
    local_type: str = ""

    @property
    def ok(self) -> bool:
        return (
            all(self.relations.values())
            and self.isomorphic_nonpositive
            and self.dims_M[:4] == self.dims_G2[:4]
        )


def _nonpositive(G: GradedLieAlgebra):
    from .graded import subquotient

    parts = {d: Subspace.full(G.n(d), G.p) for d in G.degs if d <= 0}
    return subquotient(G, parts)


def g2_comparison(M: GradedLieAlgebra, with_local: bool = True) -> G2Comparison:
    """Compare the nonpositive part of M(2;n) with the G₂ grading at the short simple root."""
    p = M.p
    O = M.meta["O"]
    x = lambda i: {O.unit(i): 1}
    u = lambda i, j: {(O.unit(i), j): 1}  # x_i D_j, 0-based
    el = lambda **kw: element(M, **kw)
    br = M.alg.bracket
    e1 = el(D=u(0, 1))
    f1 = el(D=u(1, 0))
    h1 = el(D={(O.unit(0), 0): 1, (O.unit(1), 1): p - 1})
    e0 = el(f=x(1))
    f0 = el(E={((0, 0), 1): 3})
    h0 = el(D={(O.unit(1), 1): 3})
    xb = el(E={(O.unit(1), 0): 1})
    eq = lambda a, b: not np.any((a - b) % p)
    rel = {
        "[h1,e1]=2e1": eq(br(h1, e1), 2 * e1),
        "[3x2D2,x2]=2x2": eq(br(h0, e0), 2 * e0),
        "[h1,x2D1]=-2x2D1": eq(br(h1, f1), -2 * f1),
        "[3x2D2,3~D2]=-~D2": eq(br(h0, f0), -el(E={((0, 0), 1): 1})),
        "[e1,f1]=h1": eq(br(e1, f1), h1),
        "[x2,3~D2]=3x2D2": eq(br(e0, f0), h0),
        "[x1D2,~D2]=0": not np.any(br(e1, el(E={((0, 0), 1): 1}))),
        "[x2D1,x2]=0": not np.any(br(f1, e0)),
        "[f1,xb]=0": not np.any(br(f1, xb)),
        "[h1,xb]=-2xb": eq(br(h1, xb), -2 * xb),
        "[f0,xb]=2e0": eq(br(f0, xb), 2 * e0),
        "[h0,xb]=4xb": eq(br(h0, xb), 4 * xb),
    }
    C = chevalley_algebra("G2", p)
    G = standard_grading(C, 1)
    dims_G = tuple(G.n(d) for d in range(-3, 2))
    dims_M = tuple(M.n(d) for d in range(-3, 2))
    # generators: f_a (deg -1), e_b, f_b, h_a, h_b  ->  f0, e1, f1, h0, h1
    Gneg = _nonpositive(G)
    Mneg = _nonpositive(M)
    lift = lambda H, v: solve(H.meta["basis"].T, v, p)
    gens_G = [
        lift(Gneg, C.root_vector((-1, 0))),
        lift(Gneg, C.root_vector((0, 1))),
        lift(Gneg, C.root_vector((0, -1))),
        lift(Gneg, C.alg.basis_vector(C.h_index[0])),
        lift(Gneg, C.alg.basis_vector(C.h_index[1])),
    ]
    gens_M = [lift(Mneg, v) for v in (f0, e1, f1, h0, h1)]
    iso = False
    if all(g is not None for g in gens_G + gens_M):
        # rescale f0 so that the Chevalley relation [e_a, f_a] = h_a is matched by [e0, f0] = h0
        _, iso = extend_homomorphism(Gneg.alg, gens_G, Mneg.alg, gens_M)
        if not iso:
            for s in range(1, p):
                gm = [(s * gens_M[0]) % p] + gens_M[1:]
                _, iso = extend_homomorphism(Gneg.alg, gens_G, Mneg.alg, gm)
                if iso:
                    break
    rep = G2Comparison(dims_M, dims_G, rel, iso)
    if with_local:
        from .modrep import analyze_g0

        Lo = local_subalgebra(M)
        rep.local_dim = Lo.dim
        try:
            S = analyze_g0(Subspace.full(Lo.dim, p), Lo.alg)
            rep.local_type = "+".join(c[1] for c in S.components)
        except Exception as exc:  # report, do not raise
            rep.local_type = f"error: {exc}"
    return rep
