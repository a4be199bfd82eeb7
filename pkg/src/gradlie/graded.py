"""Graded Lie algebras and the depth/height machinery built on them.

A :class:`GradedLieAlgebra` has a homogeneous basis, so each component g_j is a
coordinate subspace.  Most computations work on dense per-degree blocks
``T[(d1, d2)][a, b, c]`` giving ``[g_d1[a], g_d2[b]] = sum_c T * g_{d1+d2}[c]``.
Graded subspaces are passed around as ``{degree: Subspace in local coords}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fplinalg import FpError, Subspace, kernel, matmul, solve
from .liecore import LieAlgebraFp, _matpow

__all__ = [
    "GradedLieAlgebra",
    "GradingReport",
    "HypothesesNotMet",
    "NotScalar",
    "PCharacter",
    "check_grading",
    "check_transitivity",
    "check_one_transitivity",
    "transitivity_witness",
    "one_transitivity_witness",
    "weisfeiler_radical",
    "minimal_ideal",
    "quotient_construction",
    "local_subalgebra",
    "p_character",
    "graded_product",
    "graded_ideal",
    "subquotient",
]


class HypothesesNotMet(ValueError):
    """A precondition of a graded construction fails; the message names it."""


class NotScalar(ArithmeticError):
    """(ad x)^p - ad x^[p] is not a scalar on g_-1."""


class GradedLieAlgebra:
    """A Lie algebra with an integer degree on each basis vector."""

    def __init__(self, alg: LieAlgebraFp, degrees, name: str = ""):
        self.alg = alg
        self.p = alg.p
        self.dim = alg.dim
        self.name = name
        deg = np.asarray(degrees, dtype=np.int64).ravel()
        if deg.size != alg.dim:
            raise FpError("grading length differs from dimension")
        self.degrees = deg
        self.degrees.flags.writeable = False
        self.degs = sorted(set(deg.tolist()))
        self._idx = {d: np.flatnonzero(deg == d) for d in self.degs}
        self._local = np.zeros(self.dim, dtype=np.int64)
        for d, ix in self._idx.items():
            self._local[ix] = np.arange(ix.size)
        self._blocks = None
        self.meta = {}

    # -- components ------------------------------------------------------
    @property
    def q(self) -> int:
        return max(0, -min(self.degs)) if self.degs else 0

    @property
    def r(self) -> int:
        return max(0, max(self.degs)) if self.degs else 0

    def index(self, d: int) -> np.ndarray:
        return self._idx.get(d, np.zeros(0, dtype=np.int64))

    def n(self, d: int) -> int:
        return int(self.index(d).size)

    def dims(self) -> list:
        """Dimensions of g_{-q}, ..., g_r."""
        return [self.n(d) for d in range(-self.q, self.r + 1)]

    def component(self, d: int) -> Subspace:
        return Subspace.coordinate(self.index(d), self.dim, self.p)

    def embed(self, d: int, M) -> np.ndarray:
        """Local rows of g_d as ambient vectors."""
        M = np.asarray(M, dtype=np.int64).reshape(-1, self.n(d))
        out = np.zeros((M.shape[0], self.dim), dtype=np.int64)
        out[:, self.index(d)] = M
        return out

    def split(self, V) -> dict:
        """Homogeneous parts of ambient rows: ``{d: local rows}``."""
        V = np.asarray(V, dtype=np.int64).reshape(-1, self.dim)
        return {d: V[:, ix] for d, ix in self._idx.items()}

    def graded_subspace(self, S: Subspace) -> dict:
        """Per-degree local pieces of a graded ambient subspace."""
        parts = {}
        for d, ix in self._idx.items():
            parts[d] = Subspace(S.basis[:, ix], self.p, ix.size)
        if sum(x.dim for x in parts.values()) != S.dim:
            raise FpError("subspace is not graded")
        # Rows of a graded subspace split into homogeneous pieces that lie in it.
        for d, x in parts.items():
            if x.dim and not S.contains_vectors(self.embed(d, x.basis)):
                raise FpError("subspace is not graded")
        return parts

    def to_ambient(self, parts: dict) -> Subspace:
        rows = [self.embed(d, s.basis) for d, s in parts.items() if s.dim]
        if not rows:
            return Subspace.zero(self.dim, self.p)
        return Subspace(np.vstack(rows), self.p, self.dim)

    # -- blocks -----------------------------------------------------------
    def _build_blocks(self):
        I, J, K, C = self.alg.full_coo()
        deg = self.degrees
        dI, dJ, dK = deg[I], deg[J], deg[K]
        blocks = {}
        self.grading_violations = []
        bad = dK != dI + dJ
        if np.any(bad):
            for i, j, k in zip(I[bad].tolist(), J[bad].tolist(), K[bad].tolist()):
                if i < j:
                    self.grading_violations.append((i, j, k))
        good = ~bad
        I, J, K, C, dI, dJ = I[good], J[good], K[good], C[good], dI[good], dJ[good]
        key = dI * 100003 + dJ
        order = np.argsort(key, kind="stable")
        key = key[order]
        cuts = np.flatnonzero(np.diff(key)) + 1
        for seg in np.split(np.arange(key.size), cuts):
            if seg.size == 0:
                continue
            sel = order[seg]
            d1 = int(dI[sel[0]])
            d2 = int(dJ[sel[0]])
            T = np.zeros((self.n(d1), self.n(d2), self.n(d1 + d2)), dtype=np.int64)
            T[self._local[I[sel]], self._local[J[sel]], self._local[K[sel]]] = C[sel]
            blocks[(d1, d2)] = T
        self._blocks = blocks

    def block(self, d1: int, d2: int) -> np.ndarray:
        if self._blocks is None:
            self._build_blocks()
        T = self._blocks.get((d1, d2))
        if T is None:
            return np.zeros((self.n(d1), self.n(d2), self.n(d1 + d2)), dtype=np.int64)
        return T

    def bracket_local(self, d1, A, d2, B) -> np.ndarray:
        """All brackets of local rows ``A`` (in g_d1) with ``B`` (in g_d2)."""
        A = np.asarray(A, dtype=np.int64).reshape(-1, self.n(d1))
        B = np.asarray(B, dtype=np.int64).reshape(-1, self.n(d2))
        T = self.block(d1, d2)
        n1, n2, n3 = T.shape
        if A.shape[0] == 0 or B.shape[0] == 0 or n3 == 0:
            return np.zeros((A.shape[0] * B.shape[0], n3), dtype=np.int64)
        X = matmul(A, T.reshape(n1, n2 * n3), self.p).reshape(-1, n2, n3)
        return matmul(B, X, self.p).reshape(-1, n3)

    def action_on(self, d0: int, d: int, X=None) -> np.ndarray:
        """Matrices of ad x (x in rows of ``X`` ⊆ g_d0, default all basis) on g_d.

        Only valid for ``d0 == 0`` or as a map g_d -> g_{d+d0}; shape ``(k, n_{d+d0}, n_d)``.
        """
        T = self.block(d0, d)
        if X is None:
            return T.transpose(0, 2, 1).copy()
        X = np.asarray(X, dtype=np.int64).reshape(-1, self.n(d0))
        n1, n2, n3 = T.shape
        Y = matmul(X, T.reshape(n1, n2 * n3), self.p).reshape(-1, n2, n3)
        return Y.transpose(0, 2, 1).copy()

    # -- derived gradings -------------------------------------------------
    def reversed(self) -> "GradedLieAlgebra":
        G = GradedLieAlgebra(self.alg, -self.degrees, name=self.name)
        G.meta = dict(self.meta, reversed=not self.meta.get("reversed", False))
        return G

    def permuted(self, perm) -> "GradedLieAlgebra":
        """Same algebra with basis vector ``perm[i]`` moved to position ``i``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(perm.size)
        a = self.alg
        alg = LieAlgebraFp(
            a.p, [a.labels[i] for i in perm], inv[a.I], inv[a.J], inv[a.K], a.C
        )
        return GradedLieAlgebra(alg, self.degrees[perm], name=self.name)

    @classmethod
    def from_blocks(cls, p, counts: dict, blocks: dict, labels=None, name=""):
        """Assemble from per-degree counts and blocks (basis sorted by degree)."""
        degs = sorted(d for d, c in counts.items() if c > 0)
        offset = {}
        pos = 0
        deg_list = []
        for d in degs:
            offset[d] = pos
            pos += counts[d]
            deg_list.extend([d] * counts[d])
        I, J, K, C = [], [], [], []
        for (d1, d2), T in blocks.items():
            if d1 not in offset or d2 not in offset or (d1 + d2) not in offset:
                continue
            if d1 > d2:
                continue
            a, b, c = np.nonzero(np.asarray(T) % p)
            vals = np.asarray(T)[a, b, c] % p
            ia = a + offset[d1]
            ib = b + offset[d2]
            if d1 == d2:
                m = ia < ib
                ia, ib, c, vals = ia[m], ib[m], c[m], vals[m]
            I.append(ia)
            J.append(ib)
            K.append(c + offset[d1 + d2])
            C.append(vals)
        cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64))
        if labels is None:
            labels = [f"b{i}" for i in range(pos)]
        alg = LieAlgebraFp(p, labels, cat(I), cat(J), cat(K), cat(C))
        return cls(alg, deg_list, name=name)

    def __repr__(self):
        return f"GradedLieAlgebra({self.name or 'unnamed'}, dim={self.dim}, q={self.q}, r={self.r}, p={self.p})"


@dataclass
class GradingReport:
    violations: list = field(default_factory=list)
    q: int = 0
    r: int = 0

    @property
    def clean(self) -> bool:
        return not self.violations


def check_grading(G: GradedLieAlgebra) -> GradingReport:
    """Triples (i, j, k) with a structure constant violating deg k = deg i + deg j."""
    if G._blocks is None:
        G._build_blocks()
    return GradingReport(sorted(G.grading_violations), G.q, G.r)


def _map_kernel(G, j, s):
    """Kernel of g_j -> Hom(g_s, g_{j+s}) in local coordinates."""
    nj = G.n(j)
    if nj == 0:
        return Subspace.zero(0, G.p)
    T = G.block(j, s)
    M = T.reshape(nj, -1)
    if M.shape[1] == 0:
        return Subspace.full(nj, G.p)
    return kernel(M.T, G.p)


def transitivity_witness(G: GradedLieAlgebra):
    """First ``(j, x)`` with x ∈ g_j, j >= 0, x != 0 and [x, g_-1] = 0; else None."""
    for j in range(0, G.r + 1):
        K = _map_kernel(G, j, -1)
        if K.dim:
            return j, G.embed(j, K.basis[0])[0]
    return None


def one_transitivity_witness(G: GradedLieAlgebra):
    """First ``(j, x)`` with x ∈ g_j, j <= 0, x != 0 and [x, g_1] = 0; else None."""
    for j in range(-G.q, 1):
        K = _map_kernel(G, j, 1)
        if K.dim:
            return j, G.embed(j, K.basis[0])[0]
    return None


def check_transitivity(G: GradedLieAlgebra) -> bool:
    return transitivity_witness(G) is None


def check_one_transitivity(G: GradedLieAlgebra) -> bool:
    return one_transitivity_witness(G) is None


def _reduce_last_axis(T, S: Subspace):
    """Reduce the last axis of T modulo S and keep the non-pivot coordinates."""
    shp = T.shape
    flat = T.reshape(-1, shp[-1])
    red = S.residual(flat) if S.dim else flat % S.p
    comp = S.complement_indices()
    return red[:, comp].reshape(shp[:-1] + (len(comp),))


def weisfeiler_radical(G: GradedLieAlgebra, as_parts: bool = False):
    """The fixpoint M^{i+1} = {x ∈ g_- : [x, g_+] ⊆ M^i}, starting from M^0 = 0."""
    p = G.p
    neg = [d for d in G.degs if d < 0]
    pos = [d for d in G.degs if d > 0]
    M = {d: Subspace.zero(G.n(d), p) for d in neg}
    while True:
        new = {}
        for k in neg:
            nk = G.n(k)
            conds = []
            for l in pos:
                tgt = k + l
                if G.n(tgt) == 0:
                    continue
                T = G.block(k, l)
                if tgt < 0:
                    T = _reduce_last_axis(T, M[tgt])
                if T.size:
                    conds.append(T.reshape(nk, -1))
            if conds:
                A = np.hstack(conds)
                new[k] = kernel(A.T, p) if A.shape[1] else Subspace.full(nk, p)
            else:
                new[k] = Subspace.full(nk, p)
        if all(new[d] == M[d] for d in neg):
            break
        M = new
    if as_parts:
        return M
    return G.to_ambient(M)


def graded_product(G: GradedLieAlgebra, A: dict, B: dict) -> dict:
    """``[A, B]`` for graded subspaces given per degree."""
    p = G.p
    out = {}
    for d1, S1 in A.items():
        if S1.dim == 0:
            continue
        for d2, S2 in B.items():
            if S2.dim == 0 or G.n(d1 + d2) == 0:
                continue
            rows = G.bracket_local(d1, S1.basis, d2, S2.basis)
            tgt = d1 + d2
            cur = out.get(tgt, Subspace.zero(G.n(tgt), p))
            out[tgt] = cur.extend(rows)
    return out


def graded_ideal(G: GradedLieAlgebra, gens: dict) -> dict:
    """Ideal generated by homogeneous generators."""
    p = G.p
    I = {d: Subspace.zero(G.n(d), p) for d in G.degs}
    frontier = {}
    for d, S in gens.items():
        if S.dim:
            I[d], new = I[d].extend_new(S.basis)
            if new.shape[0]:
                frontier[d] = new
    while frontier:
        nxt = {}
        for d, F in frontier.items():
            for e in G.degs:
                tgt = d + e
                if G.n(tgt) == 0 or I[tgt].dim == G.n(tgt):
                    continue
                rows = G.bracket_local(d, F, e, np.eye(G.n(e), dtype=np.int64))
                I[tgt], new = I[tgt].extend_new(rows)
                if new.shape[0]:
                    nxt.setdefault(tgt, []).append(new)
        frontier = {d: np.vstack(v) for d, v in nxt.items()}
    return I


def full_parts(G: GradedLieAlgebra) -> dict:
    return {d: Subspace.full(G.n(d), G.p) for d in G.degs}


def subquotient(G: GradedLieAlgebra, F: dict, A: dict | None = None, regrade=None, name="", check=True):
    """The graded algebra F/A for a graded subalgebra F and graded ideal A ⊆ F.

    ``regrade`` maps old degrees to new ones (default identity).  Basis: for each
    degree the rows of ``F_d`` completing ``A_d`` (canonical transversal).
    Returns the new algebra; ``meta['basis']`` holds the ambient lifts.
    """
    p = G.p
    A = A or {}
    regrade = regrade or (lambda d: d)
    trans = {}
    coord = {}
    for d, S in F.items():
        if S.dim == 0:
            continue
        Ad = A.get(d, Subspace.zero(G.n(d), p))
        T = S.quotient_transversal(Ad) if Ad.dim else S.basis.copy()
        if T.shape[0] == 0:
            continue
        trans[d] = T
        coord[d] = (Ad, T)
    counts = {}
    new_of = {}
    for d in trans:
        nd = regrade(d)
        if nd in counts:
            raise FpError("regrading merges two components")
        counts[nd] = trans[d].shape[0]
        new_of[d] = nd
    blocks = {}
    for d1, T1 in trans.items():
        for d2, T2 in trans.items():
            tgt = d1 + d2
            if new_of[d1] > new_of[d2]:
                continue
            rows = G.bracket_local(d1, T1, d2, T2)
            if tgt not in trans:
                if check and np.any(rows):
                    Ad = A.get(tgt)
                    if Ad is None or not Ad.contains_vectors(rows):
                        raise FpError("F is not closed under the bracket")
                continue
            if regrade(tgt) != new_of[d1] + new_of[d2]:
                raise FpError("regrading is not additive")
            Ad, Tt = coord[tgt]
            basis = np.vstack([Ad.basis, Tt]) if Ad.dim else Tt
            X = solve(basis.T, rows.T, p)
            if X is None:
                raise FpError("F is not closed under the bracket")
            C = X[Ad.dim :].T.reshape(T1.shape[0], T2.shape[0], Tt.shape[0])
            blocks[(new_of[d1], new_of[d2])] = C
    labels = []
    lifts = []
    for d in sorted(trans, key=lambda x: new_of[x]):
        T = trans[d]
        for row in T:
            nz = np.flatnonzero(row)
            if nz.size == 1 and row[nz[0]] == 1:
                labels.append(G.alg.labels[G.index(d)[nz[0]]])
            else:
                labels.append(_combo_label(G, d, row))
        lifts.append(G.embed(d, T))
    H = GradedLieAlgebra.from_blocks(p, counts, blocks, labels=labels, name=name)
    H.meta["basis"] = np.vstack(lifts) if lifts else np.zeros((0, G.dim), dtype=np.int64)
    return H


def _combo_label(G, d, row):
    terms = []
    for i in np.flatnonzero(row)[:4]:
        c = int(row[i])
        lab = G.alg.labels[G.index(d)[i]]
        terms.append(lab if c == 1 else f"{c}*{lab}")
    more = "+..." if np.count_nonzero(row) > 4 else ""
    return "+".join(terms) + more


def _generated_by_minus_one(G: GradedLieAlgebra) -> bool:
    cur = Subspace.full(G.n(-1), G.p)
    for d in range(-2, -G.q - 1, -1):
        nxt = Subspace.zero(G.n(d), G.p).extend(
            G.bracket_local(d + 1, cur.basis, -1, np.eye(G.n(-1), dtype=np.int64))
        )
        if nxt.dim != G.n(d):
            return False
        cur = nxt
    return True


def minimal_ideal(G: GradedLieAlgebra, check: bool = True):
    """Unique minimal ideal ``I`` and its top degree ``s``.

    Returns ``(I, s)`` with ``I`` an ambient subspace.
    """
    if check:
        from . import modrep

        if G.n(-1) == 0:
            raise HypothesesNotMet("g_-1 is zero")
        if not modrep.is_irreducible(G.component(-1), G.component(0), G):
            raise HypothesesNotMet("irreducibility: g_-1 is not an irreducible g_0-module")
        if not check_transitivity(G):
            raise HypothesesNotMet("transitivity fails")
        if weisfeiler_radical(G).dim:
            raise HypothesesNotMet("Weisfeiler radical is nonzero")
        if not _generated_by_minus_one(G):
            raise HypothesesNotMet("g_- is not generated by g_-1")
    parts = graded_ideal(G, {-G.q: Subspace.full(G.n(-G.q), G.p)})
    I = G.to_ambient(parts)
    for d in range(-G.q, 0):
        if parts[d].dim != G.n(d):
            raise HypothesesNotMet("minimal ideal does not contain g_-")
    s = G.r if parts.get(G.r, Subspace.zero(0, G.p)).dim else G.r - 1
    return I, s


def quotient_construction(G: GradedLieAlgebra, V, t: int, sign: int | None = None):
    """B(V_{-t}) or B(V_t) as a depth-one graded algebra.

    ``V`` is a subspace of g_{-t} (``sign=-1``) or g_t (``sign=+1``), given
    either as an ambient :class:`Subspace` or as local rows.  The sign defaults
    to that of ``t`` when ``t`` is given as a signed degree.
    """
    p = G.p
    if sign is None:
        sign = -1 if t < 0 else 1
    t = abs(int(t))
    if t < 1:
        raise ValueError("t must be at least 1")
    d0 = sign * t
    if isinstance(V, Subspace) and V.ambient == G.dim:
        V = G.graded_subspace(V)[d0]
    elif not isinstance(V, Subspace):
        V = Subspace(np.asarray(V, dtype=np.int64).reshape(-1, G.n(d0)), p, G.n(d0))
    if V.dim == 0:
        raise ValueError("V is zero")
    g0 = np.eye(G.n(0), dtype=np.int64)
    if not V.contains_vectors(G.bracket_local(0, g0, d0, V.basis)):
        raise ValueError("V is not a g_0-submodule")
    # F: the "generated" side uses brackets of V, the other side takes full components.
    F = {0: Subspace.full(G.n(0), p), d0: V}
    cur = V
    i = 2
    while True:
        d = sign * i * t
        if G.n(d) == 0:
            break
        cur = Subspace.zero(G.n(d), p).extend(G.bracket_local(d0, V.basis, d - d0, cur.basis))
        if cur.dim == 0:
            break
        F[d] = cur
        i += 1
    i = 1
    while G.n(-sign * i * t):
        F[-sign * i * t] = Subspace.full(G.n(-sign * i * t), p)
        i += 1
    # A: annihilator chain on the opposite side.
    A = {}
    prev = None
    i = 0
    while True:
        d = -sign * i * t
        if d not in F:
            break
        nd = F[d].dim
        Tm = G.bracket_local(d, F[d].basis, d0, V.basis).reshape(nd, V.dim, -1)
        if prev is not None:
            Tm = _reduce_last_axis(Tm, prev)
        K = kernel(Tm.reshape(nd, -1).T, p) if Tm.size else Subspace.full(nd, p)
        Ad = Subspace(matmul(K.basis, F[d].basis, p), p, G.n(d)) if K.dim else Subspace.zero(G.n(d), p)
        A[d] = Ad
        prev = Ad
        i += 1
    B = subquotient(G, F, A, regrade=lambda d: d // t, name=f"B({G.name})")
    if sign > 0:
        B = B.reversed()
    return B


def local_subalgebra(G: GradedLieAlgebra) -> GradedLieAlgebra:
    """Subalgebra generated by g_-1 ⊕ g_0 ⊕ g_1."""
    p = G.p
    F = {d: Subspace.full(G.n(d), p) for d in (-1, 0, 1) if G.n(d)}
    for sign in (-1, 1):
        if G.n(sign) == 0:
            continue
        cur = F[sign]
        d = 2 * sign
        while G.n(d):
            cur = Subspace.zero(G.n(d), p).extend(
                G.bracket_local(d - sign, cur.basis, sign, F[sign].basis)
            )
            if cur.dim == 0:
                break
            F[d] = cur
            d += sign
    H = subquotient(G, F, name=f"local({G.name})")
    return H


@dataclass
class PCharacter:
    chi: dict
    scaling: dict = field(default_factory=dict)

    @property
    def vanishes(self) -> bool:
        return all(v == 0 for v in self.chi.values())


def _scalar(M, p):
    n = M.shape[0]
    if n == 0:
        return 0
    c = int(M[0, 0]) % p
    if np.array_equal(M % p, (c * np.eye(n, dtype=np.int64)) % p):
        return c
    return None


def p_character(G: GradedLieAlgebra, pm=None, elements=None) -> PCharacter:
    """χ on a spanning set of g_0^⊙ (defect of the [p]-map on g_-1).

    ``pm`` is a list of ``(x, x^[p])`` pairs of g_0-local vectors.  Without it,
    root vectors and coroots of g_0^(1) are used with the standard values
    e^[p] = 0 and h^[p] = h.
    """
    p = G.p
    if pm is None:
        from . import modrep

        pm = modrep.standard_pmap_pairs(G)
    chi = {}
    scaling = {}
    neg_chain = _negative_chain(G)
    for idx, (x, xp) in enumerate(pm):
        A = G.action_on(0, -1, x)[0]
        Ap = G.action_on(0, -1, xp)[0]
        D = (_matpow(A, p, p) - Ap) % p
        c = _scalar(D, p)
        if c is None:
            raise NotScalar(f"defect of element {idx} is not scalar on g_-1")
        chi[idx] = c
        for j, ok in neg_chain.items():
            if not ok:
                scaling[(idx, j)] = "not applicable"
                continue
            Aj = G.action_on(0, -j, x)[0]
            Apj = G.action_on(0, -j, xp)[0]
            cj = _scalar((_matpow(Aj, p, p) - Apj) % p, p)
            scaling[(idx, j)] = cj == (j * c) % p
    return PCharacter(chi, scaling)


def _negative_chain(G):
    """For j >= 2: whether g_{-j} = [g_{-j+1}, g_-1]."""
    out = {}
    for j in range(2, G.q + 1):
        rows = G.bracket_local(-j + 1, np.eye(G.n(-j + 1), dtype=np.int64), -1, np.eye(G.n(-1), dtype=np.int64))
        out[j] = Subspace.zero(G.n(-j), G.p).extend(rows).dim == G.n(-j)
    return out
