"""Representation theory of g_0: tori, weights, primitive vectors, decomposition.

Weights are tuples of eigenvalues (residues mod p) on the ordered basis of a
toral subalgebra.  Fundamental-weight coordinates are derived only once a base
of the root system of g_0 has been fixed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fplinalg import Subspace, kernel, matmul, solve
from .graded import GradedLieAlgebra
from .liecore import (
    LieAlgebraFp,
    _matpow,
    center as _center,
    centralizer as _centralizer,
    ideal_generated,
    subalgebra,
)
from . import spin as _spin
from . import classical as _classical

__all__ = [
    "NotFound",
    "NotReductive",
    "RootSpaceNotOneDim",
    "NoPositiveSystem",
    "ToralSubalgebra",
    "WeightDecomposition",
    "PrimitiveVector",
    "G0Ideal",
    "G0Structure",
    "find_toral",
    "joint_eigenspaces",
    "weight_decomposition",
    "primitive_vectors",
    "is_irreducible",
    "composition_series",
    "cartan_integers",
    "find_base",
    "identify_type",
    "analyze_g0",
    "decompose_g0",
    "standard_pmap_pairs",
    "module_of",
]


class NotFound(RuntimeError):
    """No maximal torus found within the retry budget."""


class NotReductive(ValueError):
    """g_0 is not classical reductive."""


class RootSpaceNotOneDim(NotReductive):
    pass


class NoPositiveSystem(NotReductive):
    pass


# ---------------------------------------------------------------------------
# context: g_0 as an abstract algebra with a faithful action


def _as_sub(S, n, p):
    if isinstance(S, Subspace):
        return S
    return Subspace(np.asarray(S, dtype=np.int64).reshape(-1, n), p, n)


@dataclass
class _Ctx:
    """g_0 in its own coordinates plus a representation used to detect tori."""

    L: object
    basis: np.ndarray  # rows: ambient vectors of g_0
    lie: LieAlgebraFp
    rho: np.ndarray  # (k, d, d)
    p: int


def _degree_of(G: GradedLieAlgebra, S: Subspace):
    if S.dim == 0:
        return None
    support = np.flatnonzero(np.any(S.basis, axis=0))
    degs = set(G.degrees[support].tolist())
    return degs.pop() if len(degs) == 1 else None


def _context(g0, L) -> _Ctx:
    cache = getattr(L, "_modrep_cache", None)
    if cache is None:
        cache = {}
        try:
            L._modrep_cache = cache
        except AttributeError:
            pass
    alg = L.alg if isinstance(L, GradedLieAlgebra) else L
    p = alg.p
    g0 = _as_sub(g0, alg.dim, p)
    key = ("ctx", g0.basis.tobytes(), g0.basis.shape)
    if key in cache:
        return cache[key]
    if isinstance(L, GradedLieAlgebra) and _degree_of(L, g0) == 0:
        loc = g0.basis[:, L.index(0)]
        if g0.dim == L.n(0):
            T = L.block(0, 0)
            k = L.n(0)
            blocks = {(0, 0): T}
            lie = GradedLieAlgebra.from_blocks(p, {0: k}, blocks).alg
        else:
            lie = _local_subalgebra(L, loc)
        mats = []
        for d in (-1, 0, 1):
            if L.n(d):
                mats.append(L.action_on(0, d, loc))
        dtot = sum(m.shape[1] for m in mats)
        rho = np.zeros((g0.dim, dtot, dtot), dtype=np.int64)
        off = 0
        for m in mats:
            s = m.shape[1]
            rho[:, off : off + s, off : off + s] = m
            off += s
    else:
        lie = subalgebra(g0, alg)
        rho = np.array([alg.ad(b) for b in g0.basis]).reshape(g0.dim, alg.dim, alg.dim)
    ctx = _Ctx(L, g0.basis.copy(), lie, rho, p)
    cache[key] = ctx
    return ctx


def _local_subalgebra(G, loc):
    """Structure constants of the span of local rows ``loc`` ⊆ g_0."""
    S = Subspace(loc, G.p, G.n(0))
    rows = G.bracket_local(0, S.basis, 0, S.basis)
    k = S.dim
    coords = S.coords(rows).reshape(k, k, k)
    return GradedLieAlgebra.from_blocks(G.p, {0: k}, {(0, 0): coords}).alg


# ---------------------------------------------------------------------------
# tori and weights


@dataclass
class ToralSubalgebra:
    carrier: Subspace  # ambient subspace of L
    basis: np.ndarray  # rows: ambient vectors (a fixed ordered basis)
    local: np.ndarray  # rows: the same in g_0 coordinates

    @property
    def dim(self):
        return self.basis.shape[0]


def joint_eigenspaces(mats, p, restrict_to: Subspace | None = None):
    """Simultaneous eigenspaces of commuting matrices (acting on columns).

    Returns ``(spaces, complete)``: ``{weight tuple: Subspace}`` and whether they
    exhaust the space (false when some matrix is not diagonalizable over F_p).
    """
    mats = np.asarray(mats, dtype=np.int64) % p
    d = mats.shape[1] if mats.ndim == 3 else 0
    start = restrict_to if restrict_to is not None else Subspace.full(d, p)
    spaces = {(): start}
    complete = True
    for A in mats:
        new = {}
        for w, V in spaces.items():
            B = V.basis
            k = B.shape[0]
            img = matmul(B, A.T, p)
            R = V.coords(img).T  # restriction, acting on columns of coordinates
            got = 0
            for lam in range(p):
                K = kernel((R - lam * np.eye(k, dtype=np.int64)) % p, p)
                if K.dim:
                    new[w + (lam,)] = Subspace(matmul(K.basis, B, p), p, d)
                    got += K.dim
            if got < k:
                complete = False
        spaces = new
    return spaces, complete


def _split_part(ctx: _Ctx, H: Subspace):
    """{h ∈ H : ρ(h)^p = ρ(h)} for an abelian H (g_0 coordinates)."""
    p = ctx.p
    rows = []
    for h in H.basis:
        R = np.tensordot(h, ctx.rho, axes=1) % p
        rows.append(((_matpow(R, p, p) - R) % p).ravel())
    M = np.array(rows)
    K = kernel(M.T, p)
    if K.dim == 0:
        return Subspace.zero(H.ambient, p)
    return Subspace(matmul(K.basis, H.basis, p), p, H.ambient)


def _fitting_null(lie: LieAlgebraFp, H: Subspace, x) -> Subspace:
    """Generalized 0-eigenspace of ad x on the subalgebra H."""
    p = lie.p
    imgs = lie.brackets(x[None, :], H.basis)
    A = H.coords(imgs).T
    k = H.dim
    N = kernel(_matpow(A, k, p), p)
    return Subspace(matmul(N.basis, H.basis, p), p, H.ambient) if N.dim else Subspace.zero(H.ambient, p)


def _is_abelian(lie, S: Subspace) -> bool:
    if S.dim <= 1:
        return True
    return not np.any(lie.brackets(S.basis, S.basis))


def _find_toral_ctx(ctx: _Ctx, rng, budget=400) -> Subspace:
    lie = ctx.lie
    p = ctx.p
    k = lie.dim
    Z = _center(lie)
    T = Subspace.zero(k, p)
    fails = 0
    while True:
        C = _centralizer(T, lie) if T.dim else Subspace.full(k, p)
        if (T.sum(Z)).contains(C):
            # only the part of C spanned by toral elements matters
            return T if T.dim else _split_part(ctx, Z) if Z.dim else T
        H = C
        grew = False
        while fails < budget:
            x = (rng.integers(0, p, size=H.dim) @ H.basis) % p
            Hx = _fitting_null(lie, H, x)
            if _is_abelian(lie, Hx):
                S = _split_part(ctx, Hx)
                if S.dim > T.dim and S.contains(T):
                    T = S
                    grew = True
                    break
                fails += 1
            elif Hx.dim < H.dim:
                H = Hx
            else:
                fails += 1
        if not grew:
            raise NotFound("no maximal torus found within the retry budget")


def find_toral(g0, L, rng=None) -> ToralSubalgebra:
    """A maximal toral subalgebra of g_0 (relative to a faithful action)."""
    rng = np.random.default_rng(1) if rng is None else rng
    ctx = _context(g0, L)
    T = _find_toral_ctx(ctx, rng)
    amb = matmul(T.basis, ctx.basis, ctx.p) if T.dim else np.zeros((0, ctx.basis.shape[1]), dtype=np.int64)
    n = ctx.basis.shape[1]
    return ToralSubalgebra(Subspace(amb, ctx.p, n) if T.dim else Subspace.zero(n, ctx.p), amb, T.basis.copy())


@dataclass
class WeightDecomposition:
    weights: list
    spaces: list
    complete: bool = True

    def as_dict(self) -> dict:
        return dict(zip(self.weights, self.spaces))

    @property
    def residue(self) -> bool:
        """True when a generalized-only part is left over (semisimplicity failure)."""
        return not self.complete


def module_of(M, acting, L):
    """Matrices (acting on M's echelon coordinates) of the basis of ``acting`` on ``M``."""
    alg = L.alg if isinstance(L, GradedLieAlgebra) else L
    p = alg.p
    M = _as_sub(M, alg.dim, p)
    X = acting.basis if isinstance(acting, Subspace) else np.asarray(acting, dtype=np.int64).reshape(-1, alg.dim)
    if M.dim == 0:
        return _spin.MatrixModule(np.zeros((X.shape[0], 0, 0), dtype=np.int64), p, 0)
    if isinstance(L, GradedLieAlgebra):
        d = _degree_of(L, M)
        if d is not None and (X.shape[0] == 0 or _degree_of(L, Subspace(X, p, alg.dim)) == 0):
            idx = L.index(d)
            Mloc = Subspace(M.basis[:, idx], p, idx.size)
            mats = L.action_on(0, d, X[:, L.index(0)])
            sub = _spin.MatrixModule(mats, p, idx.size).restrict(Mloc)
            return sub
    mats = np.array([alg.ad(x) for x in X]).reshape(-1, alg.dim, alg.dim)
    return _spin.MatrixModule(mats, p, alg.dim).restrict(M)


def weight_decomposition(M, t: ToralSubalgebra, L) -> WeightDecomposition:
    """Simultaneous t-eigenspaces of the t-stable subspace ``M``."""
    alg = L.alg if isinstance(L, GradedLieAlgebra) else L
    p = alg.p
    M = _as_sub(M, alg.dim, p)
    if t.dim == 0:
        return WeightDecomposition([()], [M], True)
    mod = module_of(M, t.basis, L)
    spaces, complete = joint_eigenspaces(mod.gens, p)
    ws = sorted(spaces)
    out = [Subspace(matmul(spaces[w].basis, M.basis, p), p, alg.dim) for w in ws]
    return WeightDecomposition(ws, out, complete)


# ---------------------------------------------------------------------------
# root system of g_0


@dataclass
class PrimitiveVector:
    vector: np.ndarray
    sign: str
    weight: tuple


@dataclass
class G0Ideal:
    label: str
    subspace: Subspace  # ambient
    kind: str  # "abelian" | "simple" | "A-variant" | "merged"


@dataclass
class G0Structure:
    ctx: _Ctx
    t: ToralSubalgebra
    roots: dict  # weight -> root vector (g_0 coords)
    coroots: dict  # weight -> normalized coroot (g_0 coords)
    sums: dict  # (a, b) -> a+b when [e_a, e_b] != 0
    positives: list
    base: list
    cartan: np.ndarray
    components: list  # list of (base index list, type label, rank, isomorphisms)
    center: Subspace  # g_0 coords
    ideals: list = field(default_factory=list)

    def wt(self, v_eigs, i) -> int:
        """λ(h_{α_i}) for a weight given as eigenvalues on t."""
        return _eval_weight(self, v_eigs, self.coroots[self.base[i]])

    def omega_coords(self, weight) -> tuple:
        return tuple(self.wt(weight, i) for i in range(len(self.base)))

    def canonical_label(self, weight) -> tuple:
        """Per-component ϖ-coordinates in Bourbaki order, minimized over diagram automorphisms."""
        c = self.omega_coords(weight)
        out = []
        for idxs, typ, rank, isos in self.components:
            best = None
            for iso in isos:
                v = [0] * rank
                for a, b in iso.items():
                    v[b] = c[idxs[a]]
                v = tuple(v)
                best = v if best is None or v < best else best
            out.append((typ, best))
        return tuple(out)


def _eval_weight(S: G0Structure, weight, h_local) -> int:
    """Evaluate a weight (eigenvalues on t.local rows) at h in span(t)."""
    p = S.ctx.p
    c = solve(S.t.local.T, h_local, p)
    if c is None:
        raise NotReductive("coroot is not in the torus")
    return int(np.dot(c, np.asarray(weight)) % p)


def _lift_offdiag(v, p):
    v %= p
    return v - p if v else 0


def cartan_integers(S: G0Structure) -> np.ndarray:
    """<α_j, α_i> from root strings: d - u for the α_i-string through α_j."""
    p = S.ctx.p
    r = len(S.base)
    A = 2 * np.eye(r, dtype=np.int64)
    roots = set(S.roots)
    add = lambda a, b, k: tuple((x + k * y) % p for x, y in zip(a, b))
    for i, ai in enumerate(S.base):
        for j, aj in enumerate(S.base):
            if i == j:
                continue
            d = 0
            while d < p - 1 and add(aj, ai, -(d + 1)) in roots:
                d += 1
            u = 0
            while u < p - 1 and add(aj, ai, u + 1) in roots:
                u += 1
            A[j, i] = d - u
            check = _lift_offdiag(_eval_weight(S, aj, S.coroots[ai]), p)
            if check != d - u:
                raise NotReductive("root strings disagree with coroot values")
    return A


def find_base(roots, sums, negation, p):
    """A positive system (by backtracking) and its base."""
    roots = list(roots)
    pairs = []
    seen = set()
    for a in sorted(roots):
        if a in seen:
            continue
        b = negation[a]
        seen.add(a)
        seen.add(b)
        pairs.append((a, b))
    by_root = {}
    for (a, b), c in sums.items():
        by_root.setdefault(a, []).append((b, c))

    def propagate(pos):
        stack = list(pos)
        while stack:
            a = stack.pop()
            for b, c in by_root.get(a, ()):
                if b in pos:
                    if negation[c] in pos:
                        return None
                    if c not in pos:
                        pos.add(c)
                        stack.append(c)
        for a in pos:
            if negation[a] in pos:
                return None
        return pos

    def search(pos, k):
        while k < len(pairs) and (pairs[k][0] in pos or pairs[k][1] in pos):
            k += 1
        if k == len(pairs):
            return pos
        for choice in pairs[k]:
            nxt = propagate(set(pos) | {choice})
            if nxt is not None:
                res = search(nxt, k + 1)
                if res is not None:
                    return res
        return None

    P = search(set(), 0)
    if P is None:
        raise NoPositiveSystem("no closed positive system")
    summed = {c for (a, b), c in sums.items() if a in P and b in P}
    base = sorted(a for a in P if a not in summed)
    return sorted(P), base


def _candidate_types(r):
    out = [("A", r)]
    if r >= 3:
        out.append(("B", r))
    if r >= 2:
        out.append(("C", r))
    if r >= 4:
        out.append(("D", r))
    if r == 2:
        out.append(("G2", 2))
    if r == 4:
        out.append(("F4", 4))
    if r in (6, 7, 8):
        out.append((f"E{r}", r))
    return out


def _isomorphisms(A, B):
    """All bijections π with A[i, j] = B[π(i), π(j)]."""
    r = A.shape[0]
    res = []

    def bt(i, used, assign):
        if i == r:
            res.append(dict(assign))
            return
        for b in range(r):
            if b in used:
                continue
            if A[i, i] != B[b, b]:
                continue
            ok = all(A[i, j] == B[b, assign[j]] and A[j, i] == B[assign[j], b] for j in range(i))
            if ok:
                assign[i] = b
                used.add(b)
                bt(i + 1, used, assign)
                used.discard(b)
                del assign[i]

    bt(0, set(), {})
    return res


def identify_type(A):
    """Dynkin type of an indecomposable Cartan matrix, with all isomorphisms."""
    A = np.asarray(A, dtype=np.int64)
    r = A.shape[0]
    for typ, rank in _candidate_types(r):
        B = _classical.cartan_matrix(typ, rank)
        isos = _isomorphisms(A, B)
        if isos:
            label = typ if typ in ("G2", "F4", "E6", "E7", "E8") else f"{typ}{rank}"
            return label, isos
    raise NotReductive("Cartan matrix of unknown type")


def _components(A):
    r = A.shape[0]
    seen = [False] * r
    comps = []
    for s in range(r):
        if seen[s]:
            continue
        comp = [s]
        seen[s] = True
        k = 0
        while k < len(comp):
            i = comp[k]
            k += 1
            for j in range(r):
                if not seen[j] and (A[i, j] or A[j, i]):
                    seen[j] = True
                    comp.append(j)
        comps.append(sorted(comp))
    return comps


def analyze_g0(g0, L, rng=None) -> G0Structure:
    """Torus, roots, base, Cartan matrix and Dynkin components of g_0."""
    ctx = _context(g0, L)
    cache = L._modrep_cache if hasattr(L, "_modrep_cache") else {}
    key = ("g0", ctx.basis.tobytes(), ctx.basis.shape)
    if key in cache:
        return cache[key]
    rng = np.random.default_rng(1) if rng is None else rng
    p = ctx.p
    lie = ctx.lie
    try:
        T = _find_toral_ctx(ctx, rng)
    except NotFound as exc:
        raise NotReductive(str(exc)) from exc
    Z = _center(lie)
    amb = matmul(T.basis, ctx.basis, p) if T.dim else np.zeros((0, ctx.basis.shape[1]), dtype=np.int64)
    t = ToralSubalgebra(Subspace(amb, p, ctx.basis.shape[1]) if T.dim else Subspace.zero(ctx.basis.shape[1], p), amb, T.basis.copy())
    roots, coroots, sums = {}, {}, {}
    if T.dim:
        mats = np.array([lie.ad(h) for h in T.basis])
        spaces, complete = joint_eigenspaces(mats, p)
        if not complete:
            raise NotReductive("torus does not act semisimply on g_0")
        zero = tuple([0] * T.dim)
        for w, V in spaces.items():
            if w == zero:
                if not T.sum(Z).contains(V):
                    raise NotReductive("centralizer of the torus is larger than torus plus center")
                continue
            if V.dim != 1:
                raise RootSpaceNotOneDim(f"root space of dimension {V.dim}")
            roots[w] = V.basis[0]
    neg = {}
    for a in roots:
        na = tuple((-x) % p for x in a)
        if na not in roots:
            raise NotReductive("roots not closed under negation")
        neg[a] = na
    for a, ea in roots.items():
        h = lie.bracket(ea, roots[neg[a]])
        c_vec = lie.bracket(h, ea)
        c = _ratio(c_vec, ea, p)
        if c is None or c == 0:
            raise NotReductive("degenerate root sl2")
        coroots[a] = (h * pow(int(c), p - 2, p) * 2) % p
    for a, ea in roots.items():
        for b, eb in roots.items():
            if b == neg[a]:
                continue
            v = lie.bracket(ea, eb)
            if np.any(v):
                c = tuple((x + y) % p for x, y in zip(a, b))
                if c not in roots:
                    raise NotReductive("bracket of root vectors leaves the root spaces")
                sums[(a, b)] = c
    if roots:
        positives, base = find_base(roots, sums, neg, p)
    else:
        positives, base = [], []
    S = G0Structure(ctx, t, roots, coroots, sums, positives, base, np.zeros((0, 0), dtype=np.int64), [], Z)
    if base:
        A = cartan_integers(S)
        S.cartan = A
        comps = []
        for idxs in _components(A):
            sub = A[np.ix_(idxs, idxs)]
            label, isos = identify_type(sub)
            comps.append((idxs, label, len(idxs), isos))
        S.components = comps
    cache[key] = S
    return S


def _ratio(v, e, p):
    nz = np.flatnonzero(e)
    if nz.size == 0:
        return None
    i = nz[0]
    c = (int(v[i]) * pow(int(e[i]), p - 2, p)) % p
    if np.any((v - c * e) % p):
        return None
    return c


def primitive_vectors(M, S: G0Structure, L, sign: str | None = None) -> list:
    """b^+/b^- primitive vectors of the g_0-module M, one basis per weight space."""
    alg = L.alg if isinstance(L, GradedLieAlgebra) else L
    p = alg.p
    M = _as_sub(M, alg.dim, p)
    wd = weight_decomposition(M, S.t, L)
    out = []
    pos_vecs = [S.roots[a] for a in S.positives]
    neg_vecs = [S.roots[tuple((-x) % p for x in a)] for a in S.positives]
    for sgn, vecs in (("+", pos_vecs), ("-", neg_vecs)):
        if sign is not None and sgn != sign:
            continue
        X = matmul(np.array(vecs).reshape(-1, S.ctx.lie.dim), S.ctx.basis, p) if vecs else np.zeros((0, alg.dim), dtype=np.int64)
        for w, V in zip(wd.weights, wd.spaces):
            if V.dim == 0:
                continue
            if X.shape[0] == 0:
                K = Subspace.full(V.dim, p)
            else:
                mod = module_of(M, X, L)
                Vloc = Subspace(M.coords(V.basis), p, M.dim)
                imgs = matmul(Vloc.basis, mod.gens.transpose(0, 2, 1), p)  # (k, dimV, dimM)
                stacked = imgs.transpose(1, 0, 2).reshape(V.dim, -1)
                K = kernel(stacked.T, p)
            for row in K.basis:
                out.append(PrimitiveVector(matmul(row[None, :], V.basis, p)[0], sgn, w))
    return out


def is_irreducible(M, acting, L=None, rng=None) -> bool:
    """Irreducibility over F_p (Norton's criterion)."""
    mod = M if L is None else module_of(M, acting, L)
    if mod.dim == 0:
        return False
    return _spin.norton(mod, rng)[0]


def composition_series(M, acting, L=None, rng=None) -> list:
    """Submodule chain with irreducible factors, as ambient subspaces when L is given."""
    mod = M if L is None else module_of(M, acting, L)
    chain = _spin.composition_series(mod, rng)
    if L is None:
        return chain
    alg = L.alg if isinstance(L, GradedLieAlgebra) else L
    Msub = _as_sub(M, alg.dim, alg.p)
    out = []
    for U in chain:
        if U.dim == 0:
            out.append(Subspace.zero(alg.dim, alg.p))
        else:
            out.append(Subspace(matmul(U.basis, Msub.basis, alg.p), alg.p, alg.dim))
    return out


# ---------------------------------------------------------------------------
# decomposition of g_0


def _root_components(S: G0Structure):
    parent = {a: a for a in S.roots}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    p = S.ctx.p
    for a in S.roots:
        union(a, tuple((-x) % p for x in a))
    for (a, b), c in S.sums.items():
        union(a, b)
        union(a, c)
    groups = {}
    for a in S.roots:
        groups.setdefault(find(a), []).append(a)
    return list(groups.values())


def decompose_g0(g0, L, rng=None) -> list:
    """Ideal summands of g_0 with labels.

    Labels: ``abelian:k``, a Dynkin label such as ``A2`` or ``G2``, or one of
    ``sl<n>``, ``psl<n>``, ``gl<n>``, ``pgl<n>``, ``csp<2m>``.
    """
    S = analyze_g0(g0, L, rng)
    if S.ideals:
        return S.ideals
    ctx = S.ctx
    p = ctx.p
    lie = ctx.lie
    k = lie.dim
    amb = lambda V: Subspace(matmul(V.basis, ctx.basis, p), p, ctx.basis.shape[1]) if V.dim else Subspace.zero(ctx.basis.shape[1], p)
    Z = S.center
    groups = _root_components(S)
    ideals = []
    used = Subspace.zero(k, p)
    for grp in groups:
        J = ideal_generated(np.array([S.roots[a] for a in grp]), lie)
        comp = None
        for c in S.components:
            if S.base[c[0][0]] in grp:
                comp = c
        label = comp[1]
        typ = label.rstrip("0123456789") if not label.startswith(("G2", "F4", "E")) else label
        rank = comp[2]
        kind = "simple"
        if typ == "A" and (rank + 1) % p == 0:
            n = rank + 1
            zJ = J.intersection(Z)
            base_name = "sl" if zJ.dim else "psl"
            inner = J.dim - (_center(subalgebra(J, lie)).dim)
            img = _image_in_der(lie, J)
            if img > inner:
                base_name = "gl" if base_name == "sl" else "pgl"
                extra = _outer_element(lie, J)
                J = J.extend(extra[None, :])
            label = f"{base_name}{n}"
            kind = "A-variant"
        ideals.append(G0Ideal(label, amb(J), kind))
        used = used.sum(J)
    rest = Z if not used.dim else _complement_central(Z, used)
    if len(ideals) == 1 and ideals[0].kind == "simple" and Z.dim == 1 and not Z.intersection(used).dim:
        lab = ideals[0].label
        typ = lab.rstrip("0123456789")
        rank = int(lab[len(typ):]) if lab[len(typ):] else 0
        if typ == "A" and (rank + 1) % p:
            ideals = [G0Ideal(f"gl{rank + 1}", amb(used.sum(Z)), "merged")]
            rest = Subspace.zero(k, p)
        elif typ == "C":
            ideals = [G0Ideal(f"csp{2 * rank}", amb(used.sum(Z)), "merged")]
            rest = Subspace.zero(k, p)
    if rest.dim:
        ideals.append(G0Ideal(f"abelian:{rest.dim}", amb(rest), "abelian"))
    total = Subspace.zero(k, p)
    for I in ideals:
        total = total.sum(_loc(I.subspace, ctx))
    if total.dim != k:
        raise NotReductive("g_0 is not the sum of its classical and central ideals")
    S.ideals = ideals
    return ideals


def _loc(V: Subspace, ctx: _Ctx) -> Subspace:
    """Ambient subspace of g_0 back in g_0 coordinates."""
    if V.dim == 0:
        return Subspace.zero(ctx.lie.dim, ctx.p)
    X = solve(ctx.basis.T, V.basis.T, ctx.p)
    return Subspace(X.T, ctx.p, ctx.lie.dim)


def _complement_central(Z: Subspace, used: Subspace) -> Subspace:
    """Part of the center not already inside the nonabelian ideals."""
    inter = Z.intersection(used)
    if inter.dim == 0:
        return Z
    T = Z.quotient_transversal(inter)
    return Subspace(T, Z.p, Z.ambient) if T.shape[0] else Subspace.zero(Z.ambient, Z.p)


def _image_in_der(lie, J: Subspace) -> int:
    """dim of {ad x |_J : x ∈ g_0}."""
    p = lie.p
    rows = []
    for i in range(lie.dim):
        imgs = lie.brackets(lie.basis_vector(i)[None, :], J.basis)
        rows.append(J.coords(imgs).ravel())
    return Subspace(np.array(rows), p, len(rows[0]) if rows else 0).dim


def _outer_element(lie, J: Subspace):
    """An element of g_0 acting on J by a non-inner derivation."""
    p = lie.p
    inner = Subspace.zero(J.dim * J.dim, p)
    for b in J.basis:
        inner = inner.extend(J.coords(lie.brackets(b[None, :], J.basis)).ravel()[None, :])
    for i in range(lie.dim):
        row = J.coords(lie.brackets(lie.basis_vector(i)[None, :], J.basis)).ravel()
        if not inner.contains_vectors(row[None, :]):
            return lie.basis_vector(i)
    raise NotReductive("no outer element found")


def standard_pmap_pairs(G: GradedLieAlgebra):
    """(x, x^[p]) pairs in g_0-local coordinates: root vectors and coroots of g_0^(1)."""
    S = analyze_g0(G.component(0), G)
    p = G.p
    idx0 = G.index(0)
    pairs = []
    for a, e in S.roots.items():
        x = matmul(e[None, :], S.ctx.basis, p)[0][idx0]
        pairs.append((x, np.zeros_like(x)))
    for a in S.positives:
        h = matmul(S.coroots[a][None, :], S.ctx.basis, p)[0][idx0]
        pairs.append((h, h))
    return pairs
