"""Root systems, Chevalley bases mod p and the classical algebras."""
from __future__ import annotations

import re

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .fplinalg import Subspace, check_prime, inverses, matmul
from .graded import GradedLieAlgebra
from .liecore import (
    LieAlgebraFp,
    PMap,
    _matpow,
    center,
    normalizer,
    product_space,
    quotient,
)

__all__ = [
    "RootDatum",
    "ChevalleyAlgebra",
    "NotNilpotent",
    "NotAutomorphism",
    "build_root_system",
    "cartan_matrix",
    "chevalley_algebra",
    "standard_pmap",
    "standard_grading",
    "mills_seligman",
    "MillsSeligmanReport",
    "exp_ad",
    "minuscule_weights",
]

_FIXED_RANK = {"E6": 6, "E7": 7, "E8": 8, "F4": 4, "G2": 2}


class NotNilpotent(ArithmeticError):
    pass


class NotAutomorphism(ArithmeticError):
    pass


def _normalize_type(typ, rank):
    typ = str(typ).upper()
    m = re.fullmatch(r"([ABCD])(\d+)", typ)
    if m:
        if rank is not None and int(rank) != int(m.group(2)):
            raise ValueError(f"rank mismatch for {typ}")
        typ, rank = m.group(1), int(m.group(2))
    if typ in ("E", "F", "G"):
        typ = f"{typ}{rank}"
    if typ in _FIXED_RANK:
        if rank is not None and int(rank) != _FIXED_RANK[typ]:
            raise ValueError(f"type {typ} has rank {_FIXED_RANK[typ]}")
        return typ, _FIXED_RANK[typ]
    if typ not in ("A", "B", "C", "D"):
        raise ValueError(f"unknown root system type {typ!r}")
    rank = int(rank)
    lo = {"A": 1, "B": 2, "C": 2, "D": 4}[typ]
    if rank < lo:
        raise ValueError(f"type {typ} needs rank >= {lo}")
    return typ, rank


def cartan_matrix(typ, rank=None) -> np.ndarray:
    """Cartan matrix ``A[i, j] = <α_i, α_j> = 2(α_i, α_j)/(α_j, α_j)`` (Bourbaki numbering)."""
    typ, m = _normalize_type(typ, rank)
    A = 2 * np.eye(m, dtype=np.int64)
    if typ in ("A", "B", "C", "D"):
        for i in range(m - 1):
            A[i, i + 1] = A[i + 1, i] = -1
        if typ == "B":
            A[m - 2, m - 1] = -2
        elif typ == "C":
            A[m - 1, m - 2] = -2
        elif typ == "D":
            A[m - 2, m - 1] = A[m - 1, m - 2] = 0
            A[m - 3, m - 1] = A[m - 1, m - 3] = -1
        return A
    if typ == "G2":
        return np.array([[2, -1], [-3, 2]], dtype=np.int64)
    if typ == "F4":
        A = np.array([[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]], dtype=np.int64)
        return A
    # E: chain 1-3-4-5-6(-7-8) with node 2 attached to 4.
    chain = [0, 2, 3] + list(range(4, m))
    for a, b in zip(chain, chain[1:]):
        A[a, b] = A[b, a] = -1
    A[1, 3] = A[3, 1] = -1
    return A


def _root_lengths(A) -> list:
    """Squared lengths (α_i, α_i) with the longest roots of length 2 per component."""
    m = A.shape[0]
    lengths = [None] * m
    seen = [False] * m
    for start in range(m):
        if seen[start]:
            continue
        comp = [start]
        lengths[start] = Fraction(1)
        seen[start] = True
        k = 0
        while k < len(comp):
            i = comp[k]
            k += 1
            for j in range(m):
                if A[i, j] != 0 and not seen[j]:
                    # (α_i, α_j) = A[i, j](α_j, α_j)/2 = A[j, i](α_i, α_i)/2
                    lengths[j] = Fraction(int(A[j, i])) * lengths[i] / int(A[i, j])
                    seen[j] = True
                    comp.append(j)
        top = max(lengths[i] for i in comp)
        for i in comp:
            lengths[i] = lengths[i] * 2 / top
    return lengths


@dataclass
class RootDatum:
    type: str
    rank: int
    cartan: np.ndarray
    lengths: list
    positives: list
    roots: list
    highest_root: tuple
    form: list = field(repr=False, default=None)

    def ip(self, a, b) -> Fraction:
        """Inner product of roots given by simple-root coefficients."""
        s = Fraction(0)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        s += x * y * self.form[i][j]
        return s

    def pairing(self, beta, alpha) -> int:
        """<β, α> = 2(β, α)/(α, α)."""
        v = 2 * self.ip(beta, alpha) / self.ip(alpha, alpha)
        assert v.denominator == 1
        return int(v)

    def coroot_coords(self, alpha) -> list:
        """h_α = Σ <ϖ_j, α> h_j."""
        la = self.ip(alpha, alpha)
        out = []
        for j, c in enumerate(alpha):
            v = Fraction(c) * self.lengths[j] / la
            assert v.denominator == 1
            out.append(int(v))
        return out

    def is_root(self, v) -> bool:
        return tuple(v) in self._rootset

    def __post_init__(self):
        self._rootset = set(self.roots)

    @property
    def label(self) -> str:
        return self.type if self.type in _FIXED_RANK else f"{self.type}{self.rank}"


@lru_cache(maxsize=None)
def build_root_system(typ, rank=None) -> RootDatum:
    typ, m = _normalize_type(typ, rank)
    A = cartan_matrix(typ, m)
    lengths = _root_lengths(A)
    form = [[Fraction(int(A[i, j])) * lengths[j] / 2 for j in range(m)] for i in range(m)]
    simple = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    pos = list(simple)
    posset = set(pos)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(m):
                # α_i-string through β: β - rα_i, ..., β + qα_i with r - q = <β, α_i>
                r = 0
                v = list(beta)
                while True:
                    v[i] -= 1
                    if tuple(v) in posset:
                        r += 1
                    else:
                        break
                b2 = 2 * sum(beta[k] * form[k][i] for k in range(m)) / lengths[i]
                q = r - int(b2)
                if q > 0:
                    w = list(beta)
                    w[i] += 1
                    w = tuple(w)
                    if w not in posset:
                        posset.add(w)
                        pos.append(w)
                        nxt.append(w)
        layer = nxt
    pos.sort(key=lambda a: (sum(a), tuple(-x for x in a)))
    roots = pos + [tuple(-x for x in a) for a in pos]
    highest = max(pos, key=sum)
    return RootDatum(typ, m, A, lengths, pos, roots, highest, form)


def _structure_constants(R: RootDatum) -> dict:
    """N_{α,β} for all pairs of roots with α+β a root (extraspecial-pair algorithm)."""
    pos = R.positives
    order = {a: k for k, a in enumerate(pos)}
    posset = set(pos)
    add = lambda a, b: tuple(x + y for x, y in zip(a, b))
    sub = lambda a, b: tuple(x - y for x, y in zip(a, b))
    neg = lambda a: tuple(-x for x in a)
    N = {}

    def ln(a):
        return R.ip(a, a)

    def string_r(alpha, beta):
        r = 0
        v = beta
        while True:
            v = sub(v, alpha)
            if R.is_root(v):
                r += 1
            else:
                return r

    def get(a, b):
        """N_{a,b} for arbitrary roots with a+b a root."""
        a_pos = a in posset
        b_pos = b in posset
        if a_pos and b_pos:
            if (a, b) in N:
                return N[(a, b)]
            return -N[(b, a)]
        if not a_pos and not b_pos:
            return -get(neg(a), neg(b))
        c = neg(add(a, b))
        # a + b + c = 0; N_{a,b}/(c,c) = N_{b,c}/(a,a) = N_{c,a}/(b,b)
        if a_pos:
            if c in posset:
                v = ln(c) / ln(b) * get(c, a)
            else:
                v = ln(c) / ln(a) * get(b, c)
        else:
            if c in posset:
                v = ln(c) / ln(a) * get(b, c)
            else:
                v = ln(c) / ln(b) * get(c, a)
        assert v.denominator == 1
        return int(v)

    for xi in pos:
        if sum(xi) == 1:
            continue
        pairs = []
        for a in pos:
            if order[a] >= order[xi]:
                break
            b = sub(xi, a)
            if b in posset and order[a] < order[b]:
                pairs.append((a, b))
        alpha, beta = pairs[0]
        N[(alpha, beta)] = string_r(alpha, beta) + 1
        for zeta, eta in pairs[1:]:
            t1 = Fraction(0)
            bz = sub(beta, zeta)
            if R.is_root(bz):
                t1 = Fraction(get(beta, neg(zeta)) * get(alpha, neg(eta))) / ln(bz)
            t2 = Fraction(0)
            az = sub(alpha, zeta)
            if R.is_root(az):
                t2 = Fraction(get(neg(zeta), alpha) * get(beta, neg(eta))) / ln(az)
            v = ln(xi) / N[(alpha, beta)] * (t1 + t2)
            assert v.denominator == 1
            N[(zeta, eta)] = int(v)
    full = {}
    for a in R.roots:
        for b in R.roots:
            s = add(a, b)
            if R.is_root(s):
                full[(a, b)] = get(a, b)
    return full


@dataclass
class ChevalleyAlgebra:
    datum: RootDatum
    p: int
    alg: LieAlgebraFp
    signs: dict
    variant: str
    root_index: dict
    h_index: list
    d_index: int | None = None
    lift: np.ndarray | None = None

    @property
    def dim(self):
        return self.alg.dim

    def root_vector(self, alpha) -> np.ndarray:
        return self.alg.basis_vector(self.root_index[tuple(alpha)])


def _root_label(a) -> str:
    sgn = "e" if sum(a) > 0 else "f"
    return sgn + "".join(str(abs(x)) for x in a)


@lru_cache(maxsize=None)
def _integral_table(typ, rank):
    R = build_root_system(typ, rank)
    N = _structure_constants(R)
    return R, N


def chevalley_algebra(datum_or_type, p, variant: str = "simple", rank=None) -> ChevalleyAlgebra:
    """Chevalley basis reduced mod p, optionally as sl/gl/pgl/psl."""
    p = check_prime(p)
    if isinstance(datum_or_type, RootDatum):
        typ, m = datum_or_type.type, datum_or_type.rank
    else:
        typ, m = _normalize_type(datum_or_type, rank)
    R, N = _integral_table(typ, m)
    variant = variant.lower()
    if variant not in ("simple", "sl", "gl", "pgl", "psl"):
        raise ValueError(f"unknown variant {variant!r}")
    if variant != "simple" and typ != "A":
        raise ValueError("sl/gl/pgl/psl variants exist only for type A")
    n_mat = m + 1
    if variant in ("psl", "pgl") and n_mat % p:
        raise ValueError(f"{variant}_{n_mat} needs p | {n_mat}")
    neg_roots = [tuple(-x for x in a) for a in reversed(R.positives)]
    basis_roots = neg_roots + R.positives
    labels = [_root_label(a) for a in neg_roots]
    labels += [f"h{i + 1}" for i in range(m)]
    labels += [_root_label(a) for a in R.positives]
    idx = {}
    for k, a in enumerate(neg_roots):
        idx[a] = k
    h_index = list(range(len(neg_roots), len(neg_roots) + m))
    for k, a in enumerate(R.positives):
        idx[a] = len(neg_roots) + m + k
    d_index = None
    if variant in ("gl", "pgl"):
        d_index = len(labels)
        labels.append("d")
    table = {}

    def put(i, j, k, c):
        if c % p:
            table.setdefault((i, j), {})
            table[(i, j)][k] = (table[(i, j)].get(k, 0) + c) % p

    for a in basis_roots:
        ia = idx[a]
        for i in range(m):
            put(h_index[i], ia, ia, R.pairing(a, tuple(int(k == i) for k in range(m))))
        if d_index is not None:
            put(d_index, ia, ia, a[0])
    for a in R.positives:
        na = tuple(-x for x in a)
        for j, c in enumerate(R.coroot_coords(a)):
            put(idx[a], idx[na], h_index[j], c)
    for (a, b), c in N.items():
        if idx[a] < idx[b]:
            put(idx[a], idx[b], idx[tuple(x + y for x, y in zip(a, b))], c)
    alg = LieAlgebraFp.from_table(p, labels, table)
    lift = None
    if variant in ("psl", "pgl"):
        I = np.zeros(alg.dim, dtype=np.int64)
        if variant == "psl":
            for k in range(m):
                I[h_index[k]] = k + 1
        else:
            # identity = (m+1) d - Σ_j (m+1-j) h_j, and p | m+1
            for j in range(m):
                I[h_index[j]] = -(m - j)
            I[d_index] = m + 1
        I %= p
        Q, comp = quotient(alg, Subspace(I[None, :], p))
        pos = {c: k for k, c in enumerate(comp)}
        idx = {a: pos[i] for a, i in idx.items() if i in pos}
        h_index = [pos.get(i) for i in h_index]
        d_index = pos.get(d_index) if d_index is not None else None
        lift = np.zeros((len(comp), alg.dim), dtype=np.int64)
        lift[np.arange(len(comp)), comp] = 1
        alg = Q
    return ChevalleyAlgebra(R, p, alg, dict(N), variant, idx, h_index, d_index, lift)


def standard_pmap(C: ChevalleyAlgebra, verify: bool = True) -> PMap:
    """e_α^{[p]} = 0, h_i^{[p]} = h_i (and d^{[p]} = d for gl/pgl)."""
    n = C.alg.dim
    imgs = np.zeros((n, n), dtype=np.int64)
    for i in C.h_index:
        if i is not None:
            imgs[i, i] = 1
    if C.d_index is not None:
        imgs[C.d_index, C.d_index] = 1
    pm = PMap(imgs)
    if verify:
        bad = pm.check(C.alg)
        if bad:
            raise ArithmeticError(f"standard [p]-map fails on basis elements {bad}")
    return pm


def standard_grading(C: ChevalleyAlgebra, k: int) -> GradedLieAlgebra:
    """deg e_α = coefficient of α_k in α; Cartan part in degree 0 (k is 1-based)."""
    m = C.datum.rank
    if not 1 <= k <= m:
        raise ValueError(f"node {k} out of range 1..{m}")
    deg = np.zeros(C.alg.dim, dtype=np.int64)
    for a, i in C.root_index.items():
        deg[i] = a[k - 1]
    name = f"{C.datum.label} node {k}"
    G = GradedLieAlgebra(C.alg, deg, name=name)
    G.meta.update(family="classical", type=C.datum.type, rank=m, node=k, variant=C.variant)
    return G


@dataclass
class MillsSeligmanReport:
    failures: list = field(default_factory=list)
    roots: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _joint_weights(L: LieAlgebraFp, H: Subspace):
    """Joint eigenspaces of ad H on L: dict weight-tuple -> Subspace, plus residue flag."""
    from .modrep import joint_eigenspaces

    mats = np.array([L.ad(h) for h in H.basis])
    return joint_eigenspaces(mats, L.p)


def mills_seligman(L: LieAlgebraFp, H) -> MillsSeligmanReport:
    """Check the Mills–Seligman axioms with respect to ``H``."""
    p = L.p
    H = H if isinstance(H, Subspace) else Subspace(np.atleast_2d(H), p, L.dim)
    rep = MillsSeligmanReport()
    if product_space(H, H, L).dim:
        raise ValueError("H is not abelian")
    if normalizer(H, L) != H:
        raise ValueError("H is not self-normalizing")
    full = Subspace.full(L.dim, p)
    if product_space(full, full, L).dim != L.dim:
        rep.failures.append("(i) [L,L] != L")
    if center(L).dim:
        rep.failures.append("(ii) center is nonzero")
    spaces, complete = _joint_weights(L, H)
    if not complete:
        rep.failures.append("(iii)(a) L is not the sum of H-weight spaces")
    zero = tuple([0] * H.dim)
    roots = [w for w in spaces if w != zero]
    rep.roots = roots
    rootset = set(roots)
    for a in roots:
        na = tuple((-x) % p for x in a)
        if na not in spaces:
            rep.failures.append(f"(iii)(b) -{a} is not a weight")
            continue
        d = product_space(spaces[a], spaces[na], L).dim
        if d != 1:
            rep.failures.append(f"(iii)(b) dim [L^{a}, L^-{a}] = {d}")
    for a in roots:
        for b in roots:
            members = [tuple((x + k * y) % p for x, y in zip(b, a)) for k in range(p)]
            # A string inside the line F_p·α runs through 0; only its nonzero members count.
            need = [w for w in members if w != zero]
            if all(w in rootset for w in need):
                rep.failures.append(f"(iii)(c) full string of roots through {b} in direction {a}")
                break
        else:
            continue
        break
    return rep


def exp_ad(x, L: LieAlgebraFp, verify: bool = True) -> np.ndarray:
    """Σ_{i<p} (ad x)^i / i! as a matrix acting on column vectors."""
    p = L.p
    A = L.ad(x)
    n = L.dim
    if np.any(_matpow(A, p, p)):
        raise NotNilpotent("(ad x)^p != 0")
    inv = inverses(p)
    E = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for i in range(1, p):
        term = matmul(A, term, p)
        if not np.any(term):
            break
        E = (E + inv[factorial(i) % p] * term) % p
    if verify and not is_automorphism(E, L):
        raise NotAutomorphism("exp(ad x) does not preserve the bracket")
    return E


def is_automorphism(E, L: LieAlgebraFp) -> bool:
    """φ[b_i, b_j] = [φ b_i, φ b_j] for all basis pairs."""
    p, n = L.p, L.dim
    cols = E.T % p  # φ(b_i) as rows
    rows = L.structure_rows().toarray().astype(np.int64) % p
    pair = np.unique(L.I * n + L.J)
    lhs_all = np.zeros((n, n, n), dtype=np.int64)
    lhs_all[pair // n, pair % n] = matmul(rows, E.T, p)
    lhs_all = (lhs_all - lhs_all.transpose(1, 0, 2)) % p
    step = max(1, 4_000_000 // max(1, n * n))
    for s in range(0, n, step):
        T = L.bracket_with_basis(cols[s : s + step])  # [φ b_i, b_k]
        rhs = matmul(cols, T, p)  # [φ b_i, φ b_j] at [i, j]
        if not np.array_equal(rhs, lhs_all[s : s + step]):
            return False
    return True


_MINUSCULE = {
    "A": lambda m: list(range(1, m + 1)),
    "B": lambda m: [m],
    "C": lambda m: [1],
    "D": lambda m: [1, m - 1, m],
    "E6": lambda m: [1, 6],
    "E7": lambda m: [7],
    "E8": lambda m: [],
    "F4": lambda m: [],
    "G2": lambda m: [],
}


def minuscule_weights(typ, rank=None) -> list:
    typ, m = _normalize_type(typ, rank)
    return [f"w{i}" for i in _MINUSCULE[typ](m)]
