"""Lie algebras over F_p given by sparse structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .fplinalg import FpError, Subspace, check_prime, inverse, matmul, rref
from . import spin as _spin

__all__ = [
    "LieAlgebraFp",
    "StructureReport",
    "PMap",
    "NotInner",
    "Ambiguous",
    "bracket",
    "check_structure",
    "product_space",
    "ideal_generated",
    "derived_series",
    "center",
    "centralizer",
    "normalizer",
    "is_simple",
    "adjoint_p_power",
    "subalgebra",
    "quotient",
    "AdjointModule",
]

_CHUNK = 6_000_000


class NotInner(ArithmeticError):
    """(ad x)^p is not an inner derivation."""


class Ambiguous(ArithmeticError):
    """The algebra has a center, so ad y does not determine y."""


class LieAlgebraFp:
    """Structure-constant Lie algebra over F_p.

    The table is stored as coordinate arrays ``(I, J, K, C)`` with ``I < J``,
    meaning ``[b_I, b_J] = sum C * b_K``.  The opposite brackets are implied.
    """

    def __init__(self, p, labels, I=(), J=(), K=(), C=(), _normalized=False):
        self.p = check_prime(p)
        self.labels = [str(s) for s in labels]
        n = self.dim = len(self.labels)
        I = np.asarray(I, dtype=np.int64).ravel()
        J = np.asarray(J, dtype=np.int64).ravel()
        K = np.asarray(K, dtype=np.int64).ravel()
        C = np.asarray(C, dtype=np.int64).ravel()
        if not (len(I) == len(J) == len(K) == len(C)):
            raise FpError("table arrays differ in length")
        for arr in (I, J, K):
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise FpError("structure-constant index out of range")
        self.antisymmetry_violations = []
        if not _normalized:
            I, J, K, C = self._normalize(I, J, K, C)
        self.I, self.J, self.K, self.C = I, J, K, C
        for arr in (self.I, self.J, self.K, self.C):
            arr.flags.writeable = False
        self._cache = {}

    def _normalize(self, I, J, K, C):
        n, p = self.dim, self.p
        C = C % p
        diag = I == J
        if np.any(diag & (C != 0)):
            bad = sorted({(int(i), int(i)) for i in I[diag & (C != 0)]})
            self.antisymmetry_violations.extend(bad)
        keep = ~diag
        I, J, K, C = I[keep], J[keep], K[keep], C[keep]
        flip = I > J
        lo = np.where(flip, J, I)
        hi = np.where(flip, I, J)
        sgn = np.where(flip, -C, C) % p
        # Pairs given in both orders must agree after the sign flip.
        pair = lo * n + hi
        both = np.intersect1d(pair[flip], pair[~flip])
        for key in both:
            m = pair == key
            fwd = np.zeros(n, dtype=np.int64)
            bwd = np.zeros(n, dtype=np.int64)
            np.add.at(fwd, K[m & ~flip], C[m & ~flip])
            np.add.at(bwd, K[m & flip], C[m & flip])
            if np.any((fwd + bwd) % p):
                self.antisymmetry_violations.append((int(key // n), int(key % n)))
        if both.size:
            drop = np.isin(pair, both) & flip
            lo, hi, K, sgn = lo[~drop], hi[~drop], K[~drop], sgn[~drop]
        key = (lo * n + hi) * n + K
        uniq, inv = np.unique(key, return_inverse=True)
        acc = np.zeros(uniq.size, dtype=np.int64)
        np.add.at(acc, inv, sgn)
        acc %= p
        nz = acc != 0
        uniq, acc = uniq[nz], acc[nz]
        K2 = uniq % n
        pr = uniq // n
        return pr // n, pr % n, K2, acc

    @classmethod
    def from_table(cls, p, labels, table):
        """Build from a mapping ``{(i, j): {k: c}}`` or ``{(i, j): [(k, c), ...]}``."""
        I, J, K, C = [], [], [], []
        for (i, j), terms in table.items():
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                I.append(i)
                J.append(j)
                K.append(k)
                C.append(c)
        return cls(p, labels, I, J, K, C)

    # -- basic accessors -------------------------------------------------
    def table(self) -> dict:
        out = {}
        for i, j, k, c in zip(self.I.tolist(), self.J.tolist(), self.K.tolist(), self.C.tolist()):
            out.setdefault((i, j), {})[k] = c
        return out

    def __repr__(self):
        return f"LieAlgebraFp(dim={self.dim}, p={self.p}, nnz={self.C.size})"

    def same_table(self, other: "LieAlgebraFp") -> bool:
        return (
            self.p == other.p
            and self.labels == other.labels
            and np.array_equal(self.I, other.I)
            and np.array_equal(self.J, other.J)
            and np.array_equal(self.K, other.K)
            and np.array_equal(self.C, other.C)
        )

    def full_coo(self):
        """Both orientations: ``[b_i, b_j] = sum c b_k`` for all ordered pairs."""
        if "full" not in self._cache:
            p = self.p
            I = np.concatenate([self.I, self.J])
            J = np.concatenate([self.J, self.I])
            K = np.concatenate([self.K, self.K])
            C = np.concatenate([self.C, (-self.C) % p])
            self._cache["full"] = (I, J, K, C)
        return self._cache["full"]

    @property
    def R(self):
        """Sparse ``n x n^2`` matrix with ``R[i, j*n + k] = c_ij^k``."""
        if "R" not in self._cache:
            n = self.dim
            I, J, K, C = self.full_coo()
            self._cache["R"] = sp.csr_matrix(
                (C.astype(np.float64), (I, J * n + K)), shape=(n, n * n)
            )
        return self._cache["R"]

    @property
    def Rt(self):
        """Sparse ``n^2 x n`` matrix with ``Rt[i*n + j, k] = c_ij^k``."""
        if "Rt" not in self._cache:
            n = self.dim
            I, J, K, C = self.full_coo()
            self._cache["Rt"] = sp.csr_matrix(
                (C.astype(np.float64), (I * n + J, K)), shape=(n * n, n)
            )
        return self._cache["Rt"]

    def _vec(self, x):
        x = np.asarray(x, dtype=np.int64)
        if x.shape[-1] != self.dim:
            raise FpError(f"vector length {x.shape[-1]} does not match dim {self.dim}")
        return x % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return e

    def bracket(self, x, y) -> np.ndarray:
        x = self._vec(x)
        y = self._vec(y)
        I, J, K, C = self.full_coo()
        w = (x[I] * y[J] % self.p) * C
        out = np.zeros(self.dim, dtype=np.int64)
        np.add.at(out, K, w)
        return out % self.p

    def bracket_with_basis(self, V) -> np.ndarray:
        """Array ``B[m, j] = [v_m, b_j]`` of shape ``(rows, n, n)``."""
        V = self._vec(V).reshape(-1, self.dim)
        n = self.dim
        if V.shape[0] == 0 or n == 0:
            return np.zeros((V.shape[0], n, n), dtype=np.int64)
        out = self.R.T.dot(V.T.astype(np.float64)).T
        return (np.mod(out, self.p).astype(np.int64)).reshape(-1, n, n)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad x acting on column vectors."""
        return self.bracket_with_basis(x)[0].T.copy()

    def ad_basis(self, i: int) -> np.ndarray:
        return self.ad(self.basis_vector(i))

    def ad_all(self) -> np.ndarray:
        """Stack of ``ad b_i`` matrices, shape ``(n, n, n)``."""
        n = self.dim
        out = np.zeros((n, n, n), dtype=np.int64)
        I, J, K, C = self.full_coo()
        out[I, K, J] = C
        return out

    def brackets(self, A, B) -> np.ndarray:
        """Rows ``[a, b]`` for all rows a of ``A`` and b of ``B``."""
        A = self._vec(A).reshape(-1, self.dim)
        B = self._vec(B).reshape(-1, self.dim)
        out = []
        for chunk in _row_chunks(A, self.dim * self.dim):
            T = self.bracket_with_basis(chunk)
            out.append(matmul(B, T, self.p).reshape(-1, self.dim))
        if not out:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.vstack(out)

    def structure_rows(self):
        """Rows ``[b_i, b_j]`` for all stored pairs (sparse, ``pairs x n``)."""
        n = self.dim
        pair = self.I * n + self.J
        uniq, row = np.unique(pair, return_inverse=True)
        return sp.csr_matrix((self.C.astype(np.float64), (row, self.K)), shape=(uniq.size, n))


def _row_chunks(A, per_row):
    step = max(1, _CHUNK // max(1, per_row))
    for s in range(0, A.shape[0], step):
        yield A[s : s + step]


def _span_sparse_rows(M, n, p, limit=None) -> Subspace:
    """Row space of a sparse matrix, accumulated chunkwise."""
    S = Subspace.zero(n, p)
    step = max(1, _CHUNK // max(1, n))
    M = M.tocsr()
    for s in range(0, M.shape[0], step):
        block = np.mod(M[s : s + step].toarray(), p).astype(np.int64)
        S = S.extend(block)
        if S.dim == (limit if limit is not None else n):
            break
    return S


def bracket(x, y, L: LieAlgebraFp) -> np.ndarray:
    return L.bracket(x, y)


@dataclass
class StructureReport:
    jacobi: list = field(default_factory=list)
    antisymmetry: list = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.jacobi and not self.antisymmetry

    def __bool__(self):
        return not self.clean


def check_structure(L: LieAlgebraFp, max_triples: int | None = None) -> StructureReport:
    """Jacobi and antisymmetry violations.

    Jacobi is checked by verifying that every ``ad b_i`` is a derivation of the
    bracket; a nonzero Jacobiator on ``(b_i, b_j, b_k)`` is reported as the
    sorted triple.
    """
    n, p = L.dim, L.p
    report = StructureReport(antisymmetry=list(L.antisymmetry_violations))
    if n < 3:
        return report
    I, J, K, C = L.full_coo()
    Ci = C.astype(np.int64)
    mu = sp.csr_matrix((Ci, (K, I * n + J)), shape=(n, n * n))
    eye = sp.identity(n, dtype=np.int64, format="csr")
    order = np.argsort(I, kind="stable")
    starts = np.searchsorted(I[order], np.arange(n + 1))
    bad = set()
    for i in range(n):
        sel = order[starts[i] : starts[i + 1]]
        if sel.size == 0:
            continue
        A = sp.csr_matrix((Ci[sel], (K[sel], J[sel])), shape=(n, n))
        D = A @ mu - mu @ (sp.kron(A, eye, format="csr") + sp.kron(eye, A, format="csr"))
        D = D.tocoo()
        hit = (D.data % p) != 0
        if not np.any(hit):
            continue
        cols = np.unique(D.col[hit])
        for c in cols.tolist():
            j, k = divmod(c, n)
            bad.add(tuple(sorted((i, j, k))))
        if max_triples is not None and len(bad) >= max_triples:
            break
    report.jacobi = sorted(bad)
    return report


def _as_subspace(S, L) -> Subspace:
    if isinstance(S, Subspace):
        return S
    return Subspace(np.asarray(S, dtype=np.int64).reshape(-1, L.dim), L.p, L.dim)


def product_space(A, B, L: LieAlgebraFp) -> Subspace:
    """``span{[a, b]}`` over bases of ``A`` and ``B``."""
    A = _as_subspace(A, L)
    B = _as_subspace(B, L)
    n, p = L.dim, L.p
    if A.dim == 0 or B.dim == 0:
        return Subspace.zero(n, p)
    if A.dim == n and B.dim == n:
        return _span_sparse_rows(L.structure_rows(), n, p)
    if A.dim == n:
        A, B = B, A
    S = Subspace.zero(n, p)
    full = B.dim == n
    for chunk in _row_chunks(A.basis, n * n):
        T = L.bracket_with_basis(chunk)
        rows = T.reshape(-1, n) if full else matmul(B.basis, T, p).reshape(-1, n)
        S = S.extend(rows)
    return S


class AdjointModule:
    """The adjoint representation as a module for :mod:`gradlie.spin`."""

    def __init__(self, L: LieAlgebraFp):
        self.L = L
        self.p = L.p
        self.dim = L.dim
        self.fanout = L.dim

    def images(self, V):
        return self.L.bracket_with_basis(V).reshape(-1, self.dim)

    def dual_images(self, W):
        n = self.dim
        W = np.asarray(W, dtype=np.int64).reshape(-1, n)
        out = self.L.Rt.dot(W.T.astype(np.float64))
        out = np.mod(out, self.p).astype(np.int64).reshape(n, n, -1)
        return out.transpose(2, 0, 1).reshape(-1, n)

    def random_action(self, rng):
        x = rng.integers(0, self.p, size=self.dim)
        return self.L.ad(x)


def ideal_generated(S, L: LieAlgebraFp) -> Subspace:
    """Smallest ideal containing ``S``."""
    S = _as_subspace(S, L)
    if S.dim == 0:
        return S
    return _spin.spin(AdjointModule(L), S.basis)


def derived_series(L: LieAlgebraFp, max_len: int | None = None) -> list:
    """``[L, L^(1), L^(2), ...]`` until it stabilizes (last entry repeated once)."""
    n, p = L.dim, L.p
    series = [Subspace.full(n, p)]
    while True:
        cur = series[-1]
        nxt = product_space(cur, cur, L)
        series.append(nxt)
        if nxt == cur or nxt.dim == 0:
            break
        if max_len is not None and len(series) > max_len:
            break
    return series


def centralizer(S, L: LieAlgebraFp) -> Subspace:
    """``{x : [x, s] = 0 for all s in S}``."""
    S = _as_subspace(S, L)
    n, p = L.dim, L.p
    if S.dim == 0:
        return Subspace.full(n, p)
    # [s, x] = ad(s) x; stack the ad(s) rows.
    rows = Subspace.zero(n, p)
    for chunk in _row_chunks(S.basis, n * n):
        T = L.bracket_with_basis(chunk)  # T[m, j, k] = [s_m, b_j]_k
        mats = T.transpose(0, 2, 1).reshape(-1, n)
        rows = rows.extend(mats)
        if rows.dim == n:
            break
    return _orth(rows)


def _orth(rows: Subspace) -> Subspace:
    from .fplinalg import _kernel_from_rref

    K = _kernel_from_rref(rows.basis, list(rows.pivots), rows.ambient, rows.p)
    return Subspace(K, rows.p, rows.ambient)


def center(L: LieAlgebraFp) -> Subspace:
    """Kernel of x -> ad x."""
    n, p = L.dim, L.p
    if n == 0:
        return Subspace.zero(0, p)
    # Column space of R: x R = 0 <=> x orthogonal to every column of R.
    cols = L.R.T.tocsr()
    span = _span_sparse_rows(cols, n, p)
    return _orth(span)


def normalizer(S, L: LieAlgebraFp) -> Subspace:
    """``{x : [x, S] ⊆ S}``."""
    S = _as_subspace(S, L)
    n, p = L.dim, L.p
    if S.dim == 0 or S.dim == n:
        return Subspace.full(n, p)
    comp = S.complement_indices()
    # x -> [s, x] mod S for each basis s of S, as a linear map in x.
    rows = Subspace.zero(n, p)
    for chunk in _row_chunks(S.basis, n * n):
        T = L.bracket_with_basis(chunk)  # [s, b_j]
        red = S.residual(T.reshape(-1, n)).reshape(T.shape)
        rows = rows.extend(red[:, :, comp].transpose(0, 2, 1).reshape(-1, n))
    return _orth(rows)


def is_simple(L: LieAlgebraFp, rng=None) -> bool:
    """Simple over F_p: nonabelian with irreducible adjoint module.

    Irreducibility of the adjoint module is decided with Norton's criterion,
    which certifies the absence of proper ideals.  Tiny algebras are handled by
    brute force over all lines as a cross-check.
    """
    n = L.dim
    if n == 0 or L.C.size == 0:
        return False
    rng = np.random.default_rng(0) if rng is None else rng
    mod = AdjointModule(L)
    try:
        ok, _ = _spin.norton(mod, rng)
    except _spin.Undetermined:
        ok = _simple_by_lines(L)
    return ok


def _simple_by_lines(L: LieAlgebraFp) -> bool:
    if L.dim > 6:
        # Fall back to basis-vector closures plus the derived algebra check.
        if product_space(Subspace.full(L.dim, L.p), Subspace.full(L.dim, L.p), L).dim < L.dim:
            return False
        return all(ideal_generated(L.basis_vector(i), L).dim == L.dim for i in range(L.dim))
    mod = AdjointModule(L)
    N = Subspace.full(L.dim, L.p)
    return all(_spin.spin(mod, v).dim == L.dim for v in _spin._lines(N))


def _matpow(A, e, p):
    R = np.eye(A.shape[0], dtype=np.int64)
    B = A % p
    while e:
        if e & 1:
            R = matmul(R, B, p)
        e >>= 1
        if e:
            B = matmul(B, B, p)
    return R


def _ad_solver(L: LieAlgebraFp):
    """Columns of R forming an invertible ``n x n`` block, with its inverse."""
    if "adsolve" in L._cache:
        return L._cache["adsolve"]
    n, p = L.dim, L.p
    R = L.R.tocsc()
    chosen = []
    span = Subspace.zero(n, p)
    step = max(4 * n, 256)
    nzcols = np.flatnonzero(np.diff(R.indptr))
    for s in range(0, nzcols.size, step):
        idx = nzcols[s : s + step]
        block = np.mod(R[:, idx].toarray(), p).astype(np.int64).T  # columns as rows
        res = span.residual(block)
        _, piv = rref(res.T, p, reduced_input=True)
        if piv:
            chosen.extend(idx[piv].tolist())
            span = span.extend(block[piv])
        if span.dim == n:
            break
    if span.dim < n:
        L._cache["adsolve"] = None
        return None
    M = np.mod(R[:, chosen].toarray(), p).astype(np.int64)
    L._cache["adsolve"] = (np.array(chosen), inverse(M, p))
    return L._cache["adsolve"]


def solve_ad(target, L: LieAlgebraFp) -> np.ndarray:
    """The unique y with ad y = target (target acts on column vectors)."""
    solver = _ad_solver(L)
    if solver is None:
        raise Ambiguous("algebra has a nonzero center")
    cols, Minv = solver
    p = L.p
    vec = np.asarray(target, dtype=np.int64).T.reshape(-1) % p  # [j*n + k] = target[k, j]
    y = matmul(vec[cols][None, :], Minv, p)[0]
    if not np.array_equal(L.ad(y), np.asarray(target) % p):
        raise NotInner("derivation is not inner")
    return y


def adjoint_p_power(x, L: LieAlgebraFp) -> np.ndarray:
    """The unique y with ad y = (ad x)^p (centerless algebras only)."""
    A = _matpow(L.ad(x), L.p, L.p)
    return solve_ad(A, L)


@dataclass
class PMap:
    """A [p]-map recorded on basis images: ``images[i] = b_i^{[p]}``."""

    images: np.ndarray
    present: bool = True

    def of_basis(self, i: int) -> np.ndarray:
        return self.images[i]

    def check(self, L: LieAlgebraFp) -> list:
        """Basis indices where ad(b^{[p]}) differs from (ad b)^p."""
        bad = []
        for i in range(L.dim):
            lhs = L.ad(self.images[i])
            rhs = _matpow(L.ad_basis(i), L.p, L.p)
            if not np.array_equal(lhs, rhs):
                bad.append(i)
        return bad

    @classmethod
    def from_adjoint(cls, L: LieAlgebraFp) -> "PMap":
        imgs = np.array([adjoint_p_power(L.basis_vector(i), L) for i in range(L.dim)])
        return cls(imgs.reshape(L.dim, L.dim))


def subalgebra(S, L: LieAlgebraFp, labels=None, check: bool = True) -> LieAlgebraFp:
    """Structure constants of ``S`` in its echelon basis."""
    S = _as_subspace(S, L)
    k, n, p = S.dim, L.dim, L.p
    piv = list(S.pivots)
    I, J, K, C = [], [], [], []
    for start in range(0, k, max(1, _CHUNK // max(1, n * n))):
        chunk = S.basis[start : start + max(1, _CHUNK // max(1, n * n))]
        T = L.bracket_with_basis(chunk)
        prods = matmul(S.basis, T, p)  # [a, s_b] for a in chunk
        for a in range(chunk.shape[0]):
            gi = start + a
            rows = prods[a]
            if check and not S.contains_vectors(rows):
                raise FpError("subspace is not closed under the bracket")
            coords = rows[:, piv]
            b_idx, c_idx = np.nonzero(coords)
            m = b_idx > gi
            I.append(np.full(m.sum(), gi))
            J.append(b_idx[m])
            K.append(c_idx[m])
            C.append(coords[b_idx[m], c_idx[m]])
    labels = labels or [f"s{i}" for i in range(k)]
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64))
    return LieAlgebraFp(p, labels, cat(I), cat(J), cat(K), cat(C))


def quotient(L: LieAlgebraFp, Iid, labels=None):
    """``L / I`` on the transversal of unit vectors at non-pivot positions.

    Returns ``(Q, comp)`` where ``comp`` lists the surviving coordinates.
    """
    Iid = _as_subspace(Iid, L)
    n, p = L.dim, L.p
    comp = Iid.complement_indices()
    pos = -np.ones(n, dtype=np.int64)
    pos[comp] = np.arange(len(comp))
    II, JJ, KK, CC = [], [], [], []
    rows = L.structure_rows().tocsr()
    pair = np.unique(L.I * n + L.J)
    pi, pj = pair // n, pair % n
    keep = (pos[pi] >= 0) & (pos[pj] >= 0)
    idx = np.flatnonzero(keep)
    step = max(1, _CHUNK // max(1, n))
    for s in range(0, idx.size, step):
        sel = idx[s : s + step]
        block = np.mod(rows[sel].toarray(), p).astype(np.int64)
        red = Iid.residual(block)[:, comp]
        r_idx, c_idx = np.nonzero(red)
        II.append(pos[pi[sel][r_idx]])
        JJ.append(pos[pj[sel][r_idx]])
        KK.append(c_idx)
        CC.append(red[r_idx, c_idx])
    labels = labels or [L.labels[c] for c in comp]
    cat = (lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64))
    return LieAlgebraFp(p, labels, cat(II), cat(JJ), cat(KK), cat(CC)), comp
