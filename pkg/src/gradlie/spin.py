"""Submodule spinning and Norton's irreducibility criterion.

A module is anything exposing ``dim``, ``p``, ``images(V)`` (rows of ``V``
pushed through every generator, stacked as rows), ``dual_images(W)`` (same for
the transposed action) and ``random_action(rng)`` (a dense matrix of a random
element of the linear span of the generators, acting on column vectors).
"""
from __future__ import annotations

import itertools

import numpy as np

from .fplinalg import Subspace, kernel, matmul

_CHUNK_ENTRIES = 4_000_000
_MAX_LINES = 400


class Undetermined(RuntimeError):
    """Norton's test found no usable element within its retry budget."""


class MatrixModule:
    """Module given by explicit generator matrices ``gens[k]`` (d x d)."""

    def __init__(self, gens, p: int, dim: int | None = None):
        gens = np.asarray(gens, dtype=np.int64) % p
        if dim is None:
            dim = gens.shape[1] if gens.ndim == 3 and gens.shape[0] else 0
        self.gens = gens.reshape(-1, dim, dim)
        self.p = p
        self.dim = dim

    def images(self, V):
        V = np.asarray(V, dtype=np.int64).reshape(-1, self.dim)
        if self.gens.shape[0] == 0 or V.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        out = matmul(V, self.gens.transpose(0, 2, 1), self.p)
        return out.reshape(-1, self.dim)

    def dual_images(self, W):
        W = np.asarray(W, dtype=np.int64).reshape(-1, self.dim)
        if self.gens.shape[0] == 0 or W.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        return matmul(W, self.gens, self.p).reshape(-1, self.dim)

    def random_action(self, rng):
        c = rng.integers(0, self.p, size=self.gens.shape[0])
        return np.tensordot(c, self.gens, axes=1) % self.p

    def restrict(self, U: Subspace) -> "MatrixModule":
        """Action on the submodule ``U`` in its echelon coordinates."""
        B = U.basis
        piv = list(U.pivots)
        imgs = matmul(B, self.gens.transpose(0, 2, 1), self.p)
        return MatrixModule(imgs[:, :, piv].transpose(0, 2, 1), self.p, U.dim)

    def quotient(self, U: Subspace):
        """Action on ``M/U`` in coordinates of the non-pivot positions of ``U``."""
        comp = U.complement_indices()
        k = len(comp)
        mats = []
        for G in self.gens:
            cols = G[:, comp].T
            red = U.residual(cols)
            mats.append(red[:, comp].T)
        return MatrixModule(np.array(mats, dtype=np.int64).reshape(-1, k, k), self.p, k), comp


def _chunks(V, dim, fanout):
    step = max(1, _CHUNK_ENTRIES // max(1, fanout * dim))
    for s in range(0, V.shape[0], step):
        yield V[s : s + step]


def spin(module, vectors, dual: bool = False, fanout: int | None = None) -> Subspace:
    """Smallest submodule containing ``vectors`` (under the transposed action if ``dual``)."""
    d = module.dim
    S = Subspace(np.asarray(vectors, dtype=np.int64).reshape(-1, d), module.p, d)
    frontier = S.basis
    act = module.dual_images if dual else module.images
    fan = fanout or getattr(module, "fanout", d)
    while frontier.shape[0] and S.dim < d:
        nxt = []
        for chunk in _chunks(frontier, d, fan):
            S, new = S.extend_new(act(chunk))
            if new.shape[0]:
                nxt.append(new)
            if S.dim == d:
                break
        frontier = np.vstack(nxt) if nxt else np.zeros((0, d), dtype=np.int64)
    return S


def _lines(N: Subspace):
    """One representative per line of ``N`` (first nonzero coordinate 1)."""
    k = N.dim
    p = N.p
    for lead in range(k):
        for tail in itertools.product(range(p), repeat=k - lead - 1):
            c = np.zeros(k, dtype=np.int64)
            c[lead] = 1
            c[lead + 1 :] = tail
            yield (c @ N.basis) % p


def _candidate(module, rng):
    p = module.p
    a = module.random_action(rng)
    b = module.random_action(rng)
    c = module.random_action(rng)
    return (matmul(a, b, p) + c + rng.integers(0, p) * a) % p


def norton(module, rng=None, tries: int = 40):
    """Norton's criterion.

    Returns ``(True, None)`` when irreducible over F_p, else ``(False, U)`` with
    ``U`` a proper nonzero submodule.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    d = module.dim
    p = module.p
    if d == 0:
        return False, None
    if d == 1:
        return True, None
    eye = np.eye(d, dtype=np.int64)
    best = None
    for _ in range(tries):
        theta = _candidate(module, rng)
        for lam in range(p):
            N = kernel((theta - lam * eye) % p, p)
            if N.dim == 0:
                continue
            lines = (p**N.dim - 1) // (p - 1)
            if lines > _MAX_LINES:
                continue
            if best is None or N.dim < best[1].dim:
                best = (theta, N, lam)
            if N.dim == 1:
                break
        if best is not None and best[1].dim == 1:
            break
    if best is None:
        raise Undetermined("no element with a small F_p-eigenspace found")
    theta, N, lam = best
    for v in _lines(N):
        U = spin(module, v)
        if U.dim < d:
            return False, U
    Nt = kernel(((theta - lam * eye) % p).T, p)
    W = spin(module, Nt.basis[0], dual=True)
    if W.dim < d:
        return False, kernel(W.basis, p)
    return True, None


def is_irreducible(module, rng=None) -> bool:
    return norton(module, rng)[0]


def minimal_submodule(module, rng=None) -> Subspace:
    """An irreducible submodule (as a subspace of the module)."""
    rng = np.random.default_rng(0) if rng is None else rng
    d = module.dim
    current = Subspace.full(d, module.p)
    sub = module
    while True:
        ok, U = norton(sub, rng)
        if ok:
            return current
        # U lives in coordinates of ``current``; pull back to the ambient module.
        lifted = matmul(U.basis, current.basis, module.p)
        current = Subspace(lifted, module.p, d)
        sub = module.restrict(current)


def composition_series(module, rng=None) -> list:
    """Chain ``0 = U_0 < U_1 < ... < U_k = M`` of submodules with irreducible factors."""
    rng = np.random.default_rng(0) if rng is None else rng
    d = module.dim
    p = module.p
    chain = [Subspace.zero(d, p)]
    if d == 0:
        return chain
    while chain[-1].dim < d:
        U = chain[-1]
        Q, comp = module.quotient(U)
        S = minimal_submodule(Q, rng)
        lift = np.zeros((S.dim, d), dtype=np.int64)
        lift[:, comp] = S.basis
        chain.append(U.extend(lift))
    return chain
