"""Exact linear algebra over prime fields F_p.

Matrices are numpy ``int64`` arrays whose entries are kept reduced into
``{0, ..., p-1}``.  Products go through float64 BLAS, which is exact as long as
``inner_dim * (p-1)**2 < 2**53``; for the primes used here (p <= 13) that holds
for any matrix that fits in memory.

Every subspace is stored by its reduced row-echelon basis, so two subspaces are
equal exactly when their bases are bit-identical.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "FpError",
    "FpScalar",
    "check_prime",
    "inverses",
    "as_fp",
    "matmul",
    "rref",
    "echelonize",
    "rank",
    "kernel",
    "solve",
    "inverse",
    "Subspace",
]

_EXACT = float(2**52)


class FpError(ValueError):
    """Raised on malformed F_p input (bad modulus, shape mismatch, singular matrix)."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p) -> int:
    """Validate the modulus: a prime p >= 5."""
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise FpError(f"modulus must be an integer, got {p!r}")
    p = int(p)
    if p < 5 or not _is_prime(p):
        raise FpError(f"modulus must be a prime >= 5, got {p}")
    return p


@lru_cache(maxsize=None)
def inverses(p: int) -> np.ndarray:
    """Table ``inv[a] = a^{-1} mod p`` (``inv[0] = 0``)."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


@dataclass(frozen=True)
class FpScalar:
    """A residue class modulo a prime p >= 5."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", check_prime(self.p))
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FpError("moduli differ")
            return other.value
        return int(other) % self.p

    def __add__(self, other):
        return FpScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpScalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpScalar(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FpScalar(self._coerce(other), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpScalar(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def as_fp(M, p: int) -> np.ndarray:
    """Copy of ``M`` as a reduced int64 array."""
    return np.mod(np.asarray(M, dtype=np.int64), p)


def matmul(A, B, p: int) -> np.ndarray:
    """``A @ B mod p`` for reduced int64 operands."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[-1]
    if inner * (p - 1) ** 2 < _EXACT:
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.mod(out, p).astype(np.int64)
    return np.mod(np.matmul(A.astype(np.int64) % p, B.astype(np.int64) % p), p)


def rref(M, p: int, reduced_input: bool = False):
    """Reduced row-echelon form of ``M``.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise FpError("rref expects a 2-d array")
    if not reduced_input:
        np.mod(A, p, out=A)
    rows, cols = A.shape
    inv = inverses(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        a = A[r, c]
        if a != 1:
            A[r, c:] = (A[r, c:] * inv[a]) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def echelonize(M, p: int):
    """Unique reduced row-echelon form and rank: ``(R, rank)``."""
    R, piv = rref(M, p)
    return R, len(piv)


def rank(M, p: int) -> int:
    return len(rref(M, p)[1])


def _kernel_from_rref(R, pivots, cols, p):
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        if pivots:
            K[t, pivots] = (-R[:, f]) % p
    return K


def kernel(M, p: int) -> "Subspace":
    """Right kernel ``{v : M v = 0}`` as a canonical subspace."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise FpError("kernel expects a 2-d array")
    cols = M.shape[1]
    if M.shape[0] == 0:
        return Subspace.full(cols, p)
    R, piv = rref(M, p)
    return Subspace(_kernel_from_rref(R, piv, cols, p), p, ambient=cols)


def left_kernel(M, p: int) -> "Subspace":
    """``{v : v M = 0}``."""
    return kernel(np.asarray(M).T, p)


def solve(A, b, p: int):
    """One solution ``x`` of ``A x = b`` or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (columns).
    """
    A = as_fp(A, p)
    b = as_fp(b, p)
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    if A.shape[0] != B.shape[0]:
        raise FpError("row count mismatch in solve")
    n = A.shape[1]
    R, piv = rref(np.hstack([A, B]), p, reduced_input=True)
    if any(c >= n for c in piv):
        return None
    X = np.zeros((n, B.shape[1]), dtype=np.int64)
    X[piv] = R[:, n:]
    return X[:, 0] if vec else X


def inverse(A, p: int) -> np.ndarray:
    A = as_fp(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise FpError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p, reduced_input=True)
    if len(piv) < n or piv[n - 1] >= n:
        raise FpError("matrix is singular")
    return R[:, n:]


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of F_p^ambient held by its reduced echelon basis."""

    basis: np.ndarray
    p: int
    ambient: int
    pivots: tuple = field(default=())

    def __init__(self, vectors, p: int, ambient: int | None = None, canonical: bool = False):
        V = np.asarray(vectors, dtype=np.int64)
        if ambient is None:
            if V.ndim != 2:
                raise FpError("ambient dimension needed for an empty spanning set")
            ambient = V.shape[1]
        V = V.reshape(-1, ambient) if ambient else np.zeros((0, 0), dtype=np.int64)
        if canonical:
            R = V
            piv = [int(np.flatnonzero(row)[0]) for row in R]
        else:
            R, piv = rref(V, p)
        object.__setattr__(self, "basis", R)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "ambient", int(ambient))
        object.__setattr__(self, "pivots", tuple(piv))
        R.flags.writeable = False

    @classmethod
    def zero(cls, ambient: int, p: int) -> "Subspace":
        return cls(np.zeros((0, ambient), dtype=np.int64), p, ambient, canonical=True)

    @classmethod
    def full(cls, ambient: int, p: int) -> "Subspace":
        return cls(np.eye(ambient, dtype=np.int64), p, ambient, canonical=True)

    @classmethod
    def coordinate(cls, indices, ambient: int, p: int) -> "Subspace":
        idx = sorted(set(int(i) for i in indices))
        B = np.zeros((len(idx), ambient), dtype=np.int64)
        B[np.arange(len(idx)), idx] = 1
        return cls(B, p, ambient, canonical=True)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.p == other.p
            and self.pivots == other.pivots
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.ambient, self.p, self.pivots, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, p={self.p})"

    def _check(self, other: "Subspace"):
        if self.ambient != other.ambient or self.p != other.p:
            raise FpError("subspaces live in different ambient spaces")

    def residual(self, V) -> np.ndarray:
        """Reduce rows of ``V`` modulo this subspace (zero rows iff contained)."""
        V = np.mod(np.asarray(V, dtype=np.int64).reshape(-1, self.ambient), self.p)
        if self.dim == 0 or V.shape[0] == 0:
            return V
        return np.mod(V - matmul(V[:, list(self.pivots)], self.basis, self.p), self.p)

    def coords(self, V) -> np.ndarray:
        """Coordinates of vectors of this subspace in its echelon basis."""
        V = np.mod(np.asarray(V, dtype=np.int64), self.p)
        one = V.ndim == 1
        V2 = V.reshape(-1, self.ambient)
        C = V2[:, list(self.pivots)]
        if np.any(self.residual(V2)):
            raise FpError("vector not in subspace")
        return C[0] if one else C

    def contains_vectors(self, V) -> bool:
        return not np.any(self.residual(V))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return other.dim <= self.dim and self.contains_vectors(other.basis)

    def extend(self, V) -> "Subspace":
        """Span of this subspace and the rows of ``V``."""
        res = self.residual(V)
        res = res[np.any(res, axis=1)]
        if res.shape[0] == 0:
            return self
        new, _ = rref(res, self.p, reduced_input=True)
        return Subspace(np.vstack([self.basis, new]), self.p, self.ambient)

    def extend_new(self, V):
        """Like ``extend`` but also returns the rows that were actually new."""
        res = self.residual(V)
        res = res[np.any(res, axis=1)]
        if res.shape[0] == 0:
            return self, res
        new, _ = rref(res, self.p, reduced_input=True)
        return Subspace(np.vstack([self.basis, new]), self.p, self.ambient), new

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return self.extend(other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Zassenhaus intersection."""
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        n = self.ambient
        top = np.hstack([self.basis, self.basis])
        bot = np.hstack([other.basis, np.zeros_like(other.basis)])
        R, piv = rref(np.vstack([top, bot]), self.p, reduced_input=True)
        rows = [i for i, c in enumerate(piv) if c >= n]
        return Subspace(R[rows, n:], self.p, n)

    def quotient_transversal(self, sub: "Subspace") -> np.ndarray:
        """Rows completing a basis of ``sub`` to one of ``self`` (requires sub ⊆ self)."""
        self._check(sub)
        if not self.contains(sub):
            raise FpError("quotient_transversal needs sub contained in self")
        res = sub.residual(self.basis)
        keep = []
        acc = sub
        for i in range(res.shape[0]):
            if not np.any(res[i]):
                continue
            nxt = acc.extend(res[i : i + 1])
            if nxt.dim > acc.dim:
                keep.append(i)
                acc = nxt
        return self.basis[keep].copy()

    def complement_indices(self) -> list:
        """Non-pivot coordinates; their unit vectors complete this subspace."""
        piv = set(self.pivots)
        return [c for c in range(self.ambient) if c not in piv]

    def ops(self, other: "Subspace") -> dict:
        """All lattice operations at once."""
        self._check(other)
        s = self.sum(other)
        out = {
            "sum": s,
            "intersection": self.intersection(other),
            "contains": s == self,
        }
        out["quotient_transversal"] = self.quotient_transversal(other) if out["contains"] else None
        return out


def subspace_ops(A: Subspace, B: Subspace) -> dict:
    return A.ops(B)
