"""Cartan-type Lie algebras W, S, H, K over truncated divided powers.

Functions in O(m;n) are dicts ``{exponent tuple: coefficient}``; vector fields
in W(m;n) are dicts ``{(exponent tuple, i): coefficient}`` meaning
``x^(a) D_{i+1}``.  Variables are 0-based internally and 1-based in labels.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fplinalg import Subspace, check_prime, kernel
from .graded import GradedLieAlgebra, full_parts, graded_product, subquotient
from .liecore import LieAlgebraFp

__all__ = [
    "ResourceLimit",
    "DEFAULT_CAP",
    "cap_limit",
    "binom_mod",
    "DividedPowerAlgebra",
    "dp_multiply",
    "w_bracket",
    "w_apply",
    "divergence",
    "D_ij",
    "D_H",
    "D_K",
    "poisson",
    "contact",
    "Delta",
    "degree_derivation",
    "predicted_dim",
    "build_W",
    "build_S",
    "build_H",
    "build_K",
    "build_cartan",
    "field_coords",
    "function_coords",
    "SharpDagger",
    "sharp_dagger_decomposition",
]

DEFAULT_CAP = 512


class ResourceLimit(RuntimeError):
    """The requested algebra exceeds the configured dimension cap."""


def cap_limit(cap=None) -> int:
    if cap is not None:
        return int(cap)
    return int(os.environ.get("GRADLIE_CAP", DEFAULT_CAP))


@lru_cache(maxsize=None)
def binom_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod p by Lucas' theorem."""
    if k < 0 or n < 0 or k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        num = den = 1
        for i in range(b):
            num = num * (a - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


class DividedPowerAlgebra:
    """O(m;n): span of x^(a), 0 <= a_i < p^{n_i}, with x^(a)x^(b) = C(a+b,a) x^(a+b)."""

    def __init__(self, m: int, n, p: int):
        self.p = check_prime(p)
        n = tuple(int(v) for v in (n if isinstance(n, (tuple, list)) else [n] * m))
        if len(n) != m or min(n) < 1:
            raise ValueError("n must be a tuple of m positive integers")
        self.m = m
        self.n = n
        self.tau = tuple(p**k - 1 for k in n)
        self.monomials = list(itertools.product(*[range(t + 1) for t in self.tau]))
        self.index = {a: i for i, a in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def in_range(self, a) -> bool:
        return all(0 <= x <= t for x, t in zip(a, self.tau))

    def unit(self, i: int) -> tuple:
        return tuple(int(j == i) for j in range(self.m))

    def x(self, i: int) -> dict:
        return {self.unit(i): 1}

    def mono(self, a) -> dict:
        return {tuple(a): 1}

    def multiply(self, a, b):
        """(coefficient, exponent) of x^(a) x^(b); coefficient 0 when the product vanishes."""
        c = tuple(x + y for x, y in zip(a, b))
        if not self.in_range(c):
            return 0, c
        coeff = 1
        for x, y in zip(a, b):
            coeff = coeff * binom_mod(x + y, x, self.p) % self.p
            if not coeff:
                break
        return coeff, c

    def mul(self, f: dict, g: dict) -> dict:
        out = {}
        p = self.p
        for a, u in f.items():
            for b, v in g.items():
                c, e = self.multiply(a, b)
                if c:
                    out[e] = (out.get(e, 0) + c * u * v) % p
        return _clean(out)

    def d(self, i: int, f: dict) -> dict:
        """Partial derivative D_i (lowers a_i by one)."""
        out = {}
        for a, c in f.items():
            if a[i] > 0:
                e = a[:i] + (a[i] - 1,) + a[i + 1 :]
                out[e] = (out.get(e, 0) + c) % self.p
        return _clean(out)

    def label(self, a) -> str:
        if not any(a):
            return "1"
        return "x(" + ",".join(str(v) for v in a) + ")"


def _clean(f: dict) -> dict:
    return {k: v for k, v in f.items() if v}


def _add(f: dict, g: dict, p: int, s: int = 1) -> dict:
    out = dict(f)
    for k, v in g.items():
        out[k] = (out.get(k, 0) + s * v) % p
    return _clean(out)


def _scale(f: dict, c: int, p: int) -> dict:
    return _clean({k: v * c % p for k, v in f.items()})


def dp_multiply(a, b, O: DividedPowerAlgebra):
    """x^(a) x^(b) = coeff * x^(a+b), coefficients via Lucas digits."""
    return O.multiply(tuple(a), tuple(b))


# ---------------------------------------------------------------------------
# vector fields


def w_apply(D: dict, f: dict, O: DividedPowerAlgebra) -> dict:
    """D(f) for D = sum f_i D_i."""
    out = {}
    for (a, i), c in D.items():
        out = _add(out, _scale(O.mul({a: 1}, O.d(i, f)), c, O.p), O.p)
    return out


def _field_components(D: dict, m: int) -> list:
    comps = [dict() for _ in range(m)]
    for (a, i), c in D.items():
        comps[i][a] = c
    return comps


def _from_components(comps) -> dict:
    out = {}
    for i, f in enumerate(comps):
        for a, c in f.items():
            if c:
                out[(a, i)] = c
    return out


def w_bracket(D: dict, E: dict, O: DividedPowerAlgebra) -> dict:
    """[D, E] = sum_j (D(g_j) - E(f_j)) D_j."""
    p = O.p
    f = _field_components(D, O.m)
    g = _field_components(E, O.m)
    comps = [_add(w_apply(D, g[j], O), w_apply(E, f[j], O), p, -1) for j in range(O.m)]
    return _from_components(comps)


def divergence(D: dict, O: DividedPowerAlgebra) -> dict:
    out = {}
    for i, f in enumerate(_field_components(D, O.m)):
        out = _add(out, O.d(i, f), O.p)
    return out


def D_ij(i: int, j: int, f: dict, O: DividedPowerAlgebra) -> dict:
    """D_{i,j}(f) = D_j(f) D_i - D_i(f) D_j (0-based i, j)."""
    comps = [dict() for _ in range(O.m)]
    comps[i] = _add(comps[i], O.d(j, f), O.p)
    comps[j] = _add(comps[j], O.d(i, f), O.p, -1)
    return _from_components(comps)


def _sigma(j: int, m: int) -> int:
    return 1 if j < m else -1


def _prime(j: int, m: int) -> int:
    return j + m if j < m else j - m


def D_H(f: dict, O: DividedPowerAlgebra) -> dict:
    """D_H(f) = sum_j σ(j) D_j(f) D_{j'} on 2m variables."""
    m = O.m // 2
    comps = [dict() for _ in range(O.m)]
    for j in range(2 * m):
        comps[_prime(j, m)] = _scale(O.d(j, f), _sigma(j, m), O.p)
    return _from_components(comps)


def poisson(f: dict, g: dict, O: DividedPowerAlgebra) -> dict:
    """{f, g} = sum_{j <= 2m} σ(j) D_j(f) D_{j'}(g)."""
    m = (O.m // 2)
    out = {}
    for j in range(2 * m):
        out = _add(out, _scale(O.mul(O.d(j, f), O.d(_prime(j, m), g)), _sigma(j, m), O.p), O.p)
    return out


def Delta(f: dict, O: DividedPowerAlgebra) -> dict:
    """Δ(f) = 2f - sum_{j <= 2m} x_j D_j(f) on 2m+1 variables."""
    out = _scale(f, 2, O.p)
    for j in range(O.m - 1):
        out = _add(out, O.mul(O.x(j), O.d(j, f)), O.p, -1)
    return out


def contact(f: dict, g: dict, O: DividedPowerAlgebra) -> dict:
    """<f, g> = Δ(f) D_t(g) - Δ(g) D_t(f) + {f, g}, t the last variable."""
    t = O.m - 1
    p = O.p
    out = O.mul(Delta(f, O), O.d(t, g))
    out = _add(out, O.mul(Delta(g, O), O.d(t, f)), p, -1)
    return _add(out, poisson(f, g, O), p)


def D_K(f: dict, O: DividedPowerAlgebra) -> dict:
    """Contact vector field of f on 2m+1 variables."""
    m = (O.m - 1) // 2
    t = O.m - 1
    p = O.p
    comps = [dict() for _ in range(O.m)]
    dt = O.d(t, f)
    for i in range(2 * m):
        ip = _prime(i, m)
        comps[i] = _add(O.mul(O.x(i), dt), _scale(O.d(ip, f), _sigma(ip, m), p), p)
    comps[t] = Delta(f, O)
    return _from_components(comps)


def degree_derivation(O: DividedPowerAlgebra, count: int | None = None) -> dict:
    """𝔇₁ = sum_i x_i D_i over the first ``count`` variables."""
    count = O.m if count is None else count
    return {(O.unit(i), i): 1 for i in range(count)}


# ---------------------------------------------------------------------------
# construction


def _normalize_n(n, m):
    if isinstance(n, int):
        return (n,) * m
    n = tuple(int(v) for v in n)
    if len(n) == 1 and m > 1:
        return n * m
    if len(n) != m:
        raise ValueError(f"n needs {m} entries")
    return n


def _nstr(n) -> str:
    return "(" + ",".join(str(v) for v in n) + ")"


def predicted_dim(family: str, m: int, n, p: int) -> int:
    """Dimension of the requested algebra from its closed form (used for the cap)."""
    n = _normalize_n(n, m)
    N = p ** sum(n)
    fam = family.upper()
    if fam == "W":
        return m * N
    if fam == "S":
        return (m - 1) * N + 1
    if fam == "S1":
        return (m - 1) * (N - 1)
    if fam == "CS":
        return (m - 1) * N + 2
    if fam == "H":
        return N - 1 + m
    if fam == "H2":
        return N - 2
    if fam == "CH":
        return N + m
    if fam == "K":
        return N
    if fam == "K1":
        return N - 1 if (m + 3) % p == 0 else N
    raise ValueError(f"unknown family {family!r}")


def _check_cap_dim(name, d, cap):
    lim = cap_limit(cap)
    if d > lim:
        raise ResourceLimit(f"{name} has dimension {d} > cap {lim}")


def _check_cap(family, m, n, p, cap):
    d = predicted_dim(family, m, n, p)
    lim = cap_limit(cap)
    if d > lim:
        raise ResourceLimit(f"{family}({m};{_nstr(_normalize_n(n, m))}) has dimension {d} > cap {lim}")


def _field_label(O, a, i):
    mono = O.label(a)
    return f"D{i + 1}" if mono == "1" else f"{mono}D{i + 1}"


def _w_algebra(m, n, p, name):
    O = DividedPowerAlgebra(m, n, p)
    basis = sorted(((a, i) for a in O.monomials for i in range(m)), key=lambda t: (sum(t[0]), t[0], t[1]))
    index = {b: k for k, b in enumerate(basis)}
    I, J, K, C = [], [], [], []
    for s, (a, i) in enumerate(basis):
        for t in range(s + 1, len(basis)):
            b, j = basis[t]
            # [x^a D_i, x^b D_j] = x^a D_i(x^b) D_j - x^b D_j(x^a) D_i
            if b[i] > 0:
                c, e = O.multiply(a, b[:i] + (b[i] - 1,) + b[i + 1 :])
                if c:
                    I.append(s); J.append(t); K.append(index[(e, j)]); C.append(c)
            if a[j] > 0:
                c, e = O.multiply(b, a[:j] + (a[j] - 1,) + a[j + 1 :])
                if c:
                    I.append(s); J.append(t); K.append(index[(e, i)]); C.append(-c % p)
    labels = [_field_label(O, a, i) for a, i in basis]
    alg = LieAlgebraFp(p, labels, I, J, K, C)
    G = GradedLieAlgebra(alg, [sum(a) - 1 for a, _ in basis], name=name)
    G.meta.update(family="W", m=m, n=O.n, level="W", fields=[{b: 1} for b in basis])
    G.meta["O"] = O
    G.meta["w_index"] = index
    return G


def build_W(m: int, n=1, p: int = 5, cap=None) -> GradedLieAlgebra:
    """W(m;n) with its natural grading (basis x^(a)D_i sorted by degree, then lex)."""
    n = _normalize_n(n, m)
    _check_cap("W", m, n, p, cap)
    return _w_algebra(m, n, p, f"W({m};{_nstr(n)})")


def _field_matrix(W: GradedLieAlgebra, d: int, fields) -> np.ndarray:
    idx = W.meta["w_index"]
    loc = W._local
    out = np.zeros((len(fields), W.n(d)), dtype=np.int64)
    for r, D in enumerate(fields):
        for key, c in D.items():
            out[r, loc[idx[key]]] = c % W.p
    return out


def _linear_condition_parts(W: GradedLieAlgebra, condition) -> dict:
    """Per degree, the kernel of a linear map W_d -> (dict-valued) given on basis fields."""
    p = W.p
    parts = {}
    fields = W.meta["fields"]
    for d in W.degs:
        idx = W.index(d)
        images = [condition(fields[k]) for k in idx]
        keys = sorted({key for img in images for key in img})
        if not keys:
            parts[d] = Subspace.full(idx.size, p)
            continue
        col = {key: r for r, key in enumerate(keys)}
        A = np.zeros((len(keys), idx.size), dtype=np.int64)
        for c, img in enumerate(images):
            for key, v in img.items():
                A[col[key], c] = v % p
        parts[d] = kernel(A, p)
    return parts


def _add_to_degree_zero(W, parts, D):
    row = _field_matrix(W, 0, [D])
    parts = dict(parts)
    parts[0] = parts[0].extend(row)
    return parts


def _sub_meta(H: GradedLieAlgebra, W: GradedLieAlgebra, **kw):
    H.meta.update(kw)
    H.meta["O"] = W.meta["O"]
    fields = W.meta["fields"]
    out = []
    for row in H.meta["basis"]:
        D = {}
        for k in np.flatnonzero(row):
            for key, c in fields[k].items():
                D[key] = (D.get(key, 0) + c * int(row[k])) % W.p
        out.append(_clean(D))
    H.meta["fields"] = out
    H.meta["ambient"] = W
    return H


def build_S(m: int, n=1, p: int = 5, level: str = "S1", cap=None) -> GradedLieAlgebra:
    """S(m;n) = ker div in W(m;n); ``S1`` its derived algebra; ``CS`` adjoins 𝔇₁."""
    if m < 3:
        raise ValueError("S needs m >= 3 (for two variables use build_H)")
    level = level.upper()
    if level not in ("S", "S1", "CS"):
        raise ValueError(f"unknown S level {level!r}")
    n = _normalize_n(n, m)
    _check_cap(level, m, n, p, cap)
    W = _w_algebra(m, n, p, f"W({m};{_nstr(n)})")
    O = W.meta["O"]
    parts = _linear_condition_parts(W, lambda D: divergence(D, O))
    base = f"S({m};{_nstr(n)})"
    if level == "CS":
        parts = _add_to_degree_zero(W, parts, degree_derivation(O))
        G = subquotient(W, parts, name=f"C{base}")
    elif level == "S":
        G = subquotient(W, parts, name=base)
    else:
        S = subquotient(W, parts, name=base)
        full = full_parts(S)
        der = graded_product(S, full, full)
        G = subquotient(S, der, name=f"{base}^(1)")
        G.meta["basis"] = (G.meta["basis"] @ S.meta["basis"]) % p
    return _sub_meta(G, W, family="S", m=m, n=n, level=level)


def _h_condition(O):
    m = O.m // 2
    p = O.p

    def cond(D):
        f = _field_components(D, O.m)
        out = {}
        for i in range(2 * m):
            for j in range(i + 1, 2 * m):
                jp, ip = _prime(j, m), _prime(i, m)
                lhs = _scale(O.d(i, f[jp]), _sigma(jp, m), p)
                rhs = _scale(O.d(j, f[ip]), _sigma(ip, m), p)
                for a, c in _add(lhs, rhs, p, -1).items():
                    out[(i, j, a)] = c
        return out

    return cond


def _h2_algebra(mm, n, p, name):
    """H(2m;n)^(2) on the basis D_H(x^(a)), a != 0, tau, with bracket D_H({f, g})."""
    O = DividedPowerAlgebra(mm, n, p)
    zero = tuple([0] * mm)
    gens = sorted((a for a in O.monomials if a != zero and a != O.tau), key=lambda a: (sum(a), a))
    index = {a: k for k, a in enumerate(gens)}
    I, J, K, C = [], [], [], []
    for s, a in enumerate(gens):
        for t in range(s + 1, len(gens)):
            b = gens[t]
            u = poisson({a: 1}, {b: 1}, O)
            for e, c in u.items():
                if e == zero:
                    continue
                if e == O.tau:
                    raise AssertionError("Poisson bracket left H^(2)")
                I.append(s); J.append(t); K.append(index[e]); C.append(c)
    labels = [f"DH[{O.label(a)}]" for a in gens]
    alg = LieAlgebraFp(p, labels, I, J, K, C)
    G = GradedLieAlgebra(alg, [sum(a) - 2 for a in gens], name=name)
    G.meta.update(O=O, functions=gens, function_index=index)
    G.meta["fields"] = None
    return G


def build_H(mm: int, n=1, p: int = 5, level: str = "H2", cap=None) -> GradedLieAlgebra:
    """Hamiltonian algebras on ``mm = 2m`` variables.

    ``H`` is the solution space of the Hamiltonian condition inside W(2m;n),
    ``H2`` the second derived algebra (spanned by D_H(x^(a))), ``CH`` = H + F𝔇₁.
    """
    if mm % 2 or mm < 2:
        raise ValueError("H needs an even, positive number of variables")
    level = level.upper()
    if level not in ("H", "H2", "CH"):
        raise ValueError(f"unknown H level {level!r}")
    n = _normalize_n(n, mm)
    _check_cap(level, mm, n, p, cap)
    base = f"H({mm};{_nstr(n)})"
    if level == "H2":
        G = _h2_algebra(mm, n, p, f"{base}^(2)")
        G.meta.update(family="H", m=mm, n=n, level="H2")
        return G
    W = _w_algebra(mm, n, p, f"W({mm};{_nstr(n)})")
    O = W.meta["O"]
    parts = _linear_condition_parts(W, _h_condition(O))
    if level == "CH":
        parts = _add_to_degree_zero(W, parts, degree_derivation(O))
        G = subquotient(W, parts, name=f"C{base}")
    else:
        G = subquotient(W, parts, name=base)
    return _sub_meta(G, W, family="H", m=mm, n=n, level=level)


def k_degree(a) -> int:
    """∥a∥ = |a| + a_{2m+1} - 2."""
    return sum(a) + a[-1] - 2


def build_K(mm: int, n=1, p: int = 5, level: str = "K1", cap=None) -> GradedLieAlgebra:
    """Contact algebras on ``mm = 2m+1`` variables, basis D_K(x^(a)) graded by ∥a∥."""
    if mm % 2 == 0:
        raise ValueError("K needs an odd number of variables")
    level = level.upper()
    if level not in ("K", "K1"):
        raise ValueError(f"unknown K level {level!r}")
    n = _normalize_n(n, mm)
    _check_cap(level, mm, n, p, cap)
    O = DividedPowerAlgebra(mm, n, p)
    m = (mm - 1) // 2
    drop_tau = level == "K1" and (2 * m + 4) % p == 0
    gens = sorted((a for a in O.monomials if not (drop_tau and a == O.tau)), key=lambda a: (k_degree(a), a))
    index = {a: k for k, a in enumerate(gens)}
    I, J, K, C = [], [], [], []
    for s, a in enumerate(gens):
        for t in range(s + 1, len(gens)):
            b = gens[t]
            for e, c in contact({a: 1}, {b: 1}, O).items():
                if e not in index:
                    raise AssertionError("contact bracket left the chosen span")
                I.append(s); J.append(t); K.append(index[e]); C.append(c)
    labels = [f"DK[{O.label(a)}]" for a in gens]
    alg = LieAlgebraFp(p, labels, I, J, K, C)
    suffix = "^(1)" if level == "K1" else ""
    G = GradedLieAlgebra(alg, [k_degree(a) for a in gens], name=f"K({mm};{_nstr(n)}){suffix}")
    G.meta.update(family="K", m=mm, n=n, level=level, O=O, functions=gens, function_index=index, fields=None)
    return G


def build_cartan(family: str, m: int, n=1, p: int = 5, cap=None) -> GradedLieAlgebra:
    """Dispatch on W, S, S1, CS, H, H2, CH, K, K1."""
    fam = family.upper()
    if fam == "W":
        return build_W(m, n, p, cap)
    if fam in ("S", "S1", "CS"):
        return build_S(m, n, p, fam, cap)
    if fam in ("H", "H2", "CH"):
        return build_H(m, n, p, fam, cap)
    if fam in ("K", "K1"):
        return build_K(m, n, p, fam, cap)
    raise ValueError(f"unknown Cartan family {family!r}")


# ---------------------------------------------------------------------------
# coordinates


def field_coords(G: GradedLieAlgebra, D: dict) -> np.ndarray:
    """Coordinates of a vector field in a W-based algebra (None if outside)."""
    from .fplinalg import solve

    fields = G.meta.get("fields")
    if fields is None:
        raise ValueError("algebra is not realised by vector fields")
    keys = sorted({k for f in fields for k in f} | set(D))
    col = {k: i for i, k in enumerate(keys)}
    M = np.zeros((len(keys), G.dim), dtype=np.int64)
    for j, f in enumerate(fields):
        for k, c in f.items():
            M[col[k], j] = c
    v = np.zeros(len(keys), dtype=np.int64)
    for k, c in D.items():
        v[col[k]] = c % G.p
    return solve(M, v, G.p)


def function_coords(G: GradedLieAlgebra, f: dict) -> np.ndarray:
    """Coordinates of D_H(f) or D_K(f) in an algebra built on generating functions."""
    idx = G.meta.get("function_index")
    if idx is None:
        raise ValueError("algebra is not built on generating functions")
    v = np.zeros(G.dim, dtype=np.int64)
    for a, c in f.items():
        if a in idx:
            v[idx[a]] = c % G.p
        elif G.meta.get("family") == "H" and not any(a):
            continue
        else:
            raise KeyError(f"x^{a} is not a generator")
    return v


# ---------------------------------------------------------------------------
# W_ℓ = sharp + dagger


@dataclass
class SharpDagger:
    sharp: Subspace
    dagger: Subspace
    relation: str  # "DirectSum" | "Chain" | "Neither"


def sharp_dagger_decomposition(G: GradedLieAlgebra, ell: int) -> SharpDagger:
    """g_ℓ^♯ = O_ℓ·𝔇₁ and g_ℓ^† = divergence-free part of W(m)_ℓ (ambient subspaces)."""
    if G.meta.get("family") != "W" or G.meta.get("level") != "W":
        raise ValueError("sharp/dagger decomposition needs a W-type algebra")
    O = G.meta["O"]
    m = O.m
    p = G.p
    if not (0 <= ell <= p - 2) or m < 2:
        raise ValueError("need m >= 2 and 0 <= ℓ <= p-2")
    idx = G.index(ell)
    dagger_loc = _linear_condition_parts(G, lambda D: divergence(D, O))[ell]
    monos = [a for a in O.monomials if sum(a) == ell]
    D1 = degree_derivation(O)
    sharp_fields = []
    for a in monos:
        D = {}
        for (b, i), c in D1.items():
            coeff, e = O.multiply(a, b)
            if coeff:
                D[(e, i)] = coeff * c % p
        sharp_fields.append(D)
    sharp_loc = Subspace(_field_matrix(G, ell, sharp_fields), p, idx.size)
    if sharp_loc.intersection(dagger_loc).dim == 0 and sharp_loc.sum(dagger_loc).dim == idx.size:
        rel = "DirectSum"
    elif dagger_loc.contains(sharp_loc):
        rel = "Chain"
    else:
        rel = "Neither"
    amb = lambda S: Subspace(G.embed(ell, S.basis), p, G.dim) if S.dim else Subspace.zero(G.dim, p)
    return SharpDagger(amb(sharp_loc), amb(dagger_loc), rel)
