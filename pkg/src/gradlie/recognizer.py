"""Recognition of graded Lie algebras: hypotheses (a)-(d), fingerprints, catalog lookup."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import cartan as _cartan
from . import classical as _classical
from . import melikyan as _melikyan
from . import modrep as _modrep
from . import spin as _spin
from .fplinalg import Subspace, matmul, rank
from .graded import (
    GradedLieAlgebra,
    NotScalar,
    one_transitivity_witness,
    p_character,
    transitivity_witness,
)
from .liecore import _matpow

__all__ = [
    "HypothesisReport",
    "Fingerprint",
    "CatalogEntry",
    "Unrecognized",
    "HypothesesFail",
    "check_hypotheses",
    "fingerprint",
    "build_catalog",
    "catalog_collisions",
    "build_entry",
    "recognize",
    "random_copy",
]


# ---------------------------------------------------------------------------
# hypotheses

_ALLOWED = re.compile(r"^(abelian:\d+|[ABCD]\d+|E[678]|F4|G2|(sl|psl|gl|pgl)\d+|csp\d+)$")


@dataclass
class HypothesisReport:
    a_ok: bool
    b_ok: bool
    c_ok: bool
    d_ok: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.a_ok and self.b_ok and self.c_ok and self.d_ok

    def failed(self) -> list:
        return [k for k in "abcd" if not getattr(self, f"{k}_ok")]


def _gl_allowed(label: str, p: int) -> bool:
    m = re.fullmatch(r"(sl|psl|gl|pgl)(\d+)", label)
    if not m:
        return True
    n = int(m.group(2))
    # gl_n with p ∤ n is sl_n ⊕ center, still classical reductive
    return m.group(1) == "gl" or n % p == 0


def check_hypotheses(G: GradedLieAlgebra, rng=None) -> HypothesisReport:
    """Hypotheses (a)-(d) on g_0, g_-1 and transitivity, with witnesses on failure."""
    p = G.p
    diag = {}
    try:
        ideals = _modrep.decompose_g0(G.component(0), G, rng)
        labels = [I.label for I in ideals]
        bad = [l for l in labels if not (_ALLOWED.match(l) and _gl_allowed(l, p))]
        a_ok = not bad
        diag["a"] = labels if a_ok else f"disallowed summands {bad}"
    except _modrep.NotReductive as exc:
        a_ok = False
        diag["a"] = f"g_0 is not classical reductive: {exc}"
    if G.n(-1) == 0:
        b_ok = False
        diag["b"] = "g_-1 is zero"
    else:
        mod = _modrep.module_of(G.component(-1), G.component(0), G)
        try:
            b_ok, U = _spin.norton(mod, rng)
        except _spin.Undetermined as exc:
            b_ok, U = False, None
            diag["b"] = f"undetermined: {exc}"
        if not b_ok and U is not None:
            sub = Subspace(G.embed(-1, U.basis), p, G.dim)
            diag["b"] = sub
    w = transitivity_witness(G)
    c_ok = w is None
    if w is not None:
        diag["c"] = w
    w = one_transitivity_witness(G)
    d_ok = w is None
    if w is not None:
        diag["d"] = w
    return HypothesisReport(a_ok, b_ok, c_ok, d_ok, diag)


# ---------------------------------------------------------------------------
# fingerprint


@dataclass(frozen=True)
class Fingerprint:
    p: int
    q: int
    r: int
    dims: tuple
    g0_ideals: tuple
    lam: tuple
    bracket_kind: str
    restricted: bool | None

    def key(self) -> tuple:
        return (self.p, self.q, self.r, self.dims, self.g0_ideals, self.lam, self.bracket_kind, self.restricted)

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "dims": list(self.dims),
            "g0_ideals": list(self.g0_ideals),
            "lambda": [[t, list(c)] for comp in self.lam for t, c in comp],
            "bracket_kind": self.bracket_kind,
            "restricted": self.restricted,
        }


def _bracket_kind(G, S, f_prims, e_prims) -> str:
    p = G.p
    positives = set(S.positives)
    kinds = set()
    for f in f_prims:
        for e in e_prims:
            b = G.alg.bracket(f.vector, e.vector)
            if not np.any(b):
                continue
            w = tuple((x + y) % p for x, y in zip(f.weight, e.weight))
            if w in S.roots:
                # [f, e] = e_{-α}: α ∈ Φ⁺ exactly when the weight is a negative root
                kinds.add("NegativeRoot" if w in positives else "PositiveRoot")
    if kinds == {"PositiveRoot"}:
        return "PositiveRoot"
    if kinds == {"NegativeRoot"}:
        return "NegativeRoot"
    if kinds:
        return "Mixed"
    return "Toral"


def fingerprint(G: GradedLieAlgebra, rng=None) -> Fingerprint:
    """Structural invariants used for catalog matching."""
    S = _modrep.analyze_g0(G.component(0), G, rng)
    ideals = _modrep.decompose_g0(G.component(0), G, rng)
    labels = tuple(sorted(I.label for I in ideals))
    f_prims = _modrep.primitive_vectors(G.component(-1), S, G, sign="+") if G.n(-1) else []
    e_prims = _modrep.primitive_vectors(G.component(1), S, G, sign="-") if G.n(1) else []
    lam = tuple(sorted({tuple(sorted(S.canonical_label(v.weight))) for v in f_prims}))
    kind = _bracket_kind(G, S, f_prims, e_prims)
    try:
        restricted = p_character(G).vanishes
    except NotScalar:
        restricted = None
    dims = tuple(G.n(d) for d in range(-G.q, G.r + 1))
    return Fingerprint(G.p, G.q, G.r, dims, labels, lam, kind, restricted)


# ---------------------------------------------------------------------------
# catalog


@dataclass
class CatalogEntry:
    label: str
    params: dict
    fingerprint: Fingerprint
    dim: int


def _node_representatives(typ, rank):
    A = _classical.cartan_matrix(typ, rank)
    autos = _modrep._isomorphisms(A, A)
    reps = []
    for k in range(A.shape[0]):
        if min(a[k] for a in autos) == k:
            reps.append(k + 1)
    return reps


def _classical_candidates(p, cap, max_rank):
    cands = []
    types = []
    for r in range(1, max_rank + 1):
        types.append(("A", r))
        if r >= 2:
            types.append(("B", r))
        if r >= 3:
            types.append(("C", r))
        if r >= 4:
            types.append(("D", r))
    types += [("G", 2), ("F", 4)] + [("E", r) for r in (6, 7, 8) if r <= max_rank]
    for typ, r in types:
        if typ in ("G", "F", "E") and r > max_rank:
            continue
        name = f"{typ}{r}"
        variants = ["simple"]
        if typ == "A" and (r + 1) % p == 0:
            variants = ["psl", "pgl"]
        R = _classical.build_root_system(name)
        n_simple = len(R.positives) * 2 + r
        for v in variants:
            dim = {"simple": n_simple, "psl": n_simple - 1, "pgl": n_simple}[v]
            if dim > cap:
                continue
            for k in _node_representatives(name, None):
                if v == "simple":
                    label = f"{typ}_{r} standard node {k}"
                else:
                    label = f"{v}_{r + 1} standard node {k}"
                cands.append((label, {"kind": "classical", "type": name, "variant": v, "node": k}, dim))
    return cands


def _n_tuples(count, p, limit):
    """Nondecreasing tuples n with p^{|n|} bounded."""
    out = []
    for n in _nondecreasing(count, 1, 8):
        if p ** sum(n) <= limit:
            out.append(n)
    return out


def _nondecreasing(count, lo, hi):
    if count == 0:
        yield ()
        return
    for v in range(lo, hi + 1):
        for rest in _nondecreasing(count - 1, v, hi):
            yield (v,) + rest


def _nlabel(n):
    return "(" + ",".join(str(v) for v in n) + ")"


_FAMILY_LABEL = {
    "W": "W({m};{n})",
    "S": "S({m};{n})",
    "S1": "S({m};{n})^{{(1)}}",
    "CS": "CS({m};{n})",
    "H": "H({m};{n})",
    "H2": "H({m};{n})^{{(2)}}",
    "CH": "CH({m};{n})",
    "K": "K({m};{n})",
    "K1": "K({m};{n})^{{(1)}}",
}


def _cartan_candidates(p, cap):
    cands = []
    for m in range(1, 12):
        for fam in ("W", "S1", "S", "CS", "H2", "H", "CH", "K1"):
            if fam.startswith("S") or fam == "CS":
                if m < 3:
                    continue
            if fam in ("H2", "H", "CH") and m % 2:
                continue
            if fam == "K1" and (m % 2 == 0 or m < 3):
                continue
            for n in _n_tuples(m, p, 10 * cap):
                dim = _cartan.predicted_dim(fam, m, n, p)
                if dim > cap:
                    continue
                label = _FAMILY_LABEL[fam].format(m=m, n=_nlabel(n))
                cands.append((label, {"kind": "cartan", "family": fam, "m": m, "n": n}, dim))
    # K and K1 coincide unless 2m+4 ≡ 0 mod p; keep both only when different
    out = []
    for label, params, dim in cands:
        out.append((label, params, dim))
        if params["family"] == "K1":
            m = params["m"]
            if (m + 3) % p == 0:
                d2 = _cartan.predicted_dim("K", m, params["n"], p)
                if d2 <= cap:
                    out.append((_FAMILY_LABEL["K"].format(m=m, n=_nlabel(params["n"])), dict(params, family="K"), d2))
    return out


def _melikyan_candidates(p, cap):
    if p != 5:
        return []
    cands = []
    for n in _nondecreasing(2, 1, 4):
        dim = 5 ** (sum(n) + 1)
        if dim <= cap:
            cands.append((f"Melikyan (2;{_nlabel(n)})", {"kind": "melikyan", "n": n}, dim))
    return cands


def build_entry(params: dict, p: int, cap=None) -> GradedLieAlgebra:
    """Construct the graded algebra described by catalog parameters."""
    kind = params["kind"]
    if kind == "classical":
        C = _classical.chevalley_algebra(params["type"], p, variant=params.get("variant", "simple"))
        G = _classical.standard_grading(C, params["node"])
    elif kind == "cartan":
        G = _cartan.build_cartan(params["family"], params["m"], params["n"], p, cap=cap)
    elif kind == "melikyan":
        n = params["n"]
        G = _melikyan.build_M(n[0], n[1], p, cap=cap)
    else:
        raise ValueError(f"unknown entry kind {kind!r}")
    if params.get("reversed"):
        G = G.reversed()
    return G


@dataclass
class CatalogBuild:
    entries: list
    excluded: list  # (label, failed hypotheses) for reversed gradings outside the hypotheses


def _entries_for(cand, p: int, cap: int):
    label, params, _dim = cand
    G = build_entry(params, p, cap=cap)
    variants = [("", G, params)]
    if params["kind"] != "classical":
        variants = [(" natural", G, params), (" natural reversed", G.reversed(), dict(params, reversed=True))]
    entries, excluded = [], []
    for suffix, H, prm in variants:
        rep = check_hypotheses(H)
        if not rep.ok:
            excluded.append((label + suffix, rep.failed()))
            continue
        entries.append(CatalogEntry(label + suffix, prm, fingerprint(H), H.dim))
    return entries, excluded


_CATALOGS: dict = {}


def _catalog(p: int, cap: int, max_rank: int, workers: int = 1) -> CatalogBuild:
    key = (p, cap, max_rank)
    if key in _CATALOGS:
        return _CATALOGS[key]
    cands = _classical_candidates(p, cap, max_rank) + _cartan_candidates(p, cap) + _melikyan_candidates(p, cap)
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_entries_for, cands, [p] * len(cands), [cap] * len(cands)))
    else:
        parts = [_entries_for(s, p, cap) for s in cands]
    build = CatalogBuild([e for es, _ in parts for e in es], [x for _, xs in parts for x in xs])
    _CATALOGS[key] = build
    return build


def build_catalog(p: int = 5, cap=None, max_rank: int = 4, with_excluded: bool = False, workers: int = 1):
    """Fingerprinted graded simple algebras (classical, Cartan type, Melikyan) up to ``cap``.

    Classical types are limited to rank ``max_rank``.  Reversed Cartan-type and
    Melikyan gradings that violate the hypotheses are left out (returned
    separately when ``with_excluded``).  ``workers > 1`` fingerprints entries
    in separate processes.
    """
    cap = _cartan.cap_limit(cap)
    b = _catalog(int(p), int(cap), int(max_rank), max(1, int(workers)))
    return (list(b.entries), list(b.excluded)) if with_excluded else list(b.entries)


def catalog_collisions(entries) -> list:
    """Groups of distinct labels sharing a fingerprint."""
    seen = {}
    for e in entries:
        seen.setdefault(e.fingerprint.key(), []).append(e.label)
    return [labels for labels in seen.values() if len(labels) > 1]


# ---------------------------------------------------------------------------
# recognition


@dataclass
class Unrecognized:
    message: str
    fingerprint: Fingerprint | None = None
    caps_too_small: bool = False


@dataclass
class HypothesesFail:
    report: HypothesisReport


def recognize(G: GradedLieAlgebra, cap=None, max_rank: int = 4, rng=None):
    """Label of the matching catalog entry, else :class:`Unrecognized` / :class:`HypothesesFail`."""
    rep = check_hypotheses(G, rng)
    if not rep.ok:
        return HypothesesFail(rep)
    fp = fingerprint(G, rng)
    lim = _cartan.cap_limit(cap)
    if G.dim > lim:
        return Unrecognized(f"dimension {G.dim} exceeds the catalog cap {lim}", fp, True)
    for e in build_catalog(G.p, lim, max_rank):
        if e.dim == G.dim and e.fingerprint.key() == fp.key():
            return e.label
    return Unrecognized(
        f"no catalog entry matches (cap {lim}, classical rank <= {max_rank}); the input may lie "
        "outside the configured families or be a counterexample to the classification",
        fp,
        False,
    )


# ---------------------------------------------------------------------------
# random presentations


def _random_invertible(n, p, rng):
    while True:
        M = rng.integers(0, p, size=(n, n))
        if rank(M, p) == n:
            return M.astype(np.int64)


def _exp_nilpotent(A, p):
    """Σ_{i<p} A^i / i! for a matrix with A^p = 0."""
    n = A.shape[0]
    out = np.eye(n, dtype=np.int64)
    term = np.eye(n, dtype=np.int64)
    for i in range(1, p):
        term = matmul(term, A, p) * pow(i, p - 2, p) % p
        out = (out + term) % p
    return out


def _mat_inverse(M, p):
    from .fplinalg import inverse

    return inverse(M, p)


def random_copy(G: GradedLieAlgebra, rng=None, conjugations: int = 2, shuffle: bool = True) -> GradedLieAlgebra:
    """An isomorphic graded algebra in a random homogeneous basis.

    The basis change on each component is a random invertible matrix composed
    with exp(ad x) for ad-nilpotent root vectors x ∈ g_0; the basis order is
    then shuffled.
    """
    rng = np.random.default_rng() if rng is None else rng
    p = G.p
    Q = {d: _random_invertible(G.n(d), p, rng) for d in G.degs}
    if conjugations:
        try:
            S = _modrep.analyze_g0(G.component(0), G)
            roots = list(S.roots.values())
        except _modrep.NotReductive:
            roots = []
        idx0 = G.index(0)
        for _ in range(conjugations if roots else 0):
            e = roots[rng.integers(len(roots))]
            x = matmul(e[None, :], S.ctx.basis, p)[0][idx0] * int(rng.integers(1, p)) % p
            for d in G.degs:
                A = G.action_on(0, d, x)[0]
                if np.any(_matpow(A, p, p)):
                    raise ValueError("root vector is not ad-nilpotent")
                # rows of Q are basis vectors; apply the automorphism to each
                Q[d] = matmul(Q[d], _exp_nilpotent(A, p).T, p)
    Qinv = {d: _mat_inverse(M, p) for d, M in Q.items()}
    blocks = {}
    for d1 in G.degs:
        for d2 in G.degs:
            if d1 > d2 or (d1 + d2) not in Q:
                continue
            T = G.block(d1, d2)
            if not np.any(T):
                continue
            n1, n2, n3 = T.shape
            X = matmul(Q[d1], T.reshape(n1, -1), p).reshape(n1, n2, n3)
            X = matmul(Q[d2], X.transpose(1, 0, 2).reshape(n2, -1), p).reshape(n2, n1, n3).transpose(1, 0, 2)
            X = matmul(X.reshape(-1, n3), Qinv[d1 + d2], p).reshape(n1, n2, n3)
            blocks[(d1, d2)] = X
    counts = {d: G.n(d) for d in G.degs}
    H = GradedLieAlgebra.from_blocks(p, counts, blocks, labels=[f"v{i}" for i in range(G.dim)], name=f"copy({G.name})")
    if shuffle:
        H = H.permuted(rng.permutation(H.dim))
    return H
