"""JSON interchange format ``gradlie/1`` for structure-constant algebras.

A document is an object with keys ``format_version``, ``p``, ``dim``,
``labels``, an optional ``grading`` and ``table``.  Table rows are
``[i, j, [[k, c], ...]]`` with ``i < j``, 0-based indices and coefficients in
``1..p-1``.  Serialization is canonical: sorted keys, rows ordered by
``(i, j)``, terms by ``k``, one row per line.
"""
from __future__ import annotations

import json

import numpy as np

from .fplinalg import FpError, check_prime
from .graded import GradedLieAlgebra, check_grading
from .liecore import LieAlgebraFp, check_structure

FORMAT_VERSION = "gradlie/1"
_KEYS = {"format_version", "p", "dim", "labels", "grading", "table"}
_REQUIRED = _KEYS - {"grading"}


class SchemaError(ValueError):
    """Malformed document; ``path`` locates the offending field."""

    def __init__(self, message: str, path: str = "$", line: int | None = None):
        self.path = path
        self.line = line
        where = f"{path}" + (f" (line {line})" if line is not None else "")
        super().__init__(f"{where}: {message}")


class AxiomError(ValueError):
    """Structure or grading axiom violated; ``witness`` is the offending triple."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _row_lines(text: str) -> dict:
    """Map table row index -> source line, for rows laid out one per line."""
    out = {}
    lines = text.splitlines()
    start = None
    for n, ln in enumerate(lines, 1):
        if start is None and '"table"' in ln:
            start = n
            continue
        if start is not None and ln.lstrip().startswith("["):
            out[len(out)] = n
    return out


def parse(text: str, verify: bool = True):
    """Document text to a :class:`GradedLieAlgebra` (graded) or :class:`LieAlgebraFp`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", "$", exc.lineno) from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    rows = _row_lines(text)
    if not isinstance(doc.get("table"), list) or len(rows) != len(doc["table"]):
        rows = {}
    unknown = sorted(set(doc) - _KEYS)
    if unknown:
        raise SchemaError(f"unknown keys {unknown}")
    missing = sorted(_REQUIRED - set(doc))
    if missing:
        raise SchemaError(f"missing keys {missing}")
    if doc["format_version"] != FORMAT_VERSION:
        raise SchemaError(f"unsupported format {doc['format_version']!r}", "$.format_version")
    p = doc["p"]
    if not _is_int(p):
        raise SchemaError("p must be an integer", "$.p")
    try:
        check_prime(p)
    except FpError as exc:
        raise SchemaError(str(exc), "$.p") from None
    dim = doc["dim"]
    if not _is_int(dim) or dim < 0:
        raise SchemaError("dim must be a nonnegative integer", "$.dim")
    labels = doc["labels"]
    if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
        raise SchemaError(f"labels must be {dim} strings", "$.labels")
    grading = doc.get("grading")
    if grading is not None:
        if not isinstance(grading, list) or not all(_is_int(d) for d in grading):
            raise SchemaError("grading must be a list of integers", "$.grading")
        if len(grading) != dim:
            raise SchemaError(f"grading has length {len(grading)}, expected {dim}", "$.grading")
    table = doc["table"]
    if not isinstance(table, list):
        raise SchemaError("table must be a list", "$.table")
    I, J, K, C = [], [], [], []
    seen = set()
    for r, row in enumerate(table):
        path, line = f"$.table[{r}]", rows.get(r)
        if not (isinstance(row, list) and len(row) == 3 and _is_int(row[0]) and _is_int(row[1]) and isinstance(row[2], list)):
            raise SchemaError("row must be [i, j, [[k, c], ...]]", path, line)
        i, j, terms = row
        if not (0 <= i < dim and 0 <= j < dim):
            raise SchemaError(f"index out of range for dim {dim}", path, line)
        if i >= j:
            raise SchemaError("rows need i < j", path, line)
        if (i, j) in seen:
            raise SchemaError(f"duplicate pair ({i}, {j})", path, line)
        seen.add((i, j))
        ks = set()
        for t, term in enumerate(terms):
            tpath = f"{path}[2][{t}]"
            if not (isinstance(term, list) and len(term) == 2 and _is_int(term[0]) and _is_int(term[1])):
                raise SchemaError("term must be [k, c]", tpath, line)
            k, c = term
            if not 0 <= k < dim:
                raise SchemaError(f"index {k} out of range for dim {dim}", tpath, line)
            if k in ks:
                raise SchemaError(f"duplicate target index {k}", tpath, line)
            if c == 0:
                raise SchemaError("zero coefficient (omit zero terms)", tpath, line)
            if not 0 < c < p:
                raise SchemaError(f"coefficient {c} not reduced mod {p}", tpath, line)
            ks.add(k)
            I.append(i)
            J.append(j)
            K.append(k)
            C.append(c)
    alg = LieAlgebraFp(p, labels, I, J, K, C)
    out = alg if grading is None else GradedLieAlgebra(alg, grading)
    if verify:
        verify_axioms(out)
    return out


def verify_axioms(A) -> None:
    """Raise :class:`AxiomError` on a Jacobi, antisymmetry or grading violation."""
    alg = A.alg if isinstance(A, GradedLieAlgebra) else A
    rep = check_structure(alg)
    if not rep.clean:
        w = (rep.jacobi or rep.antisymmetry)[0]
        raise AxiomError(f"structure axioms fail at basis triple {tuple(w)}", tuple(w))
    if isinstance(A, GradedLieAlgebra):
        g = check_grading(A)
        if not g.clean:
            w = g.violations[0]
            raise AxiomError(f"grading fails at basis triple {tuple(w)}", tuple(w))


def to_document(A) -> dict:
    G = A if isinstance(A, GradedLieAlgebra) else None
    alg = A.alg if G is not None else A
    rows = {}
    for i, j, k, c in zip(alg.I.tolist(), alg.J.tolist(), alg.K.tolist(), alg.C.tolist()):
        rows.setdefault((i, j), []).append([k, c])
    table = [[i, j, sorted(ts)] for (i, j), ts in sorted(rows.items())]
    doc = {
        "format_version": FORMAT_VERSION,
        "p": alg.p,
        "dim": alg.dim,
        "labels": list(alg.labels),
        "table": table,
    }
    if G is not None:
        doc["grading"] = [int(d) for d in np.asarray(G.degrees)]
    return doc


def serialize(A) -> str:
    """Canonical document text (sorted keys, one table row per line)."""
    doc = to_document(A)
    dump = lambda x: json.dumps(x, separators=(",", ":"), ensure_ascii=False)
    parts = []
    for key in sorted(doc):
        if key == "table":
            body = ",\n".join("  " + dump(row) for row in doc["table"])
            parts.append(f'"table":[\n{body}\n]' if body else '"table":[]')
        else:
            parts.append(f"{dump(key)}:{dump(doc[key])}")
    return "{\n" + ",\n".join(parts) + "\n}\n"
