"""Command-line interface ``gradlie``.

Exit codes: 0 success, 1 usage, 2 parse, 3 axiom violation, 4 hypotheses
fail, 5 unrecognized, 6 resource cap, 7 catalog collision.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import cartan as _cartan
from . import classical as _classical
from . import melikyan as _melikyan
from . import modrep as _modrep
from . import recognizer as _recognizer
from .document import AxiomError, SchemaError, parse, serialize
from .graded import (
    GradedLieAlgebra,
    HypothesesNotMet,
    check_grading,
    minimal_ideal,
    one_transitivity_witness,
    transitivity_witness,
    weisfeiler_radical,
)
from .liecore import check_structure

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_AXIOM = 3
EXIT_HYPOTHESES = 4
EXIT_UNRECOGNIZED = 5
EXIT_CAP = 6
EXIT_COLLISION = 7

_CARTAN_FAMILIES = {"W", "S", "S1", "CS", "H", "H2", "CH", "K", "K1"}


class UsageError(ValueError):
    pass


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Fail(EXIT_USAGE, f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# construction


def _ints(text: str, what: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v != "")
    except ValueError:
        raise UsageError(f"bad {what} {text!r}") from None


def construct_algebra(family: str, p: int = 5, reverse: bool = False, cap=None) -> GradedLieAlgebra:
    """Build the graded algebra named by a family string.

    ``classical:<type>:<rank>:<variant>:<node>``, ``<X>:<m>:<n-tuple>`` for a
    Cartan family ``X``, or ``melikyan:<n1>:<n2>``.
    """
    parts = family.split(":")
    head = parts[0]
    if head == "classical":
        if len(parts) != 5:
            raise UsageError("classical family is classical:<type>:<rank>:<variant>:<node>")
        typ, rank, variant, node = parts[1].upper(), parts[2], parts[3], parts[4]
        try:
            rank, node = int(rank), int(node)
        except ValueError:
            raise UsageError("rank and node must be integers") from None
        if not 1 <= node <= rank:
            raise UsageError(f"node must lie in 1..{rank}")
        C = _classical.chevalley_algebra(typ, p, variant=variant, rank=rank)
        if cap is not None and C.alg.dim > _cartan.cap_limit(cap):
            raise _cartan.ResourceLimit(f"dimension {C.alg.dim} exceeds cap")
        G = _classical.standard_grading(C, node)
    elif head in _CARTAN_FAMILIES:
        if len(parts) != 3:
            raise UsageError(f"{head} family is {head}:<m>:<n1,...,nm>")
        try:
            m = int(parts[1])
        except ValueError:
            raise UsageError("m must be an integer") from None
        n = _ints(parts[2], "n-tuple")
        if len(n) == 1:
            n = n * m
        if len(n) != m or min(n, default=0) < 1:
            raise UsageError(f"n-tuple must have {m} positive entries")
        G = _cartan.build_cartan(head, m, n, p, cap=cap)
    elif head.lower() == "melikyan":
        if len(parts) != 3:
            raise UsageError("melikyan family is melikyan:<n1>:<n2>")
        try:
            n1, n2 = int(parts[1]), int(parts[2])
        except ValueError:
            raise UsageError("n1 and n2 must be integers") from None
        G = _melikyan.build_M(n1, n2, p, cap=cap)
    else:
        raise UsageError(f"unknown family {head!r}")
    return G.reversed() if reverse else G


# ---------------------------------------------------------------------------
# helpers


def _read(path: str, verify: bool):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"cannot read {path}: {exc}") from None
    try:
        return parse(text, verify=verify)
    except SchemaError as exc:
        raise _Fail(EXIT_PARSE, f"schema error: {exc}") from None
    except AxiomError as exc:
        raise _Fail(EXIT_AXIOM, f"axiom violation: {exc}") from None


def _graded(A) -> GradedLieAlgebra:
    if not isinstance(A, GradedLieAlgebra):
        raise _Fail(EXIT_USAGE, "this command needs a graded document")
    return A


def _emit(obj, out=None):
    out = sys.stdout if out is None else out
    out.write(json.dumps(obj, sort_keys=True, indent=1, default=_jsonable) + "\n")


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if hasattr(x, "basis") and hasattr(x, "dim"):
        return {"dim": x.dim, "basis": x.basis.tolist()}
    return str(x)


def _parts_dims(G: GradedLieAlgebra, S) -> dict:
    return {str(d): int(v.dim) for d, v in sorted(G.graded_subspace(S).items())}


def _hypotheses(G, rng) -> dict:
    rep = _recognizer.check_hypotheses(G, rng)
    diag = {}
    for k, v in rep.diagnostics.items():
        if hasattr(v, "basis"):
            diag[k] = {"invariant_subspace_dim": int(v.dim), "basis": v.basis.tolist()}
        elif isinstance(v, tuple) and len(v) == 2:
            diag[k] = {"degree": int(v[0]), "kernel_vector": np.asarray(v[1]).tolist()}
        else:
            diag[k] = v
    return {
        "a": rep.a_ok,
        "b": rep.b_ok,
        "b_verdict": "irreducible over F_p" if rep.b_ok else "reducible over F_p",
        "c": rep.c_ok,
        "d": rep.d_ok,
        "ok": rep.ok,
        "diagnostics": diag,
        "note": "irreducibility is tested over F_p; absolute irreducibility can differ in general",
    }


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args, rng):
    try:
        G = construct_algebra(args.family, args.p, args.reverse_grading, args.cap)
    except (UsageError, ValueError) as exc:
        raise _Fail(EXIT_USAGE, str(exc)) from None
    text = serialize(G)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args, rng):
    A = _read(args.file, verify=False)
    alg = A.alg if isinstance(A, GradedLieAlgebra) else A
    rep = check_structure(alg)
    out = {
        "dim": alg.dim,
        "p": alg.p,
        "jacobi_violations": [list(t) for t in rep.jacobi[:20]],
        "antisymmetry_violations": [list(t) for t in rep.antisymmetry[:20]],
    }
    code = EXIT_OK if rep.clean else EXIT_AXIOM
    if isinstance(A, GradedLieAlgebra):
        g = check_grading(A)
        out["grading_violations"] = [list(t) for t in g.violations[:20]]
        out["q"], out["r"], out["dims"] = A.q, A.r, A.dims()
        if not g.clean:
            code = EXIT_AXIOM
        if code == EXIT_OK:
            tw, ow = transitivity_witness(A), one_transitivity_witness(A)
            out["transitive"] = tw is None
            out["one_transitive"] = ow is None
            out["hypotheses"] = _hypotheses(A, rng)
            if not out["hypotheses"]["ok"]:
                code = EXIT_HYPOTHESES
    _emit(out)
    return code


def cmd_radical(args, rng):
    G = _graded(_read(args.file, not args.no_verify))
    R = weisfeiler_radical(G)
    _emit({"dim": R.dim, "dims": _parts_dims(G, R), "basis": R.basis.tolist()})
    return EXIT_OK


def cmd_minimal_ideal(args, rng):
    G = _graded(_read(args.file, not args.no_verify))
    try:
        I, s = minimal_ideal(G)
    except HypothesesNotMet as exc:
        raise _Fail(EXIT_HYPOTHESES, f"hypotheses not met: {exc}") from None
    _emit({"dim": I.dim, "top_degree": s, "dims": _parts_dims(G, I), "basis": I.basis.tolist()})
    return EXIT_OK


def cmd_decompose(args, rng):
    G = _graded(_read(args.file, not args.no_verify))
    j = args.degree
    if G.n(j) == 0:
        raise _Fail(EXIT_USAGE, f"g_{j} is zero")
    g0, Mj = G.component(0), G.component(j)
    try:
        S = _modrep.analyze_g0(g0, G, rng)
    except _modrep.NotReductive as exc:
        raise _Fail(EXIT_HYPOTHESES, f"g_0 is not classical reductive: {exc}") from None
    wd = _modrep.weight_decomposition(Mj, S.t, G)
    weights = [
        {"eigenvalues": list(w), "omega": list(S.omega_coords(w)), "dim": V.dim}
        for w, V in zip(wd.weights, wd.spaces)
    ]
    prims = [
        {"sign": v.sign, "omega": list(S.omega_coords(v.weight)), "canonical": [[t, list(c)] for t, c in S.canonical_label(v.weight)], "vector": v.vector.tolist()}
        for v in _modrep.primitive_vectors(Mj, S, G)
    ]
    chain = _modrep.composition_series(Mj, g0, G, rng)
    dims = [U.dim for U in chain]
    _emit(
        {
            "degree": j,
            "dim": G.n(j),
            "g0_ideals": [I.label for I in _modrep.decompose_g0(g0, G, rng)],
            "weights": weights,
            "weight_decomposition_complete": wd.complete,
            "primitive_vectors": prims,
            "composition_series_dims": dims,
            "composition_factor_dims": [b - a for a, b in zip(dims, dims[1:])],
        }
    )
    return EXIT_OK


def cmd_recognize(args, rng):
    G = _graded(_read(args.file, not args.no_verify))
    res = _recognizer.recognize(G, cap=args.cap, rng=rng)
    if isinstance(res, str):
        print(res)
        return EXIT_OK
    if isinstance(res, _recognizer.HypothesesFail):
        print(f"hypotheses fail: {','.join(res.report.failed())}", file=sys.stderr)
        return EXIT_HYPOTHESES
    print(f"unrecognized: {res.message}", file=sys.stderr)
    if res.fingerprint is not None:
        _emit(res.fingerprint.as_dict(), sys.stderr)
    return EXIT_CAP if res.caps_too_small else EXIT_UNRECOGNIZED


def cmd_catalog(args, rng):
    entries, excluded = _recognizer.build_catalog(
        args.p, args.cap, max_rank=args.max_rank, with_excluded=True, workers=args.threads
    )
    out = {
        "p": args.p,
        "cap": _cartan.cap_limit(args.cap),
        "entries": [{"label": e.label, "dim": e.dim, "fingerprint": e.fingerprint.as_dict()} for e in entries],
        "excluded": [{"label": lab, "failed": failed} for lab, failed in excluded],
    }
    code = EXIT_OK
    if args.collisions:
        coll = _recognizer.catalog_collisions(entries)
        out["collisions"] = coll
        if coll:
            code = EXIT_COLLISION
    _emit(out)
    return code


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (outputs are deterministic given it)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for catalog construction")
    common.add_argument("--no-verify", action="store_true", help="skip structure and grading checks when parsing")

    ap = _Parser(prog="gradlie", description="Modular graded Lie algebras over F_p.", parents=[common])
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="build a catalog algebra as a JSON document")
    c.add_argument("family", help="classical:<type>:<rank>:<variant>:<node> | W|S|S1|CS|H|H2|CH|K|K1:<m>:<n-tuple> | melikyan:<n1>:<n2>")
    c.add_argument("--p", type=int, default=5)
    c.add_argument("--reverse-grading", action="store_true")
    c.add_argument("--cap", type=int, default=None)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_construct)

    for name, func, hlp in (
        ("verify", cmd_verify, "structure, grading, transitivity and hypothesis report"),
        ("radical", cmd_radical, "Weisfeiler radical"),
        ("minimal-ideal", cmd_minimal_ideal, "unique minimal ideal"),
        ("decompose", cmd_decompose, "g_0-module structure of g_j"),
        ("recognize", cmd_recognize, "identify against the catalog"),
    ):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("file", help="document path or - for stdin")
        s.set_defaults(func=func)
        if name == "decompose":
            s.add_argument("--degree", type=int, default=-1)
        if name == "recognize":
            s.add_argument("--cap", type=int, default=None)

    k = sub.add_parser("catalog", parents=[common], help="fingerprints of the catalog")
    k.add_argument("--p", type=int, default=5)
    k.add_argument("--cap", type=int, default=None)
    k.add_argument("--max-rank", type=int, default=4)
    k.add_argument("--collisions", action="store_true")
    k.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "func", None):
            ap.print_help(sys.stderr)
            return EXIT_USAGE
        if args.threads < 1:
            raise _Fail(EXIT_USAGE, "--threads must be positive")
        rng = np.random.default_rng(args.seed)
        return args.func(args, rng)
    except _Fail as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except _cartan.ResourceLimit as exc:
        print(f"resource cap: {exc} (raise --cap or GRADLIE_CAP)", file=sys.stderr)
        return EXIT_CAP
    except BrokenPipeError:
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
