import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradlie import cartan, classical
from gradlie.document import AxiomError, SchemaError, parse, serialize, to_document
from gradlie.graded import GradedLieAlgebra
from gradlie.liecore import LieAlgebraFp

P = 5


def sl2_doc(**over):
    doc = {
        "format_version": "gradlie/1",
        "p": 5,
        "dim": 3,
        "labels": ["e", "h", "f"],
        "grading": [1, 0, -1],
        "table": [[0, 1, [[0, 3]]], [0, 2, [[1, 1]]], [1, 2, [[2, 3]]]],
    }
    doc.update(over)
    return json.dumps(doc)


def test_parse_sl2():
    G = parse(sl2_doc())
    assert isinstance(G, GradedLieAlgebra) and G.dims() == [1, 1, 1]
    A = parse(json.dumps({k: v for k, v in json.loads(sl2_doc()).items() if k != "grading"}))
    assert isinstance(A, LieAlgebraFp)


@pytest.mark.parametrize(
    "make",
    [
        lambda: cartan.build_W(2, 1, P),
        lambda: cartan.build_H(2, 1, P, "H2"),
        lambda: classical.standard_grading(classical.chevalley_algebra("G2", P), 2),
        lambda: classical.chevalley_algebra("A2", 7, "gl").alg,
    ],
)
def test_roundtrip_bit_exact(make):
    A = make()
    text = serialize(A)
    B = parse(text)
    assert serialize(B) == text
    assert text.endswith("\n") and json.loads(text) == to_document(A)


@given(st.integers(0, 2**32 - 1))
def test_roundtrip_after_permutation(seed):
    import numpy as np

    G = cartan.build_W(1, 1, P)
    H = G.permuted(np.random.default_rng(seed).permutation(G.dim))
    assert serialize(parse(serialize(H))) == serialize(H)


@pytest.mark.parametrize(
    "over,path",
    [
        ({"format_version": "gradlie/0"}, "$.format_version"),
        ({"p": 4}, "$.p"),
        ({"p": True}, "$.p"),
        ({"dim": -1}, "$.dim"),
        ({"labels": ["e", "h"]}, "$.labels"),
        ({"grading": [1, 0]}, "$.grading"),
        ({"table": [[1, 0, [[0, 1]]]]}, "$.table[0]"),
        ({"table": [[0, 1, [[0, 3]]], [0, 1, [[0, 3]]]]}, "$.table[1]"),
        ({"table": [[0, 1, [[0, 0]]]]}, "$.table[0][2][0]"),
        ({"table": [[0, 1, [[0, 7]]]]}, "$.table[0][2][0]"),
        ({"table": [[0, 1, [[0, 1], [0, 2]]]]}, "$.table[0][2][1]"),
        ({"table": [[0, 5, [[0, 1]]]]}, "$.table[0]"),
        ({"extra": 1}, "$"),
    ],
)
def test_schema_errors(over, path):
    with pytest.raises(SchemaError) as info:
        parse(sl2_doc(**over))
    assert info.value.path == path


def test_schema_error_line_numbers():
    text = serialize(cartan.build_W(1, 1, P)).replace("[[", "[[0,0],[", 1)
    with pytest.raises(SchemaError) as info:
        parse(text)
    assert info.value.line is not None and info.value.line > 1


def test_invalid_json():
    with pytest.raises(SchemaError):
        parse("{")


def test_axiom_errors():
    with pytest.raises(AxiomError) as info:
        parse(sl2_doc(grading=[1, 0, 0]))
    assert len(info.value.witness) == 3
    # [h,f] = f instead of -2f
    bad = sl2_doc(table=[[0, 1, [[0, 3]]], [0, 2, [[1, 1]]], [1, 2, [[2, 1]]]])
    with pytest.raises(AxiomError):
        parse(bad)
    assert parse(bad, verify=False).dim == 3
