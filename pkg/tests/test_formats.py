import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from framelab.errors import DimensionMismatch, ParseError, ZeroVector
from framelab.formats import (
    digest_of,
    fixture_names,
    fixture_path,
    load_fixture,
    parse_input,
    parse_text,
)
from framelab.frame_model import SubspaceFamily


def test_json_vectors_exact_and_float():
    p = parse_text('{"vectors": [[1, "1/2"], [0, 3]]}')
    assert p.obj.exact and p.obj.vectors[0, 1] == Fraction(1, 2)
    assert p.canonical["vectors"] == [[1, "1/2"], [0, 3]]
    q = parse_text("[[1.5, 0.0], [0.0, 1.0]]")
    assert not q.obj.exact
    assert parse_text("[[1, 0], [0, 1]]", mode="float").obj.exact is False
    assert parse_text("[[1.5, 0.0], [0.0, 1.0]]", mode="exact").obj.exact


def test_complex_and_subspaces():
    p = parse_text('{"field": "complex", "vectors": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}')
    assert p.obj.field == "complex" and p.obj.vectors[0, 1] == 1j
    s = parse_text('{"subspaces": [{"basis": [[1, 0, 0]]}, [[0, 1, 0], [0, 0, 1]]]}')
    assert isinstance(s.obj, SubspaceFamily) and [w.dim for w in s.obj] == [1, 2]


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_text('{"vectors": [[1, 2],\n [3, 4,]]}')
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        parse_text("1 2\n3 x\n")
    assert (exc.value.line, exc.value.column) == (2, 3)
    with pytest.raises(ZeroVector):
        parse_text("1 2\n0 0\n")
    with pytest.raises(ZeroVector):
        parse_text('{"vectors": [[0, 0]]}')
    with pytest.raises(ParseError):
        parse_text('{"vectors": [[1, 2], [3]]}')
    with pytest.raises(DimensionMismatch):
        parse_text('{"dim": 3, "vectors": [[1, 2]]}')
    with pytest.raises(ParseError):
        parse_text('{"vectors": [[true, 1]]}')
    with pytest.raises(ParseError):
        parse_text('{"stuff": 1}')
    with pytest.raises(ParseError):
        parse_text("")


def test_text_matrix_with_comments():
    p = parse_text("# three vectors\n1 0\n0 1   # e2\n1/2 1/2\n")
    assert p.obj.M == 3 and not p.obj.exact
    assert p.obj.vectors[2, 0] == 0.5


def test_fixtures_and_example_paths():
    assert "johnsex5" in fixture_names()
    assert fixture_path("examples/johnsex5.json") == fixture_path("johnsex5")
    assert parse_input("examples/johnsex5.json").digest == load_fixture("johnsex5").digest
    with pytest.raises(ParseError):
        parse_input("no/such/file.json")
    with pytest.raises(FileNotFoundError):
        load_fixture("nope")


def test_stdin(monkeypatch):
    import io

    p = parse_input("-", stdin=io.StringIO("[[1, 0], [0, 1]]"))
    assert p.obj.M == 2


@given(st.lists(st.lists(st.integers(-9, 9), min_size=2, max_size=2).filter(any), min_size=1, max_size=5))
def test_digest_is_canonical(rows):
    a = parse_text(json.dumps({"vectors": rows}))
    b = parse_text(json.dumps({"vectors": rows}, indent=3))
    assert a.digest == b.digest == digest_of(a.canonical)
