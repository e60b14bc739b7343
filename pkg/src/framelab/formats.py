"""Input files: JSON documents or whitespace matrices.

Accepted forms:

* ``{"field": "real", "dim": N, "vectors": [[...], ...]}``
* ``{"dim": N, "subspaces": [{"basis": [[...], ...]}, ...]}``
* a bare JSON list of rows
* plain text, one vector per line, whitespace separated (float mode)

Entries are JSON numbers or ``"p/q"`` strings; a string anywhere forces
exact arithmetic, as do all-integer inputs. Complex entries are written
as ``[re, im]`` pairs with ``"field": "complex"``. A document may also carry
an ``"operator"`` matrix.
"""

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .errors import DimensionMismatch, ParseError, ZeroVector
from .frame_model import Subspace, SubspaceFamily, VectorFamily

FIXTURE_DIR = Path(__file__).parent / "fixtures"


class ParsedInput(NamedTuple):
    obj: object  # VectorFamily or SubspaceFamily
    canonical: dict
    digest: str
    operator: object = None


def _scalar(x, where):
    if isinstance(x, bool) or x is None:
        raise ParseError(f"{where}: not a number: {x!r}")
    if isinstance(x, (int, float)):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot read {x!r} as a rational") from None
    raise ParseError(f"{where}: not a number: {x!r}")


def _complex_scalar(x, where):
    if isinstance(x, list) and len(x) == 2:
        return complex(float(_scalar(x[0], where)), float(_scalar(x[1], where)))
    return complex(float(_scalar(x, where)))


def _rows(data, where, dim=None, complex_=False):
    if not isinstance(data, list) or any(not isinstance(r, list) for r in data):
        raise ParseError(f"{where}: expected a list of rows")
    conv = _complex_scalar if complex_ else _scalar
    rows = [[conv(x, f"{where} row {i + 1}") for x in r] for i, r in enumerate(data)]
    lengths = {len(r) for r in rows}
    if len(lengths) > 1:
        raise ParseError(f"{where}: ragged rows with lengths {sorted(lengths)}")
    if dim is not None and lengths and lengths != {dim}:
        raise DimensionMismatch(f"{where}: rows have length {lengths.pop()}, dim is {dim}")
    for i, r in enumerate(rows):
        if all(x == 0 for x in r):
            raise ZeroVector(f"{where}: row {i + 1} is the zero vector", i + 1, None)
    return rows


def _exact_wanted(rows, mode):
    if mode == "exact":
        return True
    if mode == "float":
        return False
    return all(isinstance(x, (int, Fraction)) for r in rows for x in r)


def _encode_scalar(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def _canonical_rows(rows):
    return [[_encode_scalar(x) for x in r] for r in rows]


def digest_of(canonical):
    text = json.dumps(canonical, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def _build_vectors(rows, dim, field, mode):
    complex_ = field == "complex"
    if complex_:
        fam = VectorFamily.from_rows(rows, dim=dim, exact=False, field="complex")
    else:
        exact = _exact_wanted(rows, mode)
        fam = VectorFamily.from_rows(
            [[x if exact or not isinstance(x, Fraction) else float(x) for x in r] for r in rows], dim=dim, exact=exact)
    return fam


def from_document(doc, mode=None):
    """ParsedInput from a decoded JSON document (dict or bare list)."""
    if isinstance(doc, list):
        doc = {"vectors": doc}
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object or a list of rows")
    if mode is None:
        mode = doc.get("mode")  # echoed inputs carry the mode they were read in
    if mode not in (None, "exact", "float"):
        raise ParseError(f"unknown mode {mode!r}")
    field = doc.get("field", "real")
    if field not in ("real", "complex"):
        raise ParseError(f"unknown field {field!r}")
    dim = doc.get("dim")
    if dim is not None and (not isinstance(dim, int) or isinstance(dim, bool) or dim < 0):
        raise ParseError(f"dim must be a nonnegative integer, got {dim!r}")
    complex_ = field == "complex"
    operator = None
    canonical = {"field": field}
    if "operator" in doc:
        op_rows = _rows(doc["operator"], "operator") if doc["operator"] else []
        operator = op_rows
        canonical["operator"] = _canonical_rows(op_rows)
    if "vectors" in doc:
        rows = _rows(doc["vectors"], "vectors", dim, complex_)
        if dim is None:
            if not rows:
                raise ParseError("an empty family needs an explicit dim")
            dim = len(rows[0])
        obj = _build_vectors(rows, dim, field, mode)
        canonical.update(dim=dim, vectors=_canonical_rows(rows))
    elif "subspaces" in doc:
        if complex_:
            raise ParseError("subspace families are real only")
        subs = doc["subspaces"]
        if not isinstance(subs, list) or not subs:
            raise ParseError("subspaces must be a nonempty list")
        sets = []
        for k, s in enumerate(subs, start=1):
            basis = s.get("basis") if isinstance(s, dict) else s
            rows = _rows(basis, f"subspace {k}", dim)
            if not rows:
                raise ParseError(f"subspace {k} is zero-dimensional")
            if dim is None:
                dim = len(rows[0])
            sets.append(rows)
        exact = all(_exact_wanted(r, mode) for r in sets)
        subspaces = []
        for rows in sets:
            if not exact:
                rows = [[float(x) for x in r] for r in rows]
            subspaces.append(Subspace.from_spanning(rows, dim=dim, exact=exact))
        obj = SubspaceFamily(tuple(subspaces))
        canonical.update(dim=dim, subspaces=[{"basis": _canonical_rows(r)} for r in sets])
    elif operator is not None:
        obj = None
    else:
        raise ParseError("document has neither 'vectors' nor 'subspaces'")
    if mode:
        canonical["mode"] = mode
    return ParsedInput(obj, canonical, digest_of(canonical), operator)


def _parse_text_matrix(text):
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0]
        if not stripped.strip():
            continue
        row = []
        col = 1
        for token in stripped.split():
            col = line.index(token, col - 1) + 1
            try:
                row.append(float(Fraction(token)) if "/" in token else float(token))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"cannot read {token!r} as a number", lineno, col) from None
            col += len(token)
        if width is not None and len(row) != width:
            raise ParseError(f"row has {len(row)} entries, expected {width}", lineno, 1)
        width = len(row)
        if all(x == 0 for x in row):
            raise ZeroVector("zero vector", lineno, 1)
        rows.append(row)
    if not rows:
        raise ParseError("empty input", 1, 1)
    return rows


def parse_text(text, mode=None):
    """Parse file contents (JSON or whitespace matrix)."""
    stripped = text.lstrip()
    if not stripped:
        raise ParseError("empty input", 1, 1)
    if stripped[0] in "[{":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        return from_document(doc, mode)
    rows = _parse_text_matrix(text)
    return from_document({"vectors": rows}, mode or "float")


def fixture_path(name):
    """Path of a bundled fixture, accepting ``name``, ``name.json`` or ``examples/name.json``."""
    stem = Path(name).name
    if stem.endswith(".json"):
        stem = stem[:-5]
    p = FIXTURE_DIR / f"{stem}.json"
    return p if p.exists() else None


def fixture_names():
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def load_fixture(name, mode=None):
    p = fixture_path(name)
    if p is None:
        raise FileNotFoundError(f"no fixture named {name!r}")
    return parse_text(p.read_text(), mode)


def parse_input(source, mode=None, stdin=None):
    """Read a path, ``-`` for stdin, or a bundled fixture name."""
    if source == "-":
        import sys

        return parse_text((stdin or sys.stdin).read(), mode)
    p = Path(source)
    if not p.exists():
        fp = fixture_path(source)
        if fp is None:
            raise ParseError(f"no such file or fixture: {source}")
        p = fp
    return parse_text(p.read_text(), mode)
