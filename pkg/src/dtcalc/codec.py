"""JSON documents for every value type.

Each document carries ``"schemaVersion": 1`` and a ``"kind"`` tag. Integers
outside the signed 64-bit range travel as decimal strings. Spaces are
referenced from other documents by name, so loading needs a registry of the
spaces seen so far.
"""

from __future__ import annotations

import json
import re
from typing import Any, Mapping

from .behrend import BehrendData, Cycle, EuMatrix, Provenance
from .cellspace import CellMap, CellSpace, Mode, validate_map, validate_space
from .constructible import ConstructibleFunction
from .errors import DtcalcError, SchemaError, VersionError
from .motivic import MotivicClass
from .poly import IntPoly
from .series import TruncatedSeries

SCHEMA_VERSION = 1
_INT64 = 1 << 63
_DECIMAL = re.compile(r"-?\d+\Z")

FIELDS = {
    "space": ({"name", "mode", "cells", "closure"}, set()),
    "map": ({"source", "target", "assign"}, {"smooth"}),
    "cf": ({"space", "values"}, set()),
    "behrend": ({"space", "values", "provenance"}, {"twisted"}),
    "cycle": ({"space", "multiplicities"}, set()),
    "k0class": ({"space", "entries"}, set()),
    "eumatrix": ({"space", "entries"}, set()),
    "presentation": ({"target", "terms"}, set()),
    "report": ({"checks", "seeds", "failures"}, set()),
    "poly": ({"coefficients"}, {"variable"}),
    "series": ({"coefficients"}, set()),
    "value": ({"value"}, set()),
    "membership": ({"member", "coefficients", "combination", "residual", "column", "pivot", "certified"}, set()),
}


def encode_int(v: int):
    return v if -_INT64 <= v < _INT64 else str(v)


def decode_int(v, path) -> int:
    if isinstance(v, bool):
        raise SchemaError("expected an integer, got a boolean", path)
    if isinstance(v, int):
        return v
    if isinstance(v, str) and _DECIMAL.match(v):
        return int(v)
    raise SchemaError(f"expected an integer, got {v!r}", path)


def _envelope(kind: str, body: dict) -> dict:
    return {"schemaVersion": SCHEMA_VERSION, "kind": kind, **body}


def _check_fields(doc: Mapping, kind: str, path=()):
    required, optional = FIELDS[kind]
    allowed = required | optional | {"schemaVersion", "kind"}
    for key in doc:
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r}", (*path, key))
    for key in required:
        if key not in doc:
            raise SchemaError(f"missing field {key!r}", (*path, key))


def _expect(value, typ, path, what):
    if not isinstance(value, typ) or isinstance(value, bool) and typ is not bool:
        raise SchemaError(f"expected {what}", path)
    return value


def save(obj) -> dict:
    """Serialize a value to its document (plain dict, deterministic content)."""
    if isinstance(obj, CellSpace):
        return _envelope("space", {
            "name": obj.name,
            "mode": obj.mode.value,
            "cells": [{"id": c, "dim": obj.dim(c)} for c in obj.cells],
            "closure": [list(p) for p in obj.covers()],
        })
    if isinstance(obj, CellMap):
        return _envelope("map", {
            "source": obj.source.name,
            "target": obj.target.name,
            "assign": [[e, obj(e)] for e in obj.source.cells],
            "smooth": obj.smooth,
        })
    if isinstance(obj, ConstructibleFunction):
        return _envelope("cf", {"space": obj.space.name, "values": {c: encode_int(v) for c, v in obj.items()}})
    if isinstance(obj, BehrendData):
        return _envelope("behrend", {
            "space": obj.space.name,
            "values": {c: encode_int(v) for c, v in obj.function.items()},
            "provenance": obj.provenance.value,
            "twisted": obj.twisted,
        })
    if isinstance(obj, Cycle):
        return _envelope("cycle", {"space": obj.space.name, "multiplicities": {c: encode_int(m) for c, m in obj.items()}})
    if isinstance(obj, MotivicClass):
        entries = [{"cell": c, "fiberDim": d, "mult": encode_int(m)} for (c, d), m in sorted(obj.items())]
        return _envelope("k0class", {"space": obj.space.name, "entries": entries})
    if isinstance(obj, EuMatrix):
        entries = [{"sub": s, "super": t, "value": encode_int(v)} for (s, t), v in sorted(obj.entries.items())]
        return _envelope("eumatrix", {"space": obj.space.name, "entries": entries})
    if isinstance(obj, IntPoly):
        return _envelope("poly", {"variable": "y", "coefficients": [encode_int(c) for c in obj.coeffs]})
    if isinstance(obj, TruncatedSeries):
        return _envelope("series", {"coefficients": [encode_int(c) for c in obj.coeffs]})
    raise TypeError(f"no document form for {type(obj).__name__}")


def _space_ref(doc, key, spaces, path) -> CellSpace:
    name = _expect(doc[key], str, (*path, key), "a space name")
    try:
        return spaces[name]
    except KeyError:
        raise SchemaError(f"unknown space {name!r}", (*path, key)) from None


def _int_table(table, path) -> dict:
    _expect(table, dict, path, "an object of integers")
    return {c: decode_int(v, (*path, c)) for c, v in table.items()}


def _load_map_body(doc, spaces, path) -> CellMap:
    src = _space_ref(doc, "source", spaces, path)
    tgt = _space_ref(doc, "target", spaces, path)
    assign = {}
    for i, pair in enumerate(_expect(doc["assign"], list, (*path, "assign"), "a list")):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise SchemaError("expected [source cell, target cell]", (*path, "assign", i))
        if pair[0] in assign:
            raise SchemaError(f"cell {pair[0]!r} assigned twice", (*path, "assign", i))
        assign[pair[0]] = pair[1]
    smooth = _expect(doc.get("smooth", False), bool, (*path, "smooth"), "a boolean")
    return validate_map(src, tgt, assign, smooth)


def check_version(doc, path=()):
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object", path)
    if "schemaVersion" not in doc:
        raise VersionError("document has no schemaVersion")
    if doc["schemaVersion"] != SCHEMA_VERSION:
        raise VersionError(f"unsupported schemaVersion {doc['schemaVersion']!r}")
    kind = doc.get("kind")
    if kind not in FIELDS:
        raise SchemaError(f"unknown document kind {kind!r}", (*path, "kind"))
    return kind


def load(doc: Mapping[str, Any], spaces: Mapping[str, CellSpace] | None = None, path=()):
    """Parse one document; spaces referenced by name come from ``spaces``."""
    spaces = spaces or {}
    kind = check_version(doc, path)
    _check_fields(doc, kind, path)
    try:
        return _load(kind, doc, spaces, path)
    except (SchemaError, VersionError):
        raise
    except DtcalcError as exc:
        raise type(exc)(f"{'/'.join(map(str, path)) or '<root>'}: {exc}") from None


def _load(kind, doc, spaces, path):
    if kind == "space":
        name = _expect(doc["name"], str, (*path, "name"), "a string")
        mode = doc["mode"]
        if mode not in {m.value for m in Mode}:
            raise SchemaError(f"unknown mode {mode!r}", (*path, "mode"))
        cells = []
        for i, cell in enumerate(_expect(doc["cells"], list, (*path, "cells"), "a list")):
            cpath = (*path, "cells", i)
            _expect(cell, dict, cpath, "a cell object")
            extra = set(cell) - {"id", "dim"}
            if extra or "id" not in cell or "dim" not in cell:
                raise SchemaError("cell needs exactly 'id' and 'dim'", cpath)
            dim = decode_int(cell["dim"], (*cpath, "dim"))
            if dim < 0:
                raise SchemaError("dimension must be non-negative", (*cpath, "dim"))
            cells.append((_expect(cell["id"], str, (*cpath, "id"), "a string id"), dim))
        closure = []
        for i, pair in enumerate(_expect(doc["closure"], list, (*path, "closure"), "a list")):
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
                raise SchemaError("expected [lower, upper]", (*path, "closure", i))
            closure.append(tuple(pair))
        return validate_space(name, mode, cells, closure)
    if kind == "map":
        return _load_map_body(doc, spaces, path)
    if kind == "cf":
        space = _space_ref(doc, "space", spaces, path)
        return ConstructibleFunction(space, _int_table(doc["values"], (*path, "values")))
    if kind == "behrend":
        space = _space_ref(doc, "space", spaces, path)
        prov = doc["provenance"]
        if prov not in {p.value for p in Provenance}:
            raise SchemaError(f"unknown provenance {prov!r}", (*path, "provenance"))
        twisted = _expect(doc.get("twisted", False), bool, (*path, "twisted"), "a boolean")
        values = ConstructibleFunction(space, _int_table(doc["values"], (*path, "values")))
        return BehrendData(values, prov, twisted)
    if kind == "cycle":
        space = _space_ref(doc, "space", spaces, path)
        return Cycle(space, _int_table(doc["multiplicities"], (*path, "multiplicities")))
    if kind == "k0class":
        space = _space_ref(doc, "space", spaces, path)
        table = {}
        for i, entry in enumerate(_expect(doc["entries"], list, (*path, "entries"), "a list")):
            epath = (*path, "entries", i)
            _expect(entry, dict, epath, "an entry object")
            if set(entry) != {"cell", "fiberDim", "mult"}:
                raise SchemaError("entry needs exactly 'cell', 'fiberDim', 'mult'", epath)
            d = decode_int(entry["fiberDim"], (*epath, "fiberDim"))
            if d < 0:
                raise SchemaError("fiberDim must be non-negative", (*epath, "fiberDim"))
            key = (_expect(entry["cell"], str, (*epath, "cell"), "a cell id"), d)
            table[key] = table.get(key, 0) + decode_int(entry["mult"], (*epath, "mult"))
        return MotivicClass(space, table)
    if kind == "eumatrix":
        space = _space_ref(doc, "space", spaces, path)
        entries = {}
        for i, entry in enumerate(_expect(doc["entries"], list, (*path, "entries"), "a list")):
            epath = (*path, "entries", i)
            _expect(entry, dict, epath, "an entry object")
            if set(entry) != {"sub", "super", "value"}:
                raise SchemaError("entry needs exactly 'sub', 'super', 'value'", epath)
            entries[(entry["sub"], entry["super"])] = decode_int(entry["value"], (*epath, "value"))
        return EuMatrix(space, entries)
    if kind == "presentation":
        target = _space_ref(doc, "target", spaces, path)
        terms = []
        for i, term in enumerate(_expect(doc["terms"], list, (*path, "terms"), "a list")):
            tpath = (*path, "terms", i)
            _expect(term, dict, tpath, "a term object")
            if set(term) != {"coef", "map"}:
                raise SchemaError("term needs exactly 'coef' and 'map'", tpath)
            mdoc = _expect(term["map"], dict, (*tpath, "map"), "a map object")
            _check_fields({k: v for k, v in mdoc.items()}, "map", (*tpath, "map"))
            terms.append((decode_int(term["coef"], (*tpath, "coef")), _load_map_body(mdoc, spaces, (*tpath, "map"))))
        return target, terms
    if kind == "poly":
        coeffs = _expect(doc["coefficients"], list, (*path, "coefficients"), "a list")
        return IntPoly(decode_int(c, (*path, "coefficients", i)) for i, c in enumerate(coeffs))
    if kind == "series":
        coeffs = _expect(doc["coefficients"], list, (*path, "coefficients"), "a list")
        return TruncatedSeries([decode_int(c, (*path, "coefficients", i)) for i, c in enumerate(coeffs)])
    if kind in ("report", "value", "membership"):
        return dict(doc)
    raise SchemaError(f"unhandled kind {kind!r}", path)


def value_doc(value) -> dict:
    if isinstance(value, int) and not isinstance(value, bool):
        value = encode_int(value)
    return _envelope("value", {"value": value})


def membership_doc(result, certified: bool) -> dict:
    return _envelope("membership", {
        "member": result.member,
        "coefficients": None if result.coefficients is None else {c: encode_int(a) for c, a in result.coefficients.items()},
        "combination": {c: encode_int(a) for c, a in result.combination.items()},
        "residual": {c: encode_int(v) for c, v in result.residual.items()},
        "column": result.column,
        "pivot": encode_int(result.pivot),
        "certified": certified,
    })


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_bundle(docs, spaces: dict | None = None) -> list:
    """Load a list of documents in order, registering spaces as they appear."""
    spaces = {} if spaces is None else spaces
    out = []
    for i, doc in enumerate(docs):
        obj = load(doc, spaces, (i,))
        if isinstance(obj, CellSpace):
            if obj.name in spaces and spaces[obj.name] != obj:
                raise SchemaError(f"two different spaces named {obj.name!r}", (i, "name"))
            spaces[obj.name] = obj
        out.append(obj)
    return out


def codec(direction: str, kind: str | None, payload, spaces=None):
    if direction == "save":
        doc = save(payload)
        if kind is not None and doc["kind"] != kind:
            raise SchemaError(f"value serializes as {doc['kind']!r}, not {kind!r}")
        return doc
    if direction == "load":
        if kind is not None and isinstance(payload, dict) and payload.get("kind") != kind:
            raise SchemaError(f"expected a {kind!r} document", ("kind",))
        return load(payload, spaces)
    raise ValueError(f"unknown direction {direction!r}")
