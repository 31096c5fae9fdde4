"""Text document format for the objects and maps of this package.

Documents are JSON with a fixed shape: a schema version, a ring name
("Z", "Q" or "Fp"), a kind tag, a rank table and sparse matrix data.
Scalars are stored as decimal strings (rationals as "a/b" in lowest
terms) so the format never touches binary floats.  Serialization is
canonical: ranks sorted by (bi)degree, matrix entries by bidegree then
row then column, so serialize(parse(serialize(x))) == serialize(x) and
parse(serialize(x)) reconstructs x exactly.

Omitted (bi)degrees mean rank zero, omitted matrices mean zero maps.
"""

from __future__ import annotations

import json

from .rings import RingSpec, BadParameter, ring_from_name
from .matrices import ExactMatrix
from .chain import ChainComplex, ChainMap
from .bicomplex import Bicomplex, BicomplexMap, validate as validate_bicomplex
from .twisted import TwistedComplex, TwistedMap, validate_twisted

SCHEMA_VERSION = 1


class DocumentSyntaxError(Exception):
    """The text is not a well-formed document."""


class ValidationError(Exception):
    """The document parses but describes an invalid object."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _matrix_triplets(ring: RingSpec, m: ExactMatrix) -> list:
    out = []
    for i in range(m.rows):
        for j in range(m.cols):
            x = m[i, j]
            if not ring.is_zero(x):
                out.append([i, j, ring.format_scalar(x)])
    return out


def _family_entries(ring: RingSpec, fam: dict) -> list:
    out = []
    for key in sorted(fam):
        trip = _matrix_triplets(ring, fam[key])
        if trip:
            out.append([list(key) if isinstance(key, tuple) else [key], trip])
    return out


def to_document(obj) -> dict:
    """The JSON-ready dict form of a complex or map."""
    if isinstance(obj, ChainComplex):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "chain",
            "ring": str(obj.ring),
            "ranks": [[n, obj.ranks[n]] for n in sorted(obj.ranks)],
            "differentials": {"d": _family_entries(obj.ring, obj.d)},
        }
    if isinstance(obj, Bicomplex):
        doc = {
            "schema_version": SCHEMA_VERSION,
            "kind": "bicomplex",
            "ring": str(obj.ring),
            "ranks": [[p, q, obj.ranks[(p, q)]] for p, q in sorted(obj.ranks)],
            "differentials": {
                "dh": _family_entries(obj.ring, obj.d_h),
                "dv": _family_entries(obj.ring, obj.d_v),
            },
        }
        if obj.convention != "anticommute":
            doc["convention"] = obj.convention
        return doc
    if isinstance(obj, TwistedComplex):
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "twisted",
            "ring": str(obj.ring),
            "ranks": [[p, q, obj.ranks[(p, q)]] for p, q in sorted(obj.ranks)],
            "differentials": {
                f"d{i}": _family_entries(obj.ring, obj.ds[i])
                for i in sorted(obj.ds)
            },
        }
    if isinstance(obj, (ChainMap, BicomplexMap, TwistedMap)):
        map_kind = {
            ChainMap: "chain",
            BicomplexMap: "bicomplex",
            TwistedMap: "twisted",
        }[type(obj)]
        ring = obj.source.ring
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "map",
            "ring": str(ring),
            "map_kind": map_kind,
            "source": to_document(obj.source),
            "target": to_document(obj.target),
            "components": _family_entries(ring, obj.f),
        }
    raise BadParameter(f"cannot serialize {type(obj).__name__}")


def _dump(x, indent: int) -> str:
    """JSON text with flat lists kept on one line."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [
            f"{inner}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in x.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if all(not isinstance(e, (list, dict)) for e in x):
            return json.dumps(x)
        items = [f"{inner}{_dump(e, indent + 1)}" for e in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x)


def serialize(obj) -> str:
    return _dump(to_document(obj), 0) + "\n"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _need(doc, key, types):
    if key not in doc:
        raise DocumentSyntaxError(f"missing field {key!r}")
    val = doc[key]
    if not isinstance(val, types):
        raise DocumentSyntaxError(f"field {key!r} has the wrong type")
    return val


def _parse_key(raw, arity):
    if (
        not isinstance(raw, list)
        or len(raw) != arity
        or not all(isinstance(x, int) for x in raw)
    ):
        raise DocumentSyntaxError(f"bad degree key {raw!r}")
    return raw[0] if arity == 1 else tuple(raw)


def _parse_matrix(ring, rows, cols, triplets, where):
    if not isinstance(triplets, list):
        raise DocumentSyntaxError(f"matrix entries at {where} must be a list")
    data = [[ring.zero()] * cols for _ in range(rows)]
    for t in triplets:
        if not (isinstance(t, list) and len(t) == 3):
            raise DocumentSyntaxError(f"bad matrix entry {t!r} at {where}")
        i, j, v = t
        if not (isinstance(i, int) and isinstance(j, int)):
            raise DocumentSyntaxError(f"bad matrix index in {t!r} at {where}")
        if not (0 <= i < rows and 0 <= j < cols):
            raise ValidationError(
                [f"entry ({i},{j}) at {where} outside a {rows}x{cols} matrix"]
            )
        try:
            data[i][j] = ring.parse_scalar(str(v))
        except (ValueError, BadParameter) as exc:
            raise DocumentSyntaxError(f"bad scalar {v!r} at {where}: {exc}")
    return ExactMatrix.from_rows(ring, data)


def _parse_family(ring, entries, arity, shape_of, where):
    """shape_of(key) -> (rows, cols) for the matrix with source `key`."""
    if not isinstance(entries, list):
        raise DocumentSyntaxError(f"differential family {where} must be a list")
    fam = {}
    for e in entries:
        if not (isinstance(e, list) and len(e) == 2):
            raise DocumentSyntaxError(f"bad family entry {e!r} in {where}")
        key = _parse_key(e[0], arity)
        if key in fam:
            raise DocumentSyntaxError(f"duplicate degree {key} in {where}")
        rows, cols = shape_of(key)
        fam[key] = _parse_matrix(ring, rows, cols, e[1], f"{where}{key}")
    return fam


def _parse_ranks(raw, arity):
    ranks = {}
    for entry in raw:
        if not (isinstance(entry, list) and len(entry) == arity + 1):
            raise DocumentSyntaxError(f"bad rank entry {entry!r}")
        key = _parse_key(entry[:-1], arity)
        r = entry[-1]
        if not isinstance(r, int) or r < 0:
            raise DocumentSyntaxError(f"bad rank {r!r} at {key}")
        if key in ranks:
            raise DocumentSyntaxError(f"duplicate rank entry at {key}")
        if r:
            ranks[key] = r
    return ranks


def _object_from_document(doc) -> object:
    kind = _need(doc, "kind", str)
    try:
        ring = ring_from_name(_need(doc, "ring", str))
    except BadParameter as exc:
        raise DocumentSyntaxError(str(exc))
    raw_ranks = _need(doc, "ranks", list)
    diffs = doc.get("differentials", {})
    if not isinstance(diffs, dict):
        raise DocumentSyntaxError("field 'differentials' has the wrong type")

    if kind == "chain":
        ranks = _parse_ranks(raw_ranks, 1)
        rank = lambda n: ranks.get(n, 0)
        d = _parse_family(ring, diffs.get("d", []), 1,
                          lambda n: (rank(n - 1), rank(n)), "d")
        try:
            return ChainComplex(ring, ranks, d)
        except BadParameter as exc:
            raise ValidationError([str(exc)])

    if kind == "bicomplex":
        ranks = _parse_ranks(raw_ranks, 2)
        rank = lambda p, q: ranks.get((p, q), 0)
        dh = _parse_family(ring, diffs.get("dh", []), 2,
                           lambda k: (rank(k[0] - 1, k[1]), rank(*k)), "dh")
        dv = _parse_family(ring, diffs.get("dv", []), 2,
                           lambda k: (rank(k[0], k[1] - 1), rank(*k)), "dv")
        convention = doc.get("convention", "anticommute")
        if convention not in ("anticommute", "commute"):
            raise DocumentSyntaxError(f"unknown convention {convention!r}")
        x = Bicomplex(ring, ranks, dh, dv, convention=convention, check=False)
        bad = validate_bicomplex(x)
        if bad:
            raise ValidationError(bad)
        return x

    if kind == "twisted":
        ranks = _parse_ranks(raw_ranks, 2)
        rank = lambda p, q: ranks.get((p, q), 0)
        ds = {}
        for name, entries in diffs.items():
            if not (isinstance(name, str) and name.startswith("d")
                    and name[1:].isdigit()):
                raise DocumentSyntaxError(f"unknown differential key {name!r}")
            i = int(name[1:])
            ds[i] = _parse_family(
                ring, entries, 2,
                lambda k, i=i: (rank(k[0] - i, k[1] + i - 1), rank(*k)), name,
            )
        x = TwistedComplex(ring, ranks, ds, check=False)
        bad = validate_twisted(x)
        if bad:
            raise ValidationError(bad)
        return x

    raise DocumentSyntaxError(f"unknown kind {kind!r}")


def from_document(doc) -> object:
    if not isinstance(doc, dict):
        raise DocumentSyntaxError("document must be a JSON object")
    version = _need(doc, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise DocumentSyntaxError(f"unsupported schema version {version}")
    kind = _need(doc, "kind", str)
    if kind != "map":
        return _object_from_document(doc)

    map_kind = _need(doc, "map_kind", str)
    src = _object_from_document(_need(doc, "source", dict))
    tgt = _object_from_document(_need(doc, "target", dict))
    ring = src.ring
    if kind_of(src) != map_kind or kind_of(tgt) != map_kind:
        raise DocumentSyntaxError("map endpoints do not match map_kind")
    if src.ring != tgt.ring:
        raise ValidationError(["source and target use different rings"])
    arity = 1 if map_kind == "chain" else 2
    if map_kind == "chain":
        shape = lambda n: (tgt.rank(n), src.rank(n))
    else:
        shape = lambda k: (tgt.rank(*k), src.rank(*k))
    comps = _parse_family(ring, doc.get("components", []), arity, shape,
                          "components")
    cls = {"chain": ChainMap, "bicomplex": BicomplexMap, "twisted": TwistedMap}
    try:
        return cls[map_kind](src, tgt, comps)
    except BadParameter as exc:
        raise ValidationError([str(exc)])


def kind_of(obj) -> str:
    if isinstance(obj, ChainComplex):
        return "chain"
    if isinstance(obj, Bicomplex):
        return "bicomplex"
    if isinstance(obj, TwistedComplex):
        return "twisted"
    if isinstance(obj, (ChainMap, BicomplexMap, TwistedMap)):
        return "map"
    raise BadParameter(f"unknown object {type(obj).__name__}")


def parse(text: str) -> object:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"not valid JSON: {exc}")
    return from_document(doc)
