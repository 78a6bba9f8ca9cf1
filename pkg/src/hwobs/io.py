"""Versioned JSON documents for matrices, states, Bloch vectors, witnesses and records.

Every document is a JSON object with a ``schema`` name and a
``schema_version``.  Complex numbers are ``[re, im]`` pairs; floats are
written with Python's shortest round-trip repr, so ``loads(dumps(x))``
reproduces binary64 values bit for bit.  See ``docs/formats.md`` for the
field list of each schema.

File extensions: ``.hwmat`` (matrix), ``.hwbloch`` (Bloch vector),
``.hwwit`` (witness spec), ``.hwrec`` (measurement record), ``.hwstate``
(state spec).
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .acbound import WitnessReport, WitnessSpec
from .bloch import BlochVector, DensityMatrix
from .errors import HWError, ParseError, ValidationError
from .hw_basis import PhasePoint
from .ramsey import MeasurementRecord
from .states import StateSpec

SCHEMA_VERSION = "1"

MATRIX = "hwobs.matrix"
BLOCH = "hwobs.bloch"
WITNESS = "hwobs.witness"
STATE = "hwobs.state"
RECORD = "hwobs.record"
REPORT = "hwobs.witness_report"

EXTENSIONS = {
    ".hwmat": MATRIX,
    ".hwbloch": BLOCH,
    ".hwwit": WITNESS,
    ".hwrec": RECORD,
    ".hwstate": STATE,
}


@dataclass(frozen=True, eq=False)
class MatrixDocument:
    rows: int
    cols: int
    entries: np.ndarray
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.complex128)
        if e.size != self.rows * self.cols:
            raise ValidationError(f"entries length {e.size} != rows*cols = {self.rows * self.cols}")
        object.__setattr__(self, "entries", e.reshape(self.rows, self.cols))

    @classmethod
    def from_matrix(cls, m, metadata: dict[str, str] | None = None) -> "MatrixDocument":
        m = np.asarray(m, dtype=np.complex128)
        return cls(m.shape[0], m.shape[1], m, dict(metadata or {}))

    @property
    def matrix(self) -> np.ndarray:
        return self.entries.copy()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatrixDocument)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and _bits_equal(self.entries, other.entries)
            and self.metadata == other.metadata
        )


def _bits_equal(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    return a.shape == b.shape and a.tobytes() == b.tobytes()


# -- field access helpers ---------------------------------------------------

def _num(x, path: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError("expected a number", field=path)
    v = float(x)
    if not math.isfinite(v):
        raise ParseError("number is not finite", field=path)
    return v


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError("expected an integer", field=path)
    return x


def _str(x, path: str) -> str:
    if not isinstance(x, str):
        raise ParseError("expected a string", field=path)
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise ParseError("expected an array", field=path)
    return x


def _req(doc: dict, key: str, path: str = ""):
    if key not in doc:
        raise ParseError("missing required field", field=f"{path}{key}")
    return doc[key]


def _complex(x, path: str) -> complex:
    pair = _list(x, path)
    if len(pair) != 2:
        raise ParseError("complex number must be an [re, im] pair", field=path)
    return complex(_num(pair[0], path + "[0]"), _num(pair[1], path + "[1]"))


def _metadata(doc: dict) -> dict[str, str]:
    md = doc.get("metadata", {})
    if not isinstance(md, dict):
        raise ParseError("expected an object", field="metadata")
    return {str(k): _str(v, f"metadata.{k}") for k, v in md.items()}


def _pair(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def _envelope(schema: str, body: dict) -> dict:
    return {"schema": schema, "schema_version": SCHEMA_VERSION, **body}


# -- per-type encoders ------------------------------------------------------

def _enc_matrix(doc: MatrixDocument) -> dict:
    return _envelope(MATRIX, {
        "rows": doc.rows,
        "cols": doc.cols,
        "entries": [_pair(z) for z in doc.entries.reshape(-1)],
        "metadata": dict(doc.metadata),
    })


def _dec_matrix(doc: dict) -> MatrixDocument:
    rows = _int(_req(doc, "rows"), "rows")
    cols = _int(_req(doc, "cols"), "cols")
    if rows < 1 or cols < 1:
        raise ValidationError(f"rows and cols must be positive, got {rows}x{cols}")
    raw = _list(_req(doc, "entries"), "entries")
    if len(raw) != rows * cols:
        raise ValidationError(f"entries length {len(raw)} != rows*cols = {rows * cols}")
    entries = np.array([_complex(z, f"entries[{k}]") for k, z in enumerate(raw)], dtype=np.complex128)
    return MatrixDocument(rows, cols, entries, _metadata(doc))


def _enc_bloch(v: BlochVector, metadata=None) -> dict:
    return _envelope(BLOCH, {
        "d": v.d,
        "components": [float(x) for x in v.components],
        "metadata": dict(metadata or {}),
    })


def _dec_bloch(doc: dict) -> BlochVector:
    d = _int(_req(doc, "d"), "d")
    if d < 2:
        raise ValidationError(f"d must be >= 2, got {d}")
    comps = [_num(x, f"components[{k}]") for k, x in enumerate(_list(_req(doc, "components"), "components"))]
    return BlochVector(d, np.array(comps, dtype=np.float64))


def _enc_witness(w: WitnessSpec) -> dict:
    return _envelope(WITNESS, {
        "name": w.name,
        "parties": list(w.parties),
        "terms": [[None if lab is None else list(lab) for lab in term] for term in w.terms],
        "bound": w.bound,
        "bound_kind": w.bound_kind,
        "metadata": {str(k): str(v) for k, v in w.metadata.items()},
    })


def _dec_witness(doc: dict) -> WitnessSpec:
    parties = [_int(x, f"parties[{k}]") for k, x in enumerate(_list(_req(doc, "parties"), "parties"))]
    terms = []
    for k, term in enumerate(_list(_req(doc, "terms"), "terms")):
        row = []
        for j, lab in enumerate(_list(term, f"terms[{k}]")):
            path = f"terms[{k}][{j}]"
            if lab is None:
                row.append(None)
                continue
            lab = _list(lab, path)
            if len(lab) != 2:
                raise ParseError("label must be [l, m] or null", field=path)
            row.append((_int(lab[0], path + "[0]"), _int(lab[1], path + "[1]")))
        terms.append(tuple(row))
    return WitnessSpec(
        parties=tuple(parties),
        terms=tuple(terms),
        bound=_num(_req(doc, "bound"), "bound"),
        bound_kind=_str(doc.get("bound_kind", "separable"), "bound_kind"),
        name=_str(doc.get("name", ""), "name"),
        metadata=_metadata(doc),
    )


def _state_body(s: StateSpec) -> dict:
    return {
        "kind": s.kind,
        "dims": list(s.dims),
        "p": s.p,
        "ket": None if s.ket is None else [_pair(a) for a in s.ket],
        "base": None if s.base is None else _state_body(s.base),
    }


def _enc_state(s: StateSpec) -> dict:
    return _envelope(STATE, _state_body(s))


def _dec_state_body(doc, path: str = "") -> StateSpec:
    if not isinstance(doc, dict):
        raise ParseError("expected an object", field=path or "base")
    dims = [_int(x, f"{path}dims[{k}]") for k, x in enumerate(_list(_req(doc, "dims", path), path + "dims"))]
    ket = doc.get("ket")
    if ket is not None:
        ket = tuple(_complex(a, f"{path}ket[{k}]") for k, a in enumerate(_list(ket, path + "ket")))
    base = doc.get("base")
    if base is not None:
        base = _dec_state_body(base, path + "base.")
    return StateSpec(
        kind=_str(_req(doc, "kind", path), path + "kind"),
        dims=tuple(dims),
        p=_num(doc.get("p", 1.0), path + "p"),
        ket=ket,
        base=base,
    )


def _enc_record(r: MeasurementRecord) -> dict:
    return _envelope(RECORD, {
        "d": r.point.d,
        "point": [r.point.l, r.point.m],
        "shots": r.shots,
        "count_up": r.count_up,
        "count_down": r.count_down,
        "seed": r.seed,
    })


def _dec_record(doc: dict) -> MeasurementRecord:
    d = _int(_req(doc, "d"), "d")
    pt = _list(_req(doc, "point"), "point")
    if len(pt) != 2:
        raise ParseError("point must be [l, m]", field="point")
    l, m = _int(pt[0], "point[0]"), _int(pt[1], "point[1]")
    if d < 2 or not (0 <= l < d and 0 <= m < d):
        raise ValidationError(f"point ({l},{m}) is not a canonical d={d} phase point")
    seed = doc.get("seed")
    if seed is not None:
        seed = _int(seed, "seed")
    return MeasurementRecord(
        PhasePoint(d, l, m),
        _int(_req(doc, "shots"), "shots"),
        _int(_req(doc, "count_up"), "count_up"),
        _int(_req(doc, "count_down"), "count_down"),
        seed,
    )


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


def _enc_report(r: WitnessReport) -> dict:
    return _envelope(REPORT, {
        "name": r.name,
        "value": r.value,
        "bound": r.bound,
        "violated": r.violated,
        "noise_threshold": _finite_or_none(r.noise_threshold),
        "tolerable_noise": _finite_or_none(r.tolerable_noise),
        "term_values": list(r.term_values),
    })


def _dec_report(doc: dict) -> WitnessReport:
    violated = _req(doc, "violated")
    if not isinstance(violated, bool):
        raise ParseError("expected a boolean", field="violated")
    nt = doc.get("noise_threshold")
    tn = doc.get("tolerable_noise")
    return WitnessReport(
        value=_num(_req(doc, "value"), "value"),
        bound=_num(_req(doc, "bound"), "bound"),
        violated=violated,
        noise_threshold=math.inf if nt is None else _num(nt, "noise_threshold"),
        tolerable_noise=-math.inf if tn is None else _num(tn, "tolerable_noise"),
        term_values=tuple(_num(x, f"term_values[{k}]") for k, x in enumerate(_list(doc.get("term_values", []), "term_values"))),
        name=_str(doc.get("name", ""), "name"),
    )


_DECODERS = {
    MATRIX: _dec_matrix,
    BLOCH: _dec_bloch,
    WITNESS: _dec_witness,
    STATE: _dec_state_body,
    RECORD: _dec_record,
    REPORT: _dec_report,
}


def to_document(obj, metadata: dict[str, str] | None = None) -> dict:
    """Encode a supported object as a JSON-ready dict."""
    if isinstance(obj, MatrixDocument):
        return _enc_matrix(obj)
    if isinstance(obj, DensityMatrix):
        md = {"parties": ",".join(str(x) for x in obj.parties), **(metadata or {})}
        return _enc_matrix(MatrixDocument.from_matrix(obj.matrix, md))
    if isinstance(obj, np.ndarray):
        return _enc_matrix(MatrixDocument.from_matrix(obj, metadata))
    if isinstance(obj, BlochVector):
        return _enc_bloch(obj, metadata)
    if isinstance(obj, WitnessSpec):
        return _enc_witness(obj)
    if isinstance(obj, StateSpec):
        return _enc_state(obj)
    if isinstance(obj, MeasurementRecord):
        return _enc_record(obj)
    if isinstance(obj, WitnessReport):
        return _enc_report(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_document(doc: Any, expect: str | None = None):
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    schema = _str(_req(doc, "schema"), "schema")
    version = _str(_req(doc, "schema_version"), "schema_version")
    if schema not in _DECODERS:
        raise ParseError(f"unknown schema {schema!r}", field="schema")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION!r})", field="schema_version")
    if expect is not None and schema != expect:
        raise ParseError(f"expected a {expect} document, got {schema}", field="schema")
    try:
        return _DECODERS[schema](doc)
    except HWError:
        raise
    except (TypeError, ValueError, OverflowError) as exc:
        raise ValidationError(f"invalid {schema} document: {exc}") from exc


def dumps(obj, metadata: dict[str, str] | None = None) -> str:
    """Serialize with one top-level field per line (keeps diffs readable)."""
    doc = to_document(obj, metadata)
    fields = [
        f" {json.dumps(k)}: {json.dumps(v, allow_nan=False, separators=(', ', ': '))}"
        for k, v in doc.items()
    ]
    return "{\n" + ",\n".join(fields) + "\n}\n"


def loads(text: str, expect: str | None = None):
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno) from exc
    except RecursionError as exc:
        raise ParseError("document nested too deeply") from exc
    try:
        return from_document(doc, expect)
    except ParseError as exc:
        if exc.line is None and exc.field:
            line = _line_of(text, exc.field)
            if line is not None:
                raise ParseError(exc.args[0].rsplit(" (field", 1)[0], line=line, field=exc.field) from exc
        raise


def _line_of(text: str, field_path: str) -> int | None:
    """Line of the top-level key that ``field_path`` starts with, if found."""
    key = re.match(r"[^.\[]+", field_path)
    if key is None:
        return None
    needle = json.dumps(key.group(0)) + ":"
    for n, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith(needle):
            return n
    return None


def _reject_constant(name: str):
    raise ParseError(f"non-finite constant {name} is not allowed")


def write(path, obj, metadata: dict[str, str] | None = None) -> None:
    Path(path).write_text(dumps(obj, metadata), encoding="utf-8")


def read(path, expect: str | None = None):
    path = Path(path)
    if expect is None:
        expect = EXTENSIONS.get(path.suffix)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path} is not UTF-8 text") from exc
    return loads(text, expect)


def load_state(path) -> DensityMatrix:
    """Read a state given either as a matrix document or as a state spec."""
    obj = read(path, expect=None)
    if isinstance(obj, StateSpec):
        return obj.build()
    if isinstance(obj, MatrixDocument):
        parties = obj.metadata.get("parties")
        dims: tuple[int, ...] = ()
        if parties:
            try:
                dims = tuple(int(x) for x in parties.split(","))
            except ValueError as exc:
                raise ParseError(f"bad parties metadata {parties!r}", field="metadata.parties") from exc
        return DensityMatrix(obj.entries, dims)
    raise ValidationError(f"{path} does not describe a state")


# -- CSV --------------------------------------------------------------------

def bloch_to_csv(v: BlochVector) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["l", "m", "value"])
    for k, val in enumerate(v.components, start=1):
        w.writerow([k // v.d, k % v.d, repr(float(val))])
    return buf.getvalue()


def reports_to_csv(reports: Iterable[WitnessReport]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "bound", "violated", "noise_threshold", "tolerable_noise"])
    for r in reports:
        w.writerow([r.name, repr(r.value), repr(r.bound), str(r.violated).lower(),
                    repr(r.noise_threshold), repr(r.tolerable_noise)])
    return buf.getvalue()
