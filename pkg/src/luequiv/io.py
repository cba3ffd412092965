"""JSON state files and number formatting shared by the CLI and the verify report.

State file kinds (complex numbers are ``[re, im]`` pairs)::

    {"kind": "sc2q", "c1": 0.7, "c2": [0.2, 0.0], "c4": 0.3}
    {"kind": "sc", "levels": 3, "parties": 2, "c": [[[re, im], ...], ...]}
    {"kind": "density", "dims": [2, 2], "matrix": [[[re, im], ...], ...]}
    {"kind": "pure", "dims": [2, 2], "coeffs": [[[re, im], ...], ...]}

Every kind accepts an optional ``"label"``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Optional, Union

import numpy as np

from .exceptions import DimensionMismatch, ValidationError
from .states import DensityMatrix, PureState, SCCoefficients, validate_density

KINDS = ("sc2q", "sc", "density", "pure")


class StateFileError(ValueError):
    """Base class for state-file problems; ``kind`` names the failure class."""

    kind = "StateFileError"


class MalformedSyntax(StateFileError):
    kind = "MalformedSyntax"


class UnknownKind(StateFileError):
    kind = "UnknownKind"


class ValidationFailed(StateFileError):
    kind = "ValidationFailed"

    def __init__(self, message: str, invariant: str = "invalid"):
        super().__init__(message)
        self.invariant = invariant


State = Union[SCCoefficients, DensityMatrix, PureState]


@dataclass(frozen=True, eq=False)
class StateFile:
    kind: str
    state: Any
    label: Optional[str] = None


def sig12(x: float) -> float:
    """Round to 12 significant digits (machine output convention)."""
    x = float(x)
    if not math.isfinite(x) or x == 0:
        return x
    return float(f"{x:.12g}")


def to_json_value(x):
    """Recursively convert numpy/complex values into JSON-ready data with 12 significant digits."""
    if isinstance(x, dict):
        return {str(k): to_json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_json_value(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_json_value(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [sig12(x.real), sig12(x.imag)]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = sig12(x)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return x


def _flat(x) -> bool:
    """Lists of scalars, and lists of such lists (one matrix row), print on one line."""
    if not isinstance(x, list):
        return not isinstance(x, dict)
    return all(not isinstance(v, (list, dict)) or (isinstance(v, list) and all(not isinstance(w, (list, dict)) for w in v)) for v in x)


def _encode(x, indent: int, level: int) -> str:
    pad, inner = " " * (indent * level), " " * (indent * (level + 1))
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_encode(v, indent, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list) and x and not _flat(x):
        return "[\n" + ",\n".join(inner + _encode(v, indent, level + 1) for v in x) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))


def dumps(obj, indent: int = 2) -> str:
    """JSON with 12 significant digits, insertion key order and one line per matrix row."""
    return _encode(to_json_value(obj), indent, 0) + "\n"


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(p, (int, float)) for p in v):
        return complex(v[0], v[1])
    raise ValidationFailed(f"{where}: expected a number or [re, im] pair, got {v!r}", "format")


def _matrix(rows, where: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationFailed(f"{where}: expected a non-empty list of rows", "format")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationFailed(f"{where}: rows have unequal lengths", "format")
    return np.array([[_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)])


def _field(doc: dict, name: str, kind: str):
    if name not in doc:
        raise ValidationFailed(f"{kind} state file is missing field {name!r}", "format")
    return doc[name]


def _dims(doc: dict, kind: str) -> tuple[int, int]:
    dims = _field(doc, "dims", kind)
    if not (isinstance(dims, list) and len(dims) == 2 and all(isinstance(d, int) and d > 0 for d in dims)):
        raise ValidationFailed(f"dims must be two positive integers, got {dims!r}", "format")
    return dims[0], dims[1]


def parse_state_file(text: Union[bytes, str]) -> StateFile:
    """Parse and validate a JSON state file.

    Raises
    ------
    MalformedSyntax
        Not UTF-8 or not JSON (the message carries line and column).
    UnknownKind
        ``kind`` missing or not one of :data:`KINDS`.
    ValidationFailed
        The payload does not form a valid state; ``invariant`` names the failed condition.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedSyntax(f"input is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedSyntax(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise MalformedSyntax("top-level JSON value must be an object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise UnknownKind(f"unknown state kind {kind!r}; expected one of {', '.join(KINDS)}")
    label = doc.get("label")
    try:
        if kind == "sc2q":
            c1 = _complex(_field(doc, "c1", kind), "c1")
            c4 = _complex(_field(doc, "c4", kind), "c4")
            if c1.imag or c4.imag:
                raise ValidationFailed("c1 and c4 must be real", "hermitian")
            state = SCCoefficients.two_qubit(c1.real, _complex(_field(doc, "c2", kind), "c2"), c4.real)
        elif kind == "sc":
            c = _matrix(_field(doc, "c", kind), "c")
            levels = doc.get("levels", c.shape[0])
            if levels != c.shape[0]:
                raise ValidationFailed(f"levels = {levels} but c is {c.shape[0]}x{c.shape[1]}", "format")
            state = SCCoefficients(c, int(doc.get("parties", 2)))
        elif kind == "density":
            dims = _dims(doc, kind)
            state = validate_density(_matrix(_field(doc, "matrix", kind), "matrix"), dims)
        else:
            dims = _dims(doc, kind)
            coeffs = _field(doc, "coeffs", kind)
            if not isinstance(coeffs, list):
                raise ValidationFailed("coeffs must be a list", "format")
            # a flat row-major list has M*N entries, a nested one has M rows
            if len(coeffs) == dims[0] * dims[1] and dims[1] > 1:
                a = np.array([_complex(v, f"coeffs[{i}]") for i, v in enumerate(coeffs)]).reshape(dims)
            else:
                a = _matrix(coeffs, "coeffs")
            if a.shape != dims:
                raise ValidationFailed(f"coeffs has shape {a.shape}, dims say {dims}", "format")
            state = PureState(a)
    except ValidationError as exc:
        raise ValidationFailed(f"{kind}: {exc}", exc.invariant) from exc
    except DimensionMismatch as exc:
        raise ValidationFailed(f"{kind}: {exc}", "dims") from exc
    return StateFile(kind, state, label)


def _complex_rows(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def state_to_doc(sf: StateFile) -> dict:
    s = sf.state
    if sf.kind == "sc2q":
        doc = {"kind": "sc2q", "c1": s.c1, "c2": [s.c2.real, s.c2.imag], "c4": s.c4}
    elif sf.kind == "sc":
        doc = {"kind": "sc", "levels": s.levels, "parties": s.parties, "c": _complex_rows(s.c)}
    elif sf.kind == "density":
        doc = {"kind": "density", "dims": list(s.bipartite), "matrix": _complex_rows(s.mat)}
    else:
        doc = {"kind": "pure", "dims": list(s.dims), "coeffs": _complex_rows(s.coeffs)}
    if sf.label is not None:
        doc["label"] = sf.label
    return doc


def serialize_state_file(sf: StateFile) -> str:
    """Lossless JSON serialisation (full float precision, unlike report output)."""
    return json.dumps(state_to_doc(sf), indent=2) + "\n"
