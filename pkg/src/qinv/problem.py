"""JSON problem files: schema, validation and loading.

A problem file looks like::

    {
      "format": 1,
      "ring": {"kind": "proper", "proper_vars": ["s", "d"]},
      "plant": [["1/(s*d+1)", "0"], ["0", "1/(s*d+2)"]],
      "controller_set": {"kind": "delay_bounds", "d_var": "d", "bounds": [[0, 1], [1, 0]]},
      "p11": ..., "p12": ..., "p21": ...
    }

Matrix entries are expression strings (plain integers are accepted too).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema

from .controllers import ControllerSet, DelayBounds, GeneratorSet, Sparsity
from .matrix import DimensionMismatch, Matrix
from .parser import ParseError, parse_matrix
from .rings import ProperRatRing, Ring, ring_from_json

FORMAT = 1

_entry = {"oneOf": [{"type": "string"}, {"type": "integer"}]}
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _entry}}
_names = {"type": "array", "items": {"type": "string", "pattern": "^[A-Za-z_][A-Za-z_0-9]*$"}}

RING_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {"kind": {"enum": ["integers", "rationals", "zbeta"]}}},
        {"properties": {"kind": {"const": "mod_p"}, "p": {"type": "integer", "minimum": 2}}, "required": ["p"]},
        {"properties": {"kind": {"enum": ["poly", "ratfunc"]}, "vars": _names}, "required": ["vars"]},
        {"properties": {"kind": {"const": "proper"}, "free_vars": _names, "proper_vars": _names},
         "required": ["proper_vars"]},
    ],
}

CONTROLLER_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {"properties": {"kind": {"const": "sparsity"},
                        "pattern": {"type": "array", "minItems": 1,
                                    "items": {"type": "array", "minItems": 1,
                                              "items": {"enum": [0, 1, True, False]}}}},
         "required": ["pattern"]},
        {"properties": {"kind": {"const": "delay_bounds"}, "d_var": {"type": "string"},
                        "bounds": {"type": "array", "minItems": 1,
                                   "items": {"type": "array", "minItems": 1,
                                             "items": {"type": "integer", "minimum": 0}}}},
         "required": ["d_var", "bounds"]},
        {"properties": {"kind": {"const": "generators"}, "matrices": {"type": "array", "items": _matrix},
                        "shape": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                  "minItems": 2, "maxItems": 2}},
         "required": ["matrices"]},
    ],
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "ring", "plant", "controller_set"],
    "properties": {
        "format": {"const": FORMAT},
        "description": {"type": "string"},
        "ring": RING_SCHEMA,
        "plant": _matrix,
        "controller_set": CONTROLLER_SCHEMA,
        "p11": _matrix,
        "p12": _matrix,
        "p21": _matrix,
    },
    "additionalProperties": False,
}

MATRIX_FILE_SCHEMA = {"oneOf": [_matrix, {"type": "object", "required": ["K"], "properties": {"K": _matrix}}]}

_report = {
    "type": "object",
    "required": ["verdict", "method", "preconditions"],
    "properties": {
        "verdict": {"enum": ["true", "false", "unknown"]},
        "method": {"type": "string"},
        "witness": {"type": "object"},
        "preconditions": {"type": "array", "items": {
            "type": "object", "required": ["name", "status"],
            "properties": {"name": {"type": "string"}, "status": {"enum": ["holds", "fails", "unknown"]}}}},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}
_str_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}

OUTPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "command", "exit_code", "warnings"],
    "properties": {
        "format": {"const": FORMAT},
        "command": {"enum": ["check-qi", "h-map", "closed-loop", "oracle", "vandermonde"]},
        "exit_code": {"enum": [0, 2, 3, 4]},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "qi": _report,
        "adjugate_invariance": _report,
        "h_invariance": _report,
        "h_of_k": {"oneOf": [_str_matrix, {"type": "null"}]},
        "in_s": {"type": ["boolean", "null"]},
        "det": {"type": "string"},
        "affine_set": {"oneOf": [{"type": "null"}, {
            "type": "object", "required": ["offset", "images"],
            "properties": {"offset": _str_matrix, "images": {"type": "array", "items": _str_matrix}}}]},
        "report": {"type": "object"},
        "points": {"type": "array", "items": {"type": "string"}},
        "left_inverse": {"oneOf": [_str_matrix, {"type": "null"}]},
        "product": {"oneOf": [_str_matrix, {"type": "null"}]},
        "error": {"type": "string"},
    },
}


class ProblemError(ValueError):
    """Invalid problem file; the message names the offending field."""


@dataclass
class Problem:
    ring: Ring
    plant: Matrix
    controller_set: ControllerSet
    p11: Optional[Matrix] = None
    p12: Optional[Matrix] = None
    p21: Optional[Matrix] = None
    description: str = ""


def _where(err: jsonschema.ValidationError) -> str:
    path = "/".join(str(p) for p in err.absolute_path)
    return path or "(root)"


def validate(obj: Any, schema: Dict = PROBLEM_SCHEMA) -> None:
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as e:
        raise ProblemError(f"{_where(e)}: {e.message}") from None


def _matrix_field(obj, key, ring) -> Matrix:
    try:
        return parse_matrix(obj[key], ring)
    except ParseError as e:
        raise ProblemError(f"{key}: {e}") from None


def controller_set_from_json(obj: Dict, ring: Ring) -> ControllerSet:
    kind = obj["kind"]
    if kind == "sparsity":
        return Sparsity(ring, obj["pattern"])
    if kind == "delay_bounds":
        if not isinstance(ring, ProperRatRing):
            raise ProblemError("controller_set: delay bounds need a 'proper' ring")
        return DelayBounds(ring, obj["d_var"], obj["bounds"])
    mats = []
    for idx, M in enumerate(obj["matrices"]):
        try:
            mats.append(parse_matrix(M, ring))
        except ParseError as e:
            raise ProblemError(f"controller_set/matrices/{idx}: {e}") from None
    shape = tuple(obj["shape"]) if "shape" in obj else None
    if any(H.shape != mats[0].shape for H in mats):
        raise ProblemError("controller_set/matrices: generators have different shapes")
    return GeneratorSet(ring, mats, shape=shape)


def problem_from_json(obj: Any) -> Problem:
    validate(obj)
    try:
        ring = ring_from_json(obj["ring"])
    except (ValueError, KeyError) as e:
        raise ProblemError(f"ring: {e}") from None
    G = _matrix_field(obj, "plant", ring)
    try:
        S = controller_set_from_json(obj["controller_set"], ring)
    except (ValueError, DimensionMismatch) as e:
        raise ProblemError(f"controller_set: {e}") from None
    m, n = G.shape
    if S.shape != (n, m):
        raise ProblemError(f"controller_set: plant is {m}x{n}, so the controller set must be {n}x{m}, got "
                           f"{S.shape[0]}x{S.shape[1]}")
    blocks = {k: _matrix_field(obj, k, ring) for k in ("p11", "p12", "p21") if k in obj}
    if blocks and len(blocks) != 3:
        raise ProblemError("p11, p12 and p21 must be given together")
    if blocks:
        P11, P12, P21 = blocks["p11"], blocks["p12"], blocks["p21"]
        if P12.cols != n or P21.rows != m or P11.shape != (P12.rows, P21.cols):
            raise ProblemError(f"p-blocks do not fit: p11 {P11.shape}, p12 {P12.shape}, p21 {P21.shape}, "
                               f"plant {m}x{n}")
    return Problem(ring, G, S, blocks.get("p11"), blocks.get("p12"), blocks.get("p21"),
                   obj.get("description", ""))


def read_json(path: str) -> Any:
    """Read a JSON file; ``corpus:NAME`` reads a shipped example."""
    try:
        if path.startswith("corpus:"):
            return json.loads(corpus_path(path[len("corpus:"):]).read_text())
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ProblemError(f"{path}: {e}") from None


def load_problem(path: str) -> Problem:
    return problem_from_json(read_json(path))


def corpus_names() -> List[str]:
    root = resources.files("qinv") / "corpus"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def corpus_path(name: str):
    if not name.endswith(".json"):
        name += ".json"
    p = resources.files("qinv") / "corpus" / name
    if not p.is_file():
        raise ProblemError(f"no corpus example {name!r}; available: {', '.join(corpus_names())}")
    return p
