"""Versioned JSON for spaces, maps, and tensor elements.

Rationals travel as exact "p/q" strings and keys are emitted sorted, so
every object has one canonical text form and round-trips bit for bit.
Only format version 1 exists.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .cones import Cone
from .errors import InputError
from .linalg import Matrix, Vec, vec
from .maps import UnitalMap
from .spaces import AOUSpace
from .tensors import TensorElement

VERSION = 1


def _enc_frac(x: Fraction) -> str:
    return str(Fraction(x))


def decode_frac(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"expected a rational encoded as a string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {s!r}") from exc


def _enc_vec(v: Vec) -> list:
    return [_enc_frac(x) for x in v]


def decode_vec(items) -> Vec:
    if not isinstance(items, list):
        raise InputError("expected a list of rationals")
    return vec([decode_frac(x) for x in items])


def decode_rows(items) -> list:
    if not isinstance(items, list):
        raise InputError("expected a list of rows")
    return [decode_vec(row) for row in items]


def _check_header(d, expected_type: str) -> None:
    if not isinstance(d, dict):
        raise InputError("expected a JSON object")
    if d.get("version") != VERSION:
        raise InputError(f"unsupported format version {d.get('version')!r}")
    if d.get("type") != expected_type:
        raise InputError(f"expected type {expected_type!r}, got {d.get('type')!r}")


def _cone_to_dict(cone: Cone) -> dict:
    if not cone.is_polyhedral:
        return {"rep": "sym_psd", "n": cone.psd_side}
    if cone.generators is not None:
        return {"rep": "generators", "rows": [_enc_vec(g) for g in cone.generators]}
    return {
        "rep": "inequalities",
        "rows": [_enc_vec(r) for r in cone.inequalities],
        "strict": list(cone.strict),
    }


def _cone_from_dict(d, dim: int) -> Cone:
    if not isinstance(d, dict):
        raise InputError("cone must be a JSON object")
    rep = d.get("rep")
    if rep == "sym_psd":
        cone = Cone.sym_psd(int(d["n"]))
        if cone.dim != dim:
            raise InputError("sym_psd side does not match the space dimension")
        return cone
    if rep == "generators":
        return Cone.from_generators(decode_rows(d.get("rows")), dim)
    if rep == "inequalities":
        strict = d.get("strict")
        if strict is not None and not all(isinstance(s, bool) for s in strict):
            raise InputError("strict flags must be booleans")
        return Cone.from_inequalities(decode_rows(d.get("rows")), strict=strict, dim=dim)
    raise InputError(f"unknown cone representation {rep!r}")


def space_to_dict(space: AOUSpace) -> dict:
    return {
        "version": VERSION,
        "type": "space",
        "label": space.label,
        "dim": space.dim,
        "unit": _enc_vec(space.unit),
        "cone": _cone_to_dict(space.cone),
    }


def space_from_dict(d) -> AOUSpace:
    _check_header(d, "space")
    dim = d.get("dim")
    if not isinstance(dim, int) or dim <= 0:
        raise InputError(f"bad dimension {dim!r}")
    return AOUSpace(
        dim=dim,
        cone=_cone_from_dict(d.get("cone"), dim),
        unit=decode_vec(d.get("unit")),
        label=str(d.get("label", "")),
    )


def map_to_dict(m: UnitalMap) -> dict:
    return {
        "version": VERSION,
        "type": "map",
        "source": space_to_dict(m.source),
        "target": space_to_dict(m.target),
        "matrix": [_enc_vec(row) for row in m.matrix.data],
    }


def map_from_dict(d) -> UnitalMap:
    _check_header(d, "map")
    return UnitalMap(
        space_from_dict(d.get("source")),
        space_from_dict(d.get("target")),
        Matrix.from_rows(decode_rows(d.get("matrix"))),
    )


def element_to_dict(z: TensorElement) -> dict:
    return {
        "version": VERSION,
        "type": "tensor_element",
        "left": space_to_dict(z.left),
        "right": space_to_dict(z.right),
        "coeffs": [_enc_vec(row) for row in z.coeffs.data],
    }


def element_from_dict(d) -> TensorElement:
    _check_header(d, "tensor_element")
    return TensorElement(
        space_from_dict(d.get("left")),
        space_from_dict(d.get("right")),
        Matrix.from_rows(decode_rows(d.get("coeffs"))),
    )


_TO = {"space": space_to_dict, "map": map_to_dict, "tensor_element": element_to_dict}
_FROM = {"space": space_from_dict, "map": map_from_dict, "tensor_element": element_from_dict}


def to_dict(obj) -> dict:
    if isinstance(obj, AOUSpace):
        return space_to_dict(obj)
    if isinstance(obj, UnitalMap):
        return map_to_dict(obj)
    if isinstance(obj, TensorElement):
        return element_to_dict(obj)
    raise InputError(f"cannot serialize {type(obj).__name__}")


def from_dict(d):
    if not isinstance(d, dict):
        raise InputError("expected a JSON object")
    kind = d.get("type")
    if kind not in _FROM:
        raise InputError(f"unknown object type {kind!r}")
    return _FROM[kind](d)


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), sort_keys=True, indent=2) + "\n"


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    return from_dict(d)
