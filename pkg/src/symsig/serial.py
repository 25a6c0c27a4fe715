"""Tagged JSON envelopes {"kind": ..., "data": ...} for every serializable object."""
from __future__ import annotations

import json

from symsig.chain import ChainComplex, ChainMap
from symsig.errors import ParseError
from symsig.forms import EpsForm, Formation, Lagrangian, make_lagrangian
from symsig.linalg import Matrix
from symsig.structures import PoincarePair, SymmetricComplex, ValidationReport

_DUMP = [(SymmetricComplex, "complex"), (PoincarePair, "pair"), (EpsForm, "form"),
         (Formation, "formation"), (ChainMap, "chain-map"), (ChainComplex, "chain-complex"),
         (Matrix, "matrix")]


def dump(obj) -> dict:
    if isinstance(obj, Lagrangian):
        return {"kind": "lagrangian", "data": {"form": obj.form.to_json(), "j": obj.j.to_json()}}
    if isinstance(obj, ValidationReport):
        return {"kind": "report", "data": obj.to_json()}
    for cls, kind in _DUMP:
        if isinstance(obj, cls):
            return {"kind": kind, "data": obj.to_json()}
    if hasattr(obj, "to_json"):
        return {"kind": type(obj).__name__.lower(), "data": obj.to_json()}
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load(payload: dict):
    try:
        kind, data = payload["kind"], payload["data"]
    except (KeyError, TypeError):
        raise ParseError("expected an object with 'kind' and 'data'") from None
    try:
        if kind == "complex":
            return SymmetricComplex.from_json(data)
        if kind == "pair":
            return PoincarePair.from_json(data)
        if kind == "form":
            return EpsForm.from_json(data)
        if kind == "formation":
            return Formation.from_json(data)
        if kind == "lagrangian":
            return make_lagrangian(EpsForm.from_json(data["form"]), Matrix.from_json(data["j"]))
        if kind == "chain-map":
            return ChainMap.from_json(data)
        if kind == "chain-complex":
            return ChainComplex.from_json(data)
        if kind == "matrix":
            return Matrix.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed {kind}: {exc}") from None
    raise ParseError(f"unknown kind {kind!r}")


def dumps(obj) -> str:
    return json.dumps(obj if isinstance(obj, (dict, list)) else dump(obj), sort_keys=True, indent=1)


def loads(text: str):
    try:
        return load(json.loads(text))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
