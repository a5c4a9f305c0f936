"""JSON schemas for universes, structure tables, and functors.

Values serialize as strings (atoms) and nested arrays (tuples); tables
are JSON objects keyed by the compact serialization of the key value.
All emitted arrays are sorted in canonical value order, so output is
byte-deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

from .finset import FinFun, FinSet, Val
from .functor import ElementwiseFunctor, relabel_val
from .universe import PStructure, Universe, canonical_p_structure


class SchemaError(ValueError):
    """The input document does not match the expected schema."""


def val_key(v: Val) -> str:
    """Compact canonical serialization, used for JSON object keys."""
    return json.dumps(v.to_json(), separators=(",", ":"))


def val_from_key(key: str) -> Val:
    try:
        return Val.from_json(json.loads(key))
    except (json.JSONDecodeError, ValueError) as exc:
        raise SchemaError(f"bad value key {key!r}: {exc}") from None


def _require_keys(obj: dict, allowed: set[str], required: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be an object")
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(f"unknown {what} fields: {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"missing {what} fields: {sorted(missing)}")


def table_to_json(f: FinFun) -> dict:
    return {val_key(k): f.graph[k].to_json() for k in f.dom}


def table_from_json(obj: dict, dom: FinSet, cod: FinSet, what: str) -> FinFun:
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be an object keyed by serialized values")
    graph = {}
    for key, value in obj.items():
        graph[val_from_key(key)] = Val.from_json(value)
    try:
        return FinFun(dom, cod, graph)
    except ValueError as exc:
        raise SchemaError(f"{what}: {exc}") from None


def universe_from_json(obj: dict) -> tuple[Universe, PStructure | None]:
    """Parse a universe document, with its structure tables if present."""
    _require_keys(obj, {"U", "El", "P"}, {"U", "El"}, "universe")
    if not isinstance(obj["U"], list) or not all(isinstance(c, str) for c in obj["U"]):
        raise SchemaError("'U' must be an array of code strings")
    if not isinstance(obj["El"], dict):
        raise SchemaError("'El' must be an object mapping codes to element arrays")
    table = {}
    for code, elems in obj["El"].items():
        if not isinstance(elems, list) or not all(isinstance(e, str) for e in elems):
            raise SchemaError(f"'El'[{code!r}] must be an array of element strings")
        if len(set(elems)) != len(elems):
            raise SchemaError(f"'El'[{code!r}] has duplicate elements")
        table[code] = elems
    if set(table) != set(obj["U"]):
        raise SchemaError("'El' must cover exactly the codes in 'U'")
    if len(set(obj["U"])) != len(obj["U"]):
        raise SchemaError("'U' has duplicate codes")
    u = Universe.from_table(table)

    structure = None
    if "P" in obj:
        spec = obj["P"]
        if spec == "canonical":
            structure = canonical_p_structure(u)
            if structure is None:
                raise SchemaError("no canonical structure exists for this universe")
        else:
            _require_keys(spec, {"table", "table_tilde"}, {"table", "table_tilde"}, "'P'")
            structure = PStructure(
                table_from_json(spec["table"], u.ip_obj(u.codes), u.codes, "'P'.table"),
                table_from_json(
                    spec["table_tilde"], u.ip_obj(u.total), u.total, "'P'.table_tilde"
                ),
            )
    return u, structure


def universe_to_json(u: Universe, structure: PStructure | None = None) -> dict:
    out: dict = {
        "U": [c.name for c in u.codes],
        "El": {c.name: [e.name for e in u.el[c]] for c in u.codes},
    }
    if structure is not None:
        out["P"] = {
            "table": table_to_json(structure.P),
            "table_tilde": table_to_json(structure.P_tilde),
        }
    return out


def load_universe(path: str | Path) -> tuple[Universe, PStructure | None]:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    return universe_from_json(obj)


def _resolve_universe(ref, base_dir: Path, what: str) -> tuple[Universe, PStructure | None]:
    if isinstance(ref, str):
        return load_universe(base_dir / ref)
    if isinstance(ref, dict):
        return universe_from_json(ref)
    raise SchemaError(f"{what} must be a path string or an inline universe object")


def _comparison_from_json(spec, dom: FinSet, cod: FinSet, what: str) -> FinFun:
    if spec == "inclusion":
        for v in dom:
            if v not in cod:
                raise SchemaError(f"{what}: 'inclusion' needs every relabeled value in the target")
        return FinFun(dom, cod, {v: v for v in dom})
    return table_from_json(spec, dom, cod, what)


def functor_from_json(
    obj: dict, base_dir: Path
) -> tuple[ElementwiseFunctor, PStructure | None, PStructure | None]:
    """Parse a functor document; returns the functor and both structures."""
    _require_keys(
        obj,
        {"source", "target", "val_map", "phi", "phi_tilde"},
        {"source", "target", "val_map", "phi", "phi_tilde"},
        "functor",
    )
    source, s = _resolve_universe(obj["source"], base_dir, "'source'")
    target, s_target = _resolve_universe(obj["target"], base_dir, "'target'")
    val_map = obj["val_map"]
    if not isinstance(val_map, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in val_map.items()
    ):
        raise SchemaError("'val_map' must map atom names to atom names")

    relabeled_codes = FinSet(relabel_val(val_map, v) for v in source.codes)
    relabeled_total = FinSet(relabel_val(val_map, v) for v in source.total)
    phi = _comparison_from_json(obj["phi"], relabeled_codes, target.codes, "'phi'")
    phi_tilde = _comparison_from_json(
        obj["phi_tilde"], relabeled_total, target.total, "'phi_tilde'"
    )
    functor = ElementwiseFunctor(source, target, val_map, phi, phi_tilde)
    return functor, s, s_target


def load_functor(
    path: str | Path,
) -> tuple[ElementwiseFunctor, PStructure | None, PStructure | None]:
    path = Path(path)
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON: {exc}") from None
    return functor_from_json(obj, path.parent)
