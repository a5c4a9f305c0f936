import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pistruct import Val, atom, canonical_p_structure, check_p_structure, tup
from pistruct.serialize import (
    SchemaError,
    functor_from_json,
    load_functor,
    load_universe,
    table_to_json,
    universe_from_json,
    universe_to_json,
    val_from_key,
    val_key,
)

vals = st.recursive(
    st.sampled_from([atom(c) for c in "ab*"]),
    lambda kids: st.lists(kids, max_size=3).map(lambda xs: tup(*xs)),
    max_leaves=5,
)


@given(vals)
def test_val_key_roundtrip(v):
    assert val_from_key(val_key(v)) == v


def test_val_key_is_compact_json():
    v = tup(atom("1"), tup(tup(atom("a"), atom("b"))))
    assert val_key(v) == '["1",[["a","b"]]]'


def test_universe_roundtrip(bool_u, bool_s):
    obj = universe_to_json(bool_u, bool_s)
    u, s = universe_from_json(obj)
    assert u == bool_u and s == bool_s


def test_universe_canonical_p(bool_u):
    u, s = universe_from_json({"U": ["0", "1"], "El": {"0": [], "1": ["*"]}, "P": "canonical"})
    assert u == bool_u
    assert s == canonical_p_structure(bool_u)
    assert check_p_structure(u, s)


def test_universe_without_p(v2_u):
    u, s = universe_from_json({"U": ["0", "1", "2"], "El": {"0": [], "1": ["x0"], "2": ["x0", "x1"]}})
    assert u == v2_u and s is None


def test_canonical_p_rejected_when_absent(v2_u):
    with pytest.raises(SchemaError):
        universe_from_json(
            {"U": ["0", "1", "2"], "El": {"0": [], "1": ["x0"], "2": ["x0", "x1"]}, "P": "canonical"}
        )


@pytest.mark.parametrize(
    "doc",
    [
        {"U": ["0"], "El": {"0": []}, "extra": 1},
        {"U": ["0"]},
        {"U": "0", "El": {"0": []}},
        {"U": ["0"], "El": {"1": []}},
        {"U": ["0", "0"], "El": {"0": []}},
        {"U": ["0"], "El": {"0": ["e", "e"]}},
        {"U": ["0"], "El": {"0": []}, "P": {"table": {}}},
    ],
)
def test_schema_rejects_bad_universe_documents(doc):
    with pytest.raises(SchemaError):
        universe_from_json(doc)


def test_explicit_tables_must_be_total(bool_u):
    doc = universe_to_json(bool_u, canonical_p_structure(bool_u))
    first_key = next(iter(doc["P"]["table"]))
    del doc["P"]["table"][first_key]
    with pytest.raises(SchemaError):
        universe_from_json(doc)


def test_table_keys_are_canonically_ordered(bool_u, bool_s):
    keys = list(table_to_json(bool_s.P))
    assert keys == sorted(keys, key=lambda k: val_from_key(k))


def test_load_universe_files(data_dir, bool_u):
    u, s = load_universe(data_dir / "bool.json")
    assert u == bool_u and s is not None
    u2, s2 = load_universe(data_dir / "v2.json")
    assert s2 is None
    _, s3 = load_universe(data_dir / "bool_pre.json")
    assert s3 is not None and not check_p_structure(u, s3)


def test_load_functor_file(data_dir, bool_u, b2_u):
    functor, s, s_target = load_functor(data_dir / "bool_to_b2.json")
    assert functor.source == bool_u and functor.target == b2_u
    assert s is not None and s_target is not None
    assert functor.apply_val(atom("1")) == atom("1a")


def test_functor_inline_universe(bool_u):
    doc = {
        "source": {"U": ["0", "1"], "El": {"0": [], "1": ["*"]}, "P": "canonical"},
        "target": {"U": ["0", "1"], "El": {"0": [], "1": ["*"]}, "P": "canonical"},
        "val_map": {},
        "phi": "inclusion",
        "phi_tilde": "inclusion",
    }
    functor, s, s_target = functor_from_json(doc, base_dir=None)
    assert functor.source == bool_u and s == s_target


def test_functor_schema_rejections(data_dir):
    good = json.loads((data_dir / "bool_to_b2.json").read_text())
    bad = dict(good)
    bad["unknown"] = 1
    with pytest.raises(SchemaError):
        functor_from_json(bad, data_dir)
    bad = dict(good)
    bad["val_map"] = {"1": 2}
    with pytest.raises(SchemaError):
        functor_from_json(bad, data_dir)
    bad = dict(good)
    bad["phi"] = "inclusion"
    bad["val_map"] = {"1": "zzz"}  # image not inside the target codes
    with pytest.raises(SchemaError):
        functor_from_json(bad, data_dir)


def test_universe_json_is_deterministic(bool_u, bool_s):
    a = json.dumps(universe_to_json(bool_u, bool_s), sort_keys=True)
    b = json.dumps(universe_to_json(bool_u, bool_s), sort_keys=True)
    assert a == b
