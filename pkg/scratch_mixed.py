"""Verify the mixed-structure example and generate the CLI data files."""
import json
from pathlib import Path
from pistruct import *
from pistruct.serialize import table_to_json, universe_to_json, val_key

B = Universe.from_table({"0": [], "1": ["*"]})
V2 = Universe.from_table({"0": [], "1": ["x0"], "2": ["x0", "x1"]})

# Mixed structure on (B, V2, V2): P(0,[])=1, P(1,[*->b])=b, Ptilde analogous
ipU2 = B.ip_obj(V2.codes)
ipT2 = B.ip_obj(V2.total)
print("I_{p1}(U2):", len(ipU2), list(ipU2))
print("I_{p1}(U2~):", len(ipT2))

star_fib = tup(atom("1"), atom("*"))
p_graph = {}
for v in ipU2:
    code, assignment = ip_code(v), ip_assignment(v)
    p_graph[v] = atom("1") if not assignment else assignment[star_fib]
pt_graph = {}
for v in ipT2:
    code, assignment = ip_code(v), ip_assignment(v)
    pt_graph[v] = tup(atom("1"), atom("x0")) if not assignment else assignment[star_fib]
mixed = MixedPStructure(
    B, V2, V2,
    FinFun(ipU2, V2.codes, p_graph),
    FinFun(ipT2, V2.total, pt_graph),
)
print("mixed structure valid:", check_mixed_p_structure(mixed))

const = FinFun(ipT2, V2.total, {v: tup(atom("1"), atom("x0")) for v in ipT2})
mixed_bad = MixedPStructure(B, V2, V2, mixed.P, const)
print("mixed with constant P_tilde:", check_mixed_p_structure(mixed_bad))

# Diagonal consistency: every B structure is a mixed structure on (B,B,B)
pres, structs = enumerate_p_structures(B)
for s in pres:
    diag = MixedPStructure(B, B, B, s.P, s.P_tilde)
    assert check_mixed_p_structure(diag) == check_p_structure(B, s)
print("diagonal agreement on all B pre-structures: True")

# ---- data files ----
data = Path("data")
data.mkdir(exist_ok=True)

(data / "bool.json").write_text(json.dumps(
    {"U": ["0", "1"], "El": {"0": [], "1": ["*"]}, "P": "canonical"}, indent=2) + "\n")
(data / "v2.json").write_text(json.dumps(
    {"U": ["0", "1", "2"], "El": {"0": [], "1": ["x0"], "2": ["x0", "x1"]}}, indent=2) + "\n")
(data / "b2.json").write_text(json.dumps(
    {"U": ["0", "1a", "1b"], "El": {"0": [], "1a": ["*"], "1b": ["*"]}, "P": "canonical"},
    indent=2) + "\n")

# The non-pullback pre-structure on B (P sends the (1,[*->0]) point to 1)
pres, structs = enumerate_p_structures(B)
other = [p for p in pres if p not in structs][0]
obj = universe_to_json(B, other)
(data / "bool_pre.json").write_text(json.dumps(obj, indent=2) + "\n")

# V2 with an explicit commuting pair that is not a pullback pair
ipU = V2.ip_obj(V2.codes)
ipT = V2.ip_obj(V2.total)
P = FinFun(ipU, V2.codes, {v: atom("1") for v in ipU})
Pt = FinFun(ipT, V2.total, {v: tup(atom("1"), atom("x0")) for v in ipT})
s_v2 = PStructure(P, Pt)
print("v2 explicit pair: pre:", check_pre_p_structure(V2, s_v2),
      "full:", check_p_structure(V2, s_v2))
(data / "v2_table.json").write_text(json.dumps(universe_to_json(V2, s_v2), indent=2) + "\n")

# Functor files
(data / "bool_to_b2.json").write_text(json.dumps({
    "source": "bool.json",
    "target": "b2.json",
    "val_map": {"1": "1a"},
    "phi": "inclusion",
    "phi_tilde": "inclusion",
}, indent=2) + "\n")

# An incompatible target structure: same as canonical on B2 but choosing 1b
# on the two points in the image of the embedding
B2 = Universe.from_table({"0": [], "1a": ["*"], "1b": ["*"]})
pres2, structs2 = enumerate_p_structures(B2)
img_empty = ip_element(atom("0"), {})
img_one = ip_element(atom("1a"), {tup(atom("1a"), atom("*")): atom("1a")})
bad = [s for s in structs2
       if s.P.graph[img_empty] == atom("1b") and s.P.graph[img_one] == atom("1b")]
print("bad targets:", len(bad))
(data / "b2_alt.json").write_text(json.dumps(universe_to_json(B2, bad[0]), indent=2) + "\n")
(data / "bool_to_b2_bad.json").write_text(json.dumps({
    "source": "bool.json",
    "target": "b2_alt.json",
    "val_map": {"1": "1a"},
    "phi": "inclusion",
    "phi_tilde": "inclusion",
}, indent=2) + "\n")
print("data files written")
