"""Scratch verification of mutation catching and the functor layer."""
import time
from pistruct import *
from pistruct.csystem import q_mor, f_star
from pistruct.finset import FinFun, compose

V2 = Universe.from_table({"0": [], "1": ["x0"], "2": ["x0", "x1"]})
B = Universe.from_table({"0": [], "1": ["*"]})

# Mutation 1: corrupted q (collapse the fibre to its least element)
def bad_q(f, classifier):
    good = q_mor(f, classifier)
    fibers = {}
    for v in good.dst.int_obj():
        fibers.setdefault(v.items[0], v)  # keeps least by canonical order
    graph = {v: fibers[good.carrier.graph[v].items[0]] for v in good.src.int_obj()}
    return CtxMor(good.src, good.dst, FinFun(good.src.int_obj(), good.dst.int_obj(), graph))

rep = check_csystem_axioms(V2, 2, q_mor_impl=bad_q)
bad = rep.first_failure()
print("corrupted q caught:", not rep.passed, "at", bad.name if bad else None)
print("  witness present:", bad.witness is not None and len(bad.witness) > 0)

# Mutation 2: corrupted restriction (swap two codes in the last classifier)
def bad_f_star(f, t):
    good = f_star(f, t)
    swap = {atom("1"): atom("2"), atom("2"): atom("1")}
    last = good.ext[-1]
    graph = {k: swap.get(v, v) for k, v in last.graph.items()}
    return ObN(good.base, good.ext[:-1] + (FinFun(last.dom, last.cod, graph),))

rep = check_csystem_axioms(V2, 2, f_star_impl=bad_f_star)
bad = rep.first_failure()
print("corrupted restriction caught:", not rep.passed, "at", bad.name if bad else None)

# Functor layer
s_b = canonical_p_structure(B)
idf = identity_functor(B)
hom = build_psi_xi(idf, 2)
print("identity functor psi/xi ok")
print("pre-p-functor identity:", check_pre_p_functor(hom, s_b, s_b))
rep = check_pi_lambda_homomorphism(idf, s_b, s_b, 2)
print("identity homomorphism:", rep.passed, [(c.name, c.count) for c in rep.checks])

# Relabeling B -> B' (rename all atoms)
Bp = Universe.from_table({"z": [], "o": ["s"]})
relab = ElementwiseFunctor(
    B, Bp, {"0": "z", "1": "o", "*": "s"},
    FinFun(FinSet([atom("z"), atom("o")]), Bp.codes, {atom("z"): atom("z"), atom("o"): atom("o")}),
    FinFun(FinSet([tup(atom("o"), atom("s"))]), Bp.total, {tup(atom("o"), atom("s")): tup(atom("o"), atom("s"))}),
)
hom2 = build_psi_xi(relab, 2)
s_bp = canonical_p_structure(Bp)
print("relabeling pre-p-functor:", check_pre_p_functor(hom2, s_b, s_bp))
rep = check_pi_lambda_homomorphism(relab, s_b, s_bp, 2)
print("relabeling homomorphism:", rep.passed)

# Embedding B -> B2
B2 = Universe.from_table({"0": [], "1a": ["*"], "1b": ["*"]})
phi_dom = FinSet([atom("0"), atom("1a")])
phit_dom = FinSet([tup(atom("1a"), atom("*"))])
emb = ElementwiseFunctor(
    B, B2, {"1": "1a"},
    FinFun(phi_dom, B2.codes, {v: v for v in phi_dom}),
    FinFun(phit_dom, B2.total, {v: v for v in phit_dom}),
)
hom3 = build_psi_xi(emb, 2)
print("xi1 size:", len(hom3.xi1.dom), "->", len(hom3.xi1.cod))
s_b2 = canonical_p_structure(B2)
print("embedding pre-p-functor (canonical target):", check_pre_p_functor(hom3, s_b, s_b2))
t0 = time.perf_counter()
rep = check_pi_lambda_homomorphism(emb, s_b, s_b2, 2)
print("embedding homomorphism:", rep.passed, f"{time.perf_counter()-t0:.2f}s",
      [(c.name, c.count) for c in rep.checks])

# Incompatible target: structure choosing 1b on the image points
pres2, structs2 = enumerate_p_structures(B2)
ipU2 = B2.ip_obj(B2.codes)
img_empty = ip_element(atom("0"), {})
bad_targets = [s for s in structs2 if s.P.graph[img_empty] == atom("1b")]
print("structures with other code on empty point:", len(bad_targets))
s_bad = bad_targets[0]
print("embedding pre-p-functor (bad target):", check_pre_p_functor(hom3, s_b, s_bad))
cex = pi_transport_counterexample(emb, s_b, s_bad, 2)
print("pi-equality counterexample found:", cex is not None)

# transport chain stepwise
root = empty_context(B)
for T in enum_ob_n(root, 2):
    chain = pi_transport_chain(hom3, s_b, s_b2, root, T)
    ok = all(chain[i] == chain[i + 1] for i in range(len(chain) - 1))
    print("chain ok:", ok)

# H preserves ft/proj
ctxs = contexts_up_to(B, 2)
print("H preserves ft:", all(
    hom3.on_context(c.ft()) == hom3.on_context(c).ft() for c in ctxs if len(c) >= 1))
print("H preserves proj:", all(
    hom3.on_morphism(proj(c)) == proj(hom3.on_context(c)) for c in ctxs if len(c) >= 1))
