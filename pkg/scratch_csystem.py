"""Scratch verification of the context calculus and derived operations."""
import time
from pistruct import *

B = Universe.from_table({"0": [], "1": ["*"]})
root = empty_context(B)
print("int([]):", root.int_obj())

F1 = FinFun(root.int_obj(), B.codes, {atom("*"): atom("1")})
F0 = FinFun(root.int_obj(), B.codes, {atom("*"): atom("0")})
c1 = root.extend(F1)
c0 = root.extend(F0)
print("int([F=1]):", c1.int_obj())
print("int([F=0]):", c0.int_obj())

print("enum_ob_n([],1):", len(enum_ob_n(root, 1)))
print("enum_ob_n([],2):", len(enum_ob_n(root, 2)))
print("enum_tob_n([],1):", len(enum_tob_n(root, 1)))
print("enum_tob_n([],2):", len(enum_tob_n(root, 2)))

# mu examples
star = atom("*")
for T in enum_ob_n(root, 2):
    print("mu2:", [f"{F.graph}" for F in T.ext], "->", mu(root, 2, T).graph[star])

# pi_op on canonical structure
s = canonical_p_structure(B)
print("canonical P:", {repr(k): repr(v) for k, v in s.P.graph.items()})
print("canonical Pt:", {repr(k): repr(v) for k, v in s.P_tilde.graph.items()})
ev = PiLambdaEvaluator(B, s)
for T in enum_ob_n(root, 2):
    out = ev.pi_op(root, T)
    print("Pi of", [repr(F.graph[k]) for F in T.ext[:1] for k in F.dom], "->", out.ext[0].graph[star])

# check_pre_pi_lambda at len 3
t0 = time.perf_counter()
rep = check_pre_pi_lambda(ev, 3)
print("pre-pi-lambda B len3:", rep.passed, "checks:", [(c.name, c.count) for c in rep.checks], f"{time.perf_counter()-t0:.2f}s")

# pullback check everywhere
ctxs = contexts_up_to(B, 3)
print("contexts len<=3:", len(ctxs))
print("pullback all:", all(check_pi_lambda_pullback(ev, c) for c in ctxs))

# other pre-structure: pre passes, pullback fails at root
pres, structs = enumerate_p_structures(B)
other = [p for p in pres if p not in structs][0]
ev2 = PiLambdaEvaluator(B, other)
rep2 = check_pre_pi_lambda(ev2, 3)
print("other pre-structure pre-checks:", rep2.passed)
print("other pullback at []:", check_pi_lambda_pullback(ev2, root))
print("detail:", pullback_check_detail(ev2, root))

# recover roundtrip
for cand in pres:
    evc = PiLambdaEvaluator(B, cand)
    rec = recover_p_structure(B, evc.pi_op, evc.lambda_op, contexts_up_to(B, 2))
    print("recover roundtrip:", rec == cand)

# axioms
t0 = time.perf_counter()
rep3 = check_csystem_axioms(B, 3)
print("axioms B len3:", rep3.passed, f"{time.perf_counter()-t0:.2f}s", [(c.name, c.count) for c in rep3.checks])

V2 = Universe.from_table({"0": [], "1": ["x0"], "2": ["x0", "x1"]})
t0 = time.perf_counter()
rep4 = check_csystem_axioms(V2, 3)
print("axioms V2 len3:", rep4.passed, f"{time.perf_counter()-t0:.2f}s", [(c.name, c.count) for c in rep4.checks])

# classify
t0 = time.perf_counter()
crep = classify_universe(B, 3)
print("classify B:", crep.passed, crep.scope, f"{time.perf_counter()-t0:.2f}s")
t0 = time.perf_counter()
crep2 = classify_universe(V2, 2)
print("classify V2:", crep2.passed, {k: v for k, v in crep2.scope.items() if k != 'budget'}, f"{time.perf_counter()-t0:.2f}s")
