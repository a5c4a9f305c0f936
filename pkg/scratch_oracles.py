"""Scratch oracle computations to verify expected values before freezing them in tests."""
import itertools
from pistruct import *

B = Universe.from_table({"0": [], "1": ["*"]})
print("B total:", B.total)
ipU = B.ip_obj(B.codes)
print("ip_obj(B,U):", len(ipU), list(ipU))
ipT = B.ip_obj(B.total)
print("ip_obj(B,U~):", len(ipT), list(ipT))

# Oracle: independent enumeration of (code, assignment) pairs via raw itertools
def oracle_ip(u, X):
    out = []
    for a in u.codes:
        fib = [tup(a, e) for e in u.el[a]]
        for imgs in itertools.product(list(X), repeat=len(fib)):
            out.append((a, tuple(zip(fib, imgs))))
    return out

print("oracle ip(B,U) count:", len(oracle_ip(B, B.codes)))
print("oracle ip(B,U~) count:", len(oracle_ip(B, B.total)))

# Oracle: brute-force enumeration of all (P, P~) pairs over B with direct condition checks
def oracle_enumerate(u):
    ipU = u.ip_obj(u.codes); ipT = u.ip_obj(u.total)
    ipp = u.ip_mor(u.p)
    pres = []
    structs = []
    n_candidates = 0
    for p_imgs in itertools.product(u.codes.elements, repeat=len(ipU)):
        P = dict(zip(ipU.elements, p_imgs))
        for pt_imgs in itertools.product(u.total.elements, repeat=len(ipT)):
            Pt = dict(zip(ipT.elements, pt_imgs))
            n_candidates += 1
            # commuting: p(Pt(t)) == P(ipp(t)) for all t
            if not all(u.p.graph[Pt[t]] == P[ipp.graph[t]] for t in ipT):
                continue
            pres.append((p_imgs, pt_imgs))
            # pullback: mediating t -> (ipp t, Pt t) bijective onto {(i,w): P(i)==p(w)}
            target = {(i, w) for i in ipU for w in u.total if P[i] == u.p.graph[w]}
            med = [(ipp.graph[t], Pt[t]) for t in ipT]
            if len(set(med)) == len(med) and set(med) == target:
                structs.append((p_imgs, pt_imgs))
    return pres, structs, n_candidates

pres, structs, n = oracle_enumerate(B)
print("B oracle: candidates", n, "pre", len(pres), "structures", len(structs))
for p_imgs, pt in structs:
    print("  structure P:", [f"{k!r}->{v!r}" for k, v in zip(ipU.elements, p_imgs)])
for p_imgs, pt in pres:
    print("  pre P:", [f"{v!r}" for v in p_imgs])

# Library result must agree
lp, ls = enumerate_p_structures(B)
print("library: pre", len(lp), "structures", len(ls))
print("canonical:", canonical_p_structure(B) == ls[0] if ls else None)

# V2 obstruction
V2 = Universe.from_table({"0": [], "1": ["x0"], "2": ["x0", "x1"]})
print("V2 obstruction:", counting_obstruction(V2))
print("V2 search_structures:", len(search_structures(V2)))
print("V2 ip sizes:", len(V2.ip_obj(V2.codes)), len(V2.ip_obj(V2.total)))

# B2 oracle count
B2 = Universe.from_table({"0": [], "1a": ["*"], "1b": ["*"]})
pres2, structs2, n2 = oracle_enumerate(B2)
print("B2 oracle: candidates", n2, "pre", len(pres2), "structures", len(structs2))
lp2, ls2 = enumerate_p_structures(B2)
print("B2 library: pre", len(lp2), "structures", len(ls2))
print("B2 search:", len(search_structures(B2)))
print("B2 canonical valid:", canonical_p_structure(B2) is not None)
