"""Deliberately corrupted operations shared by the harness mutation tests."""

from pistruct import CtxMor, FinFun, ObN, atom, enumerate_p_structures, ip_element, tup
from pistruct.csystem import f_star as real_f_star
from pistruct.csystem import q_mor as real_q_mor


def corrupted_q(f, classifier):
    """Collapse every fibre of the lift onto its least element."""
    good = real_q_mor(f, classifier)
    least = {}
    for v in good.dst.int_obj():
        least.setdefault(v.items[0], v)
    graph = {v: least[good.carrier.graph[v].items[0]] for v in good.src.int_obj()}
    return CtxMor(good.src, good.dst, FinFun(good.src.int_obj(), good.dst.int_obj(), graph))


def corrupted_f_star(f, t):
    """Swap two codes in the restricted top-stage classifier."""
    good = real_f_star(f, t)
    swap = {atom("1"): atom("2"), atom("2"): atom("1")}
    last = good.ext[-1]
    graph = {k: swap.get(v, v) for k, v in last.graph.items()}
    return ObN(good.base, good.ext[:-1] + (FinFun(last.dom, last.cod, graph),))


def incompatible_target(b2_u):
    """A pullback pair choosing the other duplicate code on the image points."""
    _, structs = enumerate_p_structures(b2_u)
    img_empty = ip_element(atom("0"), {})
    img_one = ip_element(atom("1a"), {tup(atom("1a"), atom("*")): atom("1a")})
    return [
        s
        for s in structs
        if s.P.graph[img_empty] == atom("1b") and s.P.graph[img_one] == atom("1b")
    ][0]
