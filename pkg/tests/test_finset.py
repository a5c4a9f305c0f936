import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pistruct import (
    EndpointMismatch,
    FinFun,
    FinSet,
    Square,
    Val,
    all_finfuns,
    assoc,
    assoc_items,
    atom,
    compose,
    dependent_product,
    finfun_inverse,
    global_elements,
    hom_size,
    identity,
    is_pullback_square,
    product,
    pullback,
    terminal,
    terminal_map,
    tup,
)

vals = st.recursive(
    st.sampled_from([atom(c) for c in "abcd"]),
    lambda kids: st.lists(kids, max_size=3).map(lambda xs: tup(*xs)),
    max_leaves=5,
)
finsets = st.lists(vals, max_size=4).map(FinSet)


@st.composite
def fun_chains(draw, length=2):
    """A composable chain of functions over generated sets."""
    sets = [draw(finsets)]
    for _ in range(length):
        nxt = draw(finsets)
        if len(sets[-1]) > 0 and len(nxt) == 0:
            nxt = draw(finsets.filter(lambda s: len(s) > 0))
        sets.append(nxt)
    funs = []
    for a, b in zip(sets, sets[1:]):
        graph = {x: draw(st.sampled_from(b.elements)) for x in a}
        funs.append(FinFun(a, b, graph))
    return funs


# ---- values and their order ----


@given(vals, vals)
def test_val_order_total(x, y):
    assert (x < y) + (y < x) + (x == y) == 1


@given(vals, vals, vals)
def test_val_order_transitive(x, y, z):
    if x < y and y < z:
        assert x < z


@given(vals, vals)
def test_atoms_precede_tuples(x, y):
    if x.is_atom and not y.is_atom:
        assert x < y


@given(vals)
def test_val_json_roundtrip(v):
    assert Val.from_json(v.to_json()) == v


def test_val_is_atom_xor_tuple():
    with pytest.raises(ValueError):
        Val(name="a", items=(atom("b"),))
    with pytest.raises(ValueError):
        Val()


@given(st.dictionaries(vals, vals, max_size=4))
def test_assoc_roundtrip(mapping):
    assert dict(assoc_items(assoc(mapping))) == mapping


# ---- finite sets and functions ----


def test_finset_canonical_order():
    s = FinSet([atom("b"), atom("a"), atom("b"), tup(atom("a"), atom("a"))])
    assert s.elements == (atom("a"), atom("b"), tup(atom("a"), atom("a")))
    assert len(s) == 3 and atom("a") in s


def test_finfun_validation():
    a, b = FinSet([atom("x")]), FinSet([atom("y")])
    with pytest.raises(EndpointMismatch):
        FinFun(a, b, {})
    with pytest.raises(EndpointMismatch):
        FinFun(a, b, {atom("x"): atom("z")})


@given(fun_chains(length=1))
def test_compose_identity_laws(funs):
    (f,) = funs
    assert compose(identity(f.dom), f) == f
    assert compose(f, identity(f.cod)) == f


@given(fun_chains(length=3))
def test_compose_associative(funs):
    f, g, h = funs
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_compose_endpoint_mismatch():
    f = identity(FinSet([atom("x")]))
    g = identity(FinSet([atom("y")]))
    with pytest.raises(EndpointMismatch):
        compose(f, g)


def test_singleton_chase():
    a, b, c = (FinSet([atom(n)]) for n in "abc")
    f = FinFun(a, b, {atom("a"): atom("b")})
    g = FinFun(b, c, {atom("b"): atom("c")})
    assert compose(f, g).graph == {atom("a"): atom("c")}


def test_identity_of_empty_and_composition():
    e = FinSet()
    assert identity(e).graph == {}
    two = FinSet([atom("a"), atom("b")])
    assert identity(two).graph == {atom("a"): atom("a"), atom("b"): atom("b")}
    assert compose(identity(two), identity(two)) == identity(two)


# ---- terminal object ----


def test_terminal_and_unique_maps():
    assert terminal().elements == (atom("*"),)
    two = FinSet([atom("a"), atom("b")])
    assert list(all_finfuns(two, terminal())) == [terminal_map(two)]
    assert terminal_map(two).graph == {atom("a"): atom("*"), atom("b"): atom("*")}
    assert terminal_map(FinSet()).graph == {}


# ---- products ----


def test_product_counts_and_projections():
    a = FinSet([atom("a"), atom("b")])
    b = FinSet([atom("x"), atom("y"), atom("z")])
    carrier, pr1, pr2 = product(a, b)
    assert len(carrier) == 6
    for e in carrier:
        assert pr1(e) == e.items[0] and pr2(e) == e.items[1]
    empty, _, _ = product(FinSet(), b)
    assert len(empty) == 0
    single, _, _ = product(FinSet([atom("a")]), FinSet([atom("x")]))
    assert single.elements == (tup(atom("a"), atom("x")),)


# ---- pullbacks ----


def test_pullback_along_identity():
    c = FinSet([atom("c"), atom("d")])
    b = FinSet([atom("u"), atom("v")])
    g = FinFun(b, c, {atom("u"): atom("c"), atom("v"): atom("c")})
    carrier, _, pr2 = pullback(identity(c), g)
    assert carrier.elements == tuple(tup(g(y), y) for y in b)
    assert pr2.is_bijection()


def test_pullback_over_terminal_is_product():
    a = FinSet([atom("a"), atom("b")])
    b = FinSet([atom("x"), atom("y")])
    carrier, _, _ = pullback(terminal_map(a), terminal_map(b))
    expected, _, _ = product(a, b)
    assert carrier == expected


def test_pullback_with_empty_leg():
    c = FinSet([atom("c")])
    f = FinFun(FinSet([atom("x")]), c, {atom("x"): atom("c")})
    g = FinFun(FinSet(), c, {})
    carrier, _, _ = pullback(f, g)
    assert len(carrier) == 0


def test_pullback_codomain_mismatch():
    f = identity(FinSet([atom("x")]))
    g = identity(FinSet([atom("y")]))
    with pytest.raises(EndpointMismatch):
        pullback(f, g)


def _small_cospans():
    c = FinSet([atom("c"), atom("d")])
    a = FinSet([atom("a"), atom("b")])
    b = FinSet([atom("x"), atom("y")])
    for f in all_finfuns(a, c):
        for g in all_finfuns(b, c):
            yield f, g


def test_pullback_universal_property():
    # every commuting cone from a small test family has exactly one mediator
    w_family = [FinSet(), FinSet([atom("w")]), FinSet([atom("w"), atom("v")])]
    for f, g in _small_cospans():
        carrier, pr1, pr2 = pullback(f, g)
        for w in w_family:
            for a_leg in all_finfuns(w, f.dom):
                for b_leg in all_finfuns(w, g.dom):
                    if compose(a_leg, f) != compose(b_leg, g):
                        continue
                    mediators = [
                        m
                        for m in all_finfuns(w, carrier)
                        if compose(m, pr1) == a_leg and compose(m, pr2) == b_leg
                    ]
                    assert len(mediators) == 1


def test_canonical_pullback_square_is_pullback():
    for f, g in _small_cospans():
        carrier, pr1, pr2 = pullback(f, g)
        assert is_pullback_square(Square(top=pr2, left=pr1, right=g, bottom=f))


def test_pullback_square_stable_under_corner_bijection():
    c = FinSet([atom("c")])
    a = FinSet([atom("a"), atom("b")])
    f = FinFun(a, c, {atom("a"): atom("c"), atom("b"): atom("c")})
    g = FinFun(FinSet([atom("x")]), c, {atom("x"): atom("c")})
    carrier, pr1, pr2 = pullback(f, g)
    relabeled = FinSet([atom("w1"), atom("w2")])
    j = FinFun(relabeled, carrier, dict(zip(relabeled.elements, carrier.elements)))
    square = Square(top=compose(j, pr2), left=compose(j, pr1), right=g, bottom=f)
    assert is_pullback_square(square)


def test_square_with_duplicated_element_is_not_pullback():
    # double one element of the apex and map both copies the same way
    c = FinSet([atom("c")])
    a = FinSet([atom("a")])
    f = FinFun(a, c, {atom("a"): atom("c")})
    g = FinFun(FinSet([atom("x")]), c, {atom("x"): atom("c")})
    doubled = FinSet([atom("e1"), atom("e2")])
    top = FinFun(doubled, g.dom, {atom("e1"): atom("x"), atom("e2"): atom("x")})
    left = FinFun(doubled, a, {atom("e1"): atom("a"), atom("e2"): atom("a")})
    square = Square(top=top, left=left, right=g, bottom=f)
    assert square.commutes()
    assert not is_pullback_square(square)


def test_identity_square_is_pullback():
    a = FinSet([atom("a"), atom("b")])
    i = identity(a)
    assert is_pullback_square(Square(top=i, left=i, right=i, bottom=i))


def test_noncommuting_square_is_not_pullback():
    a = FinSet([atom("a"), atom("b")])
    swap = FinFun(a, a, {atom("a"): atom("b"), atom("b"): atom("a")})
    i = identity(a)
    assert not is_pullback_square(Square(top=i, left=i, right=i, bottom=swap))


def test_square_endpoint_validation():
    a = FinSet([atom("a")])
    b = FinSet([atom("b")])
    with pytest.raises(EndpointMismatch):
        Square(top=identity(a), left=identity(a), right=identity(b), bottom=identity(a))


# ---- dependent products ----


def test_dependent_product_empty_fibers():
    # no fibre elements: exactly one (empty) section per base point
    b = FinSet([atom("b1"), atom("b2")])
    p = FinFun(FinSet(), b, {})
    q = FinFun(FinSet(), FinSet(), {})
    carrier, to_base = dependent_product(p, q)
    assert len(carrier) == 2
    assert sorted(to_base(e) for e in carrier) == sorted(b.elements)


def test_dependent_product_identity_sections():
    b = FinSet([atom("b")])
    e = FinSet([atom("e1"), atom("e2")])
    p = FinFun(e, b, {x: atom("b") for x in e})
    carrier, _ = dependent_product(p, identity(e))
    assert len(carrier) == 1


def test_dependent_product_counting():
    # two fibre elements with three options each: nine sections
    b = FinSet([atom("b")])
    e = FinSet([atom("e1"), atom("e2")])
    x = FinSet([atom(f"x{i}{j}") for i in range(1, 3) for j in range(3)])
    p = FinFun(e, b, {v: atom("b") for v in e})
    q = FinFun(x, e, {v: atom("e" + v.name[1]) for v in x})
    carrier, _ = dependent_product(p, q)
    assert len(carrier) == 9


@given(fun_chains(length=2))
@settings(max_examples=60)
def test_dependent_product_counting_law(funs):
    q, p = funs
    carrier, to_base = dependent_product(p, q)
    q_fiber = {e: sum(1 for x in q.dom if q(x) == e) for e in p.dom}
    for b in p.cod:
        expected = 1
        for e in p.dom:
            if p(e) == b:
                expected *= q_fiber[e]
        assert sum(1 for v in carrier if to_base(v) == b) == expected


# ---- global elements and hom enumeration ----


def test_global_elements():
    assert global_elements(FinSet()) == []
    two = FinSet([atom("a"), atom("b")])
    elems = global_elements(two)
    assert len(elems) == 2
    assert [f(atom("*")) for f in elems] == list(two.elements)


def test_all_finfuns_count_and_order():
    a = FinSet([atom("a"), atom("b")])
    b = FinSet([atom("x"), atom("y"), atom("z")])
    funs = list(all_finfuns(a, b))
    assert len(funs) == hom_size(a, b) == 9
    assert funs[0].graph == {atom("a"): atom("x"), atom("b"): atom("x")}
    assert len(set(funs)) == 9
    assert list(all_finfuns(a, FinSet())) == []
    assert len(list(all_finfuns(FinSet(), FinSet()))) == 1


def test_finfun_inverse():
    a = FinSet([atom("a"), atom("b")])
    swap = FinFun(a, a, {atom("a"): atom("b"), atom("b"): atom("a")})
    assert compose(swap, finfun_inverse(swap)) == identity(a)
    with pytest.raises(ValueError):
        finfun_inverse(terminal_map(a))


def test_determinism_of_constructions():
    a = FinSet([atom("b"), atom("a")])
    b = FinSet([atom("y"), atom("x")])
    assert product(a, b)[0].elements == product(FinSet([atom("a"), atom("b")]), b)[0].elements
    f = terminal_map(a)
    g = terminal_map(b)
    c1, _, _ = pullback(f, g)
    c2, _, _ = pullback(f, g)
    assert c1.elements == c2.elements
