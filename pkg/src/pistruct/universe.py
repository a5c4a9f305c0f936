"""Finite universes and the code-level dependent-product structures.

A universe is a finite family of finite sets presented by a table: a
set of codes ``U`` and, for each code, its element set.  The total
space is the set of pairs ``(code, element)`` with the first-component
projection ``p``.  On top of a universe we build the indexed-family
object ``I_p(X)`` (all pairs of a code with an assignment of its fibre
into ``X``), and define, check, enumerate and generate the pairs
``(P, P~)`` of maps ``I_p(U) -> U`` and ``I_p(U~) -> U~`` whose square
with ``p`` commutes (pre-structures) or is a pullback (structures).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .budget import Budget
from .finset import (
    EndpointMismatch,
    FinFun,
    FinSet,
    Square,
    Val,
    all_finfuns,
    assoc,
    assoc_items,
    atom,
    hom_size,
    is_pullback_square,
    pullback,
    tup,
)


def ip_element(code: Val, assignment) -> Val:
    """Encode a code plus a fibre assignment as a single value."""
    return tup(code, assoc(assignment))


def ip_code(v: Val) -> Val:
    return v.items[0]


def ip_assignment(v: Val) -> dict[Val, Val]:
    return dict(assoc_items(v.items[1]))


class Universe:
    """A finite family of finite sets indexed by a finite set of codes."""

    __slots__ = ("codes", "el", "total", "p", "_fibers", "_ip_cache", "_ctx_cache", "_hash")

    def __init__(self, codes: FinSet, el: Mapping[Val, FinSet]):
        if set(el) != set(codes.elements):
            raise ValueError("element table must cover exactly the codes")
        self.codes = codes
        self.el: dict[Val, FinSet] = {a: el[a] for a in codes.elements}
        self.total = FinSet(tup(a, e) for a in codes for e in self.el[a])
        self.p = FinFun(self.total, codes, {v: v.items[0] for v in self.total})
        self._fibers = {a: FinSet(tup(a, e) for e in self.el[a]) for a in codes}
        self._ip_cache: dict[FinSet, FinSet] = {}
        self._ctx_cache: dict = {}
        self._hash = hash((codes, tuple((a, self.el[a]) for a in codes.elements)))

    @staticmethod
    def from_table(table: Mapping[str, Iterable[str]]) -> "Universe":
        """Build from a plain string table ``{code: [element, ...]}``."""
        codes = FinSet(atom(c) for c in table)
        el = {atom(c): FinSet(atom(e) for e in elems) for c, elems in table.items()}
        return Universe(codes, el)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Universe)
            and self.codes == other.codes
            and self.el == other.el
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        sizes = ",".join(f"{a!r}:{len(self.el[a])}" for a in self.codes)
        return f"Universe({sizes})"

    def fiber(self, a: Val) -> FinSet:
        """The fibre of the projection over a code, as pairs ``(a, e)``."""
        if a not in self.codes:
            raise KeyError(f"unknown code {a!r}")
        return self._fibers[a]

    def ip_obj(self, x: FinSet) -> FinSet:
        """The indexed-family object on ``x``.

        All pairs of a code ``a`` with a total assignment of the fibre
        over ``a`` into ``x``.  Maps ``Y -> ip_obj(x)`` correspond to
        pairs of a classifier ``F: Y -> codes`` and a fill
        ``pullback(F, p) -> x``; see :func:`ip_pair_of_map`.
        """
        got = self._ip_cache.get(x)
        if got is not None:
            return got
        elems = []
        for a in self.codes:
            fib = self._fibers[a].elements
            for images in itertools.product(x.elements, repeat=len(fib)):
                elems.append(ip_element(a, zip(fib, images)))
        out = FinSet(elems)
        self._ip_cache[x] = out
        return out

    def ip_mor(self, f: FinFun) -> FinFun:
        """Post-compose every assignment with ``f`` (functorial action)."""
        dom = self.ip_obj(f.dom)
        cod = self.ip_obj(f.cod)
        graph = {}
        for v in dom:
            graph[v] = ip_element(
                ip_code(v), ((u, f.graph[x]) for u, x in assoc_items(v.items[1]))
            )
        return FinFun(dom, cod, graph)


def ip_map_of_pair(u: Universe, x: FinSet, classifier: FinFun, fill: FinFun) -> FinFun:
    """Package a classifier with a fill over its pullback as one map.

    ``classifier: Y -> codes`` and ``fill: pullback(classifier, p) -> x``
    give ``Y -> ip_obj(x)`` by reading off, at each point, the code and
    the fibrewise values of the fill.
    """
    carrier, _, _ = pullback(classifier, u.p)
    if fill.dom != carrier or fill.cod != x:
        raise EndpointMismatch("fill must live over the classifier pullback")
    graph = {}
    for y in classifier.dom:
        a = classifier.graph[y]
        graph[y] = ip_element(a, ((w, fill.graph[tup(y, w)]) for w in u.fiber(a)))
    return FinFun(classifier.dom, u.ip_obj(x), graph)


def ip_pair_of_map(u: Universe, x: FinSet, h: FinFun) -> tuple[FinFun, FinFun]:
    """Inverse of :func:`ip_map_of_pair`: split a map into classifier and fill."""
    if h.cod != u.ip_obj(x):
        raise EndpointMismatch("map must land in the indexed-family object")
    classifier = FinFun(h.dom, u.codes, {y: ip_code(h.graph[y]) for y in h.dom})
    carrier, _, _ = pullback(classifier, u.p)
    assignments = {y: ip_assignment(h.graph[y]) for y in h.dom}
    fill = FinFun(carrier, x, {e: assignments[e.items[0]][e.items[1]] for e in carrier})
    return classifier, fill


@dataclass(frozen=True)
class PStructure:
    """A candidate pair of code-level operations.

    ``P`` acts on code families (``I_p(U) -> U``), ``P_tilde`` on
    element families (``I_p(U~) -> U~``).  No condition is assumed;
    pre-structure and structure status are checked, never presumed.
    """

    P: FinFun
    P_tilde: FinFun


def _check_endpoints(u: Universe, s: PStructure) -> None:
    if s.P.dom != u.ip_obj(u.codes) or s.P.cod != u.codes:
        raise EndpointMismatch("P must map the code-family object to the codes")
    if s.P_tilde.dom != u.ip_obj(u.total) or s.P_tilde.cod != u.total:
        raise EndpointMismatch("P_tilde must map the element-family object to the total space")


def structure_square(u: Universe, s: PStructure) -> Square:
    """The square whose commutativity/pullback status classifies ``s``."""
    return Square(top=s.P_tilde, left=u.ip_mor(u.p), right=u.p, bottom=s.P)


def check_pre_p_structure(u: Universe, s: PStructure) -> bool:
    """Whether the structure square commutes elementwise."""
    _check_endpoints(u, s)
    from .finset import compose

    return compose(u.ip_mor(u.p), s.P) == compose(s.P_tilde, u.p)


def check_p_structure(u: Universe, s: PStructure) -> bool:
    """Whether the structure square commutes and is a pullback."""
    _check_endpoints(u, s)
    return is_pullback_square(structure_square(u, s))


@dataclass(frozen=True)
class MixedPStructure:
    """A structure pair across a triple of universes.

    ``P: I_{p1}(U2) -> U3`` and ``P_tilde: I_{p1}(U2~) -> U3~``; the
    diagonal case with all three universes equal recovers
    :class:`PStructure`.
    """

    p1: Universe
    p2: Universe
    p3: Universe
    P: FinFun
    P_tilde: FinFun


def mixed_square(m: MixedPStructure) -> Square:
    return Square(
        top=m.P_tilde,
        left=m.p1.ip_mor(m.p2.p),
        right=m.p3.p,
        bottom=m.P,
    )


def check_mixed_p_structure(m: MixedPStructure) -> bool:
    """Whether the mixed square commutes and is a pullback."""
    if m.P.dom != m.p1.ip_obj(m.p2.codes) or m.P.cod != m.p3.codes:
        raise EndpointMismatch("mixed P endpoints do not match the triple")
    if m.P_tilde.dom != m.p1.ip_obj(m.p2.total) or m.P_tilde.cod != m.p3.total:
        raise EndpointMismatch("mixed P_tilde endpoints do not match the triple")
    return is_pullback_square(mixed_square(m))


def _point_size(u: Universe, point: Val) -> int:
    """Fibre size forced at a family point: the product over its assignment."""
    return math.prod(len(u.el[c]) for _, c in assoc_items(point.items[1]))


def enumerate_p_structures(
    u: Universe, budget: Budget | None = None
) -> tuple[list[PStructure], list[PStructure]]:
    """Exhaustively list commuting pairs and the pullback sub-list.

    Pairs appear in canonical lexicographic order of their graphs.  The
    valid ``P_tilde`` values at each point are exactly the fibre over
    the commuting constraint, so the loop never visits a non-commuting
    pair; this is an exact reorganization of the naive product search.
    """
    budget = budget or Budget()
    ip_u = u.ip_obj(u.codes)
    ip_t = u.ip_obj(u.total)
    ipp = u.ip_mor(u.p)
    budget.require(
        hom_size(ip_u, u.codes) * (len(ip_u) + len(ip_t) + 1),
        "pre-structure enumeration",
    )
    pres: list[PStructure] = []
    structs: list[PStructure] = []
    for P in all_finfuns(ip_u, u.codes):
        choices = [u.fiber(P.graph[ipp.graph[t]]).elements for t in ip_t]
        n_pairs = math.prod(len(c) for c in choices)
        budget.spend(max(1, n_pairs))
        if n_pairs == 0:
            continue
        for combo in itertools.product(*choices):
            s = PStructure(P, FinFun(ip_t, u.total, dict(zip(ip_t.elements, combo))))
            pres.append(s)
            if is_pullback_square(structure_square(u, s)):
                structs.append(s)
    return pres, structs


def counting_obstruction(u: Universe) -> dict | None:
    """A certificate that no pullback pair exists, if sizes rule one out.

    The pullback condition forces the element count of ``P``'s value at
    a family point to equal the product of the element counts over the
    point's assignment.  The first point (in canonical order) whose
    forced count is realized by no code is returned as a witness.
    """
    sizes = {len(u.el[c]) for c in u.codes}
    for point in u.ip_obj(u.codes):
        need = _point_size(u, point)
        if need not in sizes:
            return {
                "point": point.to_json(),
                "required_size": need,
                "available_sizes": sorted(sizes),
            }
    return None


def search_structures(u: Universe, budget: Budget | None = None) -> list[PStructure]:
    """All pullback pairs, found by size-forced pruning of the code choice.

    Equal to the pullback sub-list of :func:`enumerate_p_structures`
    but never walks the non-pullback part of the search space, so it
    stays feasible on universes whose commuting-pair space is huge.
    """
    budget = budget or Budget()
    ip_u = u.ip_obj(u.codes)
    ip_t = u.ip_obj(u.total)
    ipp = u.ip_mor(u.p)
    points = ip_u.elements
    candidates: list[list[Val]] = []
    for point in points:
        need = _point_size(u, point)
        matching = [c for c in u.codes if len(u.el[c]) == need]
        if not matching:
            return []
        candidates.append(matching)
    lifts: dict[Val, list[Val]] = {point: [] for point in points}
    for t in ip_t:
        lifts[ipp.graph[t]].append(t)
    n_p = math.prod(len(c) for c in candidates)
    n_perm = math.prod(math.factorial(len(lifts[point])) for point in points)
    budget.require(n_p * n_perm * (len(ip_t) + 1), "structure search")
    out: list[PStructure] = []
    for combo in itertools.product(*candidates):
        P = FinFun(ip_u, u.codes, dict(zip(points, combo)))
        per_point = []
        for point, c in zip(points, combo):
            fib = u.fiber(c).elements
            per_point.append(
                [list(zip(lifts[point], perm)) for perm in itertools.permutations(fib)]
            )
        for mix in itertools.product(*per_point):
            graph = {t: w for block in mix for t, w in block}
            s = PStructure(P, FinFun(ip_t, u.total, graph))
            budget.spend()
            if check_p_structure(u, s):
                out.append(s)
    out.sort(
        key=lambda s: (
            tuple(s.P.graph[v] for v in points),
            tuple(s.P_tilde.graph[t] for t in ip_t.elements),
        )
    )
    return out


def canonical_p_structure(u: Universe) -> PStructure | None:
    """The size-matching choice of a pullback pair, if codes allow one.

    ``P`` sends each family point to the least code whose element set
    has the forced size; ``P_tilde`` transports element tuples along
    the order-based enumeration of lifts.  Returns ``None`` when some
    forced size is realized by no code.
    """
    by_size: dict[int, Val] = {}
    for c in u.codes:
        by_size.setdefault(len(u.el[c]), c)
    ip_u = u.ip_obj(u.codes)
    p_graph = {}
    for point in ip_u:
        c = by_size.get(_point_size(u, point))
        if c is None:
            return None
        p_graph[point] = c
    P = FinFun(ip_u, u.codes, p_graph)

    ip_t = u.ip_obj(u.total)
    pt_graph = {}
    for t in ip_t:
        a = ip_code(t)
        assignment = ip_assignment(t)
        fib = u.fiber(a).elements
        base_point = ip_element(a, ((w, u.p.graph[assignment[w]]) for w in fib))
        c = P.graph[base_point]
        # position of the actual lift among all lifts, in mixed radix
        index = 0
        for w in fib:
            options = u.fiber(u.p.graph[assignment[w]]).elements
            index = index * len(options) + options.index(assignment[w])
        pt_graph[t] = u.fiber(c).elements[index]
    s = PStructure(P, FinFun(ip_t, u.total, pt_graph))
    assert check_p_structure(u, s), "size-matching pair failed its own validation"
    return s
