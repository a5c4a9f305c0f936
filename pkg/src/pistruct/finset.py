"""Canonical finite sets and functions over hereditarily finite values.

This is the ambient category for the rest of the package: a fixed
terminal object, chosen binary products, chosen pullbacks, and
dependent products, all computed deterministically so that equal inputs
yield identical element sequences.  Because every derived object is
canonical, equalities between towers of such objects hold on the nose,
which is what the context calculus in :mod:`pistruct.csystem` relies on.

Composition is written in diagrammatic order everywhere in this
package: ``compose(f, g)`` applies ``f`` first, then ``g``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping


class EndpointMismatch(ValueError):
    """Morphism endpoints do not line up for the requested operation."""


@total_ordering
class Val:
    """A hereditarily finite value: an atom or a tuple of values.

    Atoms are ordered by name, every atom precedes every tuple, and
    tuples are ordered lexicographically.  "Canonical order" always
    means this order.  Values are immutable and hashable.
    """

    __slots__ = ("name", "items", "_hash")

    def __init__(self, name: str | None = None, items: tuple["Val", ...] | None = None):
        if (name is None) == (items is None):
            raise ValueError("a value is either an atom or a tuple, not both")
        if name is not None and not isinstance(name, str):
            raise TypeError("atom names must be strings")
        self.name = name
        self.items = items
        self._hash = hash((name, items))

    @property
    def is_atom(self) -> bool:
        return self.name is not None

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, Val)
            and self.name == other.name
            and self.items == other.items
        )

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Val") -> bool:
        if self.is_atom != other.is_atom:
            return self.is_atom
        if self.is_atom:
            return self.name < other.name
        return self.items < other.items

    def to_json(self):
        """Atoms become strings, tuples become arrays."""
        if self.is_atom:
            return self.name
        return [v.to_json() for v in self.items]

    @staticmethod
    def from_json(obj) -> "Val":
        if isinstance(obj, str):
            return Val(name=obj)
        if isinstance(obj, list):
            return Val(items=tuple(Val.from_json(x) for x in obj))
        raise ValueError(f"cannot decode a value from {obj!r}")

    def __repr__(self) -> str:
        if self.is_atom:
            return self.name
        return "(" + ",".join(map(repr, self.items)) + ")"


def atom(name: str) -> Val:
    return Val(name=name)


def tup(*items: Val) -> Val:
    return Val(items=tuple(items))


def assoc(pairs) -> Val:
    """Encode a finite mapping as a tuple of key/value pairs in key order."""
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    return tup(*(tup(k, v) for k, v in sorted(items, key=lambda kv: kv[0])))


def assoc_items(v: Val) -> list[tuple[Val, Val]]:
    """Decode an association tuple back into its key/value pairs."""
    return [(kv.items[0], kv.items[1]) for kv in v.items]


class FinSet:
    """A finite set of values kept in canonical order."""

    __slots__ = ("elements", "_index", "_hash")

    def __init__(self, elements: Iterable[Val] = ()):
        self.elements: tuple[Val, ...] = tuple(sorted(set(elements)))
        self._index = {v: i for i, v in enumerate(self.elements)}
        self._hash = hash(self.elements)

    @classmethod
    def _raw(cls, elements: tuple[Val, ...]) -> "FinSet":
        """Internal constructor for already sorted, duplicate-free tuples."""
        self = cls.__new__(cls)
        self.elements = elements
        self._index = {v: i for i, v in enumerate(elements)}
        self._hash = hash(elements)
        return self

    def __contains__(self, v: Val) -> bool:
        return v in self._index

    def __iter__(self) -> Iterator[Val]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, FinSet) and self.elements == other.elements

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "{" + ",".join(map(repr, self.elements)) + "}"


class FinFun:
    """A total function between finite sets with an explicit graph."""

    __slots__ = ("dom", "cod", "graph", "_hash")

    def __init__(self, dom: FinSet, cod: FinSet, graph: Mapping[Val, Val]):
        graph = dict(graph)
        if graph.keys() != dom._index.keys():
            raise EndpointMismatch("graph is not total on the domain")
        if not set(graph.values()) <= cod._index.keys():
            raise EndpointMismatch("graph image escapes the codomain")
        self.dom = dom
        self.cod = cod
        self.graph = graph
        self._hash = None

    @classmethod
    def _raw(cls, dom: FinSet, cod: FinSet, graph: dict[Val, Val]) -> "FinFun":
        """Internal constructor for graphs that are valid by construction."""
        self = cls.__new__(cls)
        self.dom = dom
        self.cod = cod
        self.graph = graph
        self._hash = None
        return self

    def __call__(self, v: Val) -> Val:
        return self.graph[v]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, FinFun)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.graph == other.graph
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.dom, self.cod, tuple(self.graph[x] for x in self.dom.elements))
            )
        return self._hash

    def is_bijection(self) -> bool:
        return len(self.dom) == len(self.cod) == len(set(self.graph.values()))

    def __repr__(self) -> str:
        body = ",".join(f"{k!r}>{v!r}" for k, v in sorted(self.graph.items()))
        return "[" + body + "]"


def compose(f: FinFun, g: FinFun) -> FinFun:
    """Diagrammatic composite: apply ``f`` first, then ``g``."""
    if f.cod != g.dom:
        raise EndpointMismatch("compose: middle objects differ")
    return FinFun._raw(f.dom, g.cod, {x: g.graph[y] for x, y in f.graph.items()})


def identity(a: FinSet) -> FinFun:
    return FinFun._raw(a, a, {x: x for x in a})


STAR = atom("*")
_TERMINAL = FinSet((STAR,))


def terminal() -> FinSet:
    """The fixed one-point set."""
    return _TERMINAL


def terminal_map(a: FinSet) -> FinFun:
    """The unique map into the terminal set."""
    return FinFun(a, _TERMINAL, {x: STAR for x in a})


def product(a: FinSet, b: FinSet) -> tuple[FinSet, FinFun, FinFun]:
    """Chosen binary product: the set of pairs with its projections."""
    # construction order is already the canonical order of pairs
    carrier = FinSet._raw(tuple(tup(x, y) for x in a for y in b))
    pr1 = FinFun._raw(carrier, a, {e: e.items[0] for e in carrier})
    pr2 = FinFun._raw(carrier, b, {e: e.items[1] for e in carrier})
    return carrier, pr1, pr2


def pullback(f: FinFun, g: FinFun) -> tuple[FinSet, FinFun, FinFun]:
    """Chosen pullback of a cospan: pairs agreeing in the shared codomain."""
    if f.cod != g.cod:
        raise EndpointMismatch("pullback: codomains differ")
    buckets: dict[Val, list[Val]] = {}
    for y in g.dom:
        buckets.setdefault(g.graph[y], []).append(y)
    # construction order is already the canonical order of pairs
    carrier = FinSet._raw(
        tuple(tup(x, y) for x in f.dom for y in buckets.get(f.graph[x], ()))
    )
    pr1 = FinFun._raw(carrier, f.dom, {e: e.items[0] for e in carrier})
    pr2 = FinFun._raw(carrier, g.dom, {e: e.items[1] for e in carrier})
    return carrier, pr1, pr2


@dataclass(frozen=True)
class Square:
    """A square of functions, oriented top/left/right/bottom.

    ``top: A -> B``, ``left: A -> C``, ``right: B -> D``,
    ``bottom: C -> D``; it commutes when ``top;right == left;bottom``.
    """

    top: FinFun
    left: FinFun
    right: FinFun
    bottom: FinFun

    def __post_init__(self):
        ok = (
            self.top.dom == self.left.dom
            and self.top.cod == self.right.dom
            and self.left.cod == self.bottom.dom
            and self.right.cod == self.bottom.cod
        )
        if not ok:
            raise EndpointMismatch("square corners do not match")

    def commutes(self) -> bool:
        top, right, left, bottom = self.top.graph, self.right.graph, self.left.graph, self.bottom.graph
        return all(right[top[x]] == bottom[left[x]] for x in top)


def is_pullback_square(s: Square) -> bool:
    """Whether a commuting square is a pullback.

    Tested by comparison with the chosen pullback of the cospan: the
    map ``x |-> (left(x), top(x))`` must be a bijection onto it.  A
    non-commuting square returns ``False``.
    """
    if not s.commutes():
        return False
    counts: dict[Val, int] = {}
    for y in s.right.dom:
        v = s.right.graph[y]
        counts[v] = counts.get(v, 0) + 1
    carrier_size = sum(counts.get(s.bottom.graph[x], 0) for x in s.bottom.dom)
    seen = set()
    for x in s.top.dom:
        m = (s.left.graph[x], s.top.graph[x])
        if m in seen:
            return False
        seen.add(m)
    # every pair lies in the chosen pullback because the square
    # commutes, so injectivity plus a count gives bijectivity
    return len(seen) == carrier_size


def dependent_product(p: FinFun, q: FinFun) -> tuple[FinSet, FinFun]:
    """Sections of ``q`` over each fibre of ``p``, fibred over ``cod(p)``.

    For ``p: E -> B`` and ``q: X -> E`` the carrier over ``b`` consists
    of the functions ``s`` from the fibre of ``p`` over ``b`` into ``X``
    with ``q(s(e)) = e``, encoded as ``(b, association list of s)``.
    """
    if q.cod != p.dom:
        raise EndpointMismatch("dependent_product: cod(q) must be dom(p)")
    q_fibers: dict[Val, list[Val]] = {e: [] for e in p.dom}
    for x in q.dom:
        q_fibers[q.graph[x]].append(x)
    elems = []
    for b in p.cod:
        fib = [e for e in p.dom if p.graph[e] == b]
        for choice in itertools.product(*(q_fibers[e] for e in fib)):
            elems.append(tup(b, assoc(zip(fib, choice))))
    carrier = FinSet(elems)
    return carrier, FinFun(carrier, p.cod, {e: e.items[0] for e in carrier})


def global_elements(a: FinSet) -> list[FinFun]:
    """The maps from the terminal set, one per element, in canonical order."""
    return [FinFun(_TERMINAL, a, {STAR: x}) for x in a]


def hom_size(a: FinSet, b: FinSet) -> int:
    """Number of functions from ``a`` to ``b`` (with ``0**0 == 1``)."""
    return len(b) ** len(a)


def all_finfuns(a: FinSet, b: FinSet) -> Iterator[FinFun]:
    """All functions ``a -> b`` in canonical lexicographic graph order."""
    for images in itertools.product(b.elements, repeat=len(a)):
        yield FinFun(a, b, dict(zip(a.elements, images)))


def finfun_inverse(f: FinFun) -> FinFun:
    if not f.is_bijection():
        raise ValueError("only bijections can be inverted")
    return FinFun(f.cod, f.dom, {v: k for k, v in f.graph.items()})
