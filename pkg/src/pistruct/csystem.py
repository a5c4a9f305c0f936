"""Context towers over a finite universe and their presheaf calculus.

A context of length ``n`` is a sequence of classifiers: the first maps
the terminal set into the codes, and each later one maps the canonical
pullback built at the previous stage ("int" of the context) into the
codes.  Morphisms between contexts are all functions between their int
sets.  Extensions of a context by one or two stages, and sections of
the top projection of an extension, are presented as maps into the
indexed-family objects by the bijections ``mu`` and ``mu_tilde``; the
whole package's main construction is post-composition in that
presentation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from .budget import Budget
from .finset import (
    EndpointMismatch,
    FinFun,
    FinSet,
    Square,
    Val,
    all_finfuns,
    compose,
    identity,
    is_pullback_square,
    pullback,
    terminal,
    tup,
)
from .report import CheckReport
from .universe import Universe, ip_map_of_pair, ip_pair_of_map


class Context:
    """A tower of classifying maps over a fixed universe.

    ``ints[i]`` is the stage-``i`` carrier: the terminal set at stage 0
    and the canonical pullback of the universe projection along the
    stage-``i`` classifier after that.  Instances are interned per
    universe, so equal towers are identical objects.
    """

    __slots__ = ("universe", "classifiers", "ints", "_hash")

    def __new__(cls, universe: Universe, classifiers=()):
        key = tuple(classifiers)
        cached = universe._ctx_cache.get(key)
        if cached is not None:
            return cached
        if key:
            return cls(universe, key[:-1]).extend(key[-1])
        self = super().__new__(cls)
        self.universe = universe
        self.classifiers = ()
        self.ints = (terminal(),)
        self._hash = hash((universe, ()))
        universe._ctx_cache[()] = self
        return self

    def __len__(self) -> int:
        return len(self.classifiers)

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, Context)
            and self.universe == other.universe
            and self.classifiers == other.classifiers
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Context(len={len(self)}, int={len(self.ints[-1])})"

    def int_obj(self) -> FinSet:
        return self.ints[-1]

    def ft(self) -> "Context":
        if not self.classifiers:
            raise ValueError("the empty context has no father")
        return Context(self.universe, self.classifiers[:-1])

    def extend(self, classifier: FinFun) -> "Context":
        key = self.classifiers + (classifier,)
        cached = self.universe._ctx_cache.get(key)
        if cached is not None:
            return cached
        if classifier.dom != self.ints[-1] or classifier.cod != self.universe.codes:
            raise EndpointMismatch("classifier endpoints do not match the tower")
        carrier, _, _ = pullback(classifier, self.universe.p)
        child = object.__new__(Context)
        child.universe = self.universe
        child.classifiers = key
        child.ints = self.ints + (carrier,)
        child._hash = hash((self.universe, key))
        self.universe._ctx_cache[key] = child
        return child


def empty_context(u: Universe) -> Context:
    return Context(u)


def int_obj(ctx: Context) -> FinSet:
    return ctx.int_obj()


def ext(ctx: Context, classifier: FinFun) -> Context:
    return ctx.extend(classifier)


@dataclass(frozen=True)
class CtxMor:
    """A morphism of contexts: any function between their int sets."""

    src: Context
    dst: Context
    carrier: FinFun

    def __post_init__(self):
        if self.carrier.dom != self.src.int_obj() or self.carrier.cod != self.dst.int_obj():
            raise EndpointMismatch("carrier endpoints do not match the contexts")


def identity_mor(ctx: Context) -> CtxMor:
    return CtxMor(ctx, ctx, identity(ctx.int_obj()))


def compose_mor(f: CtxMor, g: CtxMor) -> CtxMor:
    if f.dst != g.src:
        raise EndpointMismatch("context morphisms are not composable")
    return CtxMor(f.src, g.dst, compose(f.carrier, g.carrier))


def all_ctx_mors(src: Context, dst: Context) -> Iterator[CtxMor]:
    for carrier in all_finfuns(src.int_obj(), dst.int_obj()):
        yield CtxMor(src, dst, carrier)


@lru_cache(maxsize=None)
def proj(ctx: Context) -> CtxMor:
    """The canonical projection dropping the top stage."""
    below = ctx.ft()
    carrier = FinFun._raw(
        ctx.int_obj(), below.int_obj(), {v: v.items[0] for v in ctx.int_obj()}
    )
    return CtxMor(ctx, below, carrier)


def q_mor(f: CtxMor, classifier: FinFun) -> CtxMor:
    """Base-change lift of ``f`` through one extension stage.

    Sends ``(x, w)`` to ``(f(x), w)``; its square with the two
    projections is a pullback by construction of the int sets.
    """
    if classifier.dom != f.dst.int_obj() or classifier.cod != f.dst.universe.codes:
        raise EndpointMismatch("classifier must live over the morphism target")
    src = f.src.extend(compose(f.carrier, classifier))
    dst = f.dst.extend(classifier)
    graph = {v: tup(f.carrier.graph[v.items[0]], v.items[1]) for v in src.int_obj()}
    return CtxMor(src, dst, FinFun._raw(src.int_obj(), dst.int_obj(), graph))


class ObN:
    """A length-``n`` extension of a base context."""

    __slots__ = ("base", "ext", "total", "_hash")

    def __init__(self, base: Context, extension):
        self.base = base
        self.ext = tuple(extension)
        total = base
        for f in self.ext:
            total = total.extend(f)
        self.total = total
        self._hash = hash((base, self.ext))

    @property
    def n(self) -> int:
        return len(self.ext)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ObN) and self.base == other.base and self.ext == other.ext

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"ObN(base_len={len(self.base)}, n={self.n})"


class TObN:
    """An extension together with a section of its top projection."""

    __slots__ = ("ob", "section", "_hash")

    def __init__(self, ob: ObN, section: FinFun):
        if ob.n == 0:
            raise ValueError("a section needs at least one extension stage")
        top = ob.total
        below = top.ft()
        if section.dom != below.int_obj() or section.cod != top.int_obj():
            raise EndpointMismatch("section endpoints do not match the extension")
        if compose(section, proj(top).carrier) != identity(below.int_obj()):
            raise ValueError("not a section of the top projection")
        self.ob = ob
        self.section = section
        self._hash = hash((ob, section))

    @property
    def boundary(self) -> ObN:
        return self.ob

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TObN) and self.ob == other.ob and self.section == other.section

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"TObN({self.ob!r})"


def f_star(f: CtxMor, t: ObN) -> ObN:
    """Restriction of an extension along a morphism into its base."""
    if t.base != f.dst:
        raise EndpointMismatch("extension is not based at the morphism target")
    classifiers = []
    g = f
    last = len(t.ext) - 1
    for i, classifier in enumerate(t.ext):
        classifiers.append(compose(g.carrier, classifier))
        if i < last:
            g = q_mor(g, classifier)
    return ObN(f.src, classifiers)


def _q_below_top(f: CtxMor, t: ObN) -> CtxMor:
    """Iterated base-change lift of ``f`` up to just below the top stage."""
    g = f
    for classifier in t.ext[:-1]:
        g = q_mor(g, classifier)
    return g


def tob_restrict(f: CtxMor, o: TObN) -> TObN:
    """Restriction of a section along a morphism into its base."""
    t = o.ob
    if t.base != f.dst:
        raise EndpointMismatch("section is not based at the morphism target")
    g = _q_below_top(f, t)
    restricted = f_star(f, t)
    below = restricted.total.ft().int_obj()
    graph = {
        y: tup(y, o.section.graph[g.carrier.graph[y]].items[1]) for y in below
    }
    return TObN(restricted, FinFun(below, restricted.total.int_obj(), graph))


@lru_cache(maxsize=None)
def _enum_ob(ctx: Context, n: int) -> tuple[ObN, ...]:
    if n == 0:
        return (ObN(ctx, ()),)
    out = []
    for t in _enum_ob(ctx, n - 1):
        for classifier in all_finfuns(t.total.int_obj(), ctx.universe.codes):
            out.append(ObN(ctx, t.ext + (classifier,)))
    return tuple(out)


def enum_ob_n(ctx: Context, n: int) -> list[ObN]:
    """All length-``n`` extensions of a context, in canonical order."""
    return list(_enum_ob(ctx, n))


def _top_fibers(t: ObN) -> tuple[FinSet, dict[Val, list[Val]]]:
    below = t.total.ft().int_obj()
    fibers: dict[Val, list[Val]] = {y: [] for y in below}
    for v in t.total.int_obj():
        fibers[v.items[0]].append(v)
    return below, fibers


@lru_cache(maxsize=None)
def _enum_tob(ctx: Context, n: int) -> tuple[TObN, ...]:
    out = []
    for t in _enum_ob(ctx, n):
        below, fibers = _top_fibers(t)
        pools = [fibers[y] for y in below]
        for choice in itertools.product(*pools):
            section = FinFun(below, t.total.int_obj(), dict(zip(below.elements, choice)))
            out.append(TObN(t, section))
    return tuple(out)


def enum_tob_n(ctx: Context, n: int) -> list[TObN]:
    """All sections of top projections of length-``n`` extensions."""
    return list(_enum_tob(ctx, n))


def _check_based(ctx: Context, n: int, got_base: Context, got_n: int) -> None:
    if got_base != ctx:
        raise EndpointMismatch("not based at the given context")
    if got_n != n:
        raise ValueError(f"expected {n} extension stages, got {got_n}")


def mu(ctx: Context, n: int, t: ObN) -> FinFun:
    """Present an extension as a map into the iterated family object.

    Length 1: the classifier itself.  Length 2: pair the first-stage
    code with the second-stage classifier read along the fibre.
    """
    _check_based(ctx, n, t.base, t.n)
    if n == 1:
        return t.ext[0]
    if n == 2:
        first, second = t.ext
        return ip_map_of_pair(ctx.universe, ctx.universe.codes, first, second)
    raise ValueError("only presentation lengths 1 and 2 are supported")


def mu_inv(ctx: Context, n: int, h: FinFun) -> ObN:
    """Inverse presentation: rebuild the extension from the map."""
    u = ctx.universe
    if h.dom != ctx.int_obj():
        raise EndpointMismatch("presentation does not start at the context")
    if n == 1:
        if h.cod != u.codes:
            raise EndpointMismatch("length-1 presentation must land in the codes")
        return ObN(ctx, (h,))
    if n == 2:
        classifier, fill = ip_pair_of_map(u, u.codes, h)
        return ObN(ctx, (classifier, fill))
    raise ValueError("only presentation lengths 1 and 2 are supported")


def mu_tilde(ctx: Context, n: int, o: TObN) -> FinFun:
    """Present a section as a map into the iterated family object on U~."""
    _check_based(ctx, n, o.ob.base, o.ob.n)
    u = ctx.universe
    if n == 1:
        return FinFun(
            ctx.int_obj(), u.total, {x: o.section.graph[x].items[1] for x in ctx.int_obj()}
        )
    if n == 2:
        first = o.ob.ext[0]
        mid = o.ob.total.ft().int_obj()
        fill = FinFun(mid, u.total, {y: o.section.graph[y].items[1] for y in mid})
        return ip_map_of_pair(u, u.total, first, fill)
    raise ValueError("only presentation lengths 1 and 2 are supported")


def mu_tilde_inv(ctx: Context, n: int, k: FinFun) -> TObN:
    """Inverse presentation: rebuild extension and section from the map."""
    u = ctx.universe
    if k.dom != ctx.int_obj():
        raise EndpointMismatch("presentation does not start at the context")
    if n == 1:
        if k.cod != u.total:
            raise EndpointMismatch("length-1 presentation must land in the total space")
        classifier = compose(k, u.p)
        t = ObN(ctx, (classifier,))
        section = FinFun(
            ctx.int_obj(), t.total.int_obj(), {x: tup(x, k.graph[x]) for x in ctx.int_obj()}
        )
        return TObN(t, section)
    if n == 2:
        classifier, fill = ip_pair_of_map(u, u.total, k)
        second = compose(fill, u.p)
        t = ObN(ctx, (classifier, second))
        mid = t.total.ft().int_obj()
        section = FinFun(
            mid, t.total.int_obj(), {y: tup(y, fill.graph[y]) for y in mid}
        )
        return TObN(t, section)
    raise ValueError("only presentation lengths 1 and 2 are supported")


def contexts_up_to(u: Universe, max_len: int, budget: Budget | None = None) -> list[Context]:
    """All context towers up to the given length, in canonical order."""
    budget = budget or Budget()
    level = [Context(u)]
    out = list(level)
    for _ in range(max_len):
        nxt = []
        for ctx in level:
            for classifier in all_finfuns(ctx.int_obj(), u.codes):
                budget.spend(1, "context enumeration")
                nxt.append(ctx.extend(classifier))
        out.extend(nxt)
        level = nxt
    return out


def fun_json(f: FinFun) -> list:
    """Graph of a function as pairs in domain order, for witnesses."""
    return [[x.to_json(), f.graph[x].to_json()] for x in f.dom]


def ctx_json(ctx: Context) -> dict:
    return {"classifiers": [fun_json(f) for f in ctx.classifiers]}


def check_csystem_axioms(
    u: Universe,
    max_len: int,
    budget: Budget | None = None,
    *,
    q_mor_impl: Callable[[CtxMor, FinFun], CtxMor] | None = None,
    f_star_impl: Callable[[CtxMor, ObN], ObN] | None = None,
    mor_len: int | None = None,
    comp_len: int | None = None,
) -> CheckReport:
    """Verify the structural laws of the context calculus on a fragment.

    Towers and projections are checked on every context of length up to
    ``max_len``.  Laws quantified over one morphism run over all
    morphisms between contexts of length up to ``mor_len`` (default
    ``max_len - 1``); laws quantified over composable pairs run over
    contexts of length up to ``comp_len`` (default ``max_len - 2``) and
    additionally over the projection chains of every enumerated
    context, which exercises them at full depth.  The report records
    the realized scopes.  ``q_mor_impl`` and ``f_star_impl`` exist so
    tests can inject corrupted operations and watch them get caught.
    """
    q_ = q_mor_impl or q_mor
    fs_ = f_star_impl or f_star
    budget = budget or Budget()
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if mor_len is None:
        mor_len = max_len - 1
    if comp_len is None:
        comp_len = max(0, max_len - 2)
    report = CheckReport(
        scope={
            "max_len": max_len,
            "mor_len": mor_len,
            "comp_len": comp_len,
            "budget": budget.limit,
        }
    )
    ctxs = contexts_up_to(u, max_len, budget)

    tower = report.add("tower-projection")
    for ctx in ctxs:
        budget.spend()
        if len(ctx) == 0:
            tower.record(ctx.int_obj() == terminal(), lambda c=ctx: ctx_json(c))
            continue
        pr = proj(ctx)
        ok = ctx.ft().extend(ctx.classifiers[-1]) == ctx
        ok = ok and all(pr.carrier.graph[v] == v.items[0] for v in ctx.int_obj())
        tower.record(ok, lambda c=ctx: ctx_json(c))

    q_id = report.add("q-identity")
    for ctx in ctxs:
        if len(ctx) >= max_len:
            continue
        for classifier in all_finfuns(ctx.int_obj(), u.codes):
            budget.spend()
            lifted = q_(identity_mor(ctx), classifier)
            q_id.record(
                lifted == identity_mor(ctx.extend(classifier)),
                lambda c=ctx, cl=classifier: {"context": ctx_json(c), "classifier": fun_json(cl)},
            )

    mor_ctxs = [c for c in ctxs if len(c) <= mor_len]
    q_pb = report.add("q-square-pullback")
    mor_cat = report.add("morphism-identity-laws")
    r_id = report.add("restrict-identity")
    for dst in mor_ctxs:
        classifiers = list(all_finfuns(dst.int_obj(), u.codes)) if len(dst) < max_len else []
        extensions = [
            t for n in (1, 2) if len(dst) + n <= max_len for t in enum_ob_n(dst, n)
        ]
        for t in extensions:
            budget.spend()
            r_id.record(
                fs_(identity_mor(dst), t) == t,
                lambda d=dst, tt=t: {"context": ctx_json(d), "n": tt.n},
            )
        for src in mor_ctxs:
            for f in all_ctx_mors(src, dst):
                budget.spend()
                mor_cat.record(
                    compose_mor(identity_mor(src), f) == f
                    and compose_mor(f, identity_mor(dst)) == f,
                    lambda ff=f: {"carrier": fun_json(ff.carrier)},
                )
                for classifier in classifiers:
                    budget.spend()
                    lifted = q_(f, classifier)
                    square = Square(
                        top=lifted.carrier,
                        left=proj(lifted.src).carrier,
                        right=proj(lifted.dst).carrier,
                        bottom=f.carrier,
                    )
                    q_pb.record(
                        is_pullback_square(square),
                        lambda ff=f, cl=classifier: {
                            "carrier": fun_json(ff.carrier),
                            "classifier": fun_json(cl),
                        },
                    )

    comp_ctxs = [c for c in ctxs if len(c) <= comp_len]
    chains: list[tuple[CtxMor, CtxMor]] = []
    for a in comp_ctxs:
        for b in comp_ctxs:
            for f in all_ctx_mors(a, b):
                for c in comp_ctxs:
                    for g in all_ctx_mors(b, c):
                        chains.append((f, g))
    # projection chains exercise the laws at full tower depth
    for ctx in ctxs:
        if len(ctx) >= 2:
            chains.append((proj(ctx), proj(ctx.ft())))

    q_comp = report.add("q-compose")
    r_comp = report.add("restrict-compose")
    assoc_law = report.add("morphism-associativity")
    inner: dict[tuple[CtxMor, ObN], ObN] = {}
    for f, g in chains:
        fg = compose_mor(f, g)
        target = g.dst
        if len(target) < max_len:
            for classifier in all_finfuns(target.int_obj(), u.codes):
                budget.spend()
                lhs = q_(fg, classifier)
                rhs = compose_mor(q_(f, compose(g.carrier, classifier)), q_(g, classifier))
                q_comp.record(
                    lhs == rhs,
                    lambda ff=f, gg=g, cl=classifier: {
                        "first": fun_json(ff.carrier),
                        "second": fun_json(gg.carrier),
                        "classifier": fun_json(cl),
                    },
                )
        for n in (1, 2):
            if len(target) + n > max_len:
                continue
            for t in enum_ob_n(target, n):
                budget.spend()
                restricted = inner.get((g, t))
                if restricted is None:
                    restricted = inner[(g, t)] = fs_(g, t)
                r_comp.record(
                    fs_(fg, t) == fs_(f, restricted),
                    lambda ff=f, gg=g, tt=t: {
                        "first": fun_json(ff.carrier),
                        "second": fun_json(gg.carrier),
                        "n": tt.n,
                    },
                )
        if len(g.dst) >= 1:
            h = proj(g.dst)
            budget.spend()
            assoc_law.record(
                compose_mor(compose_mor(f, g), h) == compose_mor(f, compose_mor(g, h)),
                lambda ff=f, gg=g, hh=h: {
                    "first": fun_json(ff.carrier),
                    "second": fun_json(gg.carrier),
                    "third": fun_json(hh.carrier),
                },
            )
    return report
