"""Elementwise functors between finite universes and induced transport.

A functor here is generated by an injective relabeling of atoms,
extended structurally over tuples, together with a comparison pair
``(phi, phi_tilde)`` whose square with the two projections is a
pullback.  Because relabeling preserves the canonical constructions on
the nose, the induced map ``H`` on context towers is computable, and
the comparison isomorphisms ``psi`` (per context) and ``xi`` (on the
indexed-family objects) can be built explicitly and validated against
the presentation maps.  On top of that sit the relative-functor check
for structure pairs and the transport equalities for the derived
dependent-product operations.
"""

from __future__ import annotations

from typing import Mapping

from .budget import Budget
from .csystem import (
    Context,
    CtxMor,
    ObN,
    TObN,
    contexts_up_to,
    ctx_json,
    enum_ob_n,
    enum_tob_n,
    fun_json,
    mu,
    mu_tilde,
)
from .finset import (
    EndpointMismatch,
    FinFun,
    FinSet,
    Square,
    Val,
    compose,
    finfun_inverse,
    is_pullback_square,
    tup,
)
from .pilambda import PiLambdaEvaluator
from .report import CheckReport
from .universe import PStructure, Universe, ip_assignment, ip_code, ip_element


class FunctorValidationError(ValueError):
    """The data does not describe a functor between the two universes."""


def _atom_closure(values, acc: set[str]) -> None:
    for v in values:
        if v.is_atom:
            acc.add(v.name)
        else:
            _atom_closure(v.items, acc)


def relabel_val(val_map: Mapping[str, str], v: Val) -> Val:
    """Apply an atom relabeling structurally; unlisted atoms stay fixed."""
    if v.is_atom:
        return Val(name=val_map.get(v.name, v.name))
    return tup(*(relabel_val(val_map, x) for x in v.items))


class ElementwiseFunctor:
    """A universe map induced by an injective relabeling of atoms.

    ``val_map`` sends atom names to atom names (unlisted atoms stay
    fixed); it must be injective on the atoms reachable from the source
    universe and the terminal point.  ``phi`` and ``phi_tilde`` compare
    the relabeled code and total spaces with the target universe; their
    square with the two projections must be a pullback, which is what
    makes fibres transport bijectively.
    """

    def __init__(
        self,
        source: Universe,
        target: Universe,
        val_map: Mapping[str, str],
        phi: FinFun,
        phi_tilde: FinFun,
    ):
        self.source = source
        self.target = target
        self.val_map = dict(val_map)

        relevant: set[str] = {"*"}
        _atom_closure(source.codes, relevant)
        _atom_closure(source.total, relevant)
        images = [self.val_map.get(name, name) for name in sorted(relevant)]
        if len(set(images)) != len(images):
            raise FunctorValidationError("relabeling is not injective on the source atoms")

        if phi.dom != self.apply_set(source.codes) or phi.cod != target.codes:
            raise EndpointMismatch("phi must map the relabeled codes to the target codes")
        if phi_tilde.dom != self.apply_set(source.total) or phi_tilde.cod != target.total:
            raise EndpointMismatch(
                "phi_tilde must map the relabeled total space to the target total space"
            )
        self.phi = phi
        self.phi_tilde = phi_tilde

        square = Square(
            top=phi_tilde,
            left=self.apply_fun(source.p),
            right=target.p,
            bottom=phi,
        )
        if not is_pullback_square(square):
            raise FunctorValidationError(
                "the comparison square with the projections is not a pullback"
            )
        # pullback inverse: (relabeled code, target element) -> relabeled element
        self._lift = {
            (self.apply_fun(source.p).graph[w], phi_tilde.graph[w]): w
            for w in phi_tilde.dom
        }

    def apply_val(self, v: Val) -> Val:
        return relabel_val(self.val_map, v)

    def apply_set(self, xs: FinSet) -> FinSet:
        return FinSet(self.apply_val(v) for v in xs)

    def apply_fun(self, f: FinFun) -> FinFun:
        return FinFun(
            self.apply_set(f.dom),
            self.apply_set(f.cod),
            {self.apply_val(k): self.apply_val(v) for k, v in f.graph.items()},
        )

    def lift(self, relabeled_code: Val, target_elem: Val) -> Val:
        """The unique relabeled fibre element over a target element."""
        return self._lift[(relabeled_code, target_elem)]


def identity_functor(u: Universe) -> ElementwiseFunctor:
    from .finset import identity

    return ElementwiseFunctor(u, u, {}, identity(u.codes), identity(u.total))


class InducedHomomorphism:
    """Context-by-context transport along an elementwise functor.

    Carries the per-context comparison bijections ``psi`` (from the int
    set of the transported context to the relabeled int set of the
    original) and the family-object comparisons ``xi1``/``xi1_tilde``,
    and applies the transport to contexts, morphisms, extensions and
    sections.
    """

    def __init__(self, functor: ElementwiseFunctor):
        self.functor = functor
        self._ctx: dict[Context, Context] = {}
        self._psi: dict[Context, FinFun] = {}
        self.xi0 = functor.phi
        self.xi1 = self._build_xi(functor.source.codes, functor.target.codes, functor.phi)
        self.xi1_tilde = self._build_xi(
            functor.source.total, functor.target.total, functor.phi_tilde
        )

    def _build_xi(self, x: FinSet, x_target: FinSet, value_map: FinFun) -> FinFun:
        """Compare relabeled family objects with the target's own.

        Codes move through ``phi``; assignments are reindexed along the
        fibre transport of the comparison square and their values move
        through ``value_map``.
        """
        fn = self.functor
        dom = FinSet(fn.apply_val(v) for v in fn.source.ip_obj(x))
        cod = fn.target.ip_obj(x_target)
        graph = {}
        for v in dom:
            code = ip_code(v)
            assignment = ip_assignment(v)
            target_code = fn.phi.graph[code]
            graph[v] = ip_element(
                target_code,
                (
                    (w2, value_map.graph[assignment[fn.lift(code, w2)]])
                    for w2 in fn.target.fiber(target_code)
                ),
            )
        return FinFun(dom, cod, graph)

    def on_context(self, ctx: Context) -> Context:
        got = self._ctx.get(ctx)
        if got is None:
            self._transport(ctx)
            got = self._ctx[ctx]
        return got

    def psi(self, ctx: Context) -> FinFun:
        got = self._psi.get(ctx)
        if got is None:
            self._transport(ctx)
            got = self._psi[ctx]
        return got

    def _transport(self, ctx: Context) -> None:
        fn = self.functor
        if len(ctx) == 0:
            image = Context(fn.target)
            psi = FinFun(
                image.int_obj(),
                fn.apply_set(ctx.int_obj()),
                {image.int_obj().elements[0]: fn.apply_val(ctx.int_obj().elements[0])},
            )
        else:
            below = ctx.ft()
            image_below = self.on_context(below)
            psi_below = self.psi(below)
            classifier = ctx.classifiers[-1]
            relabeled = fn.apply_fun(classifier)
            transported = compose(compose(psi_below, relabeled), fn.phi)
            image = image_below.extend(transported)
            graph = {}
            for v in image.int_obj():
                x2, w2 = v.items
                x = psi_below.graph[x2]
                graph[v] = tup(x, fn.lift(relabeled.graph[x], w2))
            psi = FinFun(image.int_obj(), fn.apply_set(ctx.int_obj()), graph)
        self._ctx[ctx] = image
        self._psi[ctx] = psi

    def on_morphism(self, f: CtxMor) -> CtxMor:
        src = self.on_context(f.src)
        dst = self.on_context(f.dst)
        carrier = compose(
            compose(self.psi(f.src), self.functor.apply_fun(f.carrier)),
            finfun_inverse(self.psi(f.dst)),
        )
        return CtxMor(src, dst, carrier)

    def on_ob(self, t: ObN) -> ObN:
        fn = self.functor
        base = self.on_context(t.base)
        stage = t.base
        classifiers = []
        for classifier in t.ext:
            transported = compose(
                compose(self.psi(stage), fn.apply_fun(classifier)), fn.phi
            )
            classifiers.append(transported)
            stage = stage.extend(classifier)
        return ObN(base, classifiers)

    def on_tob(self, o: TObN) -> TObN:
        t = self.on_ob(o.ob)
        top = o.ob.total
        below = top.ft()
        section = compose(
            compose(self.psi(below), self.functor.apply_fun(o.section)),
            finfun_inverse(self.psi(top)),
        )
        return TObN(t, section)


def build_psi_xi(
    functor: ElementwiseFunctor, max_len: int = 2, budget: Budget | None = None
) -> InducedHomomorphism:
    """Construct the transport and validate its presentation equations.

    On every context up to ``max_len`` the comparison must interchange
    the two-stage presentations with the family-object comparisons:
    ``psi ; relabeled presentation ; xi`` equals the presentation of
    the transported datum.  Failure means the input pair was not a
    legitimate functor datum.
    """
    budget = budget or Budget()
    hom = InducedHomomorphism(functor)
    for ctx in contexts_up_to(functor.source, max_len, budget):
        psi = hom.psi(ctx)
        if not psi.is_bijection():
            raise FunctorValidationError("context comparison is not a bijection")
        for t in enum_ob_n(ctx, 2):
            budget.spend()
            lhs = compose(compose(psi, functor.apply_fun(mu(ctx, 2, t))), hom.xi1)
            rhs = mu(hom.on_context(ctx), 2, hom.on_ob(t))
            if lhs != rhs:
                raise FunctorValidationError(
                    "family comparison disagrees with the two-stage presentation"
                )
        for o in enum_tob_n(ctx, 2):
            budget.spend()
            lhs = compose(
                compose(psi, functor.apply_fun(mu_tilde(ctx, 2, o))), hom.xi1_tilde
            )
            rhs = mu_tilde(hom.on_context(ctx), 2, hom.on_tob(o))
            if lhs != rhs:
                raise FunctorValidationError(
                    "family comparison disagrees with the two-stage section presentation"
                )
    return hom


def check_pre_p_functor(
    hom: InducedHomomorphism, s: PStructure, s_target: PStructure
) -> bool:
    """Whether the relabeling respects both structure tables.

    Relabel-then-compare must equal compare-then-apply on both the code
    and the element family objects.
    """
    fn = hom.functor
    code_side = compose(fn.apply_fun(s.P), fn.phi) == compose(hom.xi1, s_target.P)
    elem_side = compose(fn.apply_fun(s.P_tilde), fn.phi_tilde) == compose(
        hom.xi1_tilde, s_target.P_tilde
    )
    return code_side and elem_side


def pi_transport_chain(
    hom: InducedHomomorphism, s: PStructure, s_target: PStructure, ctx: Context, t: ObN
) -> list[FinFun]:
    """The classifier at every step of the transport argument.

    Consecutive entries are equal by, in order: transport of a
    composite presentation, functoriality of the relabeling, the
    relative-functor square, the family-comparison equation, and the
    definition of the product operation on the target.
    """
    fn = hom.functor
    psi = hom.psi(ctx)
    ev = PiLambdaEvaluator(fn.source, s)
    ev_target = PiLambdaEvaluator(fn.target, s_target)
    h_t = hom.on_ob(t)
    image_ctx = hom.on_context(ctx)
    m2 = mu(ctx, 2, t)
    return [
        hom.on_ob(ev.pi_op(ctx, t)).ext[0],
        compose(compose(psi, fn.apply_fun(compose(m2, s.P))), hom.xi0),
        compose(compose(compose(psi, fn.apply_fun(m2)), fn.apply_fun(s.P)), hom.xi0),
        compose(compose(compose(psi, fn.apply_fun(m2)), hom.xi1), s_target.P),
        compose(mu(image_ctx, 2, h_t), s_target.P),
        ev_target.pi_op(image_ctx, h_t).ext[0],
    ]


def check_pi_lambda_homomorphism(
    functor: ElementwiseFunctor,
    s: PStructure,
    s_target: PStructure,
    max_len: int,
    budget: Budget | None = None,
) -> CheckReport:
    """Transport equalities for the derived operations on a fragment.

    Requires the relative-functor condition as a hypothesis; when it
    fails the report carries a single failed check and nothing is
    scanned.  Otherwise both transport equalities are verified on every
    context of length up to ``max_len``.
    """
    budget = budget or Budget()
    report = CheckReport(scope={"max_len": max_len, "budget": budget.limit})
    hom = build_psi_xi(functor, min(max_len, 2), budget)
    hyp = report.add("pre-p-functor-hypothesis")
    if not hyp.record(
        check_pre_p_functor(hom, s, s_target),
        lambda: {"reason": "relabeling does not respect the structure tables"},
    ):
        return report

    ev = PiLambdaEvaluator(functor.source, s)
    ev_target = PiLambdaEvaluator(functor.target, s_target)
    pi_eq = report.add("pi-transport")
    lam_eq = report.add("lambda-transport")
    for ctx in contexts_up_to(functor.source, max_len, budget):
        image_ctx = hom.on_context(ctx)
        for t in enum_ob_n(ctx, 2):
            budget.spend()
            pi_eq.record(
                hom.on_ob(ev.pi_op(ctx, t)) == ev_target.pi_op(image_ctx, hom.on_ob(t)),
                lambda c=ctx, tt=t: {
                    "context": ctx_json(c),
                    "extension": [fun_json(x) for x in tt.ext],
                },
            )
        for o in enum_tob_n(ctx, 2):
            budget.spend()
            lam_eq.record(
                hom.on_tob(ev.lambda_op(ctx, o))
                == ev_target.lambda_op(image_ctx, hom.on_tob(o)),
                lambda c=ctx, oo=o: {
                    "context": ctx_json(c),
                    "section": fun_json(oo.section),
                },
            )
    return report


def pi_transport_counterexample(
    functor: ElementwiseFunctor,
    s: PStructure,
    s_target: PStructure,
    max_len: int,
    budget: Budget | None = None,
) -> tuple[Context, ObN] | None:
    """First context and extension where the product transport fails.

    Used to exhibit why the relative-functor hypothesis is needed:
    structure-incompatible targets break the equality somewhere.
    """
    budget = budget or Budget()
    hom = build_psi_xi(functor, min(max_len, 2), budget)
    ev = PiLambdaEvaluator(functor.source, s)
    ev_target = PiLambdaEvaluator(functor.target, s_target)
    for ctx in contexts_up_to(functor.source, max_len, budget):
        image_ctx = hom.on_context(ctx)
        for t in enum_ob_n(ctx, 2):
            budget.spend()
            if hom.on_ob(ev.pi_op(ctx, t)) != ev_target.pi_op(image_ctx, hom.on_ob(t)):
                return ctx, t
    return None
