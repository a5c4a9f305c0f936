"""The dependent-product operations on context towers.

Given a universe with a structure pair ``(P, P~)``, the two-stage
presentations of :mod:`pistruct.csystem` turn post-composition with
``P`` into an operation sending a two-stage extension to a one-stage
one, and post-composition with ``P~`` into the matching operation on
sections.  This module derives those evaluators, verifies that they
form a presheaf-map pair whose boundary square commutes (and, for
pullback pairs, is a pointwise pullback), inverts the derivation by
finite search over candidate tables, and classifies whole universes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .budget import Budget, BudgetExceeded
from .csystem import (
    Context,
    ObN,
    TObN,
    all_ctx_mors,
    contexts_up_to,
    ctx_json,
    enum_ob_n,
    enum_tob_n,
    f_star,
    fun_json,
    mu,
    mu_inv,
    mu_tilde,
    mu_tilde_inv,
    tob_restrict,
)
from .finset import FinFun, all_finfuns, compose, hom_size
from .report import CheckReport
from .universe import (
    PStructure,
    Universe,
    check_p_structure,
    check_pre_p_structure,
    counting_obstruction,
    enumerate_p_structures,
    search_structures,
)


class AmbiguousRecovery(RuntimeError):
    """The test family does not separate candidate tables."""


@dataclass(frozen=True)
class PiLambdaEvaluator:
    """Pointwise dependent-product operations derived from a table pair."""

    universe: Universe
    structure: PStructure

    def pi_op(self, ctx: Context, t: ObN) -> ObN:
        """Send a two-stage extension to the one-stage product extension."""
        return mu_inv(ctx, 1, compose(mu(ctx, 2, t), self.structure.P))

    def lambda_op(self, ctx: Context, o: TObN) -> TObN:
        """Send a section over two stages to its abstraction over one."""
        return mu_tilde_inv(ctx, 1, compose(mu_tilde(ctx, 2, o), self.structure.P_tilde))


def check_pre_pi_lambda(
    ev: PiLambdaEvaluator, max_len: int, budget: Budget | None = None
) -> CheckReport:
    """Boundary compatibility and naturality of the derived operations.

    Quantifies over every context of length up to ``max_len``, every
    two-stage extension and section over it, and every morphism between
    enumerated contexts.
    """
    budget = budget or Budget()
    report = CheckReport(scope={"max_len": max_len, "budget": budget.limit})
    ctxs = contexts_up_to(ev.universe, max_len, budget)

    boundary = report.add("boundary-compat")
    for ctx in ctxs:
        for o in enum_tob_n(ctx, 2):
            budget.spend()
            boundary.record(
                ev.lambda_op(ctx, o).boundary == ev.pi_op(ctx, o.boundary),
                lambda c=ctx, oo=o: {
                    "context": ctx_json(c),
                    "section": fun_json(oo.section),
                },
            )

    pi_nat = report.add("pi-naturality")
    lam_nat = report.add("lambda-naturality")
    for dst in ctxs:
        exts = enum_ob_n(dst, 2)
        sections = enum_tob_n(dst, 2)
        for src in ctxs:
            budget.require(
                hom_size(src.int_obj(), dst.int_obj()) * (len(exts) + len(sections)),
                "naturality scan",
            )
            for f in all_ctx_mors(src, dst):
                for t in exts:
                    budget.spend()
                    pi_nat.record(
                        ev.pi_op(src, f_star(f, t)) == f_star(f, ev.pi_op(dst, t)),
                        lambda ff=f, tt=t: {
                            "carrier": fun_json(ff.carrier),
                            "extension": [fun_json(x) for x in tt.ext],
                        },
                    )
                for o in sections:
                    budget.spend()
                    lam_nat.record(
                        ev.lambda_op(src, tob_restrict(f, o))
                        == tob_restrict(f, ev.lambda_op(dst, o)),
                        lambda ff=f, oo=o: {
                            "carrier": fun_json(ff.carrier),
                            "section": fun_json(oo.section),
                        },
                    )
    return report


def check_pi_lambda_pullback(ev: PiLambdaEvaluator, ctx: Context) -> bool:
    """Pointwise pullback condition of the boundary square at one context.

    The map sending a two-stage section to (its extension, its
    abstraction) must be a bijection onto the pairs of a two-stage
    extension and a one-stage section whose boundary is the product of
    the extension.
    """
    image = []
    seen = set()
    for o in enum_tob_n(ctx, 2):
        pair = (o.boundary, ev.lambda_op(ctx, o))
        if pair in seen:
            return False
        seen.add(pair)
        image.append(pair)
    target = set()
    one_sections = enum_tob_n(ctx, 1)
    for t in enum_ob_n(ctx, 2):
        product = ev.pi_op(ctx, t)
        for s in one_sections:
            if s.boundary == product:
                target.add((t, s))
    return seen == target


def pullback_check_detail(ev: PiLambdaEvaluator, ctx: Context) -> dict:
    """Counting data backing :func:`check_pi_lambda_pullback` at a context."""
    left = enum_tob_n(ctx, 2)
    image = {(o.boundary, ev.lambda_op(ctx, o)) for o in left}
    one_sections = enum_tob_n(ctx, 1)
    target = {
        (t, s)
        for t in enum_ob_n(ctx, 2)
        for s in one_sections
        if s.boundary == ev.pi_op(ctx, t)
    }
    return {
        "sections_over_two_stages": len(left),
        "distinct_images": len(image),
        "matching_pairs": len(target),
        "bijective": len(left) == len(image) and image == target,
    }


def recover_p_structure(
    u: Universe,
    pi_eval: Callable[[Context, ObN], ObN],
    lambda_eval: Callable[[Context, TObN], TObN],
    test_contexts: Sequence[Context],
    budget: Budget | None = None,
) -> PStructure | None:
    """Search for the unique table pair matching black-box evaluators.

    Every candidate ``P`` is enumerated and kept iff, over the test
    family, presenting the evaluator output always equals presenting
    the input and post-composing with the candidate; likewise for
    ``P~``.  Exactly one survivor on each side gives the pair; zero
    gives ``None``; more than one raises :class:`AmbiguousRecovery`
    because the family then fails to separate candidates.
    """
    budget = budget or Budget()
    ip_u = u.ip_obj(u.codes)
    ip_t = u.ip_obj(u.total)

    pi_pairs = []
    lam_pairs = []
    for ctx in test_contexts:
        for t in enum_ob_n(ctx, 2):
            budget.spend()
            pi_pairs.append((mu(ctx, 2, t), mu(ctx, 1, pi_eval(ctx, t))))
        for o in enum_tob_n(ctx, 2):
            budget.spend()
            lam_pairs.append((mu_tilde(ctx, 2, o), mu_tilde(ctx, 1, lambda_eval(ctx, o))))

    budget.require(
        hom_size(ip_u, u.codes) * max(1, len(pi_pairs))
        + hom_size(ip_t, u.total) * max(1, len(lam_pairs)),
        "table recovery",
    )
    p_hits = [
        P
        for P in all_finfuns(ip_u, u.codes)
        if all(compose(lhs, P) == rhs for lhs, rhs in pi_pairs)
    ]
    if len(p_hits) > 1:
        raise AmbiguousRecovery(
            f"{len(p_hits)} code tables agree with the evaluator on the test family"
        )
    pt_hits = [
        Pt
        for Pt in all_finfuns(ip_t, u.total)
        if all(compose(lhs, Pt) == rhs for lhs, rhs in lam_pairs)
    ]
    if len(pt_hits) > 1:
        raise AmbiguousRecovery(
            f"{len(pt_hits)} element tables agree with the evaluator on the test family"
        )
    if not p_hits or not pt_hits:
        return None
    return PStructure(p_hits[0], pt_hits[0])


def classify_universe(u: Universe, max_len: int, budget: Budget | None = None) -> CheckReport:
    """Count structure pairs and re-verify each derived operation pair.

    Attempts the full commuting-pair enumeration within budget; when
    that is infeasible the counting certificate settles non-existence,
    or the pruned pullback-pair search supplies the structure list.
    For every structure found, the derived operations are re-checked
    (boundary, naturality, pointwise pullback) up to ``max_len``.
    """
    budget = budget or Budget()
    report = CheckReport(scope={"max_len": max_len, "budget": budget.limit})
    obstruction = counting_obstruction(u)
    pre_count: int | None = None
    structures: list[PStructure]
    try:
        pres, structures = enumerate_p_structures(u, budget)
        pre_count = len(pres)
    except BudgetExceeded:
        if obstruction is not None:
            structures = []
        else:
            structures = search_structures(u, budget)
    report.scope["pre_structures"] = pre_count
    report.scope["structures"] = len(structures)
    if obstruction is not None:
        report.scope["obstruction"] = obstruction

    consistency = report.add("structure-consistency")
    for s in structures:
        budget.spend()
        consistency.record(
            check_pre_p_structure(u, s) and check_p_structure(u, s),
            lambda ss=s: {"P": fun_json(ss.P)},
        )

    derived = report.add("derived-pi-lambda")
    pointwise = report.add("pointwise-pullback")
    ctxs = contexts_up_to(u, max_len, budget)
    for s in structures:
        ev = PiLambdaEvaluator(u, s)
        sub = check_pre_pi_lambda(ev, max_len, budget)
        derived.record(
            sub.passed,
            lambda rep=sub, ss=s: {"P": fun_json(ss.P), "failure": rep.first_failure().to_json()},
        )
        for ctx in ctxs:
            budget.spend()
            pointwise.record(
                check_pi_lambda_pullback(ev, ctx),
                lambda c=ctx, ss=s: {"P": fun_json(ss.P), "context": ctx_json(c)},
            )
    return report
