import pytest

from pistruct import (
    ElementwiseFunctor,
    FinFun,
    FinSet,
    FunctorValidationError,
    PiLambdaEvaluator,
    all_ctx_mors,
    atom,
    build_psi_xi,
    canonical_p_structure,
    check_pi_lambda_homomorphism,
    check_pre_p_functor,
    compose_mor,
    contexts_up_to,
    enum_ob_n,
    enum_tob_n,
    enumerate_p_structures,
    f_star,
    identity_functor,
    identity_mor,
    ip_element,
    pi_transport_chain,
    pi_transport_counterexample,
    proj,
    q_mor,
    tob_restrict,
    tup,
)
from pistruct.universe import Universe

from mutations import incompatible_target


@pytest.fixture(scope="module")
def renamed_u():
    return Universe.from_table({"z": [], "o": ["s"]})


@pytest.fixture(scope="module")
def relabeling(bool_u, renamed_u):
    codes = FinSet([atom("z"), atom("o")])
    total = FinSet([tup(atom("o"), atom("s"))])
    return ElementwiseFunctor(
        bool_u,
        renamed_u,
        {"0": "z", "1": "o", "*": "s"},
        FinFun(codes, renamed_u.codes, {v: v for v in codes}),
        FinFun(total, renamed_u.total, {v: v for v in total}),
    )


@pytest.fixture(scope="module")
def embedding(bool_u, b2_u):
    codes = FinSet([atom("0"), atom("1a")])
    total = FinSet([tup(atom("1a"), atom("*"))])
    return ElementwiseFunctor(
        bool_u,
        b2_u,
        {"1": "1a"},
        FinFun(codes, b2_u.codes, {v: v for v in codes}),
        FinFun(total, b2_u.total, {v: v for v in total}),
    )


# ---- functor data validation ----


def test_non_injective_relabeling_rejected(bool_u):
    from pistruct.finset import identity

    with pytest.raises(FunctorValidationError):
        ElementwiseFunctor(
            bool_u, bool_u, {"0": "1"}, identity(bool_u.codes), identity(bool_u.total)
        )


def test_non_pullback_comparison_rejected(bool_u):
    from pistruct.finset import identity

    constant = FinFun(bool_u.codes, bool_u.codes, {v: atom("0") for v in bool_u.codes})
    with pytest.raises(FunctorValidationError):
        ElementwiseFunctor(bool_u, bool_u, {}, constant, identity(bool_u.total))


def test_relabeling_preserves_canonical_constructions(relabeling, bool_u):
    from pistruct.finset import pullback

    f = bool_u.p
    mapped_carrier, _, _ = pullback(relabeling.apply_fun(f), relabeling.apply_fun(f))
    carrier, _, _ = pullback(f, f)
    assert mapped_carrier == relabeling.apply_set(carrier)


# ---- transport of contexts ----


def test_identity_functor_transport_is_identity(bool_u, bool_s):
    hom = build_psi_xi(identity_functor(bool_u), 2)
    for ctx in contexts_up_to(bool_u, 2):
        assert hom.on_context(ctx) is ctx
        from pistruct.finset import identity

        assert hom.psi(ctx) == identity(ctx.int_obj())
        for t in enum_ob_n(ctx, 2):
            assert hom.on_ob(t) == t
        for o in enum_tob_n(ctx, 2):
            assert hom.on_tob(o) == o
    assert hom.xi1 == bool_u.ip_mor(identity(bool_u.codes))


def test_relabeling_transports_classifiers(relabeling, bool_u):
    hom = build_psi_xi(relabeling, 2)
    for ctx in contexts_up_to(bool_u, 2):
        image = hom.on_context(ctx)
        assert len(image) == len(ctx)
        for f, g in zip(ctx.classifiers, image.classifiers):
            assert sorted({"0": "z", "1": "o"}[v.name] for v in f.graph.values()) == sorted(
                v.name for v in g.graph.values()
            )


def test_transport_preserves_structure_maps(embedding, bool_u):
    hom = build_psi_xi(embedding, 2)
    ctxs = contexts_up_to(bool_u, 2)
    for ctx in ctxs:
        if len(ctx) >= 1:
            assert hom.on_context(ctx.ft()) == hom.on_context(ctx).ft()
            assert hom.on_morphism(proj(ctx)) == proj(hom.on_context(ctx))
    for src in ctxs:
        for dst in ctxs:
            for f in all_ctx_mors(src, dst):
                image = hom.on_morphism(f)
                assert image.src == hom.on_context(src)
                assert hom.on_morphism(identity_mor(src)) == identity_mor(
                    hom.on_context(src)
                )
                for g in all_ctx_mors(dst, src):
                    assert hom.on_morphism(compose_mor(f, g)) == compose_mor(
                        image, hom.on_morphism(g)
                    )


def test_transport_commutes_with_boundary_and_restriction(embedding, bool_u):
    hom = build_psi_xi(embedding, 2)
    ctxs = contexts_up_to(bool_u, 2)
    for dst in ctxs:
        for o in enum_tob_n(dst, 2):
            assert hom.on_tob(o).boundary == hom.on_ob(o.boundary)
        for src in ctxs:
            for f in all_ctx_mors(src, dst):
                for t in enum_ob_n(dst, 2):
                    assert hom.on_ob(f_star(f, t)) == f_star(hom.on_morphism(f), hom.on_ob(t))
                for o in enum_tob_n(dst, 2):
                    assert hom.on_tob(tob_restrict(f, o)) == tob_restrict(
                        hom.on_morphism(f), hom.on_tob(o)
                    )


def test_q_transport(embedding, bool_u):
    hom = build_psi_xi(embedding, 2)
    ctxs = contexts_up_to(bool_u, 1)
    from pistruct.finset import all_finfuns

    for src in ctxs:
        for dst in ctxs:
            for f in all_ctx_mors(src, dst):
                for cl in all_finfuns(dst.int_obj(), bool_u.codes):
                    lifted = q_mor(f, cl)
                    t = enum_ob_n(dst, 1)
                    transported_cl = hom.on_ob(
                        [x for x in t if x.ext[0] == cl][0]
                    ).ext[0]
                    assert hom.on_morphism(lifted) == q_mor(
                        hom.on_morphism(f), transported_cl
                    )


def test_embedding_xi_sizes(embedding, bool_u, b2_u):
    hom = build_psi_xi(embedding, 2)
    assert len(hom.xi1.dom) == 3
    assert len(hom.xi1.cod) == 1 + 3 + 3  # family object of the bigger universe
    assert len(hom.xi1_tilde.dom) == 2
    assert len(hom.xi1_tilde.cod) == 1 + 2 + 2
    assert len(set(hom.xi1.graph.values())) == 3  # stays injective


# ---- relative-functor checking and the transport theorem ----


def test_identity_functor_is_relative(bool_u, bool_s):
    hom = build_psi_xi(identity_functor(bool_u), 2)
    assert check_pre_p_functor(hom, bool_s, bool_s)
    report = check_pi_lambda_homomorphism(identity_functor(bool_u), bool_s, bool_s, 2)
    assert report.passed


def test_relabeling_is_relative(relabeling, bool_s, renamed_u):
    target_s = canonical_p_structure(renamed_u)
    hom = build_psi_xi(relabeling, 2)
    assert check_pre_p_functor(hom, bool_s, target_s)
    assert check_pi_lambda_homomorphism(relabeling, bool_s, target_s, 2).passed


def test_embedding_is_relative_to_compatible_target(embedding, bool_s, b2_s):
    hom = build_psi_xi(embedding, 2)
    assert check_pre_p_functor(hom, bool_s, b2_s)
    report = check_pi_lambda_homomorphism(embedding, bool_s, b2_s, 2)
    assert report.passed
    names = [c.name for c in report.checks]
    assert names == ["pre-p-functor-hypothesis", "pi-transport", "lambda-transport"]


def test_incompatible_target_fails_hypothesis(embedding, bool_u, bool_s, b2_u):
    bad = incompatible_target(b2_u)
    hom = build_psi_xi(embedding, 2)
    assert not check_pre_p_functor(hom, bool_s, bad)
    report = check_pi_lambda_homomorphism(embedding, bool_s, bad, 2)
    assert not report.passed
    assert [c.name for c in report.checks] == ["pre-p-functor-hypothesis"]


def test_incompatible_target_breaks_transport_equality(embedding, bool_s, b2_u):
    bad = incompatible_target(b2_u)
    cex = pi_transport_counterexample(embedding, bool_s, bad, 2)
    assert cex is not None
    ctx, t = cex
    hom = build_psi_xi(embedding, 2)
    ev = PiLambdaEvaluator(embedding.source, bool_s)
    ev_target = PiLambdaEvaluator(embedding.target, bad)
    assert hom.on_ob(ev.pi_op(ctx, t)) != ev_target.pi_op(hom.on_context(ctx), hom.on_ob(t))


def test_transport_chain_stepwise(embedding, bool_u, bool_s, b2_s):
    hom = build_psi_xi(embedding, 2)
    for ctx in contexts_up_to(bool_u, 2):
        for t in enum_ob_n(ctx, 2):
            chain = pi_transport_chain(hom, bool_s, b2_s, ctx, t)
            assert len(chain) == 6
            for i in range(5):
                assert chain[i] == chain[i + 1], f"step {i} differs"
