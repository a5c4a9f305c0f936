"""Dependent-product structures on context towers over finite universes.

The package realizes, over canonical finite sets, the passage from a
structure pair ``(P, P~)`` on a universe to the dependent-product
operations on the tower category built from that universe, together
with exhaustive enumeration, inverse recovery by finite search,
non-existence certification, and transport along universe functors.
"""

from .budget import Budget, BudgetExceeded, DEFAULT_BUDGET
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
from .universe import (
    MixedPStructure,
    PStructure,
    Universe,
    canonical_p_structure,
    check_mixed_p_structure,
    check_p_structure,
    check_pre_p_structure,
    counting_obstruction,
    enumerate_p_structures,
    ip_assignment,
    ip_code,
    ip_element,
    ip_map_of_pair,
    ip_pair_of_map,
    search_structures,
    structure_square,
)
from .csystem import (
    Context,
    CtxMor,
    ObN,
    TObN,
    all_ctx_mors,
    check_csystem_axioms,
    compose_mor,
    contexts_up_to,
    empty_context,
    enum_ob_n,
    enum_tob_n,
    ext,
    f_star,
    identity_mor,
    int_obj,
    mu,
    mu_inv,
    mu_tilde,
    mu_tilde_inv,
    proj,
    q_mor,
    tob_restrict,
)
from .pilambda import (
    AmbiguousRecovery,
    PiLambdaEvaluator,
    check_pi_lambda_pullback,
    check_pre_pi_lambda,
    classify_universe,
    pullback_check_detail,
    recover_p_structure,
)
from .functor import (
    ElementwiseFunctor,
    FunctorValidationError,
    InducedHomomorphism,
    build_psi_xi,
    check_pi_lambda_homomorphism,
    check_pre_p_functor,
    identity_functor,
    pi_transport_chain,
    pi_transport_counterexample,
)
from .report import Check, CheckReport

__version__ = "0.1.0"
