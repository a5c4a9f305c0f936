"""Batch front door: parse documents, run checks, emit deterministic reports.

Text reports are lines of the form ``CHECK <name> PASS|FAIL[ <json-witness>]``
in a stable order; ``derive-pi`` additionally prints the value tables of
the derived operations at the empty context as ``PI``/``LAMBDA`` lines.
Exit codes: 0 when every check passes, 1 when some mathematical check
fails, 2 on parse, schema, usage, or budget errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .budget import Budget, BudgetExceeded
from .csystem import check_csystem_axioms, contexts_up_to, empty_context, enum_ob_n, enum_tob_n, mu, mu_tilde
from .finset import EndpointMismatch
from .pilambda import (
    AmbiguousRecovery,
    PiLambdaEvaluator,
    check_pi_lambda_pullback,
    check_pre_pi_lambda,
    classify_universe,
    pullback_check_detail,
    recover_p_structure,
)
from .report import CheckReport
from .serialize import SchemaError, load_functor, load_universe, table_to_json, val_key
from .universe import (
    check_p_structure,
    check_pre_p_structure,
    counting_obstruction,
    enumerate_p_structures,
    structure_square,
)
from .functor import FunctorValidationError, check_pi_lambda_homomorphism, build_psi_xi


@dataclass
class Report:
    """Accumulates CHECK lines plus extra payload for the JSON format."""

    command: str
    lines: list[str] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def check(self, name: str, passed: bool, witness: dict | None = None) -> bool:
        entry: dict = {"name": name, "passed": passed}
        if witness is not None:
            entry["witness"] = witness
        self.checks.append(entry)
        tail = "" if witness is None else " " + json.dumps(witness, sort_keys=True)
        self.lines.append(f"CHECK {name} {'PASS' if passed else 'FAIL'}{tail}")
        return passed

    def line(self, text: str) -> None:
        self.lines.append(text)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            payload = {
                "command": self.command,
                "passed": self.passed,
                "checks": self.checks,
                **self.extra,
            }
            return json.dumps(payload, sort_keys=True)
        return "\n".join(self.lines)


def _absorb(report: Report, sub: CheckReport) -> None:
    for check in sub.checks:
        report.check(check.name, check.passed, check.witness)


def cmd_check(args) -> tuple[int, Report]:
    report = Report("check")
    u, s = load_universe(args.path)
    report.check("schema", True)
    if s is None:
        return 0, report
    pre = check_pre_p_structure(u, s)
    report.check("pre-p-structure", pre)
    if pre:
        full = check_p_structure(u, s)
        witness = None if full else _pullback_failure_witness(u, s)
        report.check("p-structure", full, witness)
    else:
        report.check("p-structure", False, {"reason": "square does not commute"})
    return (0 if report.passed else 1), report


def _pullback_failure_witness(u, s) -> dict:
    """Counting data plus, when sizes match, the first mediating collision."""
    square = structure_square(u, s)
    from .finset import pullback

    carrier, _, _ = pullback(square.bottom, square.right)
    witness: dict = {
        "domain_size": len(square.top.dom),
        "pullback_size": len(carrier),
    }
    seen: dict = {}
    for t in square.top.dom:
        m = (square.left.graph[t], square.top.graph[t])
        if m in seen:
            witness["collision"] = [seen[m].to_json(), t.to_json()]
            witness["mediating_image"] = [m[0].to_json(), m[1].to_json()]
            break
        seen[m] = t
    return witness


def cmd_derive_pi(args) -> tuple[int, Report]:
    report = Report("derive-pi")
    budget = Budget(args.budget)
    u, s = load_universe(args.path)
    if s is None:
        raise SchemaError("derive-pi needs a universe document with a 'P' entry")
    report.check("schema", True)
    if not report.check("pre-p-structure", check_pre_p_structure(u, s)):
        return 1, report
    report.check("p-structure", check_p_structure(u, s))
    ev = PiLambdaEvaluator(u, s)
    _absorb(report, check_pre_pi_lambda(ev, args.max_ctx_len, budget))
    ctxs = contexts_up_to(u, args.max_ctx_len, budget)
    for i, ctx in enumerate(ctxs):
        detail = pullback_check_detail(ev, ctx)
        report.check(f"pi-lambda-pullback:ctx{i}", detail["bijective"], detail)

    root = empty_context(u)
    star = root.int_obj().elements[0]
    pi_table = {}
    for t in enum_ob_n(root, 2):
        key = val_key(mu(root, 2, t).graph[star])
        value = val_key(mu(root, 1, ev.pi_op(root, t)).graph[star])
        pi_table[key] = value
        report.line(f"PI {key} -> {value}")
    lam_table = {}
    for o in enum_tob_n(root, 2):
        key = val_key(mu_tilde(root, 2, o).graph[star])
        value = val_key(mu_tilde(root, 1, ev.lambda_op(root, o)).graph[star])
        lam_table[key] = value
        report.line(f"LAMBDA {key} -> {value}")
    report.extra["pi_table"] = pi_table
    report.extra["lambda_table"] = lam_table
    return (0 if report.passed else 1), report


def cmd_enumerate(args) -> tuple[int, Report]:
    report = Report("enumerate")
    budget = Budget(args.budget)
    u, _ = load_universe(args.path)
    obstruction = counting_obstruction(u)
    pre_count = None
    structures = None
    try:
        pres, structures = enumerate_p_structures(u, budget)
        pre_count = len(pres)
    except BudgetExceeded:
        if obstruction is None:
            from .universe import search_structures

            structures = search_structures(u, budget)
        else:
            structures = []
    witness: dict = {"pre": pre_count, "structures": len(structures)}
    if obstruction is not None:
        witness["obstruction"] = obstruction
    report.check("enumerate", True, witness)
    report.extra["structures"] = [
        {"table": table_to_json(s.P), "table_tilde": table_to_json(s.P_tilde)}
        for s in structures
    ]
    return 0, report


def cmd_recover(args) -> tuple[int, Report]:
    report = Report("recover")
    budget = Budget(args.budget)
    u, s = load_universe(args.path)
    if s is None:
        raise SchemaError("recover needs a universe document with a 'P' entry")
    ev = PiLambdaEvaluator(u, s)
    ctxs = contexts_up_to(u, args.max_ctx_len, budget)
    recovered = recover_p_structure(u, ev.pi_op, ev.lambda_op, ctxs, budget)
    if recovered is None:
        report.check("recover-roundtrip", False, {"status": "none"})
    else:
        report.check(
            "recover-roundtrip",
            recovered == s,
            {"status": "unique", "matches_input": recovered == s},
        )
    return (0 if report.passed else 1), report


def cmd_check_functor(args) -> tuple[int, Report]:
    report = Report("check-functor")
    budget = Budget(args.budget)
    functor, s, s_target = load_functor(args.path)
    if s is None or s_target is None:
        raise SchemaError("check-functor needs 'P' entries on both universes")
    build_psi_xi(functor, min(args.max_ctx_len, 2), budget)
    report.check("functor-datum", True)
    _absorb(report, check_pi_lambda_homomorphism(functor, s, s_target, args.max_ctx_len, budget))
    return (0 if report.passed else 1), report


def cmd_axioms(args) -> tuple[int, Report]:
    report = Report("axioms")
    budget = Budget(args.budget)
    u, _ = load_universe(args.path)
    sub = check_csystem_axioms(u, args.max_ctx_len, budget)
    _absorb(report, sub)
    report.extra["scope"] = sub.scope
    return (0 if report.passed else 1), report


COMMANDS = {
    "check": cmd_check,
    "derive-pi": cmd_derive_pi,
    "enumerate": cmd_enumerate,
    "recover": cmd_recover,
    "check-functor": cmd_check_functor,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pistruct",
        description="Check, enumerate and transport dependent-product structures "
        "on context towers over finite universes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("path", help="input JSON document")
        p.add_argument("--max-ctx-len", type=int, default=2, metavar="N")
        p.add_argument("--budget", type=int, default=10_000_000, metavar="N")
        p.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_ctx_len < 1 or args.budget < 1:
        print("ERROR budgets and context lengths must be positive", file=sys.stderr)
        return 2
    try:
        code, report = COMMANDS[args.command](args)
    except (SchemaError, FileNotFoundError, EndpointMismatch, FunctorValidationError) as exc:
        print(f"ERROR {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"ERROR budget exceeded: {exc}", file=sys.stderr)
        return 2
    except AmbiguousRecovery as exc:
        print(f"ERROR ambiguous recovery: {exc}", file=sys.stderr)
        return 2
    print(report.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
