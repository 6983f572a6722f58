import argparse
from typing import List

from app.exceptions import UsageError
from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    load_json,
    parse_multiplicity,
    parse_root_system,
)
from app.schemas.ktype import MatchedPairView


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("match", help="Matching conditions (Σ, m, κ^π) → (Σ^π, k^π)")
    commands = group.add_subparsers(dest="action", required=True)

    solve = commands.add_parser(
        "solve",
        parents=parents,
        help="Enumerate every branch combination and validate it",
        description="CSV columns: valid, branch_tags, roots, k, failure_reason",
    )
    _group_arguments(solve)
    solve.set_defaults(handler=solve_matching)

    verify = commands.add_parser(
        "verify", parents=parents, help="Check a proposed (Σ^π, k^π) exactly"
    )
    _group_arguments(verify)
    verify.add_argument(
        "--pi-roots", required=True, help="JSON list of roots of Σ^π in the coordinates of Σ"
    )
    verify.add_argument("--k-pi", required=True, help="k^π by orbit of Σ^π")
    verify.set_defaults(handler=verify_matching)


def _group_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--roots", required=True, help="Restricted root system Σ")
    parser.add_argument("--m", required=True, help="Root multiplicities m by orbit")
    parser.add_argument("--kappa", required=True, help="κ^π by orbit")


def solve_matching(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    m = parse_multiplicity(system, args.m, "m")
    kappa = parse_multiplicity(system, args.kappa, "kappa")
    views = [
        MatchedPairView.from_candidate(c)
        for c in services.matching.solve_matching(system, m, kappa)
    ]
    rows = [
        [
            v.valid,
            ";".join(f"{k}={tag}" for k, tag in v.branch_tags.items()),
            " ".join("(" + ",".join(r) + ")" for r in v.roots),
            " ".join(f"({','.join(rv.root)}):{rv.k}" for rv in v.k_by_root),
            v.failure_reason or "",
        ]
        for v in views
    ]
    return CommandOutput(
        payload=views,
        columns=["valid", "branch_tags", "roots", "k", "failure_reason"],
        rows=rows,
    )


def verify_matching(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    m = parse_multiplicity(system, args.m, "m")
    kappa = parse_multiplicity(system, args.kappa, "kappa")
    vectors = load_json(args.pi_roots)
    if not isinstance(vectors, list) or not vectors:
        raise UsageError("--pi-roots must be a non-empty JSON list", details={"value": args.pi_roots})
    vectors = [[str(x) for x in v] for v in vectors]
    negatives = [[x[1:] if x.startswith("-") else f"-{x}" for x in v] for v in vectors]
    system_pi = services.roots.subsystem(system, vectors + negatives)
    k_pi = parse_multiplicity(system_pi, args.k_pi, "k-pi")
    report = services.matching.verify_matching(system, m, kappa, system_pi, k_pi)
    rows = [[step.name, step.status.value, step.message] for step in report.details]
    return CommandOutput(payload=report, columns=["step", "status", "message"], rows=rows)
