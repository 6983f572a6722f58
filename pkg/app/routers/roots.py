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
from app.utils.exact import format_vector


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("roots", help="Root systems and Weyl groups")
    commands = group.add_subparsers(dest="action", required=True)

    show = commands.add_parser(
        "show", parents=parents, help="Roots, orbits, Cartan matrix and |W| of a system"
    )
    show.add_argument("--roots", required=True, help='Name ("BC2") or JSON spec')
    show.add_argument("--k", help="Optional multiplicities; adds ρ(k) to the output")
    show.set_defaults(handler=show_roots)

    validate = commands.add_parser(
        "validate", parents=parents, help="Check the root-system axioms for explicit vectors"
    )
    validate.add_argument("--vectors", required=True, help="JSON list of vectors")
    validate.add_argument("--gram", help="JSON Gram matrix; identity when omitted")
    validate.set_defaults(handler=validate_roots)


def show_roots(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k) if args.k else None
    view = services.roots.describe(system, k)
    rows = [
        [",".join(format_vector(r)), system.label(r), str(system.norm2(r))]
        for r in system.positive_roots
    ]
    return CommandOutput(payload=view, columns=["root", "orbit", "norm2"], rows=rows)


def validate_roots(args, services: Services) -> CommandOutput:
    vectors = load_json(args.vectors)
    if not isinstance(vectors, list) or not vectors:
        raise UsageError("--vectors must be a non-empty JSON list", details={"value": args.vectors})
    dim = len(vectors[0])
    gram = load_json(args.gram) if args.gram else [
        [1 if i == j else 0 for j in range(dim)] for i in range(dim)
    ]
    report = services.roots.validate_root_system(
        [[str(x) for x in v] for v in vectors], [[str(x) for x in row] for row in gram]
    )
    rows = [[step.name, step.status.value, step.message] for step in report.details]
    return CommandOutput(payload=report, columns=["step", "status", "message"], rows=rows)
