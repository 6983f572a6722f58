import argparse
from typing import List

from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    parse_multiplicity,
    parse_root_system,
)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("dunkl", help="Dunkl operators and the pairing")
    commands = group.add_subparsers(dest="action", required=True)

    gram = commands.add_parser(
        "gram",
        parents=parents,
        help="Gram blocks of the Dunkl pairing by degree",
        description="CSV columns: degree, size, determinant, symmetric",
    )
    gram.add_argument("--roots", required=True)
    gram.add_argument("--k", required=True)
    gram.add_argument("--degree", type=int, required=True)
    gram.set_defaults(handler=gram_blocks)


def gram_blocks(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    report = services.dunkl.gram_report(system, k, args.degree)
    rows = [
        [block.degree, len(block.monomials), block.determinant, block.symmetric]
        for block in report.blocks
    ]
    return CommandOutput(
        payload=report, columns=["degree", "size", "determinant", "symmetric"], rows=rows
    )
