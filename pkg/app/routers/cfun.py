import argparse
from typing import List

from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    parse_multiplicity,
    parse_root_system,
    parse_spectral,
    select_entry,
)
from app.schemas.c_function import CFunctionValue, RegularityReport


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("cfun", help="c-functions and regularity")
    commands = group.add_subparsers(dest="action", required=True)

    evaluate = commands.add_parser(
        "eval", parents=parents, help="c̃(λ), or c(λ) = c̃(λ)/c̃(ρ(k)) with --normalized"
    )
    evaluate.add_argument("--roots", required=True)
    evaluate.add_argument("--k", required=True)
    evaluate.add_argument("--lambda", dest="spectral", required=True, help="λ(α_i^∨)")
    evaluate.add_argument("--normalized", action="store_true")
    evaluate.set_defaults(handler=eval_c_function)

    regular = commands.add_parser(
        "regular", parents=parents, help="Is c̃(ρ(k)) finite and nonzero?"
    )
    regular.add_argument("--roots", required=True)
    regular.add_argument("--k", required=True)
    regular.add_argument(
        "--degree", type=int, help="Also certify the Dunkl pairing up to this degree"
    )
    regular.set_defaults(handler=check_regular)

    group_side = commands.add_parser(
        "pi", parents=parents, help="c^π(λ) = 2^e c(Σ^π, k^π, λ) for a catalog K-type"
    )
    group_side.add_argument("--group", required=True)
    group_side.add_argument("--params")
    group_side.add_argument("--ktype")
    group_side.add_argument("--pair", type=int, default=0)
    group_side.add_argument("--lambda", dest="spectral", required=True, help="λ(α_i^∨) on Σ")
    group_side.set_defaults(handler=eval_c_pi)


def eval_c_function(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    spectral = parse_spectral(system, args.spectral)
    if args.normalized:
        value = CFunctionValue(value=services.c_function.c_norm(system, k, spectral))
    else:
        value = services.c_function.c_tilde(system, k, spectral)
    return CommandOutput(payload=value)


def check_regular(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    at_rho = services.c_function.c_tilde(system, k, at_rho=True)
    gram_regular = None
    if args.degree is not None:
        gram_regular = services.dunkl.regular_by_gram(system, k, args.degree)
    report = RegularityReport(
        system=system.name,
        k=k.serialize(),
        regular=at_rho.order == 0,
        c_tilde_at_rho=at_rho,
        gram_regular=gram_regular,
        degree=args.degree,
    )
    return CommandOutput(payload=report)


def eval_c_pi(args, services: Services) -> CommandOutput:
    entry = select_entry(services, args.group, args.params, args.ktype)
    spectral = parse_spectral(entry.system, args.spectral)
    value = services.c_function.c_pi(entry, spectral, args.pair)
    payload = {
        "group": entry.group_label,
        "ktype": entry.ktype_name,
        "lambda": args.spectral,
        "value": value,
    }
    return CommandOutput(payload=payload)
