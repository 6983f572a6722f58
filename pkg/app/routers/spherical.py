import argparse
from typing import List

from app.models.series import TruncationPolicy
from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    parse_points,
    parse_spectral,
    select_entry,
)
from app.utils.exact import format_rational
from app.utils.formatting import format_complex


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("spherical", help="π-spherical functions of small K-types")
    commands = group.add_subparsers(dest="action", required=True)

    evaluate = commands.add_parser(
        "eval",
        parents=parents,
        help="Υ^π(φ^π_λ)(H) = cosh-factor(H) · F(Σ^π, k^π, λ; H)",
        description="CSV columns: a1..ar (simple-root values of Σ), re, im",
    )
    evaluate.add_argument("--group", required=True, help='Catalog group key, e.g. "so(2r,1)"')
    evaluate.add_argument("--params", help='Parameters, e.g. "r=2,s=1"')
    evaluate.add_argument("--ktype", help="K-type index or name substring")
    evaluate.add_argument("--pair", type=int, default=0)
    evaluate.add_argument("--lambda", dest="spectral", required=True, help="λ(α_i^∨) on Σ")
    evaluate.add_argument("--grid", help="start:stop:count along --direction")
    evaluate.add_argument("--direction")
    evaluate.add_argument("--point", action="append")
    evaluate.add_argument("--max-height", type=int)
    evaluate.add_argument("--tol", type=float)
    evaluate.set_defaults(handler=eval_spherical)


def eval_spherical(args, services: Services) -> CommandOutput:
    entry = select_entry(services, args.group, args.params, args.ktype)
    system = entry.system
    pair = entry.pair(args.pair)
    spectral = parse_spectral(system, args.spectral)
    coords, points = parse_points(services, system, args.grid, args.point, args.direction)
    policy = TruncationPolicy.from_settings(max_height=args.max_height, tail_tol=args.tol)
    values = services.hypergeometric.upsilon_eval_many(
        entry, spectral, points, policy, args.pair
    )
    factor = services.hypergeometric.entry_cosh_factor(entry, args.pair)
    e = services.c_function.e_exponent(system, entry.m, pair.system_pi, pair.k_pi)
    payload = {
        "group": entry.group_label,
        "ktype": entry.ktype_name,
        "system_pi": pair.system_pi.name,
        "k_pi": pair.k_pi.serialize(),
        "cosh_factor": factor.describe(),
        "e": format_rational(e),
        "lambda": args.spectral,
        "samples": [
            {"simple_values": [float(x) for x in c], "value": format_complex(v)}
            for c, v in zip(coords, values)
        ],
    }
    columns = [f"a{i + 1}" for i in range(system.rank)] + ["re", "im"]
    rows = [list(map(float, c)) + [float(v.real), float(v.imag)] for c, v in zip(coords, values)]
    return CommandOutput(payload=payload, columns=columns, rows=rows)
