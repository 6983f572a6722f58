import argparse
from typing import List

import numpy as np

from app.models.series import TruncationPolicy
from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    parse_multiplicity,
    parse_points,
    parse_root_system,
    parse_spectral,
    select_entry,
)
from app.utils.formatting import format_complex


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("hyper", help="Hypergeometric functions and Harish-Chandra series")
    commands = group.add_subparsers(dest="action", required=True)

    evaluate = commands.add_parser(
        "eval",
        parents=parents,
        help="F(Σ′, k, λ; H) on a ray or at given points",
        description="CSV columns: a1..ar (simple-root values α_i(H)), re, im",
    )
    _function_arguments(evaluate)
    evaluate.add_argument("--perturb", action="store_true", help="Nudge λ off resonances")
    evaluate.set_defaults(handler=eval_hypergeometric)

    phi = commands.add_parser(
        "phi",
        parents=parents,
        help="Harish-Chandra series Φ(λ; H) in the negative chamber",
        description="CSV columns: a1..ar, re, im",
    )
    _function_arguments(phi)
    phi.add_argument("--perturb", action="store_true", help="Nudge λ off resonances")
    phi.set_defaults(handler=eval_phi)

    casimir = commands.add_parser(
        "casimir",
        parents=parents,
        help="Residual of the radial Casimir equation for a catalog K-type",
        description="CSV columns: a1..ar, residual",
    )
    casimir.add_argument("--group", required=True, help='Catalog group key, e.g. "sp(p,1)"')
    casimir.add_argument("--params", help='Group and K-type parameters, e.g. "p=2,n=2"')
    casimir.add_argument("--ktype", help="K-type index or name substring")
    casimir.add_argument("--pair", type=int, default=0, help="Index of the valid (Σ^π, k^π)")
    casimir.add_argument("--lambda", dest="spectral", required=True, help="λ(α_i^∨) on Σ")
    casimir.add_argument("--grid", help="start:stop:count along --direction")
    casimir.add_argument("--direction", help="Simple-root values of the ray")
    casimir.add_argument("--point", action="append", help="Simple-root values α_i(H)")
    casimir.add_argument("--step", type=float, default=1e-3)
    casimir.set_defaults(handler=eval_casimir)


def _function_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--roots", required=True, help="Root system Σ′")
    parser.add_argument("--k", required=True, help="Multiplicities k by orbit")
    parser.add_argument("--lambda", dest="spectral", required=True, help="λ(α_i^∨), comma separated")
    parser.add_argument("--grid", help="start:stop:count along --direction")
    parser.add_argument("--direction", help="Simple-root values of the ray, default all ones")
    parser.add_argument("--point", action="append", help="Simple-root values α_i(H); repeatable")
    parser.add_argument("--max-height", type=int, help="Initial series truncation height")
    parser.add_argument("--tol", type=float, help="Relative tail tolerance")
    parser.add_argument("--wall-margin", type=float)


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy.from_settings(
        max_height=args.max_height, tail_tol=args.tol, wall_margin=args.wall_margin
    )


def _table(system, coords: np.ndarray, values: np.ndarray, payload: dict) -> CommandOutput:
    columns = [f"a{i + 1}" for i in range(system.rank)] + ["re", "im"]
    rows = [list(map(float, c)) + [float(v.real), float(v.imag)] for c, v in zip(coords, values)]
    payload["samples"] = [
        {"simple_values": [float(x) for x in c], "value": format_complex(v)}
        for c, v in zip(coords, values)
    ]
    return CommandOutput(payload=payload, columns=columns, rows=rows)


def eval_hypergeometric(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    spectral = parse_spectral(system, args.spectral)
    coords, points = parse_points(services, system, args.grid, args.point, args.direction)
    values = services.hypergeometric.f_eval_many(
        system, k, spectral, points, _policy(args), perturb=args.perturb
    )
    payload = {"system": system.name, "k": k.serialize(), "lambda": args.spectral}
    return _table(system, coords, values, payload)


def eval_phi(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    spectral = parse_spectral(system, args.spectral)
    coords, points = parse_points(services, system, args.grid, args.point, args.direction)
    policy = _policy(args)
    values = np.array(
        [
            services.series.phi_eval_adaptive(system, k, spectral, h, policy, args.perturb)
            for h in points
        ]
    )
    payload = {"system": system.name, "k": k.serialize(), "lambda": args.spectral}
    return _table(system, coords, values, payload)


def eval_casimir(args, services: Services) -> CommandOutput:
    entry = select_entry(services, args.group, args.params, args.ktype)
    system = entry.system
    spectral = parse_spectral(system, args.spectral)
    coords, points = parse_points(services, system, args.grid, args.point, args.direction)
    residuals = [
        services.hypergeometric.casimir_residual(
            entry, spectral, h, step=args.step, pair_index=args.pair
        )
        for h in points
    ]
    payload = {
        "group": entry.group_label,
        "ktype": entry.ktype_name,
        "lambda": args.spectral,
        "samples": [
            {"simple_values": [float(x) for x in c], "residual": r}
            for c, r in zip(coords, residuals)
        ],
    }
    columns = [f"a{i + 1}" for i in range(system.rank)] + ["residual"]
    rows = [list(map(float, c)) + [r] for c, r in zip(coords, residuals)]
    return CommandOutput(payload=payload, columns=columns, rows=rows)
