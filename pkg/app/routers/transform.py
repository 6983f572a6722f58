import argparse
from typing import List

from app.exceptions import UsageError
from app.routers.utils.dependencies import (
    CommandOutput,
    Services,
    parse_multiplicity,
    parse_options,
    parse_root_system,
    select_entry,
)
from app.schemas.transform import SpectrumSample, TransformResult


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("transform", help="Hypergeometric and π-spherical transforms")
    commands = group.add_subparsers(dest="action", required=True)

    forward = commands.add_parser(
        "forward",
        parents=parents,
        help="ℱf of a smooth bump, or f̂ for a catalog K-type with --group",
        description="CSV columns: xi1..xir, re, im",
    )
    forward.add_argument("--roots", help="Root system Σ′ for ℱ")
    forward.add_argument("--k", help="Multiplicities k for ℱ")
    forward.add_argument("--group", help="Catalog group for the π-spherical transform")
    forward.add_argument("--params")
    forward.add_argument("--ktype")
    forward.add_argument("--pair", type=int, default=0)
    _bump_arguments(forward)
    forward.add_argument(
        "--spectral", default="radius=20,points=41", help="radius=R,points=N of the ξ grid"
    )
    forward.set_defaults(handler=forward_transform)

    roundtrip = commands.add_parser(
        "roundtrip",
        parents=parents,
        help="Forward then inverse transform of a bump, with the Plancherel check",
    )
    roundtrip.add_argument("--roots", required=True)
    roundtrip.add_argument("--k", required=True)
    _bump_arguments(roundtrip)
    roundtrip.add_argument("--spectral", help="radius=R,points=N; chosen from the width when omitted")
    roundtrip.set_defaults(handler=roundtrip_transform)


def _bump_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bump", default="width=1.0", help="width=w of the test bump")
    parser.add_argument("--grid", type=int, default=400, help="Cartan grid points per axis")


def _width(args) -> float:
    options = parse_options(args.bump)
    try:
        return float(options.get("width", 1.0))
    except ValueError:
        raise UsageError("--bump width must be a number", details={"value": args.bump})


def _spectral(text) -> dict:
    options = parse_options(text)
    try:
        return {
            "radius": float(options["radius"]) if "radius" in options else None,
            "points": int(options["points"]) if "points" in options else None,
        }
    except ValueError:
        raise UsageError("--spectral takes radius=R,points=N", details={"value": text})


def forward_transform(args, services: Services) -> CommandOutput:
    width = _width(args)
    spectral = _spectral(args.spectral)
    transform = services.transform
    if args.group:
        entry = select_entry(services, args.group, args.params, args.ktype)
        system = entry.system
        k_pi = entry.pair(args.pair).k_pi
        f = transform.bump(system, width, args.grid)
        axes = transform.grid_axes(system, spectral["radius"] or 20.0, spectral["points"] or 41)
        result = transform.spherical_forward(entry, f, axes, args.pair)
        payload = TransformResult(
            system=system.name,
            k=k_pi.serialize(),
            transform="spherical",
            ktype=entry.ktype_name,
            prefactor=transform.spherical_prefactor(entry, args.pair),
            bump_width=width,
            samples=[],
        )
    else:
        if not args.roots or args.k is None:
            raise UsageError("Give --roots and --k, or --group for the spherical transform")
        system = parse_root_system(args.roots, services)
        k = parse_multiplicity(system, args.k)
        f = transform.bump(system, width, args.grid)
        axes = transform.grid_axes(system, spectral["radius"] or 20.0, spectral["points"] or 41)
        result = transform.hft_forward(system, k, f, axes)
        payload = TransformResult(
            system=system.name,
            k=k.serialize(),
            transform="hypergeometric",
            bump_width=width,
            samples=[],
        )
    nodes = result.points()
    values = result.flat_values()
    payload.samples = [
        SpectrumSample(xi=[float(x) for x in xi], value=complex(v)) for xi, v in zip(nodes, values)
    ]
    columns = [f"xi{i + 1}" for i in range(system.rank)] + ["re", "im"]
    rows = [[float(x) for x in xi] + [float(v.real), float(v.imag)] for xi, v in zip(nodes, values)]
    return CommandOutput(payload=payload, columns=columns, rows=rows)


def roundtrip_transform(args, services: Services) -> CommandOutput:
    system = parse_root_system(args.roots, services)
    k = parse_multiplicity(system, args.k)
    spectral = _spectral(args.spectral)
    report = services.transform.roundtrip(
        system,
        k,
        width=_width(args),
        grid=args.grid,
        spectral_radius=spectral["radius"],
        spectral_points=spectral["points"],
    )
    return CommandOutput(payload=report)
