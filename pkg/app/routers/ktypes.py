import argparse
from typing import List

from app.routers.utils.dependencies import CommandOutput, Services
from app.schemas.ktype import KTypeFilter, SmallKTypeView


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    group = subparsers.add_parser("ktypes", help="Catalog of small K-types")
    commands = group.add_subparsers(dest="action", required=True)

    listing = commands.add_parser(
        "list",
        parents=parents,
        help="Small K-types with their (Σ, m, κ^π) and matched (Σ^π, k^π)",
        description=(
            "CSV columns: group, parameters, ktype, system, m, kappa, "
            "has_nontrivial, valid_pairs, cosh_factor, note"
        ),
    )
    listing.add_argument("--family", help='Group key ("so(p,q)"), kind ("hermitian") or stem ("so")')
    for name in ("p", "q", "r", "s", "n"):
        listing.add_argument(f"--{name}", type=int)
    listing.add_argument("--nu", help="Hermitian character parameter, e.g. 3/2")
    listing.add_argument("--case", choices=("i", "ii"), help="so(p,q) case")
    listing.add_argument("--include-trivial", action="store_true")
    listing.set_defaults(handler=list_ktypes)


def list_ktypes(args, services: Services) -> CommandOutput:
    filter = KTypeFilter(
        family=args.family,
        p=args.p,
        q=args.q,
        r=args.r,
        s=args.s,
        n=args.n,
        nu=args.nu,
        case=args.case,
        include_trivial=args.include_trivial,
    )
    views = [SmallKTypeView.from_entry(e) for e in services.catalog.catalog(filter)]
    rows = [
        [
            v.group_label,
            ";".join(f"{k}={val}" for k, val in v.parameters.items()),
            v.ktype_name,
            v.system,
            ";".join(f"{k}={val}" for k, val in v.m.items()),
            ";".join(f"{k}={val}" for k, val in v.kappa.items()),
            v.has_nontrivial,
            sum(1 for c in v.matched if c.valid),
            v.cosh_factor,
            v.note or "",
        ]
        for v in views
    ]
    columns = [
        "group",
        "parameters",
        "ktype",
        "system",
        "m",
        "kappa",
        "has_nontrivial",
        "valid_pairs",
        "cosh_factor",
        "note",
    ]
    return CommandOutput(payload=views, columns=columns, rows=rows)
