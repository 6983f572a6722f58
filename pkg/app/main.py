import argparse
from typing import List, NoReturn, Optional

from app.exceptions import UsageError
from app.routers import cfun, dunkl, hyper, ktypes, match, roots, spherical, transform
from app.routers.utils.dependencies import OUTPUT_FORMATS

ROUTERS = [roots, ktypes, match, hyper, cfun, dunkl, spherical, transform]


class CommandParser(argparse.ArgumentParser):
    """Argument parser that reports bad invocations as UsageError."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message, details={"usage": self.format_usage().strip()})


def common_options() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    common.add_argument("--out", choices=OUTPUT_FORMATS, default="json")
    common.add_argument("--output", help="Write to this file instead of stdout")
    common.add_argument("--threads", type=int, help="Worker threads for grid evaluation")
    common.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], type=str.upper
    )
    return common


def create_app(parents: Optional[List[argparse.ArgumentParser]] = None) -> CommandParser:
    parser = CommandParser(
        prog="hoharmonic",
        description="Heckman–Opdam hypergeometric functions and π-spherical harmonic analysis",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    parents = parents if parents is not None else [common_options()]
    for router in ROUTERS:
        router.register(subparsers, parents)
    return parser
