"""Shared plumbing for the command groups: services, argument parsing, output."""

import csv
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Number
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np
from pydantic import BaseModel

from app.config import Settings, get_settings
from app.exceptions import UsageError
from app.models.ktype import SmallKTypeEntry
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.spectral import SpectralParameter
from app.schemas.ktype import KTypeFilter
from app.services.c_function_service import CFunctionService
from app.services.dunkl_service import DunklService
from app.services.hypergeometric_service import HypergeometricService
from app.services.ktype_catalog_service import KTypeCatalogService
from app.services.matching_service import MatchingService
from app.services.root_system_service import RootSystemService
from app.services.series_service import SeriesService
from app.services.transform_service import TransformService
from app.utils.formatting import format_complex, parse_complex

OUTPUT_FORMATS = ("json", "csv")


class Services:
    """One instance of every service per invocation, sharing settings and caches."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    @cached_property
    def roots(self) -> RootSystemService:
        return RootSystemService(self.settings)

    @cached_property
    def series(self) -> SeriesService:
        return SeriesService(self.settings, root_service=self.roots)

    @cached_property
    def c_function(self) -> CFunctionService:
        return CFunctionService(self.settings, root_service=self.roots)

    @cached_property
    def hypergeometric(self) -> HypergeometricService:
        return HypergeometricService(
            self.settings,
            series_service=self.series,
            c_function_service=self.c_function,
            root_service=self.roots,
        )

    @cached_property
    def dunkl(self) -> DunklService:
        return DunklService(self.settings, root_service=self.roots)

    @cached_property
    def matching(self) -> MatchingService:
        return MatchingService(self.settings, root_service=self.roots)

    @cached_property
    def catalog(self) -> KTypeCatalogService:
        return KTypeCatalogService(
            self.settings, root_service=self.roots, matching_service=self.matching
        )

    @cached_property
    def transform(self) -> TransformService:
        return TransformService(
            self.settings,
            root_service=self.roots,
            c_function_service=self.c_function,
            hypergeometric_service=self.hypergeometric,
        )


@dataclass
class CommandOutput:
    """What a command produced: a JSON payload and, optionally, a CSV table."""

    payload: Any
    columns: Optional[List[str]] = None
    rows: List[List[Any]] = field(default_factory=list)


def parse_number(text: str):
    """Exact Fraction for rationals ("1/2", "0.5", "-3"), complex otherwise."""
    text = str(text).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        value = parse_complex(text)
    except ValueError:
        raise UsageError(f"Cannot parse number {text!r}", details={"value": text})
    return value.real if value.imag == 0 else value


def load_json(text: str) -> Any:
    text = text.strip()
    if text.startswith("@") or (text.endswith(".json") and os.path.exists(text)):
        path = text[1:] if text.startswith("@") else text
        try:
            with open(path, encoding="utf-8") as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"Cannot read JSON from {path}: {exc}", details={"path": path})
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"Invalid JSON: {exc}", details={"value": text})


def parse_root_system(text: str, services: Services) -> RootSystem:
    """
    A root system from a name ("BC2"), a JSON spec or a JSON file (@path).

    JSON specs are {"family": "BC", "rank": 2} or
    {"custom": {"roots": [[...]], "gram": [[...]], "chamber": [...]}}.
    """
    text = text.strip()
    if not (text.startswith("{") or text.startswith("@") or text.endswith(".json")):
        return services.roots.build_root_system(text)
    spec = load_json(text)
    if not isinstance(spec, dict):
        raise UsageError("Root system JSON must be an object", details={"value": text})
    if "custom" in spec:
        custom = spec["custom"]
        try:
            return services.roots.custom_root_system(
                [[Fraction(str(x)) for x in r] for r in custom["roots"]],
                [[Fraction(str(x)) for x in row] for row in custom["gram"]],
                custom.get("chamber"),
            )
        except KeyError as exc:
            raise UsageError(f"Custom root system needs {exc}", details={"spec": spec})
    if "family" not in spec:
        raise UsageError("Root system JSON needs a family or a custom block", details={"spec": spec})
    return services.roots.build_root_system(str(spec["family"]), spec.get("rank"))


def parse_multiplicity(
    system: RootSystem, text: Optional[str], name: str = "k"
) -> MultiplicityFunction:
    """
    A multiplicity function from "2,0.5" (orbit order), "short=2,double=1/2",
    a single value for every orbit, or JSON such as {"k": {"short": 0.5}}.
    """
    if text is None:
        return MultiplicityFunction.zero(system)
    text = text.strip()
    if text.startswith("{") or text.startswith("@"):
        spec = load_json(text)
        if isinstance(spec, dict) and name in spec and isinstance(spec[name], dict):
            spec = spec[name]
        if not isinstance(spec, dict):
            raise UsageError(f"--{name} JSON must map orbit labels to values", details={"value": text})
        return MultiplicityFunction.build(
            system, {label: parse_number(str(v)) for label, v in spec.items()}
        )
    items = [item for item in text.split(",") if item.strip()]
    if items and all("=" in item for item in items):
        mapping = {}
        for item in items:
            label, value = item.split("=", 1)
            mapping[label.strip()] = parse_number(value)
        return MultiplicityFunction.build(system, mapping)
    if any("=" in item for item in items):
        raise UsageError(
            f"--{name} mixes labelled and positional values", details={"value": text}
        )
    return MultiplicityFunction.build(system, [parse_number(item) for item in items])


def parse_spectral(system: RootSystem, text: str) -> SpectralParameter:
    """λ from its values λ(α_i^∨) on the simple coroots, e.g. "0.3+1.2i" or "1,2"."""
    try:
        values = [parse_complex(item) for item in text.split(",")]
    except ValueError:
        raise UsageError(f"Cannot parse λ from {text!r}", details={"value": text})
    if len(values) != system.rank:
        raise UsageError(
            f"λ needs {system.rank} coroot values on {system.name}, got {len(values)}",
            details={"value": text, "rank": system.rank},
        )
    return SpectralParameter.from_coroot_values(system, values)


def parse_floats(text: str, count: Optional[int] = None, name: str = "value") -> List[float]:
    try:
        values = [float(item) for item in text.split(",")]
    except ValueError:
        raise UsageError(f"Cannot parse {name} from {text!r}", details={"value": text})
    if count is not None and len(values) != count:
        raise UsageError(
            f"{name} needs {count} entries, got {len(values)}",
            details={"value": text, "expected": count},
        )
    return values


def parse_grid(text: str) -> np.ndarray:
    """start:stop:count, both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--grid takes start:stop:count", details={"value": text})
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"Cannot parse grid {text!r}", details={"value": text})
    if count < 1:
        raise UsageError("--grid needs a positive count", details={"value": text})
    return np.linspace(start, stop, count)


def parse_options(text: Optional[str]) -> Dict[str, str]:
    """"width=1.0,radius=2" into a dict."""
    if not text:
        return {}
    options = {}
    for item in text.split(","):
        if "=" not in item:
            raise UsageError(f"Expected key=value, got {item!r}", details={"value": text})
        key, value = item.split("=", 1)
        options[key.strip()] = value.strip()
    return options


def to_jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Number) or value is None or isinstance(value, str):
        return value
    return str(value)


def _cell(value: Any) -> Any:
    if isinstance(value, (complex, np.complexfloating)):
        return format_complex(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


def emit(output: CommandOutput, fmt: str, path: Optional[str] = None) -> None:
    """Write the output as JSON or CSV to `path`, or stdout."""
    if fmt not in OUTPUT_FORMATS:
        raise UsageError(f"Unknown output format {fmt!r}", details={"formats": list(OUTPUT_FORMATS)})
    if fmt == "csv" and output.columns is None:
        raise UsageError("This command has no CSV form; use --out json")
    if path:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            _write(output, fmt, handle)
    else:
        _write(output, fmt, sys.stdout)


def _write(output: CommandOutput, fmt: str, stream: TextIO) -> None:
    if fmt == "json":
        stream.write(json.dumps(to_jsonable(output.payload), indent=2, ensure_ascii=False) + "\n")
        return
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(output.columns)
    for row in output.rows:
        writer.writerow([_cell(v) for v in row])


def cartan_points(services: Services, system: RootSystem, simple_values: Sequence[Sequence[float]]) -> np.ndarray:
    """H for each row of simple-root values α_i(H)."""
    return np.stack([services.roots.cartan_point(system, v) for v in simple_values])


def parse_points(
    services: Services,
    system: RootSystem,
    grid: Optional[str],
    points: Optional[List[str]],
    direction: Optional[str] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cartan points from --point (simple-root values α_i(H), repeatable) or a ray
    --grid start:stop:count along --direction (default all ones).

    Returns:
        Tuple[np.ndarray, np.ndarray]: Simple-root values per row and the points H
    """
    if points:
        values = np.array([parse_floats(p, system.rank, "--point") for p in points])
    elif grid:
        ray = np.array(
            parse_floats(direction, system.rank, "--direction")
            if direction
            else [1.0] * system.rank
        )
        values = np.outer(parse_grid(grid), ray)
    else:
        raise UsageError("Give --grid or at least one --point")
    return values, cartan_points(services, system, values)


def select_entry(
    services: Services,
    group: str,
    params: Optional[str],
    ktype: Optional[str] = None,
) -> SmallKTypeEntry:
    """
    One catalog record: --group key, --params "p=2,n=2" and --ktype as an index
    or a unique substring of the K-type name.
    """
    options = parse_options(params)
    unknown = sorted(set(options) - set(KTypeFilter.model_fields) - {"family"})
    if unknown:
        raise UsageError(f"Unknown catalog parameters {unknown}", details={"parameters": unknown})
    entries = services.catalog.catalog(KTypeFilter(family=group, include_trivial=True, **options))
    if not entries:
        raise UsageError(f"No catalog records for {group} at {params}", details={"group": group})
    names = [e.ktype_name for e in entries]
    if ktype is None:
        if len(entries) == 1:
            return entries[0]
        raise UsageError("Several K-types match; choose one with --ktype", details={"ktypes": names})
    if ktype.isdigit():
        index = int(ktype)
        if index >= len(entries):
            raise UsageError(f"--ktype index {index} out of range", details={"ktypes": names})
        return entries[index]
    matches = [e for e in entries if ktype in e.ktype_name]
    if len(matches) != 1:
        raise UsageError(
            f"--ktype {ktype!r} matches {len(matches)} records", details={"ktypes": names}
        )
    return matches[0]
