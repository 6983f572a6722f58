"""JSON Schemas of every payload the command line emits."""

import json
from pathlib import Path
from typing import Dict, List, Type

from pydantic import BaseModel

from app.schemas.c_function import CFunctionValue, RegularityReport
from app.schemas.dunkl import GramReport
from app.schemas.error import ErrorPayload
from app.schemas.ktype import MatchedPairView, SmallKTypeView
from app.schemas.root_system import RootSystemReport, RootSystemView
from app.schemas.transform import RoundtripReport, TransformResult
from app.schemas.validation import ValidationReport

SCHEMA_VERSION = "v1"

SCHEMA_MODELS: Dict[str, Type[BaseModel]] = {
    "c_function_value": CFunctionValue,
    "error": ErrorPayload,
    "gram_report": GramReport,
    "matched_pair": MatchedPairView,
    "regularity_report": RegularityReport,
    "root_system": RootSystemView,
    "root_system_report": RootSystemReport,
    "roundtrip_report": RoundtripReport,
    "small_ktype": SmallKTypeView,
    "transform_result": TransformResult,
    "validation_report": ValidationReport,
}


def schema_documents() -> Dict[str, dict]:
    documents = {}
    for name, model in SCHEMA_MODELS.items():
        document = model.model_json_schema(mode="serialization")
        document["$id"] = f"hoharmonic/{SCHEMA_VERSION}/{name}.json"
        documents[name] = document
    return documents


def export_schemas(target: Path) -> List[Path]:
    """Write one `<name>.json` per payload under target/<version>/."""
    directory = Path(target) / SCHEMA_VERSION
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, document in schema_documents().items():
        path = directory / f"{name}.json"
        path.write_text(
            json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
        written.append(path)
    return written
