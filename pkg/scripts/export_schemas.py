#!/usr/bin/env python3
import sys
from pathlib import Path

# Get the project root directory
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.schemas.export import SCHEMA_VERSION, export_schemas  # noqa: E402


def main():
    target = project_root / "schemas"
    print(f"\n=== Exporting JSON Schemas ({SCHEMA_VERSION}) ===\n")
    for path in export_schemas(target):
        print(f"  wrote {path.relative_to(project_root)}")
    print("\nCommit the regenerated files together with the schema change.\n")


if __name__ == "__main__":
    main()
