#!/usr/bin/env python3
"""
Schema Loader Utility for chi-lt
Loads JSON Schemas for the graph and labeling interchange formats
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import jsonschema


class SchemaLoader:
    """Load, cache and apply the interchange schemas"""

    def __init__(self, schemas_dir: Optional[Path] = None):
        """
        Initialize schema loader

        Args:
            schemas_dir: Path to schemas directory. If None, uses default location.
        """
        if schemas_dir is None:
            chi_lt_home = os.environ.get("CHI_LT_HOME")
            if chi_lt_home:
                schemas_dir = Path(chi_lt_home) / "schemas"
            else:
                schemas_dir = Path(__file__).parent.parent / "schemas"

        self.schemas_dir = Path(schemas_dir)
        self._cache: Dict[str, Dict[str, Any]] = {}

    def load_schema(self, name: str) -> Dict[str, Any]:
        """
        Load a schema by name

        Args:
            name: Name of the schema (without .json extension)

        Returns:
            The parsed schema document

        Raises:
            FileNotFoundError: If schema file doesn't exist
        """
        if name in self._cache:
            return self._cache[name]

        schema_file = self.schemas_dir / f"{name}.json"
        if not schema_file.exists():
            raise FileNotFoundError(f"Schema file not found: {schema_file}")

        schema = json.loads(schema_file.read_text(encoding="utf-8"))
        self._cache[name] = schema
        return schema

    def validate(self, name: str, document: Any) -> None:
        """Raise jsonschema.ValidationError if ``document`` does not match schema ``name``"""
        jsonschema.validate(instance=document, schema=self.load_schema(name))

    def list_schemas(self) -> list[str]:
        """List all available schemas"""
        if not self.schemas_dir.exists():
            return []

        return sorted(f.stem for f in self.schemas_dir.glob("*.json"))

    def reload(self):
        """Clear cache to reload schemas from disk"""
        self._cache.clear()


def main():
    """CLI for checking documents against the bundled schemas"""
    import argparse

    parser = argparse.ArgumentParser(description="chi-lt Schema Loader")
    parser.add_argument("action", choices=["list", "check", "path"], help="Action to perform")
    parser.add_argument("schema", nargs="?", help="Schema name (for check action)")
    parser.add_argument("document", nargs="?", help="JSON document to check")

    args = parser.parse_args()

    loader = SchemaLoader()

    if args.action == "list":
        print("Available schemas:")
        for schema in loader.list_schemas():
            print(f"  - {schema}")

    elif args.action == "check":
        if not args.schema or not args.document:
            print("Error: schema name and document path required for 'check' action")
            return 1

        try:
            document = json.loads(Path(args.document).read_text(encoding="utf-8"))
            loader.validate(args.schema, document)
            print(f"✅ {args.document} matches {args.schema}")
        except (FileNotFoundError, json.JSONDecodeError, jsonschema.ValidationError) as e:
            print(f"❌ {e}")
            return 1

    elif args.action == "path":
        print(f"Schemas directory: {loader.schemas_dir}")

    return 0


if __name__ == "__main__":
    exit(main())
