"""Input parsing and schema validation.

The renderer consumes only the serialized suite outputs (results.jsonl plus
the study JSON files under report/); it never imports the toolkit that
produced them.  Every document must carry schema_version 1.
"""

from __future__ import annotations

import json
from pathlib import Path

SCHEMA_VERSION = 1


class SchemaError(Exception):
    """Raised with the offending file named in the message."""

    def __init__(self, path, detail):
        super().__init__(f"{path}: {detail}")
        self.path = str(path)
        self.detail = detail


def _check_version(doc, path):
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(path, f"expected schema_version {SCHEMA_VERSION}")


def load_results(path) -> list[dict]:
    """One ratio record per line; empty file means no results."""
    path = Path(path)
    records = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise SchemaError(path, str(exc))
    for i, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(path, f"line {i}: {exc}")
        _check_version(doc, path)
        for key in ("case_id", "function_label", "lhs", "rhs", "ratio"):
            if key not in doc:
                raise SchemaError(path, f"line {i}: missing field {key!r}")
        records.append(doc)
    return records


def load_study_file(path) -> dict:
    """A study document: either {"reports": [...]} or a single report."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise SchemaError(path, str(exc))
    except json.JSONDecodeError as exc:
        raise SchemaError(path, str(exc))
    _check_version(doc, path)
    if "reports" in doc:
        for rep in doc["reports"]:
            _validate_report(rep, path)
    elif "bands" in doc:
        for band in doc["bands"]:
            for key in ("s", "p", "functions"):
                if key not in band:
                    raise SchemaError(path, f"band missing field {key!r}")
    elif "study_kind" in doc:
        _validate_report(doc, path)
    else:
        raise SchemaError(path, "neither a study report nor a band document")
    return doc


def _validate_report(rep, path):
    for key in ("study_kind", "series", "verdict"):
        if key not in rep:
            raise SchemaError(path, f"study report missing field {key!r}")
    if not isinstance(rep["series"], list) or not rep["series"]:
        raise SchemaError(path, "study series must be a nonempty list")


def load_verdicts(path) -> dict | None:
    path = Path(path)
    if not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(path, str(exc))
    _check_version(doc, path)
    return doc
