"""Shared utility functions."""

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any

from src.exactfield import CycloNumber, format_field
from src.polyring import Polynomial


def atomic_write_json(data: Any, file_path: Path) -> None:
    """Write a report atomically: temp file in the target directory, fsync, then rename.

    Exact values (fractions, cyclotomic numbers, polynomials) are written as text.
    The temp file is removed if serialization fails.
    """
    dir_path = file_path.parent
    dir_path.mkdir(parents=True, exist_ok=True)

    fd, tmp_path = tempfile.mkstemp(suffix=".tmp", dir=dir_path)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, ensure_ascii=False, default=to_jsonable)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_path, file_path)
    except Exception:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


def to_jsonable(value: Any) -> Any:
    """JSON fallback for exact values: field elements and polynomials become text."""
    if isinstance(value, (Fraction, CycloNumber)):
        return format_field(value)
    if isinstance(value, Polynomial):
        return value.to_text()
    if isinstance(value, tuple):
        return list(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps_line(data: Any) -> str:
    """One compact JSON line, the CLI's stdout record format."""
    return json.dumps(data, ensure_ascii=False, sort_keys=False, default=to_jsonable)
