"""Report data model: one record per executed task."""

import hashlib
import json
from dataclasses import dataclass, field
from importlib import metadata
from typing import Any

PACKAGE_NAME = "hodge-join"
FALLBACK_VERSION = "0.1.0"


def tool_version() -> str:
    """Installed package version, or the source-tree version when not installed."""
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION


def report_id(operation: str, inputs: dict[str, Any], index: int = 0) -> str:
    """Stable id from the task position, operation and inputs."""
    payload = json.dumps(
        {"index": index, "operation": operation, "inputs": inputs},
        sort_keys=True,
        ensure_ascii=False,
        default=str,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class Report:
    """Result of one operation with the inputs it ran on.

    Equal inputs give equal reports. ``elapsed`` is only set when timing was
    requested and is left out of ``to_dict`` otherwise.
    """

    id: str
    operation: str
    inputs: dict[str, Any]
    result: dict[str, Any]
    tool_version: str = field(default_factory=tool_version)
    elapsed: float | None = None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        data = {
            "id": self.id,
            "operation": self.operation,
            "inputs": self.inputs,
            "result": self.result,
            "tool_version": self.tool_version,
        }
        if self.elapsed is not None:
            data["elapsed"] = self.elapsed
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Report":
        """Create Report from dictionary.

        Raises:
            ValueError: If required fields are missing or have invalid types.
        """
        required = ("id", "operation", "inputs", "result")
        missing = [f for f in required if f not in data]
        if missing:
            raise ValueError(f"Missing required fields: {missing}")

        for field_name in ("id", "operation"):
            value = data[field_name]
            if not isinstance(value, str):
                raise ValueError(f"Field '{field_name}' must be a string, got {type(value).__name__}")
        for field_name in ("inputs", "result"):
            value = data[field_name]
            if not isinstance(value, dict):
                raise ValueError(f"Field '{field_name}' must be a dict, got {type(value).__name__}")

        elapsed = data.get("elapsed")
        return cls(
            id=data["id"],
            operation=data["operation"],
            inputs=data["inputs"],
            result=data["result"],
            tool_version=data.get("tool_version") or tool_version(),
            elapsed=None if elapsed is None else float(elapsed),
        )

    @classmethod
    def create(
        cls,
        operation: str,
        inputs: dict[str, Any],
        result: dict[str, Any] | None = None,
        index: int = 0,
        elapsed: float | None = None,
    ) -> "Report":
        """Factory method deriving the id from the task and stamping the tool version."""
        return cls(
            id=report_id(operation, inputs, index),
            operation=operation,
            inputs=inputs,
            result=result or {},
            elapsed=None if elapsed is None else round(elapsed, 6),
        )
