"""Check records and their text / structured serializations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any


@dataclass
class CheckResult:
    check: str
    status: str  # "pass" | "fail" | "precision" | "error" | "info" | "skip"
    seed: int | None = None
    field: str | None = None
    floor: Any = None
    witness: Any = None
    millis: float | None = None
    details: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def failed(self) -> bool:
        """Exploratory ("info") and untestable ("skip") records never fail a run."""
        return self.status not in ("pass", "info", "skip")

    def record(self, timing: bool = True) -> dict:
        rec = {
            "check": self.check,
            "status": self.status,
            "seed": self.seed,
            "field": self.field,
            "floor": _plain(self.floor),
            "witness": _plain(self.witness),
        }
        if timing:
            rec["millis"] = None if self.millis is None else round(self.millis, 1)
        if self.details:
            rec["details"] = _plain(self.details)
        return rec

    def text(self, timing: bool = True) -> str:
        parts = [f"[{self.status.upper():4}] {self.check}"]
        parts.append(f"seed={self.seed} field={self.field} floor={_plain(self.floor)}")
        if self.details:
            parts.append(" ".join(f"{k}={_plain(v)}" for k, v in self.details.items()))
        if self.witness is not None:
            parts.append(f"witness={_plain(self.witness)}")
        if timing and self.millis is not None:
            parts.append(f"({self.millis:.0f} ms)")
        return "  ".join(parts)


def _plain(obj):
    """Make a value JSON-friendly without losing exactness."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        if obj == float("-inf"):
            return "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return str(obj)


def dumps(results: list[CheckResult], fmt: str = "text", timing: bool = True) -> str:
    if fmt == "text":
        return "\n".join(r.text(timing) for r in results)
    return "\n".join(json.dumps(r.record(timing), sort_keys=True) for r in results)
