"""Per-condition verification reports shared by every verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable


class StructureError(ValueError):
    """Raised when input does not describe a valid structure."""


class ResourceError(RuntimeError):
    """Raised when an enumeration would exceed its configured bound."""


class InvariantViolation(AssertionError):
    """Two internal computations that must agree did not."""


def jsonable(value: Any) -> Any:
    if isinstance(value, (tuple, list)):
        return [jsonable(v) for v in value]
    if isinstance(value, (frozenset, set)):
        return sorted((jsonable(v) for v in value), key=repr)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if hasattr(value, "item") and callable(value.item):
        return value.item()
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


@dataclass
class Condition:
    condition_id: str
    passed: bool | None  # None: not applicable
    witness: Any = None

    def to_json(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "passed": self.passed,
            "witness": jsonable(self.witness),
        }


@dataclass
class CheckReport:
    name: str
    conditions: list[Condition] = field(default_factory=list)
    data: dict[str, Any] = field(default_factory=dict)

    def add(self, condition_id: str, passed: bool | None, witness: Any = None) -> Condition:
        cond = Condition(condition_id, passed, None if passed else witness)
        self.conditions.append(cond)
        return cond

    def skip(self, condition_id: str) -> Condition:
        return self.add(condition_id, None)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.conditions)

    def __bool__(self) -> bool:
        return self.passed

    def __getitem__(self, condition_id: str) -> Condition:
        for c in self.conditions:
            if c.condition_id == condition_id:
                return c
        raise KeyError(condition_id)

    def failures(self) -> list[Condition]:
        return [c for c in self.conditions if c.passed is False]

    def merge(self, other: "CheckReport", prefix: str | None = None) -> None:
        p = f"{prefix or other.name}."
        for c in other.conditions:
            self.conditions.append(Condition(p + c.condition_id, c.passed, c.witness))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "conditions": [c.to_json() for c in self.conditions],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def summary(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.conditions:
            mark = {True: "ok", False: "FAIL", None: "n/a"}[c.passed]
            line = f"  [{mark}] {c.condition_id}"
            if c.passed is False and c.witness is not None:
                line += f"  witness={jsonable(c.witness)}"
            lines.append(line)
        return "\n".join(lines)


def first(items: Iterable[Any]) -> Any:
    for item in items:
        return item
    return None
