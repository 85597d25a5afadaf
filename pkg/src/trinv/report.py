"""Verification reports, run configuration and deterministic seed derivation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

from .fields import FieldSpec

SCHEMA_VERSION = 1

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 3}


def derive_seed(master: int, task_id: str) -> int:
    """64-bit seed for a subtask: first 8 bytes (little endian) of sha256("master:task")."""
    digest = hashlib.sha256(f"{master}:{task_id}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def combine_status(statuses) -> str:
    statuses = list(statuses)
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


@dataclass
class VerificationReport:
    check: str
    status: str
    field: str
    parameters: dict = field(default_factory=dict)
    items: list = field(default_factory=list)
    seeds: list = field(default_factory=list)
    reproducer: dict | None = None
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def failing_items(self) -> list:
        return [it for it in self.items if it.get("status", PASS) != PASS]

    def to_dict(self, include_timing: bool = True) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "check": self.check,
            "status": self.status,
            "field": self.field,
            "parameters": self.parameters,
            "items": self.items,
            "seeds": self.seeds,
        }
        if self.reproducer is not None:
            out["reproducer"] = self.reproducer
        if include_timing and self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(_jsonable(self.to_dict(include_timing)), indent=2, sort_keys=True) + "\n"

    def summary(self) -> str:
        bad = self.failing_items()
        tail = f" ({len(bad)} of {len(self.items)} items not passing)" if bad else ""
        return f"{self.check}: {self.status} [{self.field}]{tail}"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, bool)) or x is None:
        return x
    if isinstance(x, int):
        return int(x)
    if isinstance(x, float):
        return x
    try:
        return int(x)  # numpy integers
    except (TypeError, ValueError):
        return str(x)


def make_report(check: str, spec: FieldSpec, items: list, *, parameters=None, seeds=(), status=None) -> VerificationReport:
    """Assemble a report; overall status is derived from the items unless given."""
    status = status or combine_status(it.get("status", PASS) for it in items)
    rep = VerificationReport(
        check=check,
        status=status,
        field=spec.describe(),
        parameters=dict(parameters or {}),
        items=items,
        seeds=list(seeds),
    )
    if status == FAIL:
        first = rep.failing_items()[0] if rep.failing_items() else {}
        rep.reproducer = {
            "item": first.get("id"),
            "seed": first.get("seed", seeds[0] if seeds else None),
        }
    return rep


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run; identical configs give identical reports."""

    spec: FieldSpec
    seed: int = 20240601
    trials: int | None = None
    bound: int | None = None
    params: tuple[int, ...] | None = None
    out: str | None = None

    def describe(self) -> dict:
        return {
            "field": self.spec.describe(),
            "seed": self.seed,
            "trials": self.trials,
            "bound": self.bound,
            "params": list(self.params) if self.params else None,
        }
