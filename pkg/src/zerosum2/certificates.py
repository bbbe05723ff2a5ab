"""Run certificates: the one JSON document every command emits.

Fixed top-level schema {tool, schema, version, command, params, verdict,
evidence, timing}; serialization is canonical (sorted keys, two-space
indent, trailing newline) so that parse -> re-serialize is byte-identical
and certificates diff cleanly across runs and machines.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from . import __version__

SCHEMA_VERSION = 1


class Timing(BaseModel):
    model_config = ConfigDict(extra="forbid")

    started_at: str
    finished_at: str
    wall_seconds: float


class Certificate(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tool: str = "zerosum2"
    schema_: int = Field(default=SCHEMA_VERSION, alias="schema")
    version: str = __version__
    command: str
    params: dict[str, Any]
    verdict: str
    evidence: dict[str, Any]
    timing: Timing

    def to_json(self) -> str:
        data = self.model_dump(by_alias=True)
        return json.dumps(data, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        return cls.model_validate(json.loads(text))


class StopWatch:
    """Collects the timing block for a certificate."""

    def __init__(self) -> None:
        import time

        self._clock = time.monotonic
        self._t0 = self._clock()
        self.started_at = _now()

    def timing(self) -> Timing:
        return Timing(
            started_at=self.started_at,
            finished_at=_now(),
            wall_seconds=round(self._clock() - self._t0, 6),
        )


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def exit_code_for(verdict: str) -> int:
    """Exit codes depend on the verdict alone."""
    if verdict in ("verified", "no-violations", "computed", "ok"):
        return 0
    if verdict in ("counterexample", "violations"):
        return 2
    return 1


def make_certificate(
    command: str,
    params: dict[str, Any],
    verdict: str,
    evidence: dict[str, Any],
    watch: Optional[StopWatch] = None,
) -> Certificate:
    watch = watch or StopWatch()
    return Certificate(
        command=command,
        params=params,
        verdict=verdict,
        evidence=evidence,
        timing=watch.timing(),
    )
