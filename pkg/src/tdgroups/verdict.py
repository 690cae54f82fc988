"""Three-valued verdicts with per-condition traces, shared by classify and oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

TRUE, FALSE, UNDECIDED = "true", "false", "undecided"


def _jsonable(v):
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(t) for t in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(t) for k, t in v.items()}
    return v if isinstance(v, str) else str(v)


@dataclass
class Verdict:
    value: str
    conditions: dict[str, bool] = field(default_factory=dict)
    witness: str | None = None
    details: dict = field(default_factory=dict)

    @classmethod
    def from_conditions(cls, conditions: dict[str, bool], **kw) -> "Verdict":
        return cls(TRUE if all(conditions.values()) else FALSE, dict(conditions), **kw)

    @classmethod
    def undecided(cls, reason: str, **kw) -> "Verdict":
        return cls(UNDECIDED, witness=reason, **kw)

    def __bool__(self) -> bool:
        if self.value == UNDECIDED:
            raise ValueError("undecided verdict has no truth value")
        return self.value == TRUE

    @property
    def decided(self) -> bool:
        return self.value != UNDECIDED

    def to_json(self) -> dict:
        out = {"value": self.value, "conditions": dict(self.conditions), "witness": self.witness}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out
