"""Tiny result type shared by all exact-identity checkers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """One verified identity: a name and both exactly-computed sides."""

    name: str
    lhs: Any
    rhs: Any

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.ok else "fail",
            "lhs": _plain(self.lhs),
            "rhs": _plain(self.rhs),
        }


def _plain(v: Any):
    if isinstance(v, (int, str, bool)):
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return repr(v)
