"""Machine-readable verdicts for the verified identities and inequalities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

HOLDS = "holds"
FAILS = "fails"
OUTSIDE = "outside-regime"

SCHEMA_VERSION = "calabi-workbench/report/1"


@dataclass
class InequalityReport:
    """One verified statement.

    ``lhs <= rhs + tol`` is the convention for every report; ``margin`` is
    ``rhs - lhs``.  Identities are reported as two one-sided checks folded
    into ``details``.
    """

    name: str
    lhs: float
    rhs: float
    verdict: str
    inputs: dict[str, Any] = field(default_factory=dict)
    tolerances: dict[str, float] = field(default_factory=dict)
    settings: dict[str, Any] = field(default_factory=dict)
    details: dict[str, Any] = field(default_factory=dict)
    field_digest: str | None = None

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "inputs": _clean(self.inputs),
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "margin": _num(self.margin),
            "verdict": self.verdict,
            "tolerances": _clean(self.tolerances),
            "settings": _clean(self.settings),
            "details": _clean(self.details),
            "field_digest": self.field_digest,
        }


def verdict_of(lhs: float, rhs: float, tol: float) -> str:
    return HOLDS if lhs <= rhs + tol else FAILS


def _num(v):
    v = float(v)
    if math.isnan(v) or math.isinf(v):
        return repr(v)
    return v


def _clean(obj):
    # JSON-safe copy with numpy scalars and tuples normalised
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    try:
        import numpy as np

        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.bool_):
            return bool(obj)
        if isinstance(obj, np.ndarray):
            return _clean(obj.tolist())
    except ImportError:  # pragma: no cover
        pass
    return _num(obj)
