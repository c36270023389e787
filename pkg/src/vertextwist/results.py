"""Check outcomes in a uniform, JSON-serializable shape."""

from __future__ import annotations

from dataclasses import dataclass, field

from .series import format_monomial


@dataclass
class CheckResult:
    identity: str
    ok: bool
    inputs: dict = field(default_factory=dict)
    window: dict = field(default_factory=dict)
    first_mismatch: dict = None
    time_ms: float = None

    @staticmethod
    def from_mismatch(identity, inputs, vars, window, mismatch) -> "CheckResult":
        if mismatch is None:
            return CheckResult(identity, True, inputs, window)
        m, lhs, rhs = mismatch
        return CheckResult(identity, False, inputs, window, {
            "monomial": format_monomial(m, vars),
            "lhs": repr(lhs),
            "rhs": repr(rhs),
        })

    def to_json(self):
        doc = {"identity": self.identity, "inputs": self.inputs,
               "window": self.window,
               "status": "pass" if self.ok else "fail"}
        if self.first_mismatch is not None:
            doc["first_mismatch"] = self.first_mismatch
        if self.time_ms is not None:
            doc["timing_ms"] = round(self.time_ms, 3)
        return doc


def window_json(vars, box):
    return {v: [str(lo), str(hi), cap] for v, lo, hi, cap in
            zip(vars, box.lows, box.highs, box.logcaps)}
