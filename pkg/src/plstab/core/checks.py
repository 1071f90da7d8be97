"""A uniform record for evaluated inequalities."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundCheck:
    """One evaluated inequality ``lhs <= rhs`` (or ``>=`` when ``sense`` says so).

    ``slack`` is positive when the inequality holds with room to spare.
    ``strict`` marks inequalities stated with ``<``; they fail on equality.
    """

    name: str
    lhs: float
    rhs: float
    sense: str = "<="
    strict: bool = False
    tol: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs if self.sense == "<=" else self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        if self.strict:
            return self.slack > -self.tol
        return self.slack >= -self.tol

    def describe(self) -> str:
        ps = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.params.items())
        status = "PASS" if self.holds else "FAIL"
        return f"{status} {self.name} {ps} lhs={self.lhs:.6g} rhs={self.rhs:.6g} slack={self.slack:.3e}"
