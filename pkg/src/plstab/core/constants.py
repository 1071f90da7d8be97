"""Absolute constants of the stability bounds.

None of them is known numerically, so each defaults to 1 and every bound
check reports both sides instead of asserting a fixed constant.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from ..errors import ValidationError


@dataclass(frozen=True)
class Constants:
    c0_1d: float = 1.0
    c_thm15: float = 1.0
    c_cor16: float = 1.0
    c_thm17: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and v > 0 and v < float("inf")):
                raise ValidationError(f"constant {f.name} must be positive and finite, got {v!r}")

    def replace(self, **overrides) -> "Constants":
        unknown = set(overrides) - {f.name for f in fields(self)}
        if unknown:
            raise ValidationError(f"unknown constants: {sorted(unknown)}")
        return Constants(**{**self.__dict__, **overrides})
