"""Frame certificates: a pair of constants plus where they came from."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArgumentError
from .surd import is_exact

__all__ = ["FrameCertificate", "EXACT", "ESTIMATE"]

EXACT = "exact"
ESTIMATE = "estimate"


@dataclass(frozen=True)
class FrameCertificate:
    """Lower and upper frame constants ``(k, K)``.

    ``kind`` is ``"exact"`` when the constants follow from a construction
    applied to exact inputs and ``"estimate"`` when they were measured
    numerically.  ``assumptions`` lists hypotheses that were recorded rather
    than checked.  ``exact_frame`` is set when the construction also shows
    the sampling operator is onto.
    """

    lower: object
    upper: object
    kind: str = EXACT
    method: str = ""
    tolerance: float = 0.0
    assumptions: tuple = field(default_factory=tuple)
    exact_frame: bool | None = None
    radius: float | None = None
    degenerate: bool = False

    def __post_init__(self):
        if self.kind not in (EXACT, ESTIMATE):
            raise ArgumentError(f"unknown certificate kind {self.kind!r}")
        if self.lower < 0 or self.upper < self.lower:
            raise ArgumentError(f"invalid frame constants ({self.lower}, {self.upper})")
        object.__setattr__(self, "assumptions", tuple(self.assumptions))

    @property
    def tight(self) -> bool:
        return self.lower == self.upper

    def as_floats(self) -> tuple[float, float]:
        return float(self.lower), float(self.upper)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        lo, hi = self.as_floats()
        return lo - slack <= value <= hi + slack

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if is_exact(x) else float(x)

        return {
            "lower": enc(self.lower),
            "upper": enc(self.upper),
            "kind": self.kind,
            "method": self.method,
            "tolerance": self.tolerance,
            "assumptions": list(self.assumptions),
            "exact_frame": self.exact_frame,
            "radius": self.radius,
            "degenerate": self.degenerate,
        }
