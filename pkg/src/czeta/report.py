"""Shared result containers emitted by the counting engines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CountReport:
    """Outcome of a counting run: exact/estimated value vs main-term model."""

    params: dict
    value: float
    prediction: float
    error_estimate: float
    diagnostics: dict = field(default_factory=dict)
    timing: float = 0.0
    unreliable: bool = False

    @property
    def ratio(self) -> float:
        return self.value / self.prediction if self.prediction else float("nan")

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "value": self.value,
            "prediction": self.prediction,
            "ratio": self.ratio,
            "error_estimate": self.error_estimate,
            "diagnostics": self.diagnostics,
            "timing": self.timing,
            "unreliable": self.unreliable,
        }
