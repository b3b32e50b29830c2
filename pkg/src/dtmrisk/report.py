"""Result container shared by the closed-form and oracle paths."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError


@dataclass(frozen=True)
class RiskReport:
    """DTE, DTV, DTS and DTK (excess) for one distribution and window.

    ``dtm`` maps further orders n to their central moments in data units.
    """

    dte: float
    dtv: float
    dts: float | None
    dtk: float | None
    p: float
    q: float
    x_p: float
    x_q: float
    dtm: dict = field(default_factory=dict)
    warnings: tuple = ()

    def __post_init__(self):
        if self.dtv < 0.0:
            raise DomainError(f"negative dtv {self.dtv}")
        if 2 in self.dtm and abs(self.dtm[2] - self.dtv) > 1e-9 * max(abs(self.dtv), 1e-300):
            raise DomainError("dtm[2] must equal dtv")
