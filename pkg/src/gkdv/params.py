"""Physical parameters shared by the series solver and the exact soliton."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_U = 0.5


@dataclass(frozen=True)
class GkdvParams:
    """Wave speed ``u`` and Coriolis constant ``w``.

    ``k = sqrt(1.5 (u + w))`` is the soliton wavenumber, derived on construction.
    """

    u: float = DEFAULT_U
    w: float = 0.0
    k: float = field(init=False, repr=False)

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.w)):
            raise ValueError("u and w must be finite")
        if self.u <= 0:
            raise ValueError(f"wave speed u must be positive, got {self.u}")
        if self.w < 0:
            raise ValueError(f"Coriolis constant w must be non-negative, got {self.w}")
        object.__setattr__(self, "k", math.sqrt(1.5 * (self.u + self.w)))

    @property
    def amplitude(self) -> float:
        return 2.0 * (self.u + self.w)
