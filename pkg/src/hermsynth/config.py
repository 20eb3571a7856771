from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .errors import BoundsError
from .linalg import TOL_HERM, TOL_NORM
from .sympoly import DEFAULT_GRID, DEFAULT_MARGIN

STAGES = ("power", "dilation", "chebyshev", "complement", "gqsp", "e2e")


@dataclass(frozen=True)
class RunConfig:
    tol_herm: float = TOL_HERM
    tol_norm: float = TOL_NORM
    complement_tol: float = 1e-8
    grid_points: int = DEFAULT_GRID
    margin: float = DEFAULT_MARGIN
    seed: int = 0
    output_path: Optional[str] = None
    stage_filter: Optional[str] = None

    def __post_init__(self):
        if self.grid_points < 64:
            raise BoundsError(f"grid_points must be >= 64, got {self.grid_points}")
        if not 0 < self.margin <= 0.1:
            raise BoundsError(f"margin must lie in (0, 0.1], got {self.margin}")
        if self.seed < 0:
            raise BoundsError(f"seed must be unsigned, got {self.seed}")
        if self.stage_filter is not None and self.stage_filter not in STAGES:
            raise BoundsError(f"unknown stage {self.stage_filter!r}; choose from {', '.join(STAGES)}")

    def to_dict(self) -> dict:
        return asdict(self)
