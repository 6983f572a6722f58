from dataclasses import dataclass
from typing import Tuple

from app.models.root_system import RootSystem
from app.utils.exact import Vector


@dataclass(frozen=True, order=True)
class ConePoint:
    """μ ∈ ℕΣ⁺, given by its nonnegative coefficients over the simple roots."""

    coords: Tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coords)

    def vector(self, system: RootSystem) -> Vector:
        total = [0] * system.ambient_dim
        for c, root in zip(self.coords, system.simple_roots):
            if c:
                total = [t + c * x for t, x in zip(total, root)]
        return tuple(total)
