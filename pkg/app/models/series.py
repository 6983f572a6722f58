from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Optional, Tuple

import numpy as np

from app.config import get_settings
from app.exceptions import ParameterOutOfRange
from app.models.cone import ConePoint
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.spectral import SpectralParameter


@dataclass(frozen=True)
class TruncationPolicy:
    """How far the series is summed and where it may be evaluated."""

    max_height: int
    tail_tol: float
    wall_margin: float
    resonance_tol: float = 1e-8
    height_limit: Optional[int] = None
    precision_tol: float = 1e-8

    def __post_init__(self):
        for name in ("max_height", "tail_tol", "wall_margin", "resonance_tol", "precision_tol"):
            if getattr(self, name) <= 0:
                raise ParameterOutOfRange(
                    f"{name} must be positive", details={name: getattr(self, name)}
                )

    @classmethod
    def from_settings(cls, **overrides) -> "TruncationPolicy":
        settings = get_settings()
        values = {
            "max_height": settings.series_max_height,
            "tail_tol": settings.tail_tol,
            "wall_margin": settings.wall_margin,
            "resonance_tol": settings.resonance_tol,
            "height_limit": settings.series_height_limit,
            "precision_tol": settings.precision_tol,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_height(self, max_height: int) -> "TruncationPolicy":
        return TruncationPolicy(
            max_height=max_height,
            tail_tol=self.tail_tol,
            wall_margin=self.wall_margin,
            resonance_tol=self.resonance_tol,
            height_limit=self.height_limit,
            precision_tol=self.precision_tol,
        )


@dataclass(frozen=True, eq=False)
class SeriesCoefficients:
    """Truncated Harish-Chandra series Σ a_μ e^{(λ+ρ(k)+μ)} for one λ.

    `points` holds the cone points as rows of simple-root coefficients in
    height order, `coeffs` the matching a_μ with a_0 = 1.
    """

    system: RootSystem
    k: MultiplicityFunction
    spectral: SpectralParameter
    points: np.ndarray
    heights: np.ndarray
    coeffs: np.ndarray
    max_height: int

    def coefficient(self, coords: Tuple[int, ...]) -> complex:
        return complex(self.coeffs[self.position[tuple(int(c) for c in coords)]])

    @cached_property
    def position(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(c) for c in row): i for i, row in enumerate(self.points)}

    def as_mapping(self) -> Dict[ConePoint, complex]:
        return {
            ConePoint(tuple(int(c) for c in row)): complex(a)
            for row, a in zip(self.points, self.coeffs)
        }

    def with_coeffs(self, coeffs: np.ndarray) -> "SeriesCoefficients":
        return SeriesCoefficients(
            system=self.system,
            k=self.k,
            spectral=self.spectral,
            points=self.points,
            heights=self.heights,
            coeffs=np.asarray(coeffs, dtype=complex),
            max_height=self.max_height,
        )
