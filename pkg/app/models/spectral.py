from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from app.models.root_system import RootSystem


@dataclass(frozen=True)
class SpectralParameter:
    """λ ∈ 𝔞*_ℂ in ambient coordinates (the space the roots live in)."""

    coords: Tuple[complex, ...]

    @classmethod
    def from_array(cls, values) -> "SpectralParameter":
        return cls(coords=tuple(complex(v) for v in np.asarray(values).ravel()))

    @classmethod
    def from_coroot_values(
        cls, system: RootSystem, values: Sequence[complex]
    ) -> "SpectralParameter":
        """λ in the root span with λ(α_i^∨) = values[i] on the simple roots."""
        values = np.asarray(values, dtype=complex)
        if values.shape != (system.rank,):
            raise ValueError(
                f"expected {system.rank} coroot values, got {values.shape[0]}"
            )
        # λ = Σ x_j α_j, so λ(α_i^∨) = Σ_j C[i][j] x_j
        x = np.linalg.solve(np.array(system.cartan_matrix, dtype=float), values)
        return cls.from_array(system.simple_array.T @ x)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def coroot_value(self, system: RootSystem, root) -> complex:
        r = np.array(root, dtype=float)
        return complex(2.0 * (self.array @ system.gram_array @ r) / float(system.norm2(root)))

    def coroot_values(self, system: RootSystem) -> np.ndarray:
        return np.array([self.coroot_value(system, a) for a in system.simple_roots])

    def __neg__(self) -> "SpectralParameter":
        return SpectralParameter(coords=tuple(-z for z in self.coords))

    def norm2(self, system: RootSystem) -> float:
        """Hermitian size |λ|² = Re(λ̄ᵀGλ)."""
        a = self.array
        return float(np.real(np.conj(a) @ system.gram_array @ a))

    @property
    def signature(self) -> str:
        return ",".join(f"{z.real!r}:{z.imag!r}" for z in self.coords)
