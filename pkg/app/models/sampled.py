from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from app.models.multiplicity import MultiplicityFunction


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values on a tensor grid.

    For functions on 𝔞 the axes are B-orthonormal coordinates; for spectra
    they are the real coordinates ξ of λ = iEξ. `values` has one axis per
    grid axis.
    """

    axes: Tuple[np.ndarray, ...]
    values: np.ndarray
    support_radius: Optional[float] = None

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def points(self) -> np.ndarray:
        """Grid nodes as an (n_points, dimension) array in C order."""
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def flat_values(self) -> np.ndarray:
        return np.asarray(self.values).ravel()

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(
            axes=self.axes,
            values=np.asarray(values).reshape(self.shape),
            support_radius=self.support_radius,
        )


class WeightKind(str, Enum):
    GROUP = "group"
    """δ_{G/K} = Π|2 sinh α|^{m_α}"""

    MULTIPLICITY = "multiplicity"
    """δ(Σ′,k) = Π|2 sinh(α/2)|^{2k_α}"""


@dataclass(frozen=True, eq=False)
class WeightSpec:
    """Density of a radial integral.

    With `normalized` the 2 sinh factors are replaced by sinh(α)/‖α‖ and
    sinh(α/2)/‖α/2‖, which tend to the Euclidean Jacobian near the origin.
    """

    kind: WeightKind
    multiplicity: MultiplicityFunction
    normalized: bool = False

    @property
    def locally_integrable(self) -> bool:
        """Near a wall the density behaves like |α|^{exponent}; integrable iff > -1."""
        values = self.multiplicity.values
        if self.kind == WeightKind.GROUP:
            return all(float(np.real(complex(v))) > -1 for _, v in values)
        return all(2 * float(np.real(complex(v))) > -1 for _, v in values)
