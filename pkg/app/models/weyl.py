from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class WeylElement:
    """An element w of the Weyl group.

    `simple_matrix` is the integer matrix of w on the root lattice in the
    simple-root basis. `weight_action` acts on ambient vectors of 𝔞* and
    `cartan_action` on Cartan points in dual coordinates, so that
    (wλ)(wH) = λ(H).
    """

    simple_matrix: np.ndarray
    weight_action: np.ndarray
    cartan_action: np.ndarray
    sign: int
    word_length: int = 0

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.simple_matrix, np.eye(len(self.simple_matrix), dtype=int)))

    def act_weight(self, vector) -> np.ndarray:
        return self.weight_action @ np.asarray(vector)

    def act_cartan(self, point) -> np.ndarray:
        return self.cartan_action @ np.asarray(point, dtype=float)

    def act_coords(self, coords) -> np.ndarray:
        """Exact action on simple-root coordinates of a lattice vector."""
        return self.simple_matrix @ np.asarray(coords, dtype=np.int64)
