import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.utils.exact import (
    Matrix,
    Vector,
    bilinear,
    format_vector,
    inverse,
    mat_mul,
    mat_vec,
    scale,
    transpose,
)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A crystallographic, possibly non-reduced root system in exact coordinates.

    Roots live in an ambient rational space with inner product `gram`. Points
    of the Cartan space are stored in dual coordinates, so α(H) is the plain
    dot product α·H and the Laplacian reads Σ G_ij ∂_i ∂_j.
    """

    family: str
    rank: int
    gram: Matrix
    roots: Tuple[Vector, ...]
    positive_roots: Tuple[Vector, ...]
    simple_roots: Tuple[Vector, ...]
    orbit_labels: Tuple[str, ...]
    root_labels: Tuple[str, ...]
    chamber: Optional[Vector] = None
    memo: Dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def ambient_dim(self) -> int:
        return len(self.gram)

    @property
    def name(self) -> str:
        if self.family == "custom":
            return "custom"
        return f"{self.family}{self.rank}"

    @cached_property
    def index(self) -> Dict[Vector, int]:
        return {root: i for i, root in enumerate(self.roots)}

    @cached_property
    def label_of(self) -> Dict[Vector, str]:
        return dict(zip(self.roots, self.root_labels))

    def contains(self, vector) -> bool:
        return tuple(vector) in self.index

    def label(self, vector) -> Optional[str]:
        """Orbit label of a root, or None for vectors outside the system."""
        return self.label_of.get(tuple(vector))

    def orbit(self, label: str) -> List[Vector]:
        return [r for r, lab in zip(self.roots, self.root_labels) if lab == label]

    def positive_in_orbit(self, label: str) -> List[Vector]:
        return [r for r in self.positive_roots if self.label_of[r] == label]

    @cached_property
    def is_reduced(self) -> bool:
        return not any(self.contains(scale(2, r)) for r in self.positive_roots)

    @cached_property
    def indivisible_positive(self) -> Tuple[Vector, ...]:
        """Positive roots α with α/2 not a root."""
        return tuple(
            r for r in self.positive_roots if not self.contains(scale(Fraction(1, 2), r))
        )

    def pair(self, u, v):
        """The inner product (u, v) = uᵀGv, exact on exact input."""
        return bilinear(u, self.gram, v)

    def norm2(self, root) -> Fraction:
        return self.pair(root, root)

    def coroot(self, root) -> Vector:
        return scale(Fraction(2) / self.norm2(root), root)

    def coroot_pairing(self, beta, alpha) -> Fraction:
        """⟨β, α^∨⟩ = 2(β, α)/(α, α)."""
        return 2 * self.pair(beta, alpha) / self.norm2(alpha)

    def reflect(self, alpha, beta) -> Vector:
        c = self.coroot_pairing(beta, alpha)
        return tuple(b - c * a for a, b in zip(alpha, beta))

    @cached_property
    def simple_matrix(self) -> Matrix:
        """S: columns are the simple roots (ambient_dim × rank)."""
        return transpose(self.simple_roots)

    @cached_property
    def projection(self) -> Matrix:
        """P = (SᵀGS)⁻¹SᵀG; P·v gives simple-root coordinates of v in the root span."""
        s = self.simple_matrix
        st = transpose(s)
        st_g = mat_mul(st, self.gram)
        return mat_mul(inverse(mat_mul(st_g, s)), st_g)

    def simple_coords(self, vector) -> Tuple[Fraction, ...]:
        return mat_vec(self.projection, vector)

    @cached_property
    def positive_coords(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(
            tuple(int(c) for c in self.simple_coords(r)) for r in self.positive_roots
        )

    @cached_property
    def cartan_matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """C[i][j] = ⟨α_j, α_i^∨⟩."""
        return tuple(
            tuple(self.coroot_pairing(aj, ai) for aj in self.simple_roots)
            for ai in self.simple_roots
        )

    @cached_property
    def rho_one(self) -> Vector:
        """Half the sum of the positive roots (every multiplicity 1)."""
        total = [Fraction(0)] * self.ambient_dim
        for root in self.positive_roots:
            total = [t + x for t, x in zip(total, root)]
        return tuple(t / 2 for t in total)

    # Float views used by the numerical modules.

    @cached_property
    def gram_array(self) -> np.ndarray:
        return np.array(self.gram, dtype=float)

    @cached_property
    def gram_inverse_array(self) -> np.ndarray:
        return np.linalg.inv(self.gram_array)

    @cached_property
    def positive_array(self) -> np.ndarray:
        return np.array(self.positive_roots, dtype=float).reshape(-1, self.ambient_dim)

    @cached_property
    def simple_array(self) -> np.ndarray:
        return np.array(self.simple_roots, dtype=float).reshape(-1, self.ambient_dim)

    @cached_property
    def positive_norm2_array(self) -> np.ndarray:
        return np.array([float(self.norm2(r)) for r in self.positive_roots])

    @cached_property
    def orthonormal_basis(self) -> np.ndarray:
        """L with G = LLᵀ; the columns L e_i are orthonormal directions in 𝔞."""
        return np.linalg.cholesky(self.gram_array)

    @cached_property
    def span_frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        (U, V) with orthonormal columns spanning the coroots in 𝔞 and the roots in 𝔞*.

        H = Ux and λ = Vξ give λ(H) = ξ·x; dx and dξ are the Lebesgue measures
        of the two rank-dimensional spaces.
        """
        s = self.simple_array.T
        r_inv_t = np.linalg.inv(np.linalg.cholesky(s.T @ self.gram_array @ s)).T
        return self.gram_array @ s @ r_inv_t, s @ r_inv_t

    @cached_property
    def signature(self) -> str:
        """Stable digest used in cache keys."""
        payload = "|".join(
            [
                self.family,
                str(self.rank),
                ";".join(",".join(format_vector(row)) for row in self.gram),
                ";".join(",".join(format_vector(r)) for r in self.positive_roots),
            ]
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]

    def __repr__(self) -> str:
        return (
            f"RootSystem({self.name}, roots={len(self.roots)}, "
            f"orbits={list(self.orbit_labels)})"
        )
