from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Tuple

import numpy as np

from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.utils.exact import Vector, format_rational, scale


@dataclass(frozen=True)
class CoshTerm:
    root: Vector
    half_exponent: Any
    """Exponent of cosh(α/2)."""

    full_exponent: Any
    """Exponent of cosh(α)."""


@dataclass(frozen=True)
class CoshFactor:
    """Π_α cosh(α/2)^{a_α} cosh(α)^{b_α} over the indivisible positive roots."""

    terms: Tuple[CoshTerm, ...]

    @classmethod
    def from_pair(
        cls, system: RootSystem, m: MultiplicityFunction, k_pi: MultiplicityFunction
    ) -> "CoshFactor":
        """Exponents −k^π_α on cosh(α/2) and k^π_{4α} − m_{2α}/2 on cosh(α), α ∈ Σ⁺∖2Σ⁺."""
        terms = []
        for root in system.indivisible_positive:
            half = -k_pi.at(root)
            full = k_pi.at(scale(4, root)) - Fraction(1, 2) * m.at(scale(2, root))
            terms.append(CoshTerm(root=root, half_exponent=half, full_exponent=full))
        return cls(terms=tuple(terms))

    def evaluate(self, point) -> float:
        h = np.asarray(point, dtype=float)
        value = 1.0
        for term in self.terms:
            t = float(np.dot(np.array(term.root, dtype=float), h))
            if term.half_exponent != 0:
                value *= np.cosh(t / 2.0) ** float(term.half_exponent)
            if term.full_exponent != 0:
                value *= np.cosh(t) ** float(term.full_exponent)
        return float(value)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.ones(points.shape[0])
        for term in self.terms:
            t = points @ np.array(term.root, dtype=float)
            if term.half_exponent != 0:
                values *= np.cosh(t / 2.0) ** float(term.half_exponent)
            if term.full_exponent != 0:
                values *= np.cosh(t) ** float(term.full_exponent)
        return values

    @property
    def is_trivial(self) -> bool:
        return all(t.half_exponent == 0 and t.full_exponent == 0 for t in self.terms)

    def describe(self) -> str:
        parts = []
        for term in self.terms:
            root = ",".join(format_rational(x) for x in term.root)
            if term.half_exponent != 0:
                parts.append(f"cosh(({root})/2)^({format_rational(term.half_exponent)})")
            if term.full_exponent != 0:
                parts.append(f"cosh({root})^({format_rational(term.full_exponent)})")
        return " * ".join(parts) if parts else "1"
