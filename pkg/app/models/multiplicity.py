from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Any, Callable, Dict, Iterator, Mapping, Tuple, Union

import sympy

from app.exceptions import ParameterOutOfRange
from app.models.root_system import RootSystem
from app.utils.exact import format_rational, is_exact, scale, try_fraction


@dataclass(frozen=True, eq=False)
class MultiplicityFunction:
    """A W-invariant function on a root system, stored once per orbit.

    Values may be exact (int/Fraction), sympy algebraic numbers, floats or
    complex. Vectors outside the system read as 0, matching the convention
    k_{α/2} = 0 when α/2 is not a root.
    """

    system: RootSystem
    values: Tuple[Tuple[str, Any], ...]

    @classmethod
    def build(
        cls,
        system: RootSystem,
        values: Union[Number, Mapping[str, Any], Tuple, list],
    ) -> "MultiplicityFunction":
        """
        Build a multiplicity function from a scalar, an orbit mapping or a list.

        Args:
            system: The root system the function lives on
            values: A scalar (applied to every orbit), a mapping keyed by
                orbit label, or a sequence in orbit-label order

        Returns:
            MultiplicityFunction: The validated function

        Raises:
            ParameterOutOfRange: If labels are unknown, missing, or the
                sequence has the wrong length
        """
        labels = system.orbit_labels
        if isinstance(values, Mapping):
            unknown = sorted(set(values) - set(labels))
            if unknown:
                raise ParameterOutOfRange(
                    f"Unknown orbit labels {unknown} for {system.name}",
                    details={"labels": list(labels), "unknown": unknown},
                )
            missing = [lab for lab in labels if lab not in values]
            if missing:
                raise ParameterOutOfRange(
                    f"Missing orbit labels {missing} for {system.name}",
                    details={"labels": list(labels), "missing": missing},
                )
            pairs = tuple((lab, _normalize(values[lab])) for lab in labels)
        elif isinstance(values, (list, tuple)):
            if len(values) == 1:
                values = list(values) * len(labels)
            if len(values) != len(labels):
                raise ParameterOutOfRange(
                    f"{system.name} has {len(labels)} orbits, got {len(values)} values",
                    details={"labels": list(labels), "count": len(values)},
                )
            pairs = tuple((lab, _normalize(v)) for lab, v in zip(labels, values))
        else:
            pairs = tuple((lab, _normalize(values)) for lab in labels)
        return cls(system=system, values=pairs)

    @classmethod
    def zero(cls, system: RootSystem) -> "MultiplicityFunction":
        return cls.build(system, 0)

    def __getitem__(self, label: str):
        for lab, value in self.values:
            if lab == label:
                return value
        raise KeyError(label)

    def __iter__(self) -> Iterator[Tuple[str, Any]]:
        return iter(self.values)

    def at(self, vector):
        """Value at a root; 0 when the vector is not a root of the system."""
        label = self.system.label(vector)
        if label is None:
            return 0
        return self[label]

    def at_half(self, vector):
        """k_{α/2}, the value at half of the given root."""
        return self.at(scale(Fraction(1, 2), vector))

    def as_dict(self) -> Dict[str, Any]:
        return dict(self.values)

    def map(self, fn: Callable[[Any], Any]) -> "MultiplicityFunction":
        return MultiplicityFunction(
            system=self.system, values=tuple((lab, fn(v)) for lab, v in self.values)
        )

    def shifted(self, epsilon) -> "MultiplicityFunction":
        return self.map(lambda v: v + epsilon)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(v) for _, v in self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.values)

    def is_nonnegative(self) -> bool:
        return all(_real(v) >= 0 for _, v in self.values)

    def negative_orbits(self) -> list:
        return [lab for lab, v in self.values if _real(v) < 0]

    @property
    def signature(self) -> str:
        return ",".join(f"{lab}={format_rational(v)}" for lab, v in self.values)

    def serialize(self) -> Dict[str, str]:
        return {lab: format_rational(v) for lab, v in self.values}

    def __repr__(self) -> str:
        return f"MultiplicityFunction({self.system.name}, {self.signature})"


def _normalize(value):
    if isinstance(value, sympy.Basic):
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        return value
    if isinstance(value, str):
        return try_fraction(value)
    return value


def _real(value) -> float:
    if isinstance(value, complex):
        return value.real
    return float(value)
