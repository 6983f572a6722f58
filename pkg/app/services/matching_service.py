"""Exact solver for the matching and regularity equations.

Given (Σ, m, κ^π), every α ∈ Σ ∪ 2Σ must satisfy

    −m_α κ_α + ½ m_{α/2}(1 − ½m_{α/2} − m_α + 2κ_{α/2}) = k_α(1 − k_α − 2k_{2α})

and every indivisible α the regularity relation (m_α + m_{2α})/2 = k_α + k_{2α} + k_{4α}.
For each W-orbit of Σ∖2Σ the solutions come in two or three closed-form branches;
the solver takes every combination, assembles Σ^π and checks it.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from app.config import Settings, get_settings
from app.exceptions import ParameterOutOfRange
from app.models.ktype import MatchedCandidate
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.schemas.validation import ValidationReport, ValidationStep
from app.services.root_system_service import RootSystemService
from app.utils.exact import (
    Vector,
    exact_sqrt,
    format_rational,
    format_vector,
    primitive_direction,
    scale,
    to_fraction,
    values_equal,
)

logger = logging.getLogger(__name__)

_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Branch:
    """One closed-form solution on a single orbit: k at α, 2α and 4α."""

    tag: str
    values: Tuple[Tuple[int, object], ...]
    irrational: bool = False
    problem: Optional[str] = None


@dataclass(frozen=True)
class _RootClass:
    name: str
    roots: Tuple[Vector, ...]
    value: object


class MatchingService:
    """Solve and verify the equations tying (Σ, m, κ^π) to (Σ^π, k^π)."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        root_service: Optional[RootSystemService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)

    def representatives(self, system: RootSystem) -> List[Vector]:
        """First positive root of each W-orbit of Σ∖2Σ."""
        seen = set()
        result = []
        for root in system.indivisible_positive:
            label = system.label(root)
            if label not in seen:
                seen.add(label)
                result.append(root)
        return result

    def branches(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        alpha: Vector,
    ) -> List[Branch]:
        """
        Closed-form solutions on the orbit of the indivisible root α.

        With m_{2α} = 0:  k_α = (m_α−1 ± √D)/2, k_{2α} = (1 ∓ √D)/2,
        D = (m_α−1)² − 4m_ακ_α.
        With m_{2α} > 0:  k_α = 0, k_{2α} = (m_α+m_{2α}−1 ± √D)/2, k_{4α} = (1 ∓ √D)/2,
        D = (m_{2α}−1)² − 4m_{2α}κ_{2α}; and, when κ_{2α} = m_{2α}/4 − ½, also
        k_α = m_α+m_{2α}−1, k_{2α} = 1 − (m_α+m_{2α})/2, k_{4α} = 0.
        """
        label = system.label(alpha)
        m_a = _rational(m.at(alpha), "m")
        m_2a = _rational(m.at(scale(2, alpha)), "m")
        if m_2a == 0:
            kappa_a = _rational(kappa.at(alpha), "κ")
            disc = (m_a - 1) ** 2 - 4 * m_a * kappa_a
            if disc < 0:
                return [Branch("(1)", (), problem=_negative(label, disc))]
            root, rational = exact_sqrt(disc)
            shift = _lift(m_a - 1, rational)
            one = _lift(1, rational)
            signs = [("+", 1), ("-", -1)] if disc != 0 else [("", 1)]
            return [
                Branch(
                    f"(1){name}",
                    ((1, (shift + sign * root) / 2), (2, (one - sign * root) / 2)),
                    irrational=not rational,
                )
                for name, sign in signs
            ]

        kappa_2a = _rational(kappa.at(scale(2, alpha)), "κ")
        result = []
        disc = (m_2a - 1) ** 2 - 4 * m_2a * kappa_2a
        if disc >= 0:
            root, rational = exact_sqrt(disc)
            shift = _lift(m_a + m_2a - 1, rational)
            one = _lift(1, rational)
            signs = [("+", 1), ("-", -1)] if disc != 0 else [("", 1)]
            for name, sign in signs:
                result.append(
                    Branch(
                        f"(2){name}",
                        (
                            (1, Fraction(0)),
                            (2, (shift + sign * root) / 2),
                            (4, (one - sign * root) / 2),
                        ),
                        irrational=not rational,
                    )
                )
        if kappa_2a == m_2a / 4 - _HALF:
            total = m_a + m_2a
            result.append(
                Branch(
                    "(2)special",
                    ((1, total - 1), (2, 1 - total / 2), (4, Fraction(0))),
                )
            )
        if not result:
            return [Branch("(2)", (), problem=_negative(label, disc))]
        return result

    def solve_matching(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
    ) -> List[MatchedCandidate]:
        """
        Enumerate every branch combination and check the resulting (Σ^π, k^π).

        Σ^π is assembled from the roots carrying k^π ≠ 0. Classes with k^π = 0
        are added back when that is needed to close Σ^π into a root system, or
        when the extended set is also a valid answer.

        Returns:
            List[MatchedCandidate]: Valid and invalid candidates, in branch order
        """
        reps = self.representatives(system)
        options = [self.branches(system, m, kappa, alpha) for alpha in reps]
        candidates: List[MatchedCandidate] = []
        seen = set()
        for combination in product(*options):
            tags = {system.label(alpha): branch.tag for alpha, branch in zip(reps, combination)}
            irrational = any(b.irrational for b in combination)
            problems = [b.problem for b in combination if b.problem]
            if problems:
                candidates.append(
                    MatchedCandidate(
                        system_pi=None,
                        k_pi=None,
                        k_by_root=(),
                        branch_tags=tags,
                        valid=False,
                        failure_reason=problems[0],
                        irrational=irrational,
                    )
                )
                continue
            classes = self._classes(system, reps, combination)
            for candidate in self._assemble(system, m, kappa, classes, tags, irrational):
                key = frozenset((r, format_rational(v)) for r, v in candidate.k_by_root)
                if key in seen:
                    continue
                seen.add(key)
                candidates.append(candidate)
        valid = sum(1 for c in candidates if c.valid)
        logger.info(
            f"Matching on {system.name} (m = {m.signature}, κ = {kappa.signature}): "
            f"{valid} valid of {len(candidates)} candidates"
        )
        return candidates

    def _classes(
        self, system: RootSystem, reps: Sequence[Vector], combination: Sequence[Branch]
    ) -> List[_RootClass]:
        classes = []
        for alpha, branch in zip(reps, combination):
            label = system.label(alpha)
            orbit = system.orbit(label)
            for multiple, value in branch.values:
                name = label if multiple == 1 else f"{multiple}·{label}"
                classes.append(
                    _RootClass(
                        name=name,
                        roots=tuple(scale(multiple, r) for r in orbit),
                        value=_normalize(value),
                    )
                )
        return classes

    def _assemble(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        classes: List[_RootClass],
        tags: Dict[str, str],
        irrational: bool,
    ) -> List[MatchedCandidate]:
        carrying = [c for c in classes if c.value != 0]
        zero = [c for c in classes if c.value == 0]
        base = self._candidate(system, m, kappa, _k_map(carrying), tags, irrational)
        result = [base]
        for size in range(1, len(zero) + 1):
            for extra in combinations(zero, size):
                extended_tags = dict(tags)
                extended_tags["zero_extension"] = ",".join(c.name for c in extra)
                candidate = self._candidate(
                    system, m, kappa, _k_map(carrying + list(extra)), extended_tags, irrational
                )
                if candidate.valid:
                    result.append(candidate)
        return result

    def candidate_from_values(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        k_map: Dict[Vector, object],
        tags: Dict[str, str],
    ) -> MatchedCandidate:
        """Check an explicit assignment root ↦ k^π over a subset of Σ ∪ 2Σ."""
        k_map = {tuple(r): _normalize(v) for r, v in k_map.items()}
        irrational = any(isinstance(v, sympy.Basic) for v in k_map.values())
        return self._candidate(system, m, kappa, k_map, tags, irrational)

    def _candidate(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        k_map: Dict[Vector, object],
        tags: Dict[str, str],
        irrational: bool,
    ) -> MatchedCandidate:
        k_by_root = tuple(sorted(k_map.items(), key=lambda item: item[0], reverse=True))

        def invalid(reason: str, checks=None) -> MatchedCandidate:
            return MatchedCandidate(
                system_pi=None,
                k_pi=None,
                k_by_root=k_by_root,
                branch_tags=tags,
                valid=False,
                failure_reason=reason,
                irrational=irrational,
                checks=list(checks or []),
            )

        if not k_map:
            return invalid("every k^π vanishes")
        axioms = self.root_service.validate_root_system(
            list(k_map), system.gram, expected_rank=system.rank
        )
        if not axioms.valid:
            return invalid(f"not a root system: {', '.join(axioms.failed_steps())}", axioms.details)
        system_pi = self.root_service.subsystem(system, list(k_map))

        values = {}
        for root, label in zip(system_pi.roots, system_pi.root_labels):
            value = k_map[root]
            if label in values and not values_equal(values[label], value):
                return invalid(f"k^π is not constant on the orbit {label}")
            values.setdefault(label, value)
        k_pi = MultiplicityFunction.build(system_pi, values)

        report = self.verify_matching(system, m, kappa, system_pi, k_pi)
        return MatchedCandidate(
            system_pi=system_pi,
            k_pi=k_pi,
            k_by_root=k_by_root,
            branch_tags=tags,
            valid=report.valid,
            failure_reason=None if report.valid else report.message,
            irrational=irrational,
            checks=report.details,
        )

    def verify_matching(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        system_pi: RootSystem,
        k_pi: MultiplicityFunction,
    ) -> ValidationReport:
        """
        Exact check of a proposed (Σ^π, k^π) against (Σ, m, κ^π).

        Steps: MC1 (Σ^π ⊂ Σ ∪ 2Σ), root-system axioms, W(Σ^π) = W, the matching
        equation on Σ ∪ 2Σ and the regularity relation on Σ∖2Σ. m and κ read
        as 0 off Σ, k^π as 0 off Σ^π. The first violated root is named.
        """
        outside = [
            r
            for r in system_pi.roots
            if not system.contains(r) and not system.contains(scale(_HALF, r))
        ]
        steps = [
            ValidationStep.check(
                "mc1",
                not outside,
                "Σ^π ⊂ Σ ∪ 2Σ"
                if not outside
                else f"{format_vector(outside[0])} is not in Σ ∪ 2Σ",
            )
        ]
        axioms = self.root_service.validate_root_system(system_pi.roots, system.gram)
        steps.append(ValidationStep.check("root_system", axioms.valid, axioms.message))
        same_weyl = self.same_weyl_group(system, system_pi)
        steps.append(
            ValidationStep.check(
                "weyl_group",
                same_weyl,
                "W(Σ^π) = W" if same_weyl else "Σ^π and Σ have different reflecting hyperplanes",
            )
        )

        matching_message = "holds on Σ ∪ 2Σ"
        matching_ok = True
        for alpha in list(system.positive_roots) + [scale(2, r) for r in system.positive_roots]:
            lhs, rhs = self.matching_sides(m, kappa, k_pi, alpha)
            if not values_equal(lhs, rhs):
                matching_ok = False
                matching_message = (
                    f"fails at α = ({', '.join(format_vector(alpha))}): "
                    f"{format_rational(lhs)} ≠ {format_rational(rhs)}"
                )
                break
        steps.append(ValidationStep.check("matching", matching_ok, matching_message))

        regularity_message = "holds on Σ∖2Σ"
        regularity_ok = True
        for alpha in system.indivisible_positive:
            lhs = (m.at(alpha) + m.at(scale(2, alpha))) * _HALF
            rhs = k_pi.at(alpha) + k_pi.at(scale(2, alpha)) + k_pi.at(scale(4, alpha))
            if not values_equal(lhs, rhs):
                regularity_ok = False
                regularity_message = (
                    f"fails at α = ({', '.join(format_vector(alpha))}): "
                    f"{format_rational(lhs)} ≠ {format_rational(rhs)}"
                )
                break
        steps.append(ValidationStep.check("regularity", regularity_ok, regularity_message))
        return ValidationReport.from_steps(steps, "matching conditions")

    def matching_sides(
        self,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        k_pi: MultiplicityFunction,
        alpha: Vector,
    ):
        """Both sides of the matching equation at α ∈ Σ ∪ 2Σ."""
        half = scale(_HALF, alpha)
        m_a, m_half = m.at(alpha), m.at(half)
        lhs = -m_a * kappa.at(alpha) + _HALF * m_half * (
            1 - _HALF * m_half - m_a + 2 * kappa.at(half)
        )
        k_a = k_pi.at(alpha)
        rhs = k_a * (1 - k_a - 2 * k_pi.at(scale(2, alpha)))
        return lhs, rhs

    def same_weyl_group(self, system: RootSystem, system_pi: RootSystem) -> bool:
        """W(Σ^π) = W iff both systems have the same set of reflecting hyperplanes."""
        return {primitive_direction(r) for r in system.roots} == {
            primitive_direction(r) for r in system_pi.roots
        }


def _k_map(classes: Sequence[_RootClass]) -> Dict[Vector, object]:
    return {root: c.value for c in classes for root in c.roots}


def _rational(value, name: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError) as exc:
        raise ParameterOutOfRange(
            f"{name} must be rational, got {value!r}", details={name: str(value)}
        ) from exc


def _lift(value, rational: bool):
    if rational:
        return Fraction(value)
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _normalize(value):
    if isinstance(value, sympy.Basic):
        value = sympy.simplify(value)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
    return value


def _negative(label: str, disc: Fraction) -> str:
    return f"negative discriminant {disc} on orbit {label}: k^π would be complex"
