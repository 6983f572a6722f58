import logging
import math
import re
from collections import deque
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Settings, get_settings
from app.constants.orbits import (
    DUPLICATE_SUFFIX,
    FAMILIES,
    NON_REDUCED_LABELS,
    REDUCED_LABELS,
    WEYL_ORDERS,
    OrbitLabel,
)
from app.exceptions import (
    HeightOverflow,
    NotARoot,
    ParameterOutOfRange,
    RankOutOfRange,
    UnknownFamily,
    WeylGroupTooLarge,
)
from app.models.cone import ConePoint
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.weyl import WeylElement
from app.schemas.root_system import OrbitView, RootSystemReport, RootSystemView
from app.schemas.validation import ValidationReport, ValidationStep
from app.utils.exact import (
    Vector,
    format_rational,
    format_vector,
    matrix,
    neg,
    rank as exact_rank,
    scale,
    vector,
)

logger = logging.getLogger(__name__)

_NAME_PATTERN = re.compile(r"^\s*(BC|[A-G])\s*(\d+)\s*$", re.IGNORECASE)
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "BC": 1, "D": 3}
_HALF = Fraction(1, 2)


def _unit(i: int, n: int, c=1) -> Vector:
    return tuple(Fraction(c) if j == i else Fraction(0) for j in range(n))


def _lex_positive(v: Sequence[Fraction]) -> bool:
    for x in v:
        if x != 0:
            return x > 0
    return False


def _e8_roots() -> List[Vector]:
    roots = []
    for i in range(8):
        for j in range(i + 1, 8):
            for si, sj in product((1, -1), repeat=2):
                v = [Fraction(0)] * 8
                v[i], v[j] = Fraction(si), Fraction(sj)
                roots.append(tuple(v))
    for signs in product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(Fraction(s, 2) for s in signs))
    return roots


def _family_roots(family: str, n: int) -> Tuple[List[Vector], int]:
    """Root vectors and ambient dimension for a classical or exceptional family."""
    roots: List[Vector] = []
    if family == "A":
        dim = n + 1
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    roots.append(tuple(a - b for a, b in zip(_unit(i, dim), _unit(j, dim))))
        return roots, dim
    if family in ("B", "C", "BC", "D"):
        dim = n
        for i in range(n):
            for j in range(i + 1, n):
                for si, sj in product((1, -1), repeat=2):
                    v = [Fraction(0)] * n
                    v[i], v[j] = Fraction(si), Fraction(sj)
                    roots.append(tuple(v))
            for s in (1, -1):
                if family in ("B", "BC"):
                    roots.append(_unit(i, n, s))
                if family in ("C", "BC"):
                    roots.append(_unit(i, n, 2 * s))
        return roots, dim
    if family == "G":
        dim = 3
        for i in range(3):
            for j in range(3):
                if i != j:
                    roots.append(tuple(a - b for a, b in zip(_unit(i, 3), _unit(j, 3))))
            long_root = tuple(Fraction(2) if j == i else Fraction(-1) for j in range(3))
            roots.extend([long_root, neg(long_root)])
        return roots, dim
    if family == "F":
        dim = 4
        roots, _ = _family_roots("B", 4)
        for signs in product((1, -1), repeat=4):
            roots.append(tuple(Fraction(s, 2) for s in signs))
        return roots, dim
    if family == "E":
        e8 = _e8_roots()
        if n == 8:
            return e8, 8
        if n == 7:
            return [r for r in e8 if r[6] == r[7]], 8
        return [r for r in e8 if r[5] == r[6] == r[7]], 8
    raise UnknownFamily(f"Unknown root system family {family!r}", details={"family": family})


def _check_rank(family: str, n: int) -> None:
    if family in _MIN_RANK:
        ok = n >= _MIN_RANK[family]
    elif family == "E":
        ok = n in (6, 7, 8)
    elif family == "F":
        ok = n == 4
    else:
        ok = n == 2
    if not ok:
        raise RankOutOfRange(
            f"{family}{n} is not a valid root system", details={"family": family, "rank": n}
        )


def parse_root_system_name(text: str) -> Tuple[str, int]:
    """Split names such as "BC2", "A1", "G2" or "E7" into (family, rank)."""
    match = _NAME_PATTERN.match(text)
    if not match:
        raise UnknownFamily(f"Cannot parse root system {text!r}", details={"name": text})
    return match.group(1).upper(), int(match.group(2))


@lru_cache(maxsize=None)
def _compositions(height: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length `parts` summing to `height`, descending lex."""
    if parts == 1:
        return np.array([[height]], dtype=np.int64)
    blocks = []
    for first in range(height, -1, -1):
        rest = _compositions(height - first, parts - 1)
        blocks.append(
            np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest])
        )
    return np.vstack(blocks)


def cone_array(rank: int, max_height: int) -> np.ndarray:
    """Cone points with height ≤ max_height as rows, by height then descending lex."""
    return np.vstack([_compositions(h, rank) for h in range(max_height + 1)])


def cone_size(rank: int, max_height: int) -> int:
    return math.comb(max_height + rank, rank)


class RootSystemService:
    """Exact root-system, Weyl-group and cone-lattice combinatorics."""

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the root system service.

        Args:
            settings: Application settings; read from the environment when omitted
        """
        self.settings = settings or get_settings()

    def build_root_system(self, family: str, rank: Optional[int] = None) -> RootSystem:
        """
        Build a standard root system.

        Args:
            family: Family tag (A, B, C, BC, D, E, F, G), or a full name like "BC2"
            rank: Rank, optional when the name already carries it

        Returns:
            RootSystem: The system with its lexicographic positive system

        Raises:
            UnknownFamily: If the family tag is not recognised
            RankOutOfRange: If the family does not exist in this rank
        """
        family = family.strip().upper()
        if rank is None:
            family, rank = parse_root_system_name(family)
        elif family[-1:].isdigit():
            parsed_family, parsed_rank = parse_root_system_name(family)
            if parsed_rank != rank:
                raise RankOutOfRange(
                    f"{family} does not have rank {rank}",
                    details={"family": family, "rank": rank},
                )
            family = parsed_family
        if family not in FAMILIES:
            raise UnknownFamily(
                f"Unknown root system family {family!r}", details={"family": family}
            )
        _check_rank(family, rank)
        roots, dim = _family_roots(family, rank)
        gram = tuple(_unit(i, dim) for i in range(dim))
        system = self._assemble(family, roots, gram, chamber=None, expected_rank=rank)
        logger.debug(f"Built {system!r}")
        return system

    def custom_root_system(
        self,
        roots: Sequence[Sequence],
        gram: Sequence[Sequence],
        chamber: Optional[Sequence] = None,
    ) -> RootSystem:
        """
        Build a root system from explicit vectors.

        The positive roots are those with α·v > 0 for the chamber vector v, or
        the lexicographically positive ones when no vector is given.

        Raises:
            ParameterOutOfRange: If the vectors fail the root-system axioms or
                the chamber vector lies on a wall
        """
        vectors = sorted({vector(r) for r in roots})
        gram_exact = matrix(gram)
        report = self.validate_root_system(vectors, gram_exact)
        if not report.valid:
            raise ParameterOutOfRange(
                f"Not a root system: {report.message}",
                details={"failed": report.failed_steps()},
            )
        chamber_exact = vector(chamber) if chamber is not None else None
        if chamber_exact is not None and any(
            sum(a * b for a, b in zip(r, chamber_exact)) == 0 for r in vectors
        ):
            raise ParameterOutOfRange(
                "Chamber vector lies on a reflecting hyperplane",
                details={"chamber": format_vector(chamber_exact)},
            )
        return self._assemble("custom", vectors, gram_exact, chamber_exact, report.rank)

    def rank_one(self, lengths: Sequence[int] = (1,), norm2=1) -> RootSystem:
        """
        One-dimensional system {±j·e : j in lengths} with (e, e) = norm2.

        (1, 2) is BC1 and (2, 4) is the doubled BC1 {±2α, ±4α}.
        """
        roots = [(Fraction(s * j),) for j in lengths for s in (1, -1)]
        return self.custom_root_system(roots, [[norm2]])

    def subsystem(self, parent: RootSystem, vectors: Sequence[Sequence]) -> RootSystem:
        """Root system on a subset of Σ ∪ 2Σ, with the parent's positivity rule."""
        return self.custom_root_system(vectors, parent.gram, parent.chamber)

    def rescale(self, system: RootSystem, factor) -> RootSystem:
        """The same roots with the Gram matrix multiplied by factor > 0."""
        factor = Fraction(factor)
        gram = tuple(tuple(factor * x for x in row) for row in system.gram)
        return RootSystem(
            family=system.family,
            rank=system.rank,
            gram=gram,
            roots=system.roots,
            positive_roots=system.positive_roots,
            simple_roots=system.simple_roots,
            orbit_labels=system.orbit_labels,
            root_labels=system.root_labels,
            chamber=system.chamber,
        )

    def _assemble(
        self,
        family: str,
        roots: Sequence[Vector],
        gram,
        chamber: Optional[Vector],
        expected_rank: int,
    ) -> RootSystem:
        if chamber is None:
            positive = [r for r in roots if _lex_positive(r)]
        else:
            positive = [r for r in roots if sum(a * b for a, b in zip(r, chamber)) > 0]
        positive_set = set(positive)
        simple = [
            beta
            for beta in positive
            if not any(
                tuple(b - a for a, b in zip(alpha, beta)) in positive_set
                for alpha in positive
                if alpha != beta
            )
        ]
        simple.sort(reverse=True)
        if len(simple) != expected_rank:
            raise ParameterOutOfRange(
                f"Found {len(simple)} simple roots, expected {expected_rank}",
                details={"simple": [format_vector(s) for s in simple]},
            )

        provisional = RootSystem(
            family=family,
            rank=expected_rank,
            gram=gram,
            roots=tuple(positive),
            positive_roots=tuple(positive),
            simple_roots=tuple(simple),
            orbit_labels=(),
            root_labels=(),
            chamber=chamber,
        )
        coords = {r: provisional.simple_coords(r) for r in positive}
        for r, c in coords.items():
            if any(x < 0 or x.denominator != 1 for x in c):
                raise ParameterOutOfRange(
                    "Positive root is not a nonnegative integer combination of simple roots",
                    details={"root": format_vector(r)},
                )
        positive.sort(key=lambda r: (sum(coords[r]), tuple(-x for x in coords[r])))
        all_roots = tuple(positive) + tuple(neg(r) for r in positive)

        orbits = self._orbits(provisional, all_roots)
        labels, root_labels = self._label_orbits(provisional, orbits, all_roots)
        return RootSystem(
            family=family,
            rank=expected_rank,
            gram=gram,
            roots=all_roots,
            positive_roots=tuple(positive),
            simple_roots=tuple(simple),
            orbit_labels=labels,
            root_labels=root_labels,
            chamber=chamber,
        )

    def _orbits(self, system: RootSystem, roots: Sequence[Vector]) -> List[List[Vector]]:
        """Orbits under the simple reflections, without enumerating W."""
        assigned: Dict[Vector, int] = {}
        orbits: List[List[Vector]] = []
        for start in roots:
            if start in assigned:
                continue
            orbit = [start]
            assigned[start] = len(orbits)
            queue = deque([start])
            while queue:
                beta = queue.popleft()
                for alpha in system.simple_roots:
                    image = system.reflect(alpha, beta)
                    if image not in assigned:
                        assigned[image] = len(orbits)
                        orbit.append(image)
                        queue.append(image)
            orbits.append(orbit)
        return orbits

    def _label_orbits(
        self, system: RootSystem, orbits: List[List[Vector]], roots: Sequence[Vector]
    ) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        members = [set(o) for o in orbits]
        all_roots = set(roots)
        norms = [system.norm2(o[0]) for o in orbits]
        doubled = [scale(_HALF, o[0]) in all_roots for o in orbits]
        reduced = not any(doubled)

        plain_norms = sorted({n for n, d in zip(norms, doubled) if not d})
        table = REDUCED_LABELS if reduced else NON_REDUCED_LABELS
        base_names = table.get(len(plain_norms))
        names: List[Optional[str]] = [None] * len(orbits)
        seen: Dict[str, int] = {}
        for i, (norm, is_double) in enumerate(zip(norms, doubled)):
            if is_double:
                base = OrbitLabel.DOUBLE.value
            elif base_names is not None:
                base = base_names[plain_norms.index(norm)].value
            else:
                base = f"length{plain_norms.index(norm) + 1}"
            seen[base] = seen.get(base, 0) + 1
            names[i] = base if seen[base] == 1 else f"{base}{DUPLICATE_SUFFIX}{seen[base]}"

        order = sorted(range(len(orbits)), key=lambda i: (norms[i], i))
        labels = tuple(names[i] for i in order)
        root_labels = tuple(
            next(names[i] for i, m in enumerate(members) if r in m) for r in roots
        )
        return labels, root_labels

    def coroot(self, system: RootSystem, root: Sequence) -> Vector:
        """
        α^∨ = 2α/(α, α), so that ⟨α, α^∨⟩ = 2.

        Raises:
            NotARoot: If the vector is not a root of the system
        """
        root = vector(root)
        if not system.contains(root):
            raise NotARoot(
                f"{format_vector(root)} is not a root of {system.name}",
                details={"vector": format_vector(root)},
            )
        return system.coroot(root)

    def rho_weighted(self, system: RootSystem, k: MultiplicityFunction) -> tuple:
        """ρ(k) = ½ Σ_{α>0} k_α α, exact when k is exact."""
        total = [0] * system.ambient_dim
        for root in system.positive_roots:
            value = k.at(root)
            if value == 0:
                continue
            total = [t + value * x for t, x in zip(total, root)]
        return tuple(t * _HALF for t in total)

    def weyl_order(self, system: RootSystem) -> Optional[int]:
        """|W| from the classification, None for custom systems."""
        n = system.rank
        if system.family == "A":
            return math.factorial(n + 1)
        if system.family in ("B", "C", "BC"):
            return 2**n * math.factorial(n)
        if system.family == "D":
            return 2 ** (n - 1) * math.factorial(n)
        return WEYL_ORDERS.get((system.family, n))

    def weyl_elements(
        self, system: RootSystem, cap: Optional[int] = None
    ) -> List[WeylElement]:
        """
        Enumerate W as the closure of the simple reflections.

        Args:
            system: The root system
            cap: Maximum group order; defaults to the weyl_cap setting

        Returns:
            List[WeylElement]: Every element, identity first, in BFS order

        Raises:
            WeylGroupTooLarge: If |W| exceeds the cap
        """
        cap = cap or self.settings.weyl_cap
        known = self.weyl_order(system)
        if known is not None and known > cap:
            raise WeylGroupTooLarge(
                f"|W({system.name})| = {known} exceeds the cap {cap}",
                details={"order": known, "cap": cap},
            )
        cached = system.memo.get("weyl")
        if cached is not None:
            return cached

        generators = self._simple_reflections(system)
        identity = np.eye(system.rank, dtype=np.int64)
        elements = [(identity, 0)]
        seen = {identity.tobytes()}
        queue = deque([(identity, 0)])
        while queue:
            current, length = queue.popleft()
            for gen in generators:
                image = gen @ current
                key = image.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > cap:
                    raise WeylGroupTooLarge(
                        f"Weyl group of {system.name} exceeds the cap {cap}",
                        details={"cap": cap},
                    )
                elements.append((image, length + 1))
                queue.append((image, length + 1))

        result = [self.element_from_matrix(system, m, length) for m, length in elements]
        system.memo["weyl"] = result
        logger.debug(f"Enumerated |W({system.name})| = {len(result)}")
        return result

    def _simple_reflections(self, system: RootSystem) -> List[np.ndarray]:
        cartan = system.cartan_matrix
        gens = []
        for i in range(system.rank):
            s = np.eye(system.rank, dtype=np.int64)
            s[i, :] -= np.array([int(c) for c in cartan[i]], dtype=np.int64)
            gens.append(s)
        return gens

    def element_from_matrix(
        self, system: RootSystem, simple_matrix: np.ndarray, length: int = 0
    ) -> WeylElement:
        """Attach the ambient weight and Cartan actions to a simple-basis matrix."""
        s = system.simple_array.T
        p = np.array(system.projection, dtype=float)
        n = system.ambient_dim
        weight_action = np.eye(n) + s @ (simple_matrix - np.eye(system.rank)) @ p
        cartan_action = system.gram_array @ weight_action @ system.gram_inverse_array
        sign = int(round(np.linalg.det(simple_matrix.astype(float))))
        return WeylElement(
            simple_matrix=simple_matrix,
            weight_action=weight_action,
            cartan_action=cartan_action,
            sign=sign,
            word_length=length,
        )

    def enumerate_cone(self, system: RootSystem, max_height: int) -> List[ConePoint]:
        """
        All μ ∈ ℕΣ⁺ with height ≤ max_height, graded by height then descending lex.

        Raises:
            HeightOverflow: If the point count exceeds max_cone_points
        """
        return [ConePoint(tuple(int(c) for c in row)) for row in self.cone_points(system, max_height)]

    def cone_points(self, system: RootSystem, max_height: int) -> np.ndarray:
        if max_height < 0:
            raise ParameterOutOfRange(
                "max_height must be nonnegative", details={"max_height": max_height}
            )
        size = cone_size(system.rank, max_height)
        if size > self.settings.max_cone_points:
            raise HeightOverflow(
                f"{size} cone points at height {max_height} exceed the limit",
                details={
                    "max_height": max_height,
                    "points": size,
                    "limit": self.settings.max_cone_points,
                },
            )
        return cone_array(system.rank, max_height)

    def validate_root_system(
        self,
        vectors: Sequence[Sequence],
        gram: Sequence[Sequence],
        expected_rank: Optional[int] = None,
    ) -> RootSystemReport:
        """
        Check the root-system axioms for a finite set of vectors, exactly.

        Args:
            vectors: Candidate roots
            gram: Inner product of the ambient space
            expected_rank: Rank the vectors must span, when known

        Returns:
            RootSystemReport: One step per axiom; valid iff all pass
        """
        vecs = sorted({vector(v) for v in vectors})
        gram_exact = matrix(gram)
        if not vecs:
            steps = [ValidationStep.check("nonzero", False, "empty set of vectors")]
            report = ValidationReport.from_steps(steps, "root system axioms")
            return RootSystemReport(**report.model_dump(), rank=0, size=0)
        ints, _ = _integer_rows(vecs)
        gram_ints, _ = _integer_rows(gram_exact)
        pairings = ints @ gram_ints @ ints.T
        norms = np.diag(pairings)
        vec_set = set(vecs)

        nonzero = bool(np.all(norms != 0)) and len(vecs) > 0
        symmetric = all(neg(v) in vec_set for v in vecs)

        crystallographic = True
        closed = True
        proportional_ok = True
        bad_pair = None
        if nonzero:
            twice = 2 * pairings
            # twice[b, a] / norms[a] = ⟨β, α^∨⟩
            integral = (twice % norms[np.newaxis, :]) == 0
            crystallographic = bool(integral.all())
            if not crystallographic:
                b, a = np.argwhere(~integral)[0]
                bad_pair = (vecs[b], vecs[a])
            for a, alpha in enumerate(vecs):
                for b, beta in enumerate(vecs):
                    c = Fraction(int(twice[b, a]), int(norms[a]))
                    image = tuple(y - c * x for x, y in zip(alpha, beta))
                    if image not in vec_set:
                        closed = False
                    if pairings[a, b] ** 2 == norms[a] * norms[b] and a != b:
                        ratio = Fraction(int(pairings[a, b]), int(norms[a]))
                        if abs(ratio) not in (Fraction(1, 2), 1, 2):
                            proportional_ok = False
                if not closed and not proportional_ok:
                    break

        span_rank = exact_rank(vecs) if vecs else 0
        spans = expected_rank is None or span_rank == expected_rank

        crystal_message = "⟨β, α^∨⟩ ∈ ℤ for all pairs"
        if bad_pair is not None:
            beta, alpha = bad_pair
            c = Fraction(2) * _pair(beta, gram_exact, alpha) / _pair(alpha, gram_exact, alpha)
            crystal_message = (
                f"⟨{format_vector(beta)}, {format_vector(alpha)}^∨⟩ = {format_rational(c)}"
            )
        steps = [
            ValidationStep.check("nonzero", nonzero, "no zero vectors"),
            ValidationStep.check("symmetric", symmetric, "closed under α ↦ -α"),
            ValidationStep.check("crystallographic", crystallographic, crystal_message),
            ValidationStep.check("reflection_closed", closed, "r_α(β) is a root"),
            ValidationStep.check(
                "proportionality", proportional_ok, "only ±½, ±1, ±2 multiples"
            ),
            ValidationStep.check(
                "spans",
                spans,
                f"rank {span_rank}"
                + (f", expected {expected_rank}" if expected_rank is not None else ""),
            ),
        ]
        report = ValidationReport.from_steps(steps, "root system axioms")
        return RootSystemReport(
            **report.model_dump(), rank=span_rank, size=len(vecs)
        )

    def chamber_map(
        self, system: RootSystem, point: Sequence[float]
    ) -> Tuple[WeylElement, np.ndarray]:
        """
        Move H into the closure of 𝔞₋ = {α(H) < 0 for α > 0}.

        Reflects by the first simple root with α(H) > 0 until none is left.

        Returns:
            Tuple[WeylElement, np.ndarray]: w and H′ = w·H
        """
        h = np.asarray(point, dtype=float).copy()
        simple = system.simple_array
        gram = system.gram_array
        generators = self._simple_reflections(system)
        m = np.eye(system.rank, dtype=np.int64)
        scale_h = 1.0 + float(np.max(np.abs(h))) if h.size else 1.0
        length = 0
        for _ in range(10_000):
            values = simple @ h
            positive = np.nonzero(values > 1e-14 * scale_h)[0]
            if positive.size == 0:
                break
            i = int(positive[0])
            alpha = simple[i]
            h = h - values[i] * 2.0 * (gram @ alpha) / float(system.norm2(system.simple_roots[i]))
            m = generators[i] @ m
            length += 1
        return self.element_from_matrix(system, m, length), h

    def cartan_point(self, system: RootSystem, simple_values: Sequence[float]) -> np.ndarray:
        """H with α_i(H) = simple_values[i], inside the span of the coroots."""
        s = system.simple_array.T
        gram = system.gram_array
        d = np.linalg.solve(s.T @ gram @ s, np.asarray(simple_values, dtype=float))
        return gram @ s @ d

    def describe(self, system: RootSystem, k: Optional[MultiplicityFunction] = None) -> RootSystemView:
        """Serializable summary used by `roots show`."""
        orbits = [
            OrbitView(
                label=label,
                size=len(system.orbit(label)),
                norm2=format_rational(system.norm2(system.orbit(label)[0])),
            )
            for label in system.orbit_labels
        ]
        rho = self.rho_weighted(system, k) if k is not None else system.rho_one
        order = self.weyl_order(system)
        if order is None:
            order = len(self.weyl_elements(system))
        return RootSystemView(
            name=system.name,
            family=system.family,
            rank=system.rank,
            ambient_dim=system.ambient_dim,
            gram=[format_vector(row) for row in system.gram],
            simple_roots=[format_vector(r) for r in system.simple_roots],
            positive_roots=[format_vector(r) for r in system.positive_roots],
            orbits=orbits,
            reduced=system.is_reduced,
            weyl_order=order,
            rho=format_vector(rho),
            cartan_matrix=[format_vector(row) for row in system.cartan_matrix],
        )


def _pair(u, gram, v):
    return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) for j in range(len(v)))


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> Tuple[np.ndarray, int]:
    """Scale rational rows by a common denominator into an int64 array."""
    denominator = 1
    for row in rows:
        for x in row:
            denominator = denominator * x.denominator // math.gcd(denominator, x.denominator)
    ints = np.array(
        [[int(x * denominator) for x in row] for row in rows], dtype=np.int64
    )
    return ints, denominator
