"""Catalog of small K-types: group data (Σ, m, κ^π) with their matched (Σ^π, k^π)."""

import logging
from dataclasses import replace
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Tuple

from app.config import Settings, get_settings
from app.constants.ktypes import (
    CASE_NAMES,
    DEFAULT_SWEEPS,
    F4_SHORT_MULTIPLICITY,
    G2_KAPPA,
    GROUP_FAMILIES,
    SPLIT_EXCEPTIONAL_KTYPES,
    SPLIT_EXCEPTIONAL_RANK,
    FamilyKind,
)
from app.exceptions import ParameterOutOfRange, UnknownFamily
from app.models.cosh_factor import CoshFactor
from app.models.ktype import MatchedCandidate, SmallKTypeEntry
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.schemas.ktype import KTypeFilter
from app.services.matching_service import MatchingService
from app.services.root_system_service import RootSystemService
from app.utils.exact import Vector, format_rational, neg, scale, to_fraction

logger = logging.getLogger(__name__)

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


class KTypeCatalogService:
    """Generates catalog records for the group families in GROUP_FAMILIES."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        root_service: Optional[RootSystemService] = None,
        matching_service: Optional[MatchingService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)
        self.matching_service = matching_service or MatchingService(
            self.settings, self.root_service
        )

    def catalog(self, filter: Optional[KTypeFilter] = None) -> List[SmallKTypeEntry]:
        """
        Records for every group family selected by the filter.

        An exact group key makes parameter errors fatal; a kind or a stem
        ("so", "hermitian") silently skips groups the parameters do not fit.

        Raises:
            UnknownFamily: If the family matches no group
            ParameterOutOfRange: If an explicitly selected group rejects the parameters
        """
        filter = filter or KTypeFilter()
        given = filter.given()
        entries: List[SmallKTypeEntry] = []
        for key, strict in self._select(filter.family):
            _, group_params, ktype_params = GROUP_FAMILIES[key]
            names = group_params + ktype_params
            foreign = sorted(set(given) - set(names))
            if foreign:
                if strict:
                    raise ParameterOutOfRange(
                        f"{key} takes no parameter {', '.join(foreign)}",
                        details={"group": key, "parameters": list(names)},
                    )
                continue
            sweep = DEFAULT_SWEEPS.get(key, {})
            axes = [
                ((given[name],) if name in given else sweep.get(name, ()))
                for name in names
            ]
            explicit = all(name in given for name in names)
            for values in product(*axes):
                params = dict(zip(names, values))
                try:
                    entries.extend(self.entries(key, params, filter.include_trivial))
                except ParameterOutOfRange:
                    if strict and explicit:
                        raise
                    logger.debug(f"Skipping {key} at {params}: outside the family's range")
        logger.info(f"Catalog for family {filter.family!r}: {len(entries)} records")
        return entries

    def _select(self, family: Optional[str]) -> List[Tuple[str, bool]]:
        if family is None:
            return [(key, False) for key in GROUP_FAMILIES]
        text = family.strip().lower()
        exact = [key for key in GROUP_FAMILIES if key.lower() == text]
        if exact:
            return [(key, True) for key in exact]
        selected = [
            key
            for key, (kind, _, _) in GROUP_FAMILIES.items()
            if kind.value.lower() == text or key.split("(")[0].lower() == text
        ]
        if not selected:
            raise UnknownFamily(
                f"No small K-type family matches {family!r}",
                details={"family": family, "known": list(GROUP_FAMILIES)},
            )
        return [(key, False) for key in selected]

    def entries(
        self, key: str, params: Dict[str, object], include_trivial: bool = False
    ) -> List[SmallKTypeEntry]:
        """
        Records of one group at fixed parameters.

        Raises:
            UnknownFamily: If the key is not a catalog group
            ParameterOutOfRange: If the parameters are outside the family's range
        """
        if key not in GROUP_FAMILIES:
            raise UnknownFamily(f"Unknown group {key!r}", details={"group": key})
        kind = GROUP_FAMILIES[key][0]
        system, m = self.group_data(key, params)
        label = self._group_label(key, kind, system)
        group_params = {name: params[name] for name in GROUP_FAMILIES[key][1]}

        if kind == FamilyKind.TRIVIAL_ONLY:
            entry = self.trivial_entry(label, group_params, system, m)
            return [replace(entry, has_nontrivial=False, note="only the trivial K-type is small")]
        result = []
        if include_trivial:
            result.append(self.trivial_entry(label, group_params, system, m))
        builder = {
            FamilyKind.SP_P1: self._sp_p1,
            FamilyKind.SO_2R1: self._so_2r1,
            FamilyKind.SO_PQ: self._so_pq,
            FamilyKind.HERMITIAN: self._hermitian,
            FamilyKind.F4: self._f4,
            FamilyKind.SPLIT: self._split,
            FamilyKind.G2: self._g2,
        }[kind]
        result.extend(builder(key, label, params, system, m))
        return result

    def group_data(
        self, key: str, params: Dict[str, object]
    ) -> Tuple[RootSystem, MultiplicityFunction]:
        """Restricted root system Σ and multiplicities m of a catalog group."""
        build = self.root_service.build_root_system
        rank_one = self.root_service.rank_one
        p, q, r, n = (params.get(name) for name in ("p", "q", "r", "n"))

        if key == "sp(p,1)":
            _require(p is not None and p >= 1, key, "p ≥ 1", params)
            if p == 1:
                system = rank_one((2,))
                return system, _m(system, long=3)
            system = rank_one((1, 2))
            return system, _m(system, short=4 * (p - 1), double=3)
        if key == "so(2r,1)":
            _require(r is not None and r >= 2, key, "r ≥ 2", params)
            system = rank_one((1,))
            return system, _m(system, long=2 * r - 1)
        if key == "so(2r+1,1)":
            _require(r is not None and r >= 1, key, "r ≥ 1", params)
            system = rank_one((1,))
            return system, _m(system, long=2 * r)
        if key == "so(p,q)":
            _require(q is not None and p is not None and p > q >= 3, key, "p > q ≥ 3", params)
            system = build("B", q)
            return system, _m(system, short=p - q, long=1)
        if key in ("su(p,q)", "sp(p,q)"):
            lowest = 1 if key == "su(p,q)" else 2
            _require(
                p is not None and q is not None and p >= q >= lowest,
                key,
                f"p ≥ q ≥ {lowest}",
                params,
            )
            # su: m = (2(p−q), 2, 1); sp: m = (4(p−q), 4, 3) on (e_i, e_i ± e_j, 2e_i)
            short, medium, double = (
                (2 * (p - q), 2, 1) if key == "su(p,q)" else (4 * (p - q), 4, 3)
            )
            return self._classical_bc(q, short, medium, double)
        if key == "sp(n,R)":
            _require(n is not None and n >= 1, key, "n ≥ 1", params)
            return self._classical_bc(n, 0, 1, 1)
        if key == "so*(2n)":
            _require(n is not None and n >= 3, key, "n ≥ 3", params)
            return self._classical_bc(n // 2, 4 * (n % 2), 4, 1)
        if key == "so(p,2)":
            _require(p is not None and p >= 3, key, "p ≥ 3", params)
            return self._classical_bc(2, 0, p - 2, 1)
        if key == "e6(-14)":
            return self._classical_bc(2, 8, 6, 1)
        if key == "e7(-25)":
            return self._classical_bc(3, 0, 8, 1)
        if key in F4_SHORT_MULTIPLICITY:
            system = build("F", 4)
            return system, _m(system, short=F4_SHORT_MULTIPLICITY[key], long=1)
        if key == "sl(p,R)":
            _require(p is not None and p >= 3, key, "p ≥ 3", params)
            system = build("A", p - 1)
            return system, _m(system, long=1)
        if key == "so(p,p)":
            _require(p is not None and p >= 3, key, "p ≥ 3", params)
            system = build("D", p)
            return system, _m(system, long=1)
        if key in SPLIT_EXCEPTIONAL_RANK:
            system = build("E", SPLIT_EXCEPTIONAL_RANK[key])
            return system, _m(system, long=1)
        if key == "G2":
            system = build("G", 2)
            return system, _m(system, short=1, long=1)
        if key in ("sl(p,C)", "sl(p,H)"):
            _require(p is not None and p >= 2, key, "p ≥ 2", params)
            system = build("A", p - 1)
            return system, _m(system, long=2 if key == "sl(p,C)" else 4)
        if key == "e6(-26)":
            system = build("A", 2)
            return system, _m(system, long=8)
        if key == "f4(-20)":
            system = rank_one((1, 2))
            return system, _m(system, short=8, double=7)
        raise UnknownFamily(f"Unknown group {key!r}", details={"group": key})

    def _classical_bc(
        self, rank: int, short, medium, double
    ) -> Tuple[RootSystem, MultiplicityFunction]:
        """
        Σ spanned by e_i (m = short), e_i ± e_j (m = medium), 2e_i (m = double).

        short = 0 drops the e_i, giving C_rank; rank one gives BC1 or {±2e}.
        """
        if rank == 1:
            if short:
                system = self.root_service.rank_one((1, 2))
                return system, _m(system, short=short, double=double)
            system = self.root_service.rank_one((2,))
            return system, _m(system, long=double)
        if short:
            system = self.root_service.build_root_system("BC", rank)
            return system, _m(system, short=short, medium=medium, double=double)
        system = self.root_service.build_root_system("C", rank)
        return system, _m(system, short=medium, long=double)

    def _group_label(self, key: str, kind: FamilyKind, system: RootSystem) -> str:
        if kind == FamilyKind.HERMITIAN:
            return f"hermitian:{key}"
        if kind == FamilyKind.F4:
            return f"F4-family:{key}"
        if kind == FamilyKind.SPLIT:
            return f"split:{system.name}"
        if key == "sl(p,C)":
            return f"complex:{key}"
        return key

    def trivial_entry(
        self,
        group_label: str,
        params: Dict[str, object],
        system: RootSystem,
        m: MultiplicityFunction,
    ) -> SmallKTypeEntry:
        """κ ≡ 0 with Σ^π = 2Σ and k^π_{2α} = m_α/2."""
        kappa = MultiplicityFunction.zero(system)
        k_map = {scale(2, root): Fraction(m.at(root)) / 2 for root in system.roots}
        return self._entry(
            group_label,
            params,
            "trivial",
            system,
            m,
            kappa,
            [(k_map, {"catalog": "trivial"})],
            source="κ ≡ 0; Σ^π = 2Σ, k^π_{2α} = m_α/2",
        )

    def _sp_p1(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        p, n = params["p"], params["n"]
        _require(n >= 1, key, "n ≥ 1", params)
        long_kappa = -Fraction(n * n - 1, 3)
        kappa = (
            _m(system, long=long_kappa) if p == 1 else _m(system, short=0, double=long_kappa)
        )
        alpha = (Fraction(1),)
        pairs = []
        for tag, sign in (("upper", 1), ("lower", -1)):
            k_map = _symmetric(
                {scale(2, alpha): 2 * p - 1 + sign * n, scale(4, alpha): _HALF - sign * n}
            )
            pairs.append((k_map, {"catalog": tag}))
        name = "π_n∘pr_2" if p >= 2 else "π_n∘pr_1 / π_n∘pr_2"
        return [
            self._entry(
                label, params, name, system, m, kappa, pairs, source="κ_long = −(n²−1)/3"
            )
        ]

    def _so_2r1(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        r, s = params["r"], params["s"]
        _require(s >= 0, key, "s ≥ 0", params)
        kappa = _m(system, long=-Fraction(s * (s + 2 * r - 2), 2 * r - 1))
        alpha = system.positive_roots[0]
        k_map = _symmetric({alpha: -s, scale(2, alpha): r + s - _HALF})
        return [
            self._entry(
                label,
                params,
                "π_s^+ / π_s^-",
                system,
                m,
                kappa,
                [(k_map, {"catalog": "highest weight (s/2,…,s/2,±s/2)"})],
                source="κ_short = −s(s+2r−2)/(2r−1)",
            )
        ]

    def _so_pq(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        p, q, case = params["p"], params["q"], str(params["case"]).lower()
        _require(case in CASE_NAMES, key, "case i or ii", params)
        short_orbit, long_orbit = system.orbit("short"), system.orbit("long")
        long_values = {root: _HALF for root in long_orbit}
        if case == "i":
            kappa = _m(system, short=0, long=-_QUARTER)
            k_map = {scale(2, root): Fraction(p - q, 2) for root in short_orbit}
            name = "spin∘pr_2" if q % 2 else "half-spin±∘pr_2"
        else:
            _require(p % 2 == 0 and q % 2 == 1, key, "p even and q odd for case (ii)", params)
            kappa = _m(system, short=-1, long=-_QUARTER)
            k_map = {root: Fraction(p - q) for root in short_orbit}
            k_map.update({scale(2, root): -Fraction(p - q, 2) for root in short_orbit})
            name = "half-spin±∘pr_1"
        k_map.update(long_values)
        return [
            self._entry(
                label,
                params,
                name,
                system,
                m,
                kappa,
                [(k_map, {"catalog": f"case ({case})"})],
                source="κ_short ∈ {0, −1}, κ_long = −¼",
            )
        ]

    def _hermitian(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        nu = to_fraction(params["nu"])
        _require(nu != 0, key, "ν ≠ 0", params)
        long_label = "double" if "double" in system.orbit_labels else "long"
        long_orbit = system.orbit(long_label)
        long_set = set(long_orbit)
        middle = [
            root
            for root in system.roots
            if root not in long_set and scale(2, root) not in long_set
        ]
        kappa = _m(
            system,
            **{lab: (-nu * nu if lab == long_label else 0) for lab in system.orbit_labels},
        )
        pairs = []
        for tag, sign in (("upper", 1), ("lower", -1)):
            k_map = {}
            for root in long_orbit:
                k_map[root] = Fraction(m.at_half(root)) / 2 + sign * nu
                k_map[scale(2, root)] = _HALF - sign * nu
            for root in middle:
                k_map[scale(2, root)] = Fraction(m.at(root)) / 2
            pairs.append((k_map, {"catalog": tag}))
        return [
            self._entry(
                label,
                {**params, "nu": nu},
                f"ν = {format_rational(nu)}",
                system,
                m,
                kappa,
                pairs,
                source="dim V = 1, κ_long = −ν²",
            )
        ]

    def _f4(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        kappa = _m(system, short=0, long=-_QUARTER)
        k_map = {scale(2, root): Fraction(m.at(root)) / 2 for root in system.orbit("short")}
        k_map.update({root: _HALF for root in system.orbit("long")})
        return [
            self._entry(
                label,
                params,
                "σ∘pr_2",
                system,
                m,
                kappa,
                [(k_map, {"catalog": "2Σ_short ∪ Σ_long"})],
                source="κ_short = 0, κ_long = −¼",
            )
        ]

    def _split(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        kappa = _m(system, long=-_QUARTER)
        k_map = {root: _HALF for root in system.roots}
        if key in SPLIT_EXCEPTIONAL_KTYPES:
            name = SPLIT_EXCEPTIONAL_KTYPES[key]
        else:
            p = params["p"]
            spin = "spin" if p % 2 else "half-spin±"
            name = spin if key == "sl(p,R)" else f"{spin}∘pr_1 / {spin}∘pr_2"
        return [
            self._entry(
                label,
                params,
                name,
                system,
                m,
                kappa,
                [(k_map, {"catalog": "Σ^π = Σ"})],
                source="κ = −¼",
            )
        ]

    def _g2(self, key, label, params, system, m) -> List[SmallKTypeEntry]:
        result = []
        for name, values in G2_KAPPA.items():
            kappa = _m(system, **values)
            if values["short"] == values["long"]:
                k_map = {root: _HALF for root in system.roots}
                result.append(
                    self._entry(
                        label,
                        params,
                        name,
                        system,
                        m,
                        kappa,
                        [(k_map, {"catalog": "Σ^π = Σ"})],
                        source="κ_short = κ_long = −¼",
                    )
                )
                continue
            candidates = self.matching_service.solve_matching(system, m, kappa)
            reasons = sorted({c.failure_reason for c in candidates if not c.valid})
            result.append(
                SmallKTypeEntry(
                    group_label=label,
                    parameters=dict(params),
                    ktype_name=name,
                    system=system,
                    m=m,
                    kappa=kappa,
                    matched=[],
                    cosh_factor="none",
                    source="κ_short = −9/4, κ_long = −¼",
                    note=(
                        "no hypergeometric expression: all "
                        f"{len(candidates)} solver candidates fail ({'; '.join(reasons)})"
                    ),
                )
            )
        return result

    def _entry(
        self,
        group_label: str,
        params: Dict[str, object],
        ktype_name: str,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        pairs: Iterable[Tuple[Dict[Vector, object], Dict[str, str]]],
        source: str,
    ) -> SmallKTypeEntry:
        matched: List[MatchedCandidate] = [
            self.matching_service.candidate_from_values(system, m, kappa, k_map, tags)
            for k_map, tags in pairs
        ]
        for candidate in matched:
            if not candidate.valid:
                logger.warning(
                    f"Catalog pair for {group_label} {ktype_name} fails: {candidate.failure_reason}"
                )
        cosh = " | ".join(
            _cosh_summary(system, m, c) for c in matched if c.valid
        )
        return SmallKTypeEntry(
            group_label=group_label,
            parameters=dict(params),
            ktype_name=ktype_name,
            system=system,
            m=m,
            kappa=kappa,
            matched=matched,
            cosh_factor=cosh or "1",
            source=source,
        )


def _m(system: RootSystem, **values) -> MultiplicityFunction:
    return MultiplicityFunction.build(system, values)


def _symmetric(values: Dict[Vector, object]) -> Dict[Vector, object]:
    result = dict(values)
    result.update({neg(root): value for root, value in values.items()})
    return result


def _require(condition: bool, key: str, rule: str, params: Dict[str, object]) -> None:
    if not condition:
        raise ParameterOutOfRange(
            f"{key} requires {rule}",
            details={"group": key, "parameters": {k: str(v) for k, v in params.items()}},
        )


def _cosh_summary(system: RootSystem, m: MultiplicityFunction, pair: MatchedCandidate) -> str:
    """The cosh factor written once per orbit of Σ∖2Σ."""
    factor = CoshFactor.from_pair(system, m, pair.k_pi)
    parts = []
    seen = set()
    for term in factor.terms:
        orbit = system.label(term.root)
        if orbit in seen:
            continue
        seen.add(orbit)
        if term.half_exponent != 0:
            parts.append(f"Π_{orbit} cosh(α/2)^({format_rational(term.half_exponent)})")
        if term.full_exponent != 0:
            parts.append(f"Π_{orbit} cosh(α)^({format_rational(term.full_exponent)})")
    return " * ".join(parts) if parts else "1"
