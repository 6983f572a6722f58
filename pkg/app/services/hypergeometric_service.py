"""Heckman-Opdam hypergeometric functions and the radial K-type equations.

F(λ; H) is assembled from Harish-Chandra series on the negative chamber,

    F = c̃(ρ(k))⁻¹ Σ_{w∈W} c̃(−wλ) Φ(wλ; H′),

where H′ is the image of H in the closed negative chamber. For a small K-type
the radial part of the spherical function is Υ = cosh-factor · F(Σ^π, k^π, λ).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Settings, get_settings
from app.exceptions import (
    NotRegular,
    ParameterOutOfRange,
    RegularityViolated,
    ResonantParameter,
    StepTooLarge,
    TailNotConverged,
    TooCloseToWallOrOrigin,
)
from app.models.cosh_factor import CoshFactor
from app.models.ktype import SmallKTypeEntry
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.series import SeriesCoefficients, TruncationPolicy
from app.models.spectral import SpectralParameter
from app.models.weyl import WeylElement
from app.services.c_function_service import CFunctionService
from app.services.root_system_service import RootSystemService
from app.services.series_service import SeriesService
from app.utils.exact import format_rational, format_vector, scale, values_equal
from app.utils.formatting import format_complex

logger = logging.getLogger(__name__)

# Cartan points evaluated together per block.
BLOCK_SIZE = 256

EPS = float(np.finfo(float).eps)


class HypergeometricEvaluator:
    """F(Σ′, k, λ; ·) for one (Σ′, k, λ).

    The Weyl orbit of λ, the c̃(−wλ) weights and the normalization are fixed at
    construction; coefficient tables are built per truncation height on
    demand, and every point of one call is summed at the same height.
    """

    def __init__(
        self,
        service: "HypergeometricService",
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        policy: TruncationPolicy,
        perturb: bool = False,
    ):
        self.service = service
        self.system = system
        self.k = k
        self.policy = policy
        if perturb:
            spectral = service.series_service.perturbed(system, spectral)
        self.spectral = spectral

        at_rho = service.c_function_service.c_tilde(system, k, at_rho=True)
        if at_rho.order != 0:
            raise NotRegular(
                f"k = {k.signature} is not regular on {system.name}",
                details={"k": k.serialize(), "order": at_rho.order},
            )
        self.normalizer = at_rho.value

        self.elements: List[WeylElement] = service.root_service.weyl_elements(system)
        self.orbit: List[SpectralParameter] = [
            SpectralParameter.from_array(w.act_weight(spectral.array)) for w in self.elements
        ]
        self.weights = np.zeros(len(self.orbit), dtype=complex)
        for i, w_lambda in enumerate(self.orbit):
            value = service.c_function_service.c_tilde(system, k, -w_lambda)
            if value.is_pole:
                raise ResonantParameter(
                    "c̃(−wλ) has a pole; λ lies on a resonance hyperplane",
                    details={
                        "weyl_index": i,
                        "w_lambda": [format_complex(z) for z in w_lambda.coords],
                        "poles": [f.model_dump() for f in value.pole_flags],
                    },
                )
            self.weights[i] = value.value
        self.rho = service.series_service.rho(system, k)
        self._tables: Dict[int, List[SeriesCoefficients]] = {}

    def tables(self, height: int) -> List[SeriesCoefficients]:
        if height not in self._tables:
            self._tables[height] = self.service.series_service.hc_coefficients_batch(
                self.system, self.k, self.orbit, height
            )
            logger.debug(
                f"Built {len(self.orbit)} coefficient tables for {self.system.name} at height {height}"
            )
        return self._tables[height]

    def evaluate(self, point: Sequence[float], normalized: bool = True) -> complex:
        return complex(self.evaluate_many(np.atleast_2d(point), normalized)[0])

    def evaluate_many(
        self, points: np.ndarray, normalized: bool = True, strict: bool = True
    ) -> np.ndarray:
        """
        F (or F̃ when `normalized` is False) at each row of `points`.

        The tail of every Φ(wλ) is weighted by |c̃(−wλ) e^{(wλ+ρ)(H)}| and the
        sum is compared with max(|F̃|, |c̃(ρ)|), so the tolerance is relative to
        max(|F|, 1). ε·√N·Σ_w |c̃(−wλ)| Σ_μ |a_μ e^{(wλ+ρ+μ)(H)}| estimates the
        rounding error of the Weyl sum at height N; it does not shrink with N, so
        points where it exceeds precision_tol cannot be resolved at any height.

        Args:
            points: Rows of H in dual coordinates
            normalized: Divide by c̃(ρ(k))
            strict: Raise on points lost to cancellation; otherwise they are NaN

        Raises:
            TooCloseToWallOrOrigin: If a point is within wall_margin of a wall,
                or (strict) cancellation between the Weyl terms exceeds precision_tol
            TailNotConverged: If the height limit is reached without convergence
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        moved = np.stack([self._chamber_point(p) for p in points]) if len(points) else points
        height = self.policy.max_height
        limit = self.policy.height_limit or self.service.settings.series_height_limit
        reference = abs(self.normalizer)
        while True:
            total, tail, magnitude = self._sum_at_height(moved, height)
            size = np.abs(total)
            # recurrence errors grow like the square root of the height
            rounding = EPS * math.sqrt(height) * magnitude / np.maximum(size + tail, reference)
            lost = rounding > self.policy.precision_tol
            if strict and lost.any():
                worst = int(np.argmax(rounding))
                raise TooCloseToWallOrOrigin(
                    "Cancellation between the Weyl terms leaves too few digits at H",
                    details={
                        "point": [float(x) for x in points[worst]],
                        "rounding_estimate": float(rounding[worst]),
                        "precision_tol": self.policy.precision_tol,
                        "condition": float(magnitude[worst] / max(size[worst], reference)),
                        "max_height": height,
                    },
                )
            relative = np.where(lost, 0.0, tail / np.maximum(size, reference))
            worst_tail = float(np.max(relative)) if len(relative) else 0.0
            if worst_tail <= self.policy.tail_tol:
                break
            if height * 2 > limit:
                raise TailNotConverged(
                    f"Estimated relative tail {worst_tail:.3e} exceeds {self.policy.tail_tol:.1e}",
                    details={
                        "tail_estimate": worst_tail,
                        "tail_tol": self.policy.tail_tol,
                        "max_height": height,
                        "heuristic": True,
                    },
                )
            height *= 2
            logger.debug(f"Raising series height to {height} for {len(points)} points")
        if lost.any():
            logger.warning(
                f"{int(lost.sum())} of {len(points)} points lost to cancellation on {self.system.name}"
            )
            total = np.where(lost, np.nan + 0j, total)
        return total / self.normalizer if normalized else total

    def _chamber_point(self, point: np.ndarray) -> np.ndarray:
        _, moved = self.service.root_service.chamber_map(self.system, point)
        margin = float(np.max(self.system.positive_array @ moved))
        if margin > -self.policy.wall_margin:
            raise TooCloseToWallOrOrigin(
                "H is within the wall margin of a reflecting hyperplane",
                details={
                    "point": [float(x) for x in point],
                    "distance": -margin,
                    "wall_margin": self.policy.wall_margin,
                },
            )
        return moved

    def _sum_at_height(
        self, points: np.ndarray, height: int
    ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """F̃ at each point with its absolute tail estimate and Σ|terms|."""
        tables = self.tables(height)
        structure = self.service.series_service.structure(self.system, height)
        starts = structure.shell_starts[:-1][: height + 1]
        blocks = [points[i : i + BLOCK_SIZE] for i in range(0, len(points), BLOCK_SIZE)]
        tail_estimate = self.service.series_service.tail_estimate

        def run(block: np.ndarray) -> np.ndarray:
            exps = np.exp(structure.vectors @ block.T)
            total = np.zeros(len(block), dtype=complex)
            tail = np.zeros(len(block))
            magnitude = np.zeros(len(block))
            for weight, w_lambda, series in zip(self.weights, self.orbit, tables):
                if weight == 0:
                    continue
                shells = np.add.reduceat(series.coeffs[:, None] * exps, starts, axis=0)
                sizes = np.abs(shells)
                outer = weight * np.exp(block @ (w_lambda.array + self.rho))
                modulus = np.abs(outer)
                total += outer * shells.sum(axis=0)
                tail += modulus * np.array(
                    [tail_estimate(sizes[:, j]) if modulus[j] else 0.0 for j in range(len(block))]
                )
                magnitude += modulus * (np.abs(series.coeffs) @ exps)
            return np.stack([total, tail, magnitude])

        threads = max(1, int(self.service.settings.threads))
        if not blocks:
            empty = np.zeros(0)
            return empty.astype(complex), empty, empty
        if threads == 1 or len(blocks) == 1:
            parts = [run(b) for b in blocks]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(run, blocks))
        stacked = np.concatenate(parts, axis=1)
        return stacked[0], stacked[1].real, stacked[2].real


class HypergeometricService:
    """F, the cosh-factor, Υ and the radial Casimir check."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        series_service: Optional[SeriesService] = None,
        c_function_service: Optional[CFunctionService] = None,
        root_service: Optional[RootSystemService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)
        self.series_service = series_service or SeriesService(
            self.settings, root_service=self.root_service
        )
        self.c_function_service = c_function_service or CFunctionService(
            self.settings, root_service=self.root_service
        )

    def evaluator(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        policy: Optional[TruncationPolicy] = None,
        perturb: bool = False,
    ) -> HypergeometricEvaluator:
        return HypergeometricEvaluator(
            self, system, k, spectral, policy or TruncationPolicy.from_settings(), perturb
        )

    def f_eval(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        point: Sequence[float],
        policy: Optional[TruncationPolicy] = None,
        perturb: bool = False,
    ) -> complex:
        """
        Evaluate F(Σ′, k, λ; H).

        Args:
            system: Root system Σ′
            k: Regular multiplicity function
            spectral: λ
            point: H in dual coordinates
            policy: Truncation policy; settings defaults when omitted
            perturb: Shift λ by 10⁻⁶·i·ρ(𝟙) off resonances

        Raises:
            NotRegular: If c̃(ρ(k)) vanishes
            ResonantParameter: If some wλ is resonant or c̃(−wλ) has a pole
            TooCloseToWallOrOrigin: If H lies within wall_margin of a wall or the
                Weyl terms cancel beyond precision_tol
            TailNotConverged: If the height limit is reached without convergence
            WeylGroupTooLarge: If |W| exceeds the cap
        """
        return self.evaluator(system, k, spectral, policy, perturb).evaluate(point)

    def f_eval_many(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        points: np.ndarray,
        policy: Optional[TruncationPolicy] = None,
        perturb: bool = False,
        strict: bool = True,
    ) -> np.ndarray:
        """F at each row of `points`; with `strict` off, points lost to cancellation are NaN."""
        return self.evaluator(system, k, spectral, policy, perturb).evaluate_many(
            points, strict=strict
        )

    def complex_group_closed_form(
        self, system: RootSystem, spectral: SpectralParameter, point: Sequence[float]
    ) -> complex:
        """
        F for k ≡ 1 on a reduced system:

            Π_{α>0} ρ(α^∨)/λ(α^∨) · Σ_w sgn(w) e^{wλ(H)} / Σ_w sgn(w) e^{wρ(H)},  ρ = ρ(𝟙).
        """
        if not system.is_reduced:
            raise ParameterOutOfRange(
                "the alternating-sum formula needs a reduced system",
                details={"system": system.name},
            )
        h = np.asarray(point, dtype=float)
        rho = np.array([float(x) for x in system.rho_one])
        lam = spectral.array
        prefactor = 1.0 + 0j
        for root in system.positive_roots:
            prefactor *= complex(
                system.coroot_pairing(system.rho_one, root)
            ) / spectral.coroot_value(system, root)
        numerator = 0j
        denominator = 0.0
        for w in self.root_service.weyl_elements(system):
            numerator += w.sign * np.exp(w.act_weight(lam) @ h)
            denominator += w.sign * np.exp(w.act_weight(rho) @ h)
        return complex(prefactor * numerator / denominator)

    def check_regularity_relation(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        system_pi: RootSystem,
        k_pi: MultiplicityFunction,
    ) -> None:
        """
        (m_α + m_{2α})/2 = k^π_α + k^π_{2α} + k^π_{4α} for α ∈ Σ⁺∖2Σ⁺.

        Raises:
            RegularityViolated: On the first root where it fails
        """
        for root in system.indivisible_positive:
            lhs = (m.at(root) + m.at(scale(2, root))) * Fraction(1, 2)
            rhs = k_pi.at(root) + k_pi.at(scale(2, root)) + k_pi.at(scale(4, root))
            if not values_equal(lhs, rhs):
                raise RegularityViolated(
                    f"(m_α + m_2α)/2 ≠ k_α + k_2α + k_4α at α = {format_vector(root)}",
                    details={
                        "root": format_vector(root),
                        "lhs": format_rational(lhs),
                        "rhs": format_rational(rhs),
                    },
                )

    def cosh_factor(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        system_pi: RootSystem,
        k_pi: MultiplicityFunction,
    ) -> CoshFactor:
        """
        Π_{α∈Σ⁺∖2Σ⁺} cosh(α/2)^{−k^π_α} cosh(α)^{k^π_{4α} − m_{2α}/2}.

        Raises:
            MC1Violated: If Σ^π is not contained in Σ ∪ 2Σ
            RegularityViolated: If the regularity relation fails
        """
        self.c_function_service.check_mc1(system, system_pi)
        self.check_regularity_relation(system, m, system_pi, k_pi)
        return CoshFactor.from_pair(system, m, k_pi)

    def entry_cosh_factor(self, entry: SmallKTypeEntry, pair_index: int = 0) -> CoshFactor:
        pair = entry.pair(pair_index)
        return self.cosh_factor(entry.system, entry.m, pair.system_pi, pair.k_pi)

    def upsilon_eval(
        self,
        entry: SmallKTypeEntry,
        spectral: SpectralParameter,
        point: Sequence[float],
        policy: Optional[TruncationPolicy] = None,
        pair_index: int = 0,
    ) -> complex:
        """Υ^π(φ^π_λ)(H) = cosh-factor(H) · F(Σ^π, k^π, λ; H)."""
        return complex(
            self.upsilon_eval_many(entry, spectral, np.atleast_2d(point), policy, pair_index)[0]
        )

    def upsilon_eval_many(
        self,
        entry: SmallKTypeEntry,
        spectral: SpectralParameter,
        points: np.ndarray,
        policy: Optional[TruncationPolicy] = None,
        pair_index: int = 0,
    ) -> np.ndarray:
        pair = entry.pair(pair_index)
        factor = self.entry_cosh_factor(entry, pair_index)
        values = self.f_eval_many(pair.system_pi, pair.k_pi, spectral, points, policy)
        return factor.evaluate_many(points) * values

    def casimir_residual(
        self,
        entry: SmallKTypeEntry,
        spectral: SpectralParameter,
        point: Sequence[float],
        step: float = 1e-3,
        policy: Optional[TruncationPolicy] = None,
        pair_index: int = 0,
        kappa: Optional[MultiplicityFunction] = None,
    ) -> float:
        """
        Residual of the radial Casimir equation for Υ at H.

        Applies Ω_𝔞 + Σ_{α∈Σ⁺} m_α(coth α(H) ∂(H_α) − κ_α‖α‖²/(4cosh²(α(H)/2)))
        by fourth-order central differences along B-orthonormal directions and compares with
        ((λ,λ) − ‖ρ‖²)Υ, ρ = ½Σ m_α α.

        Args:
            entry: Catalog record with a valid pair
            spectral: λ
            point: H, off the walls
            step: Finite-difference step h
            policy: Truncation policy for F
            pair_index: Which valid pair to use
            kappa: Replaces the entry's κ^π in the operator

        Returns:
            float: |LHS − eigenvalue·Υ| / (1 + |Υ|)

        Raises:
            StepTooLarge: If the stencil comes within wall_margin of a wall
        """
        if step <= 0:
            raise ParameterOutOfRange("step must be positive", details={"step": step})
        policy = policy or TruncationPolicy.from_settings()
        system = entry.system
        m = entry.m
        kappa = kappa or entry.kappa
        h = np.asarray(point, dtype=float)
        basis = system.orthonormal_basis
        positive = system.positive_array

        root_values = positive @ h
        reach = 2.0 * step * np.max(np.abs(positive @ basis), axis=1)
        clearance = np.abs(root_values) - reach
        if np.any(clearance <= policy.wall_margin):
            raise StepTooLarge(
                f"Step {step} brings the stencil within {policy.wall_margin} of a wall",
                details={"step": step, "clearance": float(np.min(clearance))},
            )

        n = system.ambient_dim
        offsets = (2.0, 1.0, -1.0, -2.0)
        stencil = [h] + [h + o * step * basis[:, i] for i in range(n) for o in offsets]
        values = self.upsilon_eval_many(entry, spectral, np.stack(stencil), policy, pair_index)
        center = values[0]
        plus2, plus1, minus1, minus2 = (values[1 + j :: 4] for j in range(4))
        gradient = (-plus2 + 8.0 * plus1 - 8.0 * minus1 + minus2) / (12.0 * step)
        laplacian = complex(
            np.sum(-plus2 + 16.0 * plus1 - 30.0 * center + 16.0 * minus1 - minus2)
            / (12.0 * step**2)
        )

        gram = system.gram_array
        lower_inverse = np.linalg.inv(basis)
        lhs = laplacian
        for idx, root in enumerate(system.positive_roots):
            m_alpha = float(m.at(root))
            if m_alpha == 0:
                continue
            t = float(root_values[idx])
            direction = lower_inverse @ (gram @ positive[idx])
            derivative = complex(direction @ gradient)
            norm2 = float(system.norm2(root))
            kappa_alpha = float(kappa.at(root))
            lhs += m_alpha * (
                derivative / math.tanh(t)
                - kappa_alpha * norm2 / (4.0 * math.cosh(t / 2.0) ** 2) * center
            )

        rho = 0.5 * sum(float(m.at(r)) * positive[i] for i, r in enumerate(system.positive_roots))
        lam = spectral.array
        eigen = complex(lam @ gram @ lam) - float(rho @ gram @ rho)
        residual = abs(lhs - eigen * center) / (1.0 + abs(center))
        logger.debug(f"Casimir residual {residual:.3e} for {entry.group_label} {entry.ktype_name}")
        return float(residual)

    def asymptotic_c(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        point: Sequence[float],
        t: float,
        policy: Optional[TruncationPolicy] = None,
    ) -> complex:
        """
        e^{t(−λ+ρ(k))(H)} F(λ; tH), which tends to c(λ) as t grows.

        Raises:
            ParameterOutOfRange: If H is not in 𝔞₊ or Re λ(α^∨) ≤ 0 for some α > 0
        """
        h = np.asarray(point, dtype=float)
        if np.any(system.positive_array @ h <= 0):
            raise ParameterOutOfRange(
                "H must lie in the positive chamber", details={"point": h.tolist()}
            )
        coroots = [spectral.coroot_value(system, r).real for r in system.positive_roots]
        if min(coroots) <= 0:
            raise ParameterOutOfRange(
                "Re λ(α^∨) must be positive on positive roots",
                details={"min_coroot_value": min(coroots)},
            )
        value = self.f_eval(system, k, spectral, t * h, policy)
        rho = self.series_service.rho(system, k)
        return complex(np.exp(t * ((-spectral.array + rho) @ h)) * value)

    def potential_from_multiplicity(
        self, system: RootSystem, k: MultiplicityFunction, point: Sequence[float]
    ) -> float:
        """Σ_{α>0} k_α(1 − k_α − 2k_{2α})‖α‖² / (4 sinh²(α(H)/2))."""
        h = np.asarray(point, dtype=float)
        total = 0.0
        for root in system.positive_roots:
            k_alpha = float(k.at(root))
            if k_alpha == 0:
                continue
            k_double = float(k.at(scale(2, root)))
            t = float(np.array(root, dtype=float) @ h)
            total += (
                k_alpha * (1 - k_alpha - 2 * k_double) * float(system.norm2(root))
                / (4.0 * math.sinh(t / 2.0) ** 2)
            )
        return total

    def potential_from_group(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        kappa: MultiplicityFunction,
        point: Sequence[float],
    ) -> float:
        """Σ_{α>0} (m_α‖α‖²/4)(−κ_α/sinh²(α/2) + (2 − m_α − 2m_{2α} + 4κ_α)/sinh²α)."""
        h = np.asarray(point, dtype=float)
        total = 0.0
        for root in system.positive_roots:
            m_alpha = float(m.at(root))
            if m_alpha == 0:
                continue
            m_double = float(m.at(scale(2, root)))
            kappa_alpha = float(kappa.at(root))
            t = float(np.array(root, dtype=float) @ h)
            total += (m_alpha * float(system.norm2(root)) / 4.0) * (
                -kappa_alpha / math.sinh(t / 2.0) ** 2
                + (2 - m_alpha - 2 * m_double + 4 * kappa_alpha) / math.sinh(t) ** 2
            )
        return total
