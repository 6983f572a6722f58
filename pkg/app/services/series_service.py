"""Harish-Chandra series Φ(λ) = Σ_μ a_μ e^{(λ+ρ(k)+μ)} on the negative chamber.

Substituting the series into L(k)Φ = ((λ,λ) − (ρ(k),ρ(k)))Φ, with
coth(α/2) = −(1 + 2Σ_{j≥1} e^{jα}) on 𝔞₋, gives for μ ≠ 0

    ((μ,μ) + 2(μ,λ)) a_μ = 2 Σ_{α>0} k_α Σ_{j≥1} (λ + ρ(k) + μ − jα, α) a_{μ−jα}

with a_0 = 1. The inner sum over j is a running sum along the α-string
through μ, so each height shell needs one predecessor per positive root.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import Settings, get_settings
from app.exceptions import (
    HeightOverflow,
    OutsideNegativeChamber,
    ResonantParameter,
    TailNotConverged,
)
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.series import SeriesCoefficients, TruncationPolicy
from app.models.spectral import SpectralParameter
from app.services.root_system_service import RootSystemService
from app.utils.cache import CoefficientCache, get_shared_cache

logger = logging.getLogger(__name__)

PERTURBATION = 1e-6
# Shells inspected by the tail estimate.
TAIL_WINDOW = 4


@dataclass(frozen=True, eq=False)
class ConeStructure:
    """Geometry of the cone points up to a height, shared by every (k, λ)."""

    points: np.ndarray
    heights: np.ndarray
    shell_starts: np.ndarray
    vectors: np.ndarray
    mu_norm2: np.ndarray
    mu_alpha: np.ndarray
    """(μ, α) for every point and positive root."""

    predecessors: np.ndarray
    """Index of μ − α per positive root, −1 when it leaves the cone."""

    codes: Optional[np.ndarray]
    radix: int

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given coefficient rows, −1 for rows outside the table."""
        inside = np.all(rows >= 0, axis=1) & (rows.sum(axis=1) <= self.radix - 1)
        result = np.full(rows.shape[0], -1, dtype=np.int64)
        if not inside.any():
            return result
        if self.codes is not None:
            weights = self.radix ** np.arange(rows.shape[1], dtype=np.int64)
            keys = rows[inside] @ weights
            order = np.argsort(self.codes)
            pos = np.searchsorted(self.codes, keys, sorter=order)
            result[inside] = order[np.minimum(pos, len(order) - 1)]
            return result
        index = {tuple(r): i for i, r in enumerate(self.points.tolist())}
        result[inside] = [index[tuple(r)] for r in rows[inside].tolist()]
        return result


class SeriesService:
    """Coefficient tables, truncated evaluation and the eigen-equation check."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        cache: Optional[CoefficientCache] = None,
        root_service: Optional[RootSystemService] = None,
    ):
        """
        Initialize the series service.

        Args:
            settings: Application settings; read from the environment when omitted
            cache: Coefficient cache; the process-wide cache when omitted
            root_service: Root system service used for cone enumeration
        """
        self.settings = settings or get_settings()
        self.cache = cache if cache is not None else get_shared_cache()
        self.root_service = root_service or RootSystemService(self.settings)

    def structure(self, system: RootSystem, max_height: int) -> ConeStructure:
        key = ("cone", max_height)
        cached = system.memo.get(key)
        if cached is not None:
            return cached

        points = self.root_service.cone_points(system, max_height)
        heights = points.sum(axis=1)
        shell_starts = np.searchsorted(heights, np.arange(max_height + 2))
        vectors = points @ system.simple_array
        gram = system.gram_array
        mu_norm2 = np.einsum("pi,ij,pj->p", vectors, gram, vectors)
        mu_alpha = vectors @ gram @ system.positive_array.T

        radix = max_height + 1
        codes = None
        if system.rank * np.log2(radix) < 62:
            codes = points @ (radix ** np.arange(system.rank, dtype=np.int64))
        structure = ConeStructure(
            points=points,
            heights=heights,
            shell_starts=shell_starts,
            vectors=vectors,
            mu_norm2=mu_norm2,
            mu_alpha=mu_alpha,
            predecessors=np.empty((0, 0), dtype=np.int64),
            codes=codes,
            radix=radix,
        )
        predecessors = np.stack(
            [
                structure.lookup(points - np.array(c, dtype=np.int64))
                for c in system.positive_coords
            ]
        )
        structure = ConeStructure(
            points=points,
            heights=heights,
            shell_starts=shell_starts,
            vectors=vectors,
            mu_norm2=mu_norm2,
            mu_alpha=mu_alpha,
            predecessors=predecessors,
            codes=codes,
            radix=radix,
        )
        system.memo[key] = structure
        logger.debug(
            f"Cone structure for {system.name} up to height {max_height}: {len(points)} points"
        )
        return structure

    def k_vector(self, system: RootSystem, k: MultiplicityFunction) -> np.ndarray:
        return np.array([complex(k.at(r)) for r in system.positive_roots], dtype=complex)

    def rho(self, system: RootSystem, k: MultiplicityFunction) -> np.ndarray:
        return np.array(
            [complex(x) for x in self.root_service.rho_weighted(system, k)], dtype=complex
        )

    def perturbed(self, system: RootSystem, spectral: SpectralParameter) -> SpectralParameter:
        """λ + 10⁻⁶·i·ρ(𝟙), off every resonance hyperplane of a real λ."""
        shift = np.array([float(x) for x in system.rho_one]) * 1j * PERTURBATION
        return SpectralParameter.from_array(spectral.array + shift)

    def hc_coefficients(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        max_height: int,
        perturb: bool = False,
    ) -> SeriesCoefficients:
        """
        Harish-Chandra series coefficients a_μ for height ≤ max_height.

        Args:
            system: Root system Σ′
            k: Multiplicity function on Σ′
            spectral: λ
            max_height: Truncation height N
            perturb: Shift λ off resonances instead of raising

        Returns:
            SeriesCoefficients: The table, a_0 = 1

        Raises:
            ResonantParameter: If (μ,μ) + 2(μ,λ) vanishes for some μ ≠ 0
            HeightOverflow: If the table would be too large
        """
        return self.hc_coefficients_batch(system, k, [spectral], max_height, perturb)[0]

    def hc_coefficients_batch(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectrals: Sequence[SpectralParameter],
        max_height: int,
        perturb: bool = False,
    ) -> List[SeriesCoefficients]:
        """Coefficient tables for several λ at once (e.g. the orbit Wλ)."""
        if perturb:
            spectrals = [self.perturbed(system, s) for s in spectrals]
        structure = self.structure(system, max_height)

        results: Dict[int, np.ndarray] = {}
        missing: List[int] = []
        keys = []
        for i, spectral in enumerate(spectrals):
            key = f"{system.signature}|{k.signature}|{spectral.signature}|{max_height}"
            keys.append(key)
            cached = self.cache.read(key)
            if cached is not None and cached.shape == (len(structure.points),):
                results[i] = cached
            else:
                missing.append(i)

        if missing:
            lambdas = np.stack([spectrals[i].array for i in missing], axis=1)
            table = self._solve(system, k, lambdas, structure)
            for column, i in enumerate(missing):
                results[i] = table[:, column]
                self.cache.write(keys[i], table[:, column])

        return [
            SeriesCoefficients(
                system=system,
                k=k,
                spectral=spectral,
                points=structure.points,
                heights=structure.heights,
                coeffs=results[i],
                max_height=max_height,
            )
            for i, spectral in enumerate(spectrals)
        ]

    def _solve(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        lambdas: np.ndarray,
        structure: ConeStructure,
    ) -> np.ndarray:
        """Shell-by-shell recurrence for a batch of λ (columns of `lambdas`)."""
        gram = system.gram_array
        n_points = len(structure.points)
        batch = lambdas.shape[1]

        denominators = structure.mu_norm2[:, None] + 2.0 * (structure.vectors @ gram @ lambdas)
        size = np.real(np.einsum("ib,ij,jb->b", np.conj(lambdas), gram, lambdas))
        threshold = self.settings.resonance_tol * (1.0 + size)
        resonant = np.abs(denominators[1:]) < threshold[None, :]
        if resonant.any():
            row, column = np.argwhere(resonant)[0]
            mu = [int(c) for c in structure.points[row + 1]]
            raise ResonantParameter(
                f"(μ,μ) + 2(μ,λ) vanishes at μ = {mu}",
                details={
                    "mu": mu,
                    "denominator": abs(complex(denominators[row + 1, column])),
                    "threshold": float(threshold[column]),
                },
            )

        k_vec = self.k_vector(system, k)
        active = np.nonzero(k_vec != 0)[0]
        coeffs = np.zeros((n_points, batch), dtype=complex)
        coeffs[0] = 1.0
        if active.size == 0:
            return coeffs

        rho = self.rho(system, k)
        positive = system.positive_array
        # (λ + ρ, α) per root and λ, then (λ + ρ + μ, α) = that + (μ, α)
        base = (lambdas.T @ gram @ positive.T).T + (rho @ gram @ positive.T)[:, None]
        running = np.zeros((len(positive), n_points, batch), dtype=complex)
        for a in active:
            running[a, 0] = base[a]

        for h in range(1, len(structure.shell_starts) - 1):
            lo, hi = structure.shell_starts[h], structure.shell_starts[h + 1]
            if lo == hi:
                continue
            rhs = np.zeros((hi - lo, batch), dtype=complex)
            for a in active:
                pred = structure.predecessors[a, lo:hi]
                valid = pred >= 0
                if valid.any():
                    rhs[valid] += 2.0 * k_vec[a] * running[a, pred[valid]]
            shell = rhs / denominators[lo:hi]
            coeffs[lo:hi] = shell
            for a in active:
                pred = structure.predecessors[a, lo:hi]
                valid = pred >= 0
                values = (base[a][None, :] + structure.mu_alpha[lo:hi, a][:, None]) * shell
                values[valid] += running[a, pred[valid]]
                running[a, lo:hi] = values
        return coeffs

    def phi_eval(
        self,
        series: SeriesCoefficients,
        point: Sequence[float],
        policy: TruncationPolicy,
    ) -> complex:
        """
        Evaluate Φ(λ; H) = e^{(λ+ρ)(H)} Σ_μ a_μ e^{μ(H)} for H in 𝔞₋.

        Raises:
            OutsideNegativeChamber: If some positive root has α(H) > −wall_margin
            TailNotConverged: If the estimated relative tail exceeds tail_tol
        """
        value, _ = self.phi_eval_with_tail(series, point, policy)
        return value

    def phi_eval_with_tail(
        self,
        series: SeriesCoefficients,
        point: Sequence[float],
        policy: TruncationPolicy,
    ) -> Tuple[complex, float]:
        system = series.system
        h = np.asarray(point, dtype=float)
        margins = system.positive_array @ h
        if np.any(margins > -policy.wall_margin):
            raise OutsideNegativeChamber(
                "H is not inside the negative chamber",
                details={
                    "max_root_value": float(np.max(margins)),
                    "wall_margin": policy.wall_margin,
                },
            )
        structure = self.structure(system, series.max_height)
        terms = series.coeffs * np.exp(structure.vectors @ h)
        shells = np.add.reduceat(terms, structure.shell_starts[:-1][: series.max_height + 1])
        total = complex(np.sum(shells))
        tail = self.tail_estimate(np.abs(shells))
        relative = tail / abs(total) if total != 0 else (0.0 if tail == 0 else np.inf)
        if relative > policy.tail_tol:
            logger.warning(
                f"Series tail {relative:.3e} above {policy.tail_tol:.1e} at height {series.max_height}"
            )
            raise TailNotConverged(
                f"Estimated relative tail {relative:.3e} exceeds {policy.tail_tol:.1e}",
                details={
                    "tail_estimate": float(relative),
                    "tail_tol": policy.tail_tol,
                    "max_height": series.max_height,
                    "heuristic": True,
                },
            )
        prefactor = np.exp((series.spectral.array + self.rho(system, series.k)) @ h)
        return complex(prefactor * total), float(relative)

    def tail_estimate(self, shell_sizes: np.ndarray) -> float:
        """Geometric extrapolation from the last two nonzero shells."""
        window = shell_sizes[-TAIL_WINDOW:]
        offsets = np.nonzero(window)[0]
        if offsets.size == 0:
            return 0.0
        if offsets.size == 1:
            return float(window[offsets[-1]])
        last, prev = offsets[-1], offsets[-2]
        gap = last - prev
        ratio = (window[last] / window[prev]) ** (1.0 / gap)
        if ratio >= 1.0:
            return float(np.inf)
        return float(window[last] * ratio / (1.0 - ratio))

    def phi_eval_adaptive(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        point: Sequence[float],
        policy: TruncationPolicy,
        perturb: bool = False,
    ) -> complex:
        """Evaluate Φ, doubling the height on TailNotConverged up to the height limit."""
        height = policy.max_height
        limit = policy.height_limit or self.settings.series_height_limit
        while True:
            series = self.hc_coefficients(system, k, spectral, height, perturb)
            try:
                return self.phi_eval(series, point, policy)
            except TailNotConverged:
                if height * 2 > limit:
                    raise
                height *= 2
                logger.debug(f"Raising series height to {height}")

    def eigenvalue(self, series: SeriesCoefficients) -> complex:
        """(λ, λ) − (ρ(k), ρ(k))."""
        gram = series.system.gram_array
        lam = series.spectral.array
        rho = self.rho(series.system, series.k)
        return complex(_pair(lam, gram, lam) - _pair(rho, gram, rho))

    def eigen_residual(self, series: SeriesCoefficients, relative: bool = True) -> float:
        """
        Apply L(k) to the truncated series term by term and compare with the eigenvalue.

        Each e^ν is an eigenfunction of the Laplacian with eigenvalue (ν,ν) and of
        ∂_α with (ν, α); coth(α/2) is expanded on 𝔞₋. The j-sums are taken
        directly, independently of the running sums used by the recurrence.

        Returns:
            float: The largest mismatch over μ, relative to the size of the terms
                when `relative` is set
        """
        system = series.system
        structure = self.structure(system, series.max_height)
        gram = system.gram_array
        a = series.coeffs
        lam = series.spectral.array
        rho = self.rho(system, series.k)
        nu = lam[None, :] + rho[None, :] + structure.vectors
        nu_norm2 = _pair_rows(nu, gram)
        nu_alpha = nu @ gram @ system.positive_array.T
        eigen = _pair(lam, gram, lam) - _pair(rho, gram, rho)
        k_vec = self.k_vector(system, series.k)

        lhs = nu_norm2 * a
        scale = np.abs(nu_norm2 * a) + np.abs(eigen * a)
        for idx, coords in enumerate(system.positive_coords):
            k_alpha = k_vec[idx]
            if k_alpha == 0:
                continue
            diagonal = k_alpha * nu_alpha[:, idx] * a
            lhs = lhs - diagonal
            scale = scale + np.abs(diagonal)
            shift = np.array(coords, dtype=np.int64)
            j = 1
            while True:
                rows = structure.points - j * shift
                pred = structure.lookup(rows)
                valid = pred >= 0
                if not valid.any():
                    break
                term = np.zeros(len(a), dtype=complex)
                term[valid] = 2.0 * k_alpha * nu_alpha[pred[valid], idx] * a[pred[valid]]
                lhs = lhs - term
                scale = scale + np.abs(term)
                j += 1
        residual = np.abs(lhs - eigen * a)
        if not relative:
            return float(np.max(residual))
        with np.errstate(invalid="ignore", divide="ignore"):
            ratios = np.where(scale > 0, residual / scale, 0.0)
        return float(np.max(ratios))


def _pair(u: np.ndarray, gram: np.ndarray, v: np.ndarray) -> complex:
    return complex(u @ gram @ v)


def _pair_rows(rows: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.einsum("pi,ij,pj->p", rows, gram, rows)
