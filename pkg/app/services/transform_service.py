"""Hypergeometric Fourier transform, its inverse and the π-spherical transform.

Functions on 𝔞 are sampled on tensor grids in the coordinates x of H = Ux and
spectra in the coordinates ξ of λ = iVξ, where (U, V) is the span frame of the
root system, so that λ(H) = ξ·x and

    ℱf(λ) = (1/|W|) ∫ f(H) F(−λ; H) δ(H) dx,
    f(H)  = (1/|W|) (2π)^{−r} ∫ ℱf(λ) F(λ; H) |c(λ)|⁻² dξ.

In rank one F is summed in its Jacobi-function form near the origin and from
the Harish-Chandra series elsewhere. Rank two uses the series only and leaves
nodes within the cubature wall margin out of every integral.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import RegularGridInterpolator

from app.config import Settings, get_settings
from app.exceptions import (
    MC1Violated,
    NonnegativityViolated,
    ParameterOutOfRange,
    ResonantParameter,
)
from app.models.ktype import SmallKTypeEntry
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.sampled import SampledFunction, WeightKind, WeightSpec
from app.models.series import TruncationPolicy
from app.models.spectral import SpectralParameter
from app.schemas.transform import RoundtripReport
from app.services.c_function_service import CFunctionService
from app.services.hypergeometric_service import HypergeometricService
from app.services.jacobi_service import JacobiService
from app.services.root_system_service import RootSystemService
from app.utils.exact import scale

logger = logging.getLogger(__name__)

Frame = Tuple[np.ndarray, np.ndarray]

MAX_RANK = 2

# Jacobi form is used while |ℓ|·s stays below the phase limit and tanh²s below
# the argument limit; s below MIN_SERIES_S always goes to the Jacobi form.
GAUSS_PHASE_LIMIT = 8.0
GAUSS_ARGUMENT_LIMIT = 0.9
MIN_SERIES_S = 0.05

CUBATURE_WALL_MARGIN = 0.1
SPECTRAL_TOL = 1e-8

# Bump: exp(−BUMP_DECAY r²/w²), cut off smoothly between BUMP_PLATEAU·w and w.
BUMP_DECAY = 18.0
BUMP_PLATEAU = 0.75

# Spectral grid used by roundtrip when none is given: radius and step in units of 1/width.
DEFAULT_SPECTRAL_RADIUS = 60.0
DEFAULT_SPECTRAL_STEP = 0.5

# Simple-root values of the point where the weight-ratio constant is read off.
REFERENCE_SIMPLE_VALUES = (0.7, 1.1)


def trapezoid_weights(axes: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor trapezoid weights, flattened in the C order of `SampledFunction.points`."""
    weights = np.ones(1)
    for axis in axes:
        axis = np.asarray(axis, dtype=float)
        one_d = trapezoid(np.eye(len(axis)), x=axis, axis=0)
        weights = np.multiply.outer(weights, one_d).ravel()
    return weights


def smooth_cutoff(t: np.ndarray) -> np.ndarray:
    """1 for t ≤ BUMP_PLATEAU, 0 for t ≥ 1, C^∞ in between."""
    tau = np.clip((np.asarray(t, dtype=float) - BUMP_PLATEAU) / (1.0 - BUMP_PLATEAU), 0.0, 1.0)

    def g(u):
        out = np.zeros_like(u)
        positive = u > 0
        out[positive] = np.exp(-1.0 / u[positive])
        return out

    left, right = g(1.0 - tau), g(tau)
    return left / (left + right)


class TransformService:
    """Forward and inverse transforms on sampled functions of rank ≤ 2."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        root_service: Optional[RootSystemService] = None,
        c_function_service: Optional[CFunctionService] = None,
        hypergeometric_service: Optional[HypergeometricService] = None,
        jacobi_service: Optional[JacobiService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)
        self.c_function_service = c_function_service or CFunctionService(
            self.settings, root_service=self.root_service
        )
        self.hypergeometric_service = hypergeometric_service or HypergeometricService(
            self.settings,
            c_function_service=self.c_function_service,
            root_service=self.root_service,
        )
        self.jacobi_service = jacobi_service or JacobiService(self.settings)

    # Grids and test functions

    def check_rank(self, system: RootSystem) -> None:
        if system.rank > MAX_RANK:
            raise ParameterOutOfRange(
                f"Transforms are implemented for rank ≤ {MAX_RANK}, got {system.name}",
                details={"rank": system.rank, "max_rank": MAX_RANK},
            )

    def grid_axes(self, system: RootSystem, radius: float, points: int) -> Tuple[np.ndarray, ...]:
        if points < 2 or radius <= 0:
            raise ParameterOutOfRange(
                "A grid needs a positive radius and at least two points per axis",
                details={"radius": radius, "points": points},
            )
        axis = np.linspace(-radius, radius, points)
        return tuple(axis.copy() for _ in range(system.rank))

    def cartan_points(self, frame: Frame, x: np.ndarray) -> np.ndarray:
        """Dual coordinates of H = Ux, one row per point."""
        return np.atleast_2d(x) @ frame[0].T

    def spectral_at(self, frame: Frame, xi: Sequence[float]) -> SpectralParameter:
        """λ = iVξ."""
        return SpectralParameter.from_array(1j * (frame[1] @ np.asarray(xi, dtype=float)))

    def weyl_order(self, system: RootSystem) -> int:
        return len(self.root_service.weyl_elements(system))

    def bump(
        self,
        system: RootSystem,
        width: float,
        points: int,
        radius: Optional[float] = None,
    ) -> SampledFunction:
        """A smooth W-invariant bump supported in the ball of radius `width`."""
        self.check_rank(system)
        if width <= 0:
            raise ParameterOutOfRange("Bump width must be positive", details={"width": width})
        axes = self.grid_axes(system, radius or width, points)
        mesh = np.meshgrid(*axes, indexing="ij")
        r = np.sqrt(sum(m**2 for m in mesh))
        values = np.exp(-BUMP_DECAY * (r / width) ** 2) * smooth_cutoff(r / width)
        return SampledFunction(axes=axes, values=values, support_radius=width)

    def symmetrize(
        self, system: RootSystem, f: SampledFunction, frame: Optional[Frame] = None
    ) -> SampledFunction:
        """(1/|W|) Σ_w f(w·), read off the grid by linear interpolation (0 outside)."""
        frame = frame or system.span_frame
        elements = self.root_service.weyl_elements(system)
        values = np.asarray(f.values)
        parts = [values.real, values.imag] if np.iscomplexobj(values) else [values]
        interpolators = [
            RegularGridInterpolator(f.axes, part, bounds_error=False, fill_value=0.0)
            for part in parts
        ]
        heights = self.cartan_points(frame, f.points())
        to_frame = system.gram_inverse_array @ frame[0]
        total = np.zeros(len(heights), dtype=values.dtype)
        for w in elements:
            moved = (heights @ w.cartan_action.T) @ to_frame
            sampled = [interp(moved) for interp in interpolators]
            total = total + (sampled[0] + 1j * sampled[1] if len(sampled) == 2 else sampled[0])
        return f.with_values(total / len(elements))

    # Weights

    def weight_eval(self, spec: WeightSpec, points: np.ndarray) -> np.ndarray:
        """
        δ_{G/K} = Π|2 sinh α|^{m_α} or δ(Σ′,k) = Π|2 sinh(α/2)|^{2k_α} at each row of `points`.

        The normalized variants divide each sinh by ‖α‖ (resp. ‖α/2‖).
        """
        system = spec.multiplicity.system
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.ones(len(points))
        for root in system.positive_roots:
            exponent = spec.multiplicity.at(root)
            if exponent == 0:
                continue
            exponent = float(np.real(complex(exponent)))
            t = points @ np.array(root, dtype=float)
            norm = math.sqrt(float(system.norm2(root)))
            if spec.kind == WeightKind.GROUP:
                base = np.abs(np.sinh(t)) / norm if spec.normalized else np.abs(2 * np.sinh(t))
            else:
                t = t / 2
                norm = norm / 2
                exponent = 2 * exponent
                base = np.abs(np.sinh(t)) / norm if spec.normalized else np.abs(2 * np.sinh(t))
            with np.errstate(divide="ignore"):
                values = values * base**exponent
        return values

    def weight_ratio(
        self,
        entry: SmallKTypeEntry,
        points: np.ndarray,
        pair_index: int = 0,
        normalized: bool = False,
    ) -> np.ndarray:
        """δ_{G/K}^{−½} δ(Σ^π, k^π)^{½} at each row of `points`."""
        pair = entry.pair(pair_index)
        group = self.weight_eval(WeightSpec(WeightKind.GROUP, entry.m, normalized), points)
        matched = self.weight_eval(
            WeightSpec(WeightKind.MULTIPLICITY, pair.k_pi, normalized), points
        )
        return np.sqrt(matched / group)

    def reference_point(self, system: RootSystem) -> np.ndarray:
        return self.root_service.cartan_point(system, REFERENCE_SIMPLE_VALUES[: system.rank])

    def ratio_constant(
        self,
        entry: SmallKTypeEntry,
        pair_index: int = 0,
        point: Optional[Sequence[float]] = None,
    ) -> float:
        """The constant quotient of the normalized and plain weight ratios."""
        h = np.atleast_2d(point if point is not None else self.reference_point(entry.system))
        normalized = self.weight_ratio(entry, h, pair_index, normalized=True)
        plain = self.weight_ratio(entry, h, pair_index)
        return float(normalized[0] / plain[0])

    def spherical_prefactor(self, entry: SmallKTypeEntry, pair_index: int = 0) -> float:
        """2^e, or the weight-ratio constant when Σ^π ⊄ Σ ∪ 2Σ."""
        pair = entry.pair(pair_index)
        try:
            e = self.c_function_service.e_exponent(entry.system, entry.m, pair.system_pi, pair.k_pi)
        except MC1Violated:
            constant = self.ratio_constant(entry, pair_index)
            logger.debug(f"MC1 fails for {entry.ktype_name}; using ratio constant {constant!r}")
            return constant
        return 2.0 ** float(e)

    # Radial values of F

    def excluded_mask(self, system: RootSystem, points: np.ndarray) -> np.ndarray:
        """Nodes left out of rank-two cubature: within the margin of a wall."""
        points = np.atleast_2d(points)
        if system.rank == 1:
            return np.zeros(len(points), dtype=bool)
        distance = np.min(np.abs(points @ system.positive_array.T), axis=1)
        return distance < CUBATURE_WALL_MARGIN

    def radial_values(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        points: np.ndarray,
    ) -> np.ndarray:
        """F(Σ′, k, λ; H) at each row of `points`; NaN at excluded nodes."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if system.rank == 1:
            return self._rank_one_values(system, k, spectral, points)
        values = np.full(len(points), np.nan, dtype=complex)
        keep = ~self.excluded_mask(system, points)
        if keep.any():
            policy = TruncationPolicy.from_settings(wall_margin=CUBATURE_WALL_MARGIN)
            values[keep] = self._series_values(system, k, spectral, points[keep], policy)
        return values

    def _rank_one_values(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        points: np.ndarray,
    ) -> np.ndarray:
        root = system.indivisible_positive[0]
        k1 = complex(k.at(root))
        k2 = complex(k.at(scale(2, root)))
        ell = spectral.coroot_value(system, root)
        s = np.abs(points @ np.array(root, dtype=float)) / 2
        z = np.tanh(s) ** 2
        if abs(ell) < 1e-9:
            gauss = z <= 0.999
        else:
            limit = max(GAUSS_PHASE_LIMIT / abs(ell), MIN_SERIES_S)
            gauss = (s <= limit) & (z <= GAUSS_ARGUMENT_LIMIT)
        values = np.empty(len(points), dtype=complex)
        if gauss.any():
            values[gauss] = self.jacobi_service.jacobi_function_many(k1, k2, ell, s[gauss])
        if (~gauss).any():
            values[~gauss] = self._series_values(
                system, k, spectral, points[~gauss], TruncationPolicy.from_settings()
            )
        return values

    def _series_values(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: SpectralParameter,
        points: np.ndarray,
        policy: TruncationPolicy,
    ) -> np.ndarray:
        service = self.hypergeometric_service
        try:
            return service.f_eval_many(system, k, spectral, points, policy, strict=False)
        except ResonantParameter:
            logger.debug(f"Resonant λ = {spectral.signature}; nudging off the hyperplane")
            return service.f_eval_many(
                system, k, spectral, points, policy, perturb=True, strict=False
            )

    # Transforms

    def _map_nodes(self, fn: Callable[[np.ndarray], object], nodes: np.ndarray) -> List:
        threads = max(1, int(self.settings.threads))
        if threads == 1 or len(nodes) < 2:
            return [fn(node) for node in nodes]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, nodes))

    def _forward(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        frame: Frame,
        grid: SampledFunction,
        density: np.ndarray,
        spectral_axes: Sequence[np.ndarray],
    ) -> SampledFunction:
        """(1/|W|) Σ_x q(x) density(x) F(−λ; Ux) for every λ = iVξ on the spectral grid."""
        heights = self.cartan_points(frame, grid.points())
        weights = trapezoid_weights(grid.axes) * np.nan_to_num(density, nan=0.0, posinf=0.0)
        support = weights != 0
        heights, weights = heights[support], weights[support]
        order = self.weyl_order(system)
        spectrum = SampledFunction(
            axes=tuple(np.asarray(a, dtype=float) for a in spectral_axes),
            values=np.zeros(tuple(len(a) for a in spectral_axes), dtype=complex),
        )

        def one(xi: np.ndarray) -> complex:
            if not len(heights):
                return 0j
            values = self.radial_values(system, k, -self.spectral_at(frame, xi), heights)
            return complex(np.sum(weights * np.nan_to_num(values, nan=0.0)) / order)

        nodes = spectrum.points()
        logger.debug(
            f"Forward transform on {system.name}: {len(heights)} nodes in support, {len(nodes)} spectral nodes"
        )
        return spectrum.with_values(np.array(self._map_nodes(one, nodes)))

    def hft_forward(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        f: SampledFunction,
        spectral_axes: Sequence[np.ndarray],
    ) -> SampledFunction:
        """
        ℱf(λ) = (1/|W|) ∫ f(H) F(Σ′, k, −λ; H) δ(Σ′, k; H) dH on the spectral grid.

        `f` is W-symmetrized before integration. Nodes where δ is not finite
        (walls with negative k) contribute nothing.
        """
        self.check_rank(system)
        frame = system.span_frame
        f = self.symmetrize(system, f, frame)
        weight = self.weight_eval(
            WeightSpec(WeightKind.MULTIPLICITY, k), self.cartan_points(frame, f.points())
        )
        return self._forward(system, k, frame, f, f.flat_values() * weight, spectral_axes)

    def spherical_forward(
        self,
        entry: SmallKTypeEntry,
        f: SampledFunction,
        spectral_axes: Sequence[np.ndarray],
        pair_index: int = 0,
    ) -> SampledFunction:
        """
        f̂ = 2^e ℱ(f δ_{G/K}^{½} δ(Σ^π, k^π)^{−½}) in the frame of Σ.

        The ℱ integrand is f (δ_{G/K} δ(Σ^π, k^π))^{½} F(Σ^π, k^π, −λ), which stays
        finite on walls where the two weights separately vanish or blow up.
        """
        system = entry.system
        self.check_rank(system)
        pair = entry.pair(pair_index)
        frame = system.span_frame
        f = self.symmetrize(system, f, frame)
        heights = self.cartan_points(frame, f.points())
        group = self.weight_eval(WeightSpec(WeightKind.GROUP, entry.m), heights)
        matched = self.weight_eval(WeightSpec(WeightKind.MULTIPLICITY, pair.k_pi), heights)
        with np.errstate(invalid="ignore"):
            density = np.sqrt(group * matched)
        prefactor = self.spherical_prefactor(entry, pair_index)
        return self._forward(
            pair.system_pi, pair.k_pi, frame, f, prefactor * f.flat_values() * density, spectral_axes
        )

    def spherical_direct(
        self,
        entry: SmallKTypeEntry,
        f: SampledFunction,
        spectral_axes: Sequence[np.ndarray],
        pair_index: int = 0,
    ) -> SampledFunction:
        """f̂(λ) = (1/|W|) ∫ f Υ^π(φ^π_{−λ}) δ_{G/K} from the cosh-factor form of Υ^π."""
        system = entry.system
        self.check_rank(system)
        pair = entry.pair(pair_index)
        frame = system.span_frame
        f = self.symmetrize(system, f, frame)
        heights = self.cartan_points(frame, f.points())
        group = self.weight_eval(WeightSpec(WeightKind.GROUP, entry.m), heights)
        factor = self.hypergeometric_service.entry_cosh_factor(entry, pair_index)
        density = f.flat_values() * group * factor.evaluate_many(heights)
        return self._forward(pair.system_pi, pair.k_pi, frame, f, density, spectral_axes)

    def plancherel_density(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral_axes: Sequence[np.ndarray],
        frame: Optional[Frame] = None,
    ) -> np.ndarray:
        """|c(λ)|⁻² at the spectral nodes, flattened; 0 where c has a pole."""
        frame = frame or system.span_frame
        nodes = SampledFunction(axes=tuple(spectral_axes), values=np.zeros(0)).points()
        density = np.empty(len(nodes))
        for i, xi in enumerate(nodes):
            c = self.c_function_service.c_norm(system, k, self.spectral_at(frame, xi))
            density[i] = 0.0 if not np.isfinite(abs(c)) else 1.0 / abs(c) ** 2
        return density

    def check_nonnegative(self, k: MultiplicityFunction) -> None:
        if not k.is_nonnegative():
            raise NonnegativityViolated(
                "Inversion needs k_α ≥ 0 on every orbit; negative orbits carry discrete spectrum",
                details={
                    "k": k.serialize(),
                    "negative_orbits": k.negative_orbits(),
                    "hypothesis": "k_α ≥ 0 for any α ∈ Σ′",
                },
            )

    def hft_inverse(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectrum: SampledFunction,
        cartan_axes: Sequence[np.ndarray],
    ) -> SampledFunction:
        """
        f(H) = (1/|W|) (2π)^{−r} ∫ ℱf(λ) F(λ; H) |c(λ)|⁻² dξ on the Cartan grid.

        Raises:
            NonnegativityViolated: If some orbit of k is negative
        """
        self.check_rank(system)
        self.check_nonnegative(k)
        frame = system.span_frame
        grid = SampledFunction(
            axes=tuple(np.asarray(a, dtype=float) for a in cartan_axes),
            values=np.zeros(tuple(len(a) for a in cartan_axes), dtype=complex),
        )
        heights = self.cartan_points(frame, grid.points())
        weights = (
            trapezoid_weights(spectrum.axes)
            * spectrum.flat_values()
            * self.plancherel_density(system, k, spectrum.axes, frame)
        )
        nodes = spectrum.points()
        active = [i for i in range(len(nodes)) if weights[i] != 0]

        def one(index: int) -> np.ndarray:
            values = self.radial_values(system, k, self.spectral_at(frame, nodes[index]), heights)
            return weights[index] * values

        threads = max(1, int(self.settings.threads))
        total = np.zeros(len(heights), dtype=complex)
        if threads == 1:
            for index in active:
                total += one(index)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for part in pool.map(one, active):
                    total += part
        constant = (2 * math.pi) ** (-system.rank) / self.weyl_order(system)
        logger.debug(f"Inverse transform on {system.name}: {len(active)} spectral nodes")
        return grid.with_values(constant * total)

    def plancherel_mismatch(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        f: SampledFunction,
        spectrum: SampledFunction,
    ) -> Tuple[float, float, float]:
        """
        (1/|W|)∫|f|²δ dx against (1/|W|)(2π)^{−r}∫|ℱf|²|c|⁻² dξ.

        Returns:
            Tuple[float, float, float]: Both sides and their relative mismatch
        """
        frame = system.span_frame
        order = self.weyl_order(system)
        heights = self.cartan_points(frame, f.points())
        weight = self.weight_eval(WeightSpec(WeightKind.MULTIPLICITY, k), heights)
        keep = ~self.excluded_mask(system, heights)
        lhs = float(
            np.sum((trapezoid_weights(f.axes) * np.abs(f.flat_values()) ** 2 * weight)[keep])
            / order
        )
        density = self.plancherel_density(system, k, spectrum.axes, frame)
        rhs = float(
            np.sum(trapezoid_weights(spectrum.axes) * np.abs(spectrum.flat_values()) ** 2 * density)
            * (2 * math.pi) ** (-system.rank)
            / order
        )
        mismatch = abs(lhs - rhs) / abs(lhs) if lhs else abs(rhs)
        return lhs, rhs, mismatch

    def spectral_cutoff(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectrum: SampledFunction,
        tol: float = SPECTRAL_TOL,
    ) -> float:
        """Smallest radius outside which |ℱf|·|c|⁻² stays below tol times its peak."""
        size = np.abs(spectrum.flat_values()) * self.plancherel_density(system, k, spectrum.axes)
        peak = float(np.max(size)) if size.size else 0.0
        radii = np.linalg.norm(spectrum.points(), axis=1)
        significant = size > tol * peak
        if not significant.any():
            return 0.0
        return float(np.max(radii[significant]))

    def trim_spectrum(self, spectrum: SampledFunction, radius: float) -> SampledFunction:
        """Restrict every spectral axis to |ξ_i| ≤ radius."""
        keep = [np.nonzero(np.abs(axis) <= radius)[0] for axis in spectrum.axes]
        return SampledFunction(
            axes=tuple(axis[idx] for axis, idx in zip(spectrum.axes, keep)),
            values=np.asarray(spectrum.values)[np.ix_(*keep)],
        )

    def roundtrip(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        width: float = 1.0,
        grid: int = 400,
        spectral_radius: Optional[float] = None,
        spectral_points: Optional[int] = None,
    ) -> RoundtripReport:
        """
        Transform a smooth bump, invert it and compare, with the Plancherel check.

        The spectral grid defaults to |ξ_i| ≤ 60/width with step 0.5/width and
        is trimmed where |ℱf|·|c|⁻² falls below 10⁻⁸ of its peak before inversion.

        Raises:
            NonnegativityViolated: If some orbit of k is negative
        """
        self.check_rank(system)
        self.check_nonnegative(k)
        f = self.symmetrize(system, self.bump(system, width, grid))
        radius = spectral_radius or DEFAULT_SPECTRAL_RADIUS / width
        if spectral_points is None:
            spectral_points = 2 * int(math.ceil(radius * width / DEFAULT_SPECTRAL_STEP)) + 1
        spectral_axes = self.grid_axes(system, radius, spectral_points)

        spectrum = self.hft_forward(system, k, f, spectral_axes)
        cutoff = self.spectral_cutoff(system, k, spectrum)
        step = float(spectral_axes[0][1] - spectral_axes[0][0])
        spectrum = self.trim_spectrum(spectrum, min(radius, cutoff + 2 * step))

        recovered = self.hft_inverse(system, k, spectrum, f.axes)
        heights = self.cartan_points(system.span_frame, f.points())
        excluded = self.excluded_mask(system, heights)
        error = np.abs(recovered.flat_values() - f.flat_values())[~excluded]
        max_error = float(np.max(error)) if error.size else 0.0
        peak = float(np.max(np.abs(f.flat_values())))
        lhs, rhs, mismatch = self.plancherel_mismatch(system, k, f, spectrum)
        logger.info(
            f"Roundtrip on {system.name} k=({k.signature}): max error {max_error:.3e}, "
            f"Plancherel mismatch {mismatch:.3e}"
        )
        return RoundtripReport(
            system=system.name,
            k=k.serialize(),
            bump_width=width,
            grid_points=grid,
            spectral_radius=float(np.max(np.abs(spectrum.axes[0]))),
            spectral_points=len(spectrum.axes[0]),
            max_error=max_error,
            relative_error=max_error / peak if peak else max_error,
            plancherel_lhs=lhs,
            plancherel_rhs=rhs,
            plancherel_mismatch=mismatch,
            excluded_points=int(np.count_nonzero(excluded)),
        )
