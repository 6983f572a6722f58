import cmath
import logging
import math
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from app.config import Settings, get_settings
from app.exceptions import (
    IndeterminateAfterLimit,
    MC1Violated,
    NotRegular,
)
from app.models.ktype import SmallKTypeEntry
from app.models.multiplicity import MultiplicityFunction
from app.models.root_system import RootSystem
from app.models.spectral import SpectralParameter
from app.schemas.c_function import CFunctionValue, PoleFlag
from app.services.root_system_service import RootSystemService
from app.utils import gamma as gamma_utils
from app.utils.exact import format_vector, is_exact, scale

logger = logging.getLogger(__name__)


class CFunctionService:
    """Gamma-product c-functions c̃ and c, regularity, and the group-side c^π."""

    def __init__(
        self,
        settings: Optional[Settings] = None,
        root_service: Optional[RootSystemService] = None,
    ):
        self.settings = settings or get_settings()
        self.root_service = root_service or RootSystemService(self.settings)

    def log_gamma(self, z) -> complex:
        """Principal branch of log Γ(z); raises PoleAtNonpositiveInteger at poles."""
        return gamma_utils.log_gamma(z)

    def rho_parameter(self, system: RootSystem, k: MultiplicityFunction) -> SpectralParameter:
        return SpectralParameter.from_array(
            [complex(x) for x in self.root_service.rho_weighted(system, k)]
        )

    def c_tilde(
        self,
        system: RootSystem,
        k: MultiplicityFunction,
        spectral: Optional[SpectralParameter] = None,
        direction: Optional[Sequence] = None,
        at_rho: bool = False,
    ) -> CFunctionValue:
        """
        c̃(λ) = Π_{α>0} Γ(λ(α^∨) + ½k_{α/2}) / Γ(λ(α^∨) + ½k_{α/2} + k_α).

        Evaluated as Π rΓ(den) / Π rΓ(num) with rΓ = 1/Γ. Gamma arguments that
        hit a nonpositive integer −n are resolved along the path λ + εdλ with
        rΓ(−n + εd) ≈ (−1)^n n! d ε. With `at_rho` the value c̃(ρ(k)) is taken
        along k + ε𝟙, λ = ρ(k + ε𝟙).

        Args:
            system: Root system Σ′
            k: Multiplicity function
            spectral: λ; ignored when at_rho is set
            direction: dλ for the limiting path, default ρ(𝟙)
            at_rho: Evaluate c̃(ρ(k)) instead

        Raises:
            IndeterminateAfterLimit: If a pole argument does not move along the path
        """
        rho_one = system.rho_one
        if at_rho:
            lam = self.root_service.rho_weighted(system, k)
            d_lam = rho_one
            dk = 1
        else:
            if spectral is None:
                raise ValueError("spectral parameter required unless at_rho is set")
            lam = spectral.array
            d_lam = rho_one if direction is None else tuple(direction)
            dk = 0
        exact = at_rho and k.is_exact

        log_value = 0j
        order = 0
        flags: List[PoleFlag] = []
        for root in system.positive_roots:
            k_alpha = k.at(root)
            if k_alpha == 0 and dk == 0:
                continue
            half = scale(Fraction(1, 2), root)
            has_half = system.contains(half)
            k_half = k.at(half)

            if exact:
                num = system.coroot_pairing(lam, root) + Fraction(k_half) / 2
            else:
                num = self._coroot_value(system, lam, root) + complex(k_half) / 2
            d_num = self._coroot_value(system, d_lam, root).real
            if dk:
                d_num += 0.5 if has_half else 0.0
            den = num + (k_alpha if exact else complex(k_alpha))
            d_den = d_num + dk

            # numerator Γ(num) = 1/rΓ(num)
            n = gamma_utils.nonpositive_integer(num)
            if n is not None:
                order -= 1
                log_value -= self._slope_log(n, d_num, root, "numerator")
                flags.append(PoleFlag(root=format_vector(root), side="numerator", argument=-n))
            else:
                log_value += gamma_utils.log_gamma(num)
            # denominator 1/Γ(den) = rΓ(den)
            n = gamma_utils.nonpositive_integer(den)
            if n is not None:
                order += 1
                log_value += self._slope_log(n, d_den, root, "denominator")
                flags.append(PoleFlag(root=format_vector(root), side="denominator", argument=-n))
            else:
                log_value -= gamma_utils.log_gamma(den)

        if order > 0:
            value = 0j
        elif order < 0:
            value = complex(math.inf, 0.0)
        else:
            value = cmath.exp(log_value)
        return CFunctionValue(
            value=value,
            pole_flags=flags,
            limit_used=bool(flags) and order == 0,
            order=order,
        )

    def _coroot_value(self, system: RootSystem, lam, root) -> complex:
        r = np.array(root, dtype=float)
        vec = np.array([complex(x) for x in lam], dtype=complex)
        return complex(2.0 * (vec @ system.gram_array @ r) / float(system.norm2(root)))

    def _slope_log(self, n: int, slope: float, root, side: str) -> complex:
        """log of the first-order coefficient (−1)^n n! d of rΓ at −n."""
        if abs(slope) < 1e-14:
            raise IndeterminateAfterLimit(
                "Gamma argument is a pole that does not move along the limiting path",
                details={"root": format_vector(root), "side": side, "argument": -n},
            )
        log_factorial, sign = gamma_utils.reciprocal_gamma_zero_slope(n)
        return log_factorial + cmath.log(sign * slope)

    def is_regular(self, system: RootSystem, k: MultiplicityFunction) -> bool:
        """k ∈ 𝒦_reg iff the limit value of c̃(ρ(k)) is finite and nonzero."""
        return self.c_tilde(system, k, at_rho=True).order == 0

    def c_norm(
        self, system: RootSystem, k: MultiplicityFunction, spectral: SpectralParameter
    ) -> complex:
        """
        c(λ) = c̃(λ)/c̃(ρ(k)).

        Raises:
            NotRegular: If c̃(ρ(k)) vanishes
        """
        at_rho = self.c_tilde(system, k, at_rho=True)
        if at_rho.order != 0:
            raise NotRegular(
                f"k = {k.signature} is not regular on {system.name}",
                details={"k": k.serialize(), "order": at_rho.order},
            )
        normalizer = at_rho.value
        if not at_rho.limit_used:
            # Same float path as the numerator so that c(ρ(k)) is exactly 1.
            normalizer = self.c_tilde(system, k, self.rho_parameter(system, k)).value
        numerator = self.c_tilde(system, k, spectral)
        if numerator.order > 0:
            return 0j
        if numerator.order < 0:
            return complex(math.inf, 0.0)
        return numerator.value / normalizer

    def e_exponent(
        self,
        system: RootSystem,
        m: MultiplicityFunction,
        system_pi: RootSystem,
        k_pi: MultiplicityFunction,
    ):
        """
        e = Σ_{α ∈ Σ⁺∖2Σ⁺} (k^π_α − k^π_{4α} + m_{2α}/2).

        Raises:
            MC1Violated: If Σ^π is not contained in Σ ∪ 2Σ
        """
        self.check_mc1(system, system_pi)
        total = 0
        for root in system.indivisible_positive:
            total += k_pi.at(root) - k_pi.at(scale(4, root)) + Fraction(1, 2) * m.at(scale(2, root))
        return Fraction(total) if is_exact(total) else total

    def check_mc1(self, system: RootSystem, system_pi: RootSystem) -> None:
        outside = [
            r
            for r in system_pi.roots
            if not system.contains(r) and not system.contains(scale(Fraction(1, 2), r))
        ]
        if outside:
            raise MC1Violated(
                "Σ^π is not contained in Σ ∪ 2Σ",
                details={"roots": [format_vector(r) for r in outside]},
            )

    def c_pi(
        self,
        entry: SmallKTypeEntry,
        spectral: SpectralParameter,
        pair_index: int = 0,
    ) -> complex:
        """c^π(λ) = 2^{e(Σ^π,k^π)} c(Σ^π, k^π, λ)."""
        pair = entry.pair(pair_index)
        e = self.e_exponent(entry.system, entry.m, pair.system_pi, pair.k_pi)
        return complex(2.0 ** float(e)) * self.c_norm(pair.system_pi, pair.k_pi, spectral)
