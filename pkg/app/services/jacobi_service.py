"""Rank-one oracle: hypergeometric functions of BC1 as Jacobi functions.

For Σ′ = {±e, ±2e} with k₁ = k_e, k₂ = k_{2e}, ℓ = λ(e^∨) and s = |e(H)|/2,

    F(λ; H) = ₂F₁((ρ+ℓ)/2, (ρ−ℓ)/2; k₁+k₂+½; −sinh²s),   ρ = k₁ + 2k₂,

summed after the Pfaff transformation as cosh(s)^{−(ρ+ℓ)} ₂F₁(…; tanh²s). The
Harish-Chandra series has the closed form

    Φ = e^{−(ℓ+ρ)s} (1+u)^{−ℓ−ρ} ₂F₁((ρ+ℓ)/2, (k₁+1+ℓ)/2; 1+ℓ; 4u/(1+u)²),  u = e^{−2s},

whose Taylor coefficients in u are the series coefficients a_{je}.
"""

import logging
from typing import Optional

import numpy as np

from app.config import Settings, get_settings
from app.exceptions import ParameterOutOfRange

logger = logging.getLogger(__name__)

MAX_TERMS = 500_000


class JacobiService:
    """Independent Gauss-series evaluation of rank-one hypergeometric functions."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def gauss_series(self, a, b, c, z, tol: float = 1e-17) -> complex:
        """
        ₂F₁(a, b; c; z) by direct summation, |z| < 1.

        Raises:
            ParameterOutOfRange: If |z| ≥ 1 or the series does not settle
        """
        if abs(z) >= 1:
            raise ParameterOutOfRange(
                "Gauss series needs |z| < 1", details={"z": abs(z)}
            )
        term = 1.0 + 0j
        total = term
        for n in range(MAX_TERMS):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            total += term
            if abs(term) <= tol * abs(total) and n > 10:
                return complex(total)
        raise ParameterOutOfRange(
            "Gauss series did not converge", details={"terms": MAX_TERMS, "z": abs(z)}
        )

    def gauss_series_many(self, a, b, c, z, tol: float = 1e-17) -> np.ndarray:
        """
        ₂F₁(a, b; c; z) summed for an array of arguments at once.

        Terms are compared with the largest partial sum or term seen so far,
        so zeros of the function do not stall the loop.

        Raises:
            ParameterOutOfRange: If some |z| ≥ 1 or the series does not settle
        """
        z = np.asarray(z, dtype=complex)
        if z.size == 0:
            return z
        if float(np.max(np.abs(z))) >= 1:
            raise ParameterOutOfRange(
                "Gauss series needs |z| < 1", details={"z": float(np.max(np.abs(z)))}
            )
        term = np.ones_like(z)
        total = term.copy()
        scale = np.ones(z.shape)
        for n in range(MAX_TERMS):
            term = term * ((a + n) * (b + n) / ((c + n) * (n + 1))) * z
            total = total + term
            size = np.abs(term)
            scale = np.maximum(scale, np.maximum(size, np.abs(total)))
            if n > 10 and bool(np.all(size <= tol * scale)):
                return total
        raise ParameterOutOfRange(
            "Gauss series did not converge",
            details={"terms": MAX_TERMS, "z": float(np.max(np.abs(z)))},
        )

    def jacobi_function_many(self, k1, k2, ell, s) -> np.ndarray:
        """`jacobi_function` over an array of s."""
        s = np.abs(np.asarray(s, dtype=float))
        rho = complex(k1) + 2 * complex(k2)
        ell = complex(ell)
        a = (rho + ell) / 2
        b = (rho - ell) / 2
        c = complex(k1) + complex(k2) + 0.5
        return np.cosh(s) ** (-2 * a) * self.gauss_series_many(a, c - b, c, np.tanh(s) ** 2)

    def jacobi_function(self, k1, k2, ell, s: float) -> complex:
        """F(BC1, (k₁, k₂), λ; H) with λ(e^∨) = ℓ and |e(H)| = 2s."""
        s = abs(float(s))
        rho = complex(k1) + 2 * complex(k2)
        ell = complex(ell)
        a = (rho + ell) / 2
        b = (rho - ell) / 2
        c = complex(k1) + complex(k2) + 0.5
        x = np.tanh(s) ** 2
        return complex(np.cosh(s) ** (-2 * a) * self.gauss_series(a, c - b, c, x))

    def series_coefficients(self, k1, k2, ell, order: int) -> np.ndarray:
        """Taylor coefficients of Φ·e^{(ℓ+ρ)s} in u = e^{−2s}, up to u^order."""
        k1, k2, ell = complex(k1), complex(k2), complex(ell)
        rho = k1 + 2 * k2
        size = order + 1

        # z(u) = 4u/(1+u)² = 4 Σ_{n≥1} (−1)^{n−1} n u^n
        z = np.zeros(size, dtype=complex)
        for n in range(1, size):
            z[n] = 4 * (-1) ** (n - 1) * n

        a, b, c = (rho + ell) / 2, (k1 + 1 + ell) / 2, 1 + ell
        gauss = np.zeros(size, dtype=complex)
        power = np.zeros(size, dtype=complex)
        power[0] = 1.0
        coefficient = 1.0 + 0j
        for n in range(size):
            gauss += coefficient * power
            coefficient *= (a + n) * (b + n) / ((c + n) * (n + 1))
            power = _truncated_product(power, z, size)

        # (1+u)^{−ℓ−ρ}
        binomial = np.zeros(size, dtype=complex)
        binomial[0] = 1.0
        exponent = -ell - rho
        for n in range(1, size):
            binomial[n] = binomial[n - 1] * (exponent - n + 1) / n
        return _truncated_product(binomial, gauss, size)


def _truncated_product(p: np.ndarray, q: np.ndarray, size: int) -> np.ndarray:
    return np.convolve(p, q)[:size]
