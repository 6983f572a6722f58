"""Complex log-Gamma and reciprocal Gamma.

Lanczos approximation in the rational "expg scaled" form (g ≈ 6.0247, 13
terms), accurate to double precision in the right half-plane. The left
half-plane goes through the reflection formula; its branch is fixed so the
result is the principal branch of log Γ (continuous off the negative axis).
"""

import math
from fractions import Fraction
from numbers import Number
from typing import Optional, Tuple

import numpy as np

from app.exceptions import PoleAtNonpositiveInteger

LANCZOS_G = 6.024680040776729583740234375

# Highest degree first, as numpy.polyval expects.
_LANCZOS_NUM = np.array(
    [
        0.006061842346248906525783753964555936883222,
        0.5098416655656676188125178644804694509993,
        19.51992788247617482847860966235652136208,
        449.9445569063168119446858607650988409623,
        6955.999602515376140356310115515198987526,
        75999.29304014542649875303443598909137092,
        601859.6171681098786670226533699352302507,
        3481712.15498064590882071018964774556468,
        14605578.08768506808414169982791359218571,
        43338889.32467613834773723740590533316085,
        86363131.28813859145546927288977868422342,
        103794043.1163445451906271053616070238554,
        56906521.91347156388090791033559122686859,
    ]
)
_LANCZOS_DEN = np.array(
    [
        1.0,
        66.0,
        1925.0,
        32670.0,
        357423.0,
        2637558.0,
        13339535.0,
        45995730.0,
        105258076.0,
        150917976.0,
        120543840.0,
        39916800.0,
        0.0,
    ]
)

POLE_TOL = 1e-12
_LOG_PI = math.log(math.pi)


def nonpositive_integer(z) -> Optional[int]:
    """Return n when z == -n for an integer n ≥ 0, else None.

    Exact for ints and Fractions; within POLE_TOL for floats and complex.
    """
    if isinstance(z, bool):
        z = int(z)
    if isinstance(z, int):
        return -z if z <= 0 else None
    if isinstance(z, Fraction):
        if z.denominator == 1 and z <= 0:
            return -int(z)
        return None
    z = complex(z)
    if abs(z.imag) > POLE_TOL:
        return None
    nearest = round(z.real)
    if nearest <= 0 and abs(z.real - nearest) <= POLE_TOL:
        return -int(nearest)
    return None


def _log_gamma_right(z: complex) -> complex:
    """log Γ(z) for Re z ≥ 1/2."""
    zgh = z + LANCZOS_G - 0.5
    series = np.polyval(_LANCZOS_NUM, z) / np.polyval(_LANCZOS_DEN, z)
    return complex(np.log(series) + (z - 0.5) * (np.log(zgh) - 1.0))


def _log_gamma_by_recurrence(z: complex) -> complex:
    shift = math.ceil(0.5 - z.real)
    value = _log_gamma_right(z + shift)
    for j in range(shift):
        value -= complex(np.log(z + j))
    return value


def log_gamma(z: Number) -> complex:
    """Principal branch of log Γ(z).

    Raises:
        PoleAtNonpositiveInteger: if z is a pole of Γ.
    """
    n = nonpositive_integer(z)
    if n is not None:
        raise PoleAtNonpositiveInteger(
            f"Gamma has a pole at {-n}", details={"argument": -n}
        )
    z = complex(z)
    if z.real >= 0.5:
        return _log_gamma_right(z)

    reflected = (
        _LOG_PI
        - complex(np.log(np.sin(np.pi * z)))
        - _log_gamma_right(1.0 - z)
    )
    # The reflection formula is correct modulo 2πi; pick the principal branch.
    reference = _log_gamma_by_recurrence(z)
    turns = round((reference.imag - reflected.imag) / (2.0 * math.pi))
    return complex(reflected.real, reflected.imag + 2.0 * math.pi * turns)


def gamma(z: Number) -> complex:
    return complex(np.exp(log_gamma(z)))


def reciprocal_gamma(z: Number) -> complex:
    """1/Γ(z), an entire function: exactly 0 at nonpositive integers."""
    if nonpositive_integer(z) is not None:
        return 0j
    return complex(np.exp(-log_gamma(z)))


def reciprocal_gamma_zero_slope(n: int) -> Tuple[float, int]:
    """First-order coefficient of 1/Γ at -n: 1/Γ(-n + ε) = (-1)^n n! ε + O(ε²).

    Returned as (log n!, sign) so callers can stay in log space.
    """
    return math.lgamma(n + 1), (-1) ** n
