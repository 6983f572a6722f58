import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from app.exceptions import ParameterOutOfRange
from app.models.multiplicity import MultiplicityFunction
from app.models.spectral import SpectralParameter


@pytest.mark.parametrize(
    "a,b,c,z",
    [
        (0.5, 1.5, 2.25, 0.3),
        (1 + 0.5j, 0.3, 1.7, -0.6 + 0.2j),
        (-2.0, 0.75, 1.5, 0.9),
        (2.5 + 1j, 2.5 - 1j, 3.0, 0.85),
    ],
)
def test_gauss_series_matches_mpmath(jacobi_service, a, b, c, z):
    expected = complex(mpmath.hyp2f1(a, b, c, z))
    assert jacobi_service.gauss_series(a, b, c, z) == pytest.approx(expected, rel=1e-12)


def test_gauss_series_many_matches_scalar(jacobi_service):
    z = np.array([0.0, 0.2, -0.5 + 0.1j, 0.7])
    values = jacobi_service.gauss_series_many(0.25, 1.5, 2.0, z)
    for zi, value in zip(z, values):
        assert value == pytest.approx(jacobi_service.gauss_series(0.25, 1.5, 2.0, zi), rel=1e-13)


def test_gauss_series_needs_the_unit_disc(jacobi_service):
    with pytest.raises(ParameterOutOfRange):
        jacobi_service.gauss_series(1, 1, 2, 1.0)
    with pytest.raises(ParameterOutOfRange):
        jacobi_service.gauss_series_many(1, 1, 2, [0.5, -1.2])


def test_jacobi_function_without_multiplicity_is_cosh(jacobi_service):
    """With k = 0 the function is cosh(λ(H)); for imaginary ℓ a cosine."""
    ell = 1.3j
    for s in (0.0, 0.4, 1.1, 2.0):
        value = jacobi_service.jacobi_function(0, 0, ell, s)
        assert value == pytest.approx(math.cos(1.3 * s), abs=1e-12)


def test_jacobi_function_is_one_at_the_origin(jacobi_service, faker):
    k1 = faker.pyfloat(min_value=0.1, max_value=4)
    k2 = faker.pyfloat(min_value=0.1, max_value=2)
    assert jacobi_service.jacobi_function(k1, k2, 0.4 + 2j, 0.0) == pytest.approx(1)


def test_jacobi_function_many_matches_scalar(jacobi_service):
    s = np.linspace(-1.5, 1.5, 7)
    values = jacobi_service.jacobi_function_many(1.5, 0.5, 0.3 + 1.1j, s)
    expected = [jacobi_service.jacobi_function(1.5, 0.5, 0.3 + 1.1j, x) for x in s]
    np.testing.assert_allclose(values, expected, rtol=1e-12)


def test_series_coefficients_match_the_recurrence(jacobi_service, series_service, bc1):
    k1, k2 = Fraction(3, 2), Fraction(1, 2)
    ell = 0.7 + 1.3j
    k = MultiplicityFunction.build(bc1, {"short": k1, "double": k2})
    spectral = SpectralParameter.from_coroot_values(bc1, [ell])
    table = series_service.hc_coefficients(bc1, k, spectral, 10)
    expected = jacobi_service.series_coefficients(k1, k2, ell, 10)
    for j in range(11):
        assert table.coefficient((j,)) == pytest.approx(expected[j], rel=1e-10, abs=1e-12)
