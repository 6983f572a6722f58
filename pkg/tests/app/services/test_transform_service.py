import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from app.exceptions import NonnegativityViolated, ParameterOutOfRange
from app.models.multiplicity import MultiplicityFunction
from app.models.sampled import WeightKind, WeightSpec
from app.schemas.ktype import KTypeFilter
from app.services.transform_service import (
    BUMP_DECAY,
    smooth_cutoff,
    trapezoid_weights,
)

SPECTRAL_AXES = (np.array([0.0, 0.7, 1.9]),)


def _bump_value(x: float) -> float:
    return math.exp(-BUMP_DECAY * x * x) * float(smooth_cutoff(np.array([abs(x)]))[0])


def test_trapezoid_weights():
    axis = np.linspace(0.0, 1.0, 5)
    np.testing.assert_allclose(trapezoid_weights([axis]), [0.125, 0.25, 0.25, 0.25, 0.125])
    weights = trapezoid_weights([axis, np.linspace(-1.0, 1.0, 3)])
    assert weights.shape == (15,)
    assert weights.sum() == pytest.approx(2.0)


def test_smooth_cutoff():
    values = smooth_cutoff(np.array([0.0, 0.75, 0.875, 1.0, 1.2]))
    np.testing.assert_allclose(values, [1.0, 1.0, 0.5, 0.0, 0.0], atol=1e-15)


def test_rank_three_is_refused(transform_service, root_service):
    a3 = root_service.build_root_system("A", 3)
    with pytest.raises(ParameterOutOfRange):
        transform_service.bump(a3, 1.0, 11)


def test_grid_axes_checks(transform_service, b2):
    axes = transform_service.grid_axes(b2, 2.0, 5)
    assert len(axes) == 2
    np.testing.assert_allclose(axes[0], [-2, -1, 0, 1, 2])
    with pytest.raises(ParameterOutOfRange):
        transform_service.grid_axes(b2, 2.0, 1)
    with pytest.raises(ParameterOutOfRange):
        transform_service.grid_axes(b2, 0.0, 5)


def test_bump_is_supported_in_the_ball(transform_service, b2):
    f = transform_service.bump(b2, 1.0, 41, radius=1.5)
    points = f.points()
    outside = np.linalg.norm(points, axis=1) >= 1.0
    assert np.all(f.flat_values()[outside] == 0)
    assert f.flat_values().max() == pytest.approx(1.0)


def test_weight_a1(transform_service, a1):
    """δ(A1, k = 1) at α(H) = 1 is |2 sinh ½|²; δ_{G/K} with m = 2 is |2 sinh 1|²."""
    k = MultiplicityFunction.build(a1, 1)
    point = np.array([[0.5, -0.5]])
    matched = transform_service.weight_eval(WeightSpec(WeightKind.MULTIPLICITY, k), point)
    assert matched[0] == pytest.approx((2 * math.sinh(0.5)) ** 2)
    m = MultiplicityFunction.build(a1, 2)
    group = transform_service.weight_eval(WeightSpec(WeightKind.GROUP, m), point)
    assert group[0] == pytest.approx((2 * math.sinh(1.0)) ** 2)


def test_forward_without_multiplicity_is_a_cosine_transform(transform_service, bc1):
    """With k ≡ 0, F(−λ; H) = cos(ξx) and δ = 1, so ℱf(ξ) = ½∫ f(x) cos(ξx) dx."""
    f = transform_service.bump(bc1, 1.0, 401)
    spectrum = transform_service.hft_forward(bc1, MultiplicityFunction.zero(bc1), f, SPECTRAL_AXES)
    for xi, value in zip(SPECTRAL_AXES[0], spectrum.flat_values()):
        expected, _ = quad(
            lambda x: _bump_value(x) * math.cos(xi * x), -1.0, 1.0, limit=200, epsabs=1e-13
        )
        assert value == pytest.approx(expected / 2, rel=1e-7)


def test_roundtrip_bc1(transform_service, bc1):
    k = MultiplicityFunction.build(bc1, {"short": 2, "double": Fraction(1, 2)})
    report = transform_service.roundtrip(bc1, k)
    assert report.system == "BC1"
    assert report.grid_points == 400
    assert report.excluded_points == 0
    assert report.max_error <= 1e-4
    assert report.plancherel_mismatch <= 1e-4


def test_inversion_needs_nonnegative_multiplicity(transform_service, a1):
    k = MultiplicityFunction.build(a1, Fraction(-1, 4))
    with pytest.raises(NonnegativityViolated) as exc_info:
        transform_service.roundtrip(a1, k)
    assert exc_info.value.details["negative_orbits"] == ["long"]


@pytest.mark.parametrize(
    "entry_name,pair_index,expected",
    [
        ("sp21_entry", 0, 8.0),
        ("sp21_entry", 1, 0.5),
        ("so41_entry", 0, 0.5),
        ("trivial_a1_entry", 0, 1.0),
    ],
)
def test_spherical_prefactor(transform_service, request, entry_name, pair_index, expected):
    entry = request.getfixturevalue(entry_name)
    assert transform_service.spherical_prefactor(entry, pair_index) == pytest.approx(expected)


@pytest.mark.parametrize("pair_index", [0, 1])
def test_spherical_forms_agree(transform_service, sp21_entry, pair_index):
    """2^e (δ_{G/K} δ^π)^{½} equals δ_{G/K} times the cosh factor."""
    f = transform_service.bump(sp21_entry.system, 1.0, 201)
    forward = transform_service.spherical_forward(sp21_entry, f, SPECTRAL_AXES, pair_index)
    direct = transform_service.spherical_direct(sp21_entry, f, SPECTRAL_AXES, pair_index)
    np.testing.assert_allclose(forward.flat_values(), direct.flat_values(), rtol=1e-9)


def test_trivial_spherical_transform_is_the_doubled_system_transform(
    transform_service, trivial_a1_entry
):
    pair = trivial_a1_entry.pair()
    f = transform_service.bump(trivial_a1_entry.system, 1.0, 201)
    spherical = transform_service.spherical_forward(trivial_a1_entry, f, SPECTRAL_AXES)
    plain = transform_service.hft_forward(pair.system_pi, pair.k_pi, f, SPECTRAL_AXES)
    np.testing.assert_allclose(spherical.flat_values(), plain.flat_values(), rtol=1e-9)


def test_plancherel_density_vanishes_at_the_origin(transform_service, bc1):
    k = MultiplicityFunction.build(bc1, {"short": 2, "double": Fraction(1, 2)})
    density = transform_service.plancherel_density(bc1, k, SPECTRAL_AXES)
    assert density[0] == 0
    assert np.all(density[1:] > 0)


def test_trim_spectrum(transform_service, bc1):
    f = transform_service.bump(bc1, 1.0, 9)
    trimmed = transform_service.trim_spectrum(f, 0.5)
    np.testing.assert_allclose(trimmed.axes[0], [-0.5, -0.25, 0.0, 0.25, 0.5])
    assert trimmed.shape == (5,)


@pytest.mark.parametrize(
    "entry_name,pair_index",
    [("sp21_entry", 0), ("sp21_entry", 1), ("so41_entry", 0), ("trivial_a1_entry", 0)],
)
def test_normalized_weight_ratio_is_two_to_the_e(
    transform_service, c_function_service, root_service, request, faker, entry_name, pair_index
):
    entry = request.getfixturevalue(entry_name)
    pair = entry.pair(pair_index)
    e = c_function_service.e_exponent(entry.system, entry.m, pair.system_pi, pair.k_pi)
    for _ in range(10):
        x = faker.pyfloat(min_value=0.2, max_value=3)
        point = root_service.cartan_point(entry.system, [x])
        constant = transform_service.ratio_constant(entry, pair_index, point)
        assert constant == pytest.approx(2.0 ** float(e), rel=1e-12)


@pytest.mark.parametrize(
    "family",
    [
        "sp(p,1)",
        "so(2r,1)",
        "so(p,q)",
        "hermitian",
        "F4-family",
        "sl(p,R)",
        "so(p,p)",
        "G2",
        "sl(p,C)",
        "sl(p,H)",
        "sp(p,q)",
        "so(2r+1,1)",
    ],
)
def test_weight_ratio_identity_over_the_catalog(
    transform_service, catalog_service, c_function_service, root_service, faker, family
):
    """Normalized over plain δ(Σ^π, k^π)^{½} δ_{G/K}^{−½} is 2^e at every point."""
    entries = catalog_service.catalog(KTypeFilter(family=family, include_trivial=True))
    assert entries
    for entry in entries:
        rank = entry.system.rank
        points = np.stack(
            [
                root_service.cartan_point(
                    entry.system, [faker.pyfloat(min_value=0.05, max_value=0.3) for _ in range(rank)]
                )
                for _ in range(50)
            ]
        )
        for index, pair in enumerate(entry.valid_pairs):
            e = c_function_service.e_exponent(entry.system, entry.m, pair.system_pi, pair.k_pi)
            normalized = transform_service.weight_ratio(entry, points, index, normalized=True)
            plain = transform_service.weight_ratio(entry, points, index)
            np.testing.assert_allclose(
                normalized / plain, np.full(len(points), 2.0 ** float(e)), rtol=1e-12
            )


def test_hft_inverse_refuses_negative_orbits(transform_service, bc1):
    k = MultiplicityFunction.build(bc1, {"short": -1, "double": Fraction(5, 2)})
    spectrum = transform_service.bump(bc1, 1.0, 9)
    with pytest.raises(NonnegativityViolated) as exc_info:
        transform_service.hft_inverse(bc1, k, spectrum, spectrum.axes)
    assert exc_info.value.details["negative_orbits"] == ["short"]
