import math
from fractions import Fraction

import numpy as np
import pytest

from app.exceptions import (
    NotRegular,
    ParameterOutOfRange,
    RegularityViolated,
    StepTooLarge,
    TailNotConverged,
    TooCloseToWallOrOrigin,
)
from app.models.multiplicity import MultiplicityFunction
from app.models.spectral import SpectralParameter


def test_zero_multiplicity_is_the_orbit_average(hypergeometric_service, root_service, b2):
    spectral = SpectralParameter.from_array([0.31 + 1.17j, -0.23 + 0.71j])
    point = np.array([0.7, -0.3])
    value = hypergeometric_service.f_eval(b2, MultiplicityFunction.zero(b2), spectral, point)
    elements = root_service.weyl_elements(b2)
    expected = sum(np.exp(w.act_weight(spectral.array) @ point) for w in elements) / len(elements)
    assert value == pytest.approx(complex(expected), rel=1e-12)


def test_a1_unit_multiplicity_sinh_formula(hypergeometric_service, a1):
    """F = sinh(ℓt/2) / (ℓ sinh(t/2)) with t = α(H) and k = 1."""
    ell = 0.6
    spectral = SpectralParameter.from_coroot_values(a1, [ell])
    value = hypergeometric_service.f_eval(
        a1, MultiplicityFunction.build(a1, 1), spectral, [0.4, -0.4]
    )
    expected = math.sinh(ell * 0.4) / (ell * math.sinh(0.4))
    assert value == pytest.approx(expected, rel=1e-10)
    closed = hypergeometric_service.complex_group_closed_form(a1, spectral, [0.4, -0.4])
    assert closed == pytest.approx(expected, rel=1e-12)


def test_bc1_matches_jacobi_function(hypergeometric_service, jacobi_service, bc1):
    k1, k2 = Fraction(3, 2), Fraction(1, 2)
    ell = 0.4 + 1.1j
    k = MultiplicityFunction.build(bc1, {"short": k1, "double": k2})
    spectral = SpectralParameter.from_coroot_values(bc1, [ell])
    for x in (1.2, -0.7, 2.5):
        value = hypergeometric_service.f_eval(bc1, k, spectral, [x])
        expected = jacobi_service.jacobi_function(k1, k2, ell, abs(x) / 2)
        assert value == pytest.approx(expected, rel=1e-9)


def test_complex_group_closed_form_a2(hypergeometric_service, a2):
    spectral = SpectralParameter.from_coroot_values(a2, [0.3 + 0.9j, 0.45 + 0.2j])
    point = [0.9, -0.2, -0.7]
    value = hypergeometric_service.f_eval(a2, MultiplicityFunction.build(a2, 1), spectral, point)
    closed = hypergeometric_service.complex_group_closed_form(a2, spectral, point)
    assert value == pytest.approx(closed, rel=1e-8)


def test_closed_form_needs_a_reduced_system(hypergeometric_service, bc1):
    with pytest.raises(ParameterOutOfRange):
        hypergeometric_service.complex_group_closed_form(
            bc1, SpectralParameter.from_coroot_values(bc1, [0.5j]), [1.0]
        )


def test_weyl_invariance_b2(hypergeometric_service, root_service, b2):
    k = MultiplicityFunction.build(b2, {"short": Fraction(1, 2), "long": 1})
    spectral = SpectralParameter.from_coroot_values(b2, [0.2 + 0.8j, 0.35 + 0.3j])
    point = np.array([0.9, -0.35])
    reference = hypergeometric_service.f_eval(b2, k, spectral, point)
    for w in root_service.weyl_elements(b2):
        moved = w.act_cartan(point)
        assert hypergeometric_service.f_eval(b2, k, spectral, moved) == pytest.approx(
            reference, rel=1e-9
        )
    # −1 ∈ W(B2), so F(−λ) = F(λ)
    assert hypergeometric_service.f_eval(b2, k, -spectral, point) == pytest.approx(
        reference, rel=1e-9
    )


def test_origin_and_walls_are_rejected(hypergeometric_service, a1):
    k = MultiplicityFunction.build(a1, 1)
    spectral = SpectralParameter.from_coroot_values(a1, [0.6])
    with pytest.raises(TooCloseToWallOrOrigin):
        hypergeometric_service.f_eval(a1, k, spectral, [0.0, 0.0])
    with pytest.raises(TooCloseToWallOrOrigin):
        hypergeometric_service.f_eval(a1, k, spectral, [0.001, -0.001])


def test_non_regular_multiplicity_is_rejected(hypergeometric_service, a1):
    spectral = SpectralParameter.from_coroot_values(a1, [0.6])
    with pytest.raises(NotRegular):
        hypergeometric_service.f_eval(
            a1, MultiplicityFunction.build(a1, Fraction(-1, 2)), spectral, [0.5, -0.5]
        )


def test_asymptotics_recover_the_c_function(hypergeometric_service, c_function_service, a1):
    k = MultiplicityFunction.build(a1, 1)
    spectral = SpectralParameter.from_coroot_values(a1, [0.6])
    value = hypergeometric_service.asymptotic_c(a1, k, spectral, [0.5, -0.5], t=30)
    assert value == pytest.approx(c_function_service.c_norm(a1, k, spectral), rel=1e-6)
    with pytest.raises(ParameterOutOfRange):
        hypergeometric_service.asymptotic_c(a1, k, spectral, [-0.5, 0.5], t=30)


def test_cosh_factor_sp_p1(hypergeometric_service, sp21_entry):
    """cosh(α)^{−1∓n} for the upper and lower pairs, n = 2."""
    exponents = []
    for index in range(2):
        factor = hypergeometric_service.entry_cosh_factor(sp21_entry, index)
        (term,) = factor.terms
        assert term.half_exponent == 0
        exponents.append(term.full_exponent)
    assert exponents == [-3, 1]

    factor = hypergeometric_service.entry_cosh_factor(sp21_entry, 0)
    assert factor.evaluate([0.8]) == pytest.approx(math.cosh(0.8) ** -3)


def test_cosh_factor_so_2r1(hypergeometric_service, so41_entry):
    factor = hypergeometric_service.entry_cosh_factor(so41_entry)
    (term,) = factor.terms
    assert term.half_exponent == 1
    assert term.full_exponent == 0
    assert factor.describe() == "cosh((1)/2)^(1)"
    np.testing.assert_allclose(
        factor.evaluate_many(np.array([[0.4], [-1.0]])), np.cosh([0.2, -0.5])
    )


def test_cosh_factor_trivial(hypergeometric_service, trivial_a1_entry):
    factor = hypergeometric_service.entry_cosh_factor(trivial_a1_entry)
    assert factor.is_trivial
    assert factor.describe() == "1"


def test_cosh_factor_checks_the_regularity_relation(hypergeometric_service, sp21_entry):
    pair = sp21_entry.pair()
    shifted = pair.k_pi.shifted(Fraction(1, 7))
    with pytest.raises(RegularityViolated):
        hypergeometric_service.cosh_factor(
            sp21_entry.system, sp21_entry.m, pair.system_pi, shifted
        )


def test_trivial_upsilon_is_the_doubled_system_function(hypergeometric_service, trivial_a1_entry):
    """Σ^π = 2Σ with k^π = 1 is reduced, so the alternating-sum formula applies."""
    pair = trivial_a1_entry.pair()
    spectral = SpectralParameter.from_coroot_values(pair.system_pi, [0.6])
    point = [0.35, -0.35]
    value = hypergeometric_service.upsilon_eval(trivial_a1_entry, spectral, point)
    closed = hypergeometric_service.complex_group_closed_form(pair.system_pi, spectral, point)
    assert value == pytest.approx(closed, rel=1e-10)


@pytest.mark.parametrize(
    "entry_name,point,coroot_values",
    [
        ("trivial_a1_entry", [0.25, -0.25], [0.3]),
        ("trivial_a2_entry", [0.5, 0.1, -0.6], [0.3, 0.2]),
        ("sp21_entry", [0.5], [0.3]),
        ("so41_entry", [0.5], [0.3]),
    ],
)
def test_casimir_residual_is_small(
    hypergeometric_service, request, entry_name, point, coroot_values
):
    entry = request.getfixturevalue(entry_name)
    spectral = SpectralParameter.from_coroot_values(entry.system, coroot_values)
    residual = hypergeometric_service.casimir_residual(entry, spectral, point)
    assert residual <= 1e-5


def test_casimir_residual_of_the_lower_sp_pair(hypergeometric_service, sp21_entry):
    spectral = SpectralParameter.from_coroot_values(sp21_entry.system, [0.25 + 0.6j])
    residual = hypergeometric_service.casimir_residual(
        sp21_entry, spectral, [0.6], pair_index=1
    )
    assert residual <= 1e-5


@pytest.mark.parametrize("entry_name", ["sp21_entry", "so41_entry"])
def test_casimir_residual_detects_a_wrong_kappa(hypergeometric_service, request, entry_name):
    entry = request.getfixturevalue(entry_name)
    spectral = SpectralParameter.from_coroot_values(entry.system, [0.3])
    residual = hypergeometric_service.casimir_residual(
        entry, spectral, [0.5], kappa=entry.kappa.shifted(Fraction(1, 10))
    )
    assert residual >= 1e-2


def test_casimir_step_checks(hypergeometric_service, trivial_a1_entry):
    spectral = SpectralParameter.from_coroot_values(trivial_a1_entry.system, [0.3])
    with pytest.raises(StepTooLarge):
        hypergeometric_service.casimir_residual(
            trivial_a1_entry, spectral, [0.02, -0.02], step=0.05
        )
    with pytest.raises(ParameterOutOfRange):
        hypergeometric_service.casimir_residual(trivial_a1_entry, spectral, [0.5, -0.5], step=0)


@pytest.mark.parametrize("entry_name", ["sp21_entry", "so41_entry"])
def test_potentials_agree(hypergeometric_service, request, entry_name):
    entry = request.getfixturevalue(entry_name)
    for index, pair in enumerate(entry.valid_pairs):
        for x in (0.3, 0.8, 1.7):
            lhs = hypergeometric_service.potential_from_multiplicity(
                pair.system_pi, pair.k_pi, [x]
            )
            rhs = hypergeometric_service.potential_from_group(entry.system, entry.m, entry.kappa, [x])
            assert lhs == pytest.approx(rhs, rel=1e-12), (index, x)


def test_asymptotic_error_decreases(hypergeometric_service, c_function_service, a1):
    k = MultiplicityFunction.build(a1, 1)
    spectral = SpectralParameter.from_coroot_values(a1, [1.2])
    c = c_function_service.c_norm(a1, k, spectral)
    errors = [
        abs(hypergeometric_service.asymptotic_c(a1, k, spectral, [0.5, -0.5], t=t) - c)
        for t in (4, 8, 16)
    ]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 1e-4


def test_reflection_identity_g2(hypergeometric_service, root_service, multiplicity_factory, g2):
    """F(λ; −H) = F(−λ; H)."""
    k = multiplicity_factory(g2)
    spectral = SpectralParameter.from_coroot_values(g2, [0.2 + 0.7j, 0.4 + 0.3j])
    point = root_service.cartan_point(g2, [0.6, 0.9])
    lhs = hypergeometric_service.f_eval(g2, k, spectral, -point)
    rhs = hypergeometric_service.f_eval(g2, k, -spectral, point)
    assert lhs == pytest.approx(rhs, rel=1e-9)


@pytest.mark.parametrize("point", [[0.7, 0.2], [0.3, 0.1]])
def test_f_does_not_depend_on_the_positive_system(
    hypergeometric_service, root_service, multiplicity_factory, b2, point
):
    flipped = root_service.custom_root_system(b2.roots, b2.gram, chamber=(-1, -3))
    assert set(flipped.positive_roots) != set(b2.positive_roots)
    spectral = SpectralParameter.from_array([0.3 + 0.5j, 0.8 - 0.2j])
    fixed = MultiplicityFunction.build(b2, {"short": Fraction(3, 4), "long": Fraction(1, 2)})
    expected = hypergeometric_service.f_eval(b2, fixed, spectral, point)
    value = hypergeometric_service.f_eval(
        flipped, MultiplicityFunction.build(flipped, fixed.as_dict()), spectral, point
    )
    assert value == pytest.approx(expected, rel=1e-9, abs=1e-9)

    for _ in range(5):
        k = multiplicity_factory(b2)
        k_flipped = MultiplicityFunction.build(flipped, k.as_dict())
        try:
            expected = hypergeometric_service.f_eval(b2, k, spectral, point)
            value = hypergeometric_service.f_eval(flipped, k_flipped, spectral, point)
        except TooCloseToWallOrOrigin:
            # large k near the origin: both systems see the same cancellation
            continue
        assert value == pytest.approx(expected, rel=1e-7, abs=1e-7), k.as_dict()


@pytest.mark.parametrize("scale", [0.1, 0.05])
def test_cancellation_near_the_origin_is_refused(
    hypergeometric_service, root_service, policy_factory, b2, scale
):
    k = MultiplicityFunction.build(b2, {"short": Fraction(5, 2), "long": Fraction(3, 2)})
    spectral = SpectralParameter.from_array([0.3 + 0.5j, 0.8 - 0.2j])
    point = scale * root_service.cartan_point(b2, [0.7, 1.1])
    with pytest.raises((TooCloseToWallOrOrigin, TailNotConverged)):
        hypergeometric_service.f_eval(
            b2, k, spectral, point, policy=policy_factory(height_limit=320)
        )


def test_lenient_evaluation_marks_lost_points(
    hypergeometric_service, root_service, policy_factory, b2
):
    k = MultiplicityFunction.build(b2, {"short": Fraction(5, 2), "long": Fraction(3, 2)})
    spectral = SpectralParameter.from_array([0.3 + 0.5j, 0.8 - 0.2j])
    direction = root_service.cartan_point(b2, [0.7, 1.1])
    points = np.stack([0.15 * direction, 1.5 * direction])
    policy = policy_factory(precision_tol=1e-11, height_limit=320)
    values = hypergeometric_service.f_eval_many(
        b2, k, spectral, points, policy=policy, strict=False
    )
    assert np.isnan(values[0])
    assert np.isfinite(values[1])
    alone = hypergeometric_service.f_eval(b2, k, spectral, points[1], policy=policy)
    assert values[1] == pytest.approx(alone, rel=1e-9, abs=1e-9)
    with pytest.raises(TooCloseToWallOrOrigin):
        hypergeometric_service.f_eval_many(b2, k, spectral, points, policy=policy)


def test_ray_extrapolation_reaches_one_at_the_origin(
    hypergeometric_service, root_service, faker, b2
):
    """F(sH) is even in s, so a cubic fit in s² extrapolates to F(0) = 1."""
    spectral = SpectralParameter.from_array([0.3 + 0.5j, 0.8 - 0.2j])
    direction = root_service.cartan_point(b2, [0.7, 1.1])
    scales = np.array([0.5, 0.4, 0.3, 0.2])
    for _ in range(5):
        k = MultiplicityFunction.build(
            b2,
            {
                "short": Fraction(faker.random_int(1, 4), 4),
                "long": Fraction(faker.random_int(1, 4), 4),
            },
        )
        values = hypergeometric_service.f_eval_many(b2, k, spectral, np.outer(scales, direction))
        real = np.polynomial.polynomial.polyfit(scales**2, values.real, 3)[0]
        imag = np.polynomial.polynomial.polyfit(scales**2, values.imag, 3)[0]
        assert complex(real, imag) == pytest.approx(1.0, abs=1e-4), k.as_dict()
