import cmath
import math
from fractions import Fraction

import pytest
from scipy.special import loggamma

from app.exceptions import MC1Violated, NotRegular, PoleAtNonpositiveInteger
from app.models.multiplicity import MultiplicityFunction
from app.models.spectral import SpectralParameter


def test_log_gamma_special_values(c_function_service):
    assert c_function_service.log_gamma(1) == pytest.approx(0, abs=1e-14)
    assert c_function_service.log_gamma(Fraction(1, 2)) == pytest.approx(
        math.log(math.sqrt(math.pi)), rel=1e-14
    )


def test_log_gamma_recurrence(c_function_service):
    z = 2 + 3j
    step = c_function_service.log_gamma(z + 1) - c_function_service.log_gamma(z)
    assert cmath.exp(step) == pytest.approx(z, rel=1e-13)


@pytest.mark.parametrize("z", [2 + 3j, 0.3 - 1.2j, 7.5, -2.5 + 0.7j, -0.4 - 3j])
def test_log_gamma_matches_principal_branch(c_function_service, z):
    assert c_function_service.log_gamma(z) == pytest.approx(complex(loggamma(z)), abs=1e-11)


def test_log_gamma_poles(c_function_service):
    with pytest.raises(PoleAtNonpositiveInteger):
        c_function_service.log_gamma(-2)
    with pytest.raises(PoleAtNonpositiveInteger):
        c_function_service.log_gamma(Fraction(0))


def test_c_tilde_is_one_for_zero_multiplicity(c_function_service, b2):
    spectral = SpectralParameter.from_coroot_values(b2, [0.4 + 1j, -0.2 + 0.5j])
    result = c_function_service.c_tilde(b2, MultiplicityFunction.zero(b2), spectral)
    assert result.value == 1
    assert result.order == 0
    assert not result.pole_flags


def test_c_norm_a1_unit_multiplicity(c_function_service, a1):
    """c(λ) = Γ(ℓ)/Γ(ℓ+1) = 1/ℓ for k = 1."""
    ell = 0.6 + 0.3j
    spectral = SpectralParameter.from_coroot_values(a1, [ell])
    value = c_function_service.c_norm(a1, MultiplicityFunction.build(a1, 1), spectral)
    assert value == pytest.approx(1 / ell, rel=1e-12)


def test_c_norm_is_one_at_rho(c_function_service, bc2, multiplicity_factory):
    k = multiplicity_factory(bc2)
    rho = c_function_service.rho_parameter(bc2, k)
    assert c_function_service.c_norm(bc2, k, rho) == pytest.approx(1, rel=1e-13)


def test_c_tilde_at_rho_limit_for_zero_multiplicity(c_function_service, a1):
    result = c_function_service.c_tilde(a1, MultiplicityFunction.zero(a1), at_rho=True)
    assert result.limit_used
    assert result.order == 0
    assert result.value == pytest.approx(2, rel=1e-14)
    assert {flag.side for flag in result.pole_flags} == {"numerator", "denominator"}


def test_c_norm_for_zero_multiplicity_is_one_half(c_function_service, a1):
    spectral = SpectralParameter.from_coroot_values(a1, [1.7j])
    value = c_function_service.c_norm(a1, MultiplicityFunction.zero(a1), spectral)
    assert value == pytest.approx(0.5, rel=1e-14)


@pytest.mark.parametrize(
    "k,regular",
    [(Fraction(1, 2), True), (Fraction(-1, 2), False), (0, True), (3, True)],
)
def test_is_regular_a1(c_function_service, a1, k, regular):
    assert c_function_service.is_regular(a1, MultiplicityFunction.build(a1, k)) is regular


def test_c_norm_requires_regular_multiplicity(c_function_service, a1):
    spectral = SpectralParameter.from_coroot_values(a1, [0.5j])
    with pytest.raises(NotRegular):
        c_function_service.c_norm(a1, MultiplicityFunction.build(a1, Fraction(-1, 2)), spectral)


def test_e_exponent_sp_p1(c_function_service, sp21_entry):
    """Upper and lower pairs of sp(2,1) with n = 2 give e = 1 ± n."""
    exponents = [
        c_function_service.e_exponent(sp21_entry.system, sp21_entry.m, pair.system_pi, pair.k_pi)
        for pair in sp21_entry.valid_pairs
    ]
    assert exponents == [3, -1]


def test_e_exponent_so_2r1(c_function_service, so41_entry):
    pair = so41_entry.pair()
    e = c_function_service.e_exponent(so41_entry.system, so41_entry.m, pair.system_pi, pair.k_pi)
    assert e == -1


def test_e_exponent_trivial(c_function_service, trivial_a1_entry):
    pair = trivial_a1_entry.pair()
    e = c_function_service.e_exponent(
        trivial_a1_entry.system, trivial_a1_entry.m, pair.system_pi, pair.k_pi
    )
    assert e == 0


def test_c_pi_trivial_is_the_c_function_of_the_doubled_system(
    c_function_service, trivial_a1_entry
):
    pair = trivial_a1_entry.pair()
    spectral = SpectralParameter.from_coroot_values(pair.system_pi, [0.8 + 0.1j])
    assert c_function_service.c_pi(trivial_a1_entry, spectral) == pytest.approx(
        c_function_service.c_norm(pair.system_pi, pair.k_pi, spectral)
    )


def test_mc1_violation(c_function_service, root_service):
    system = root_service.rank_one((2,))
    system_pi = root_service.rank_one((1,))
    with pytest.raises(MC1Violated):
        c_function_service.e_exponent(
            system,
            MultiplicityFunction.build(system, 1),
            system_pi,
            MultiplicityFunction.zero(system_pi),
        )
