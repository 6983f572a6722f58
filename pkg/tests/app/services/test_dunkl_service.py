from fractions import Fraction

import pytest
import sympy

from app.exceptions import DegreeCapExceeded
from app.models.multiplicity import MultiplicityFunction
from app.services.dunkl_service import bernoulli_plus


def test_reflection_swaps_coordinates(dunkl_service, a1):
    ring = dunkl_service.ring(a1)
    x0, x1 = ring.gens
    reflected = dunkl_service.reflect(a1, a1.positive_roots[0], ring.poly(x0**2 + 3 * x1))
    assert reflected.as_expr() == x1**2 + 3 * x0


def test_dunkl_kills_constants(dunkl_service, a2):
    k = MultiplicityFunction.build(a2, Fraction(2, 5))
    ring = dunkl_service.ring(a2)
    assert dunkl_service.dunkl_apply(a2, k, (1, 0, 0), ring.one()).is_zero


def test_dunkl_a1_on_the_root(dunkl_service, a1, multiplicity_factory):
    k = multiplicity_factory(a1)
    kappa = sympy.Rational(k.at(a1.positive_roots[0]))
    ring = dunkl_service.ring(a1)
    result = dunkl_service.dunkl_apply(a1, k, (1, 0), ring.linear((1, -1)))
    assert result.as_expr() == 1 + 2 * kappa


def test_dunkl_operators_commute(dunkl_service, a2):
    k = MultiplicityFunction.build(a2, Fraction(1, 3))
    ring = dunkl_service.ring(a2)
    x0, x1, x2 = ring.gens
    p = ring.poly(x0**2 * x1 + x2**3 - 2 * x0 * x1 * x2)
    xi, eta = (1, 0, 0), (0, 1, -1)
    first = dunkl_service.dunkl_apply(a2, k, xi, dunkl_service.dunkl_apply(a2, k, eta, p))
    second = dunkl_service.dunkl_apply(a2, k, eta, dunkl_service.dunkl_apply(a2, k, xi, p))
    assert (first - second).is_zero


def test_pairing_gram_a1_degree_one(dunkl_service, a1):
    k = MultiplicityFunction.build(a1, Fraction(1, 3))
    kappa = sympy.Rational(1, 3)
    blocks = dunkl_service.pairing_gram(a1, k, 1)
    monomials, block = blocks[1]
    assert monomials == [(1, 0), (0, 1)]
    assert block == sympy.Matrix([[1 + kappa, -kappa], [-kappa, 1 + kappa]])
    assert block.det() == 1 + 2 * kappa


def test_gram_report(dunkl_service, a1):
    report = dunkl_service.gram_report(a1, MultiplicityFunction.build(a1, Fraction(1, 3)), 2)
    assert report.system == "A1"
    assert [block.degree for block in report.blocks] == [0, 1, 2]
    assert report.blocks[1].determinant == "5/3"
    assert all(block.symmetric for block in report.blocks)
    assert report.regular


@pytest.mark.parametrize("k,regular", [(Fraction(-1, 2), False), (Fraction(1, 2), True)])
def test_regular_by_gram(dunkl_service, a1, k, regular):
    assert dunkl_service.regular_by_gram(a1, MultiplicityFunction.build(a1, k), 3) is regular


def test_cherednik_on_constants_is_minus_rho(dunkl_service, a1):
    k = MultiplicityFunction.build(a1, Fraction(1, 2))
    ring = dunkl_service.ring(a1)
    result = dunkl_service.cherednik_apply(a1, k, (1, 0), ring.one(), 2)
    assert result.as_expr() == sympy.Rational(-1, 4)


def test_cherednik_degree_one(dunkl_service, a1):
    k = MultiplicityFunction.build(a1, Fraction(2, 3))
    kappa = sympy.Rational(2, 3)
    ring = dunkl_service.ring(a1)
    x0, x1 = ring.gens
    result = dunkl_service.cherednik_apply(a1, k, (1, 0), ring.poly(x0), 1)
    assert sympy.expand(result.as_expr() - (1 + kappa - kappa / 2 * x1)) == 0


def test_cherednik_degree_cap(dunkl_service, a1):
    ring = dunkl_service.ring(a1)
    x0, _ = ring.gens
    with pytest.raises(DegreeCapExceeded):
        dunkl_service.cherednik_apply(
            a1, MultiplicityFunction.build(a1, 1), (1, 0), ring.poly(x0**2), 1
        )


def test_bernoulli_plus():
    assert bernoulli_plus(0) == 1
    assert bernoulli_plus(1) == sympy.Rational(1, 2)
    assert bernoulli_plus(2) == sympy.Rational(1, 6)
    assert bernoulli_plus(3) == 0


@pytest.mark.parametrize("system_name", ["a1", "a2", "b2"])
def test_gram_certificate_agrees_with_the_c_function(
    dunkl_service, c_function_service, multiplicity_factory, request, system_name
):
    system = request.getfixturevalue(system_name)
    k = multiplicity_factory(system)
    degree = len(system.positive_roots)
    assert dunkl_service.regular_by_gram(system, k, degree) is c_function_service.is_regular(
        system, k
    )
    assert c_function_service.is_regular(system, k)


@pytest.mark.parametrize("system_name", ["a1", "a2", "b2"])
def test_gram_certificate_over_random_rational_k(
    dunkl_service, c_function_service, faker, request, system_name
):
    system = request.getfixturevalue(system_name)
    degree = len(system.positive_roots)
    # numerators avoid the singular values that only degenerate above degree #Σ⁺
    numerators = [-1, 0] + list(range(2, 11))
    for _ in range(20):
        k = MultiplicityFunction.build(
            system,
            {label: Fraction(faker.random_element(numerators), 4) for label in system.orbit_labels},
        )
        by_gram = dunkl_service.regular_by_gram(system, k, degree)
        assert by_gram is c_function_service.is_regular(system, k), k.as_dict()


@pytest.mark.parametrize(
    "system_name,values",
    [
        ("a1", Fraction(-1, 2)),
        ("a2", Fraction(-1, 3)),
        ("b2", {"short": Fraction(-1, 4), "long": Fraction(-1, 4)}),
    ],
)
def test_singular_k_fails_both_certificates(
    dunkl_service, c_function_service, request, system_name, values
):
    system = request.getfixturevalue(system_name)
    k = MultiplicityFunction.build(system, values)
    assert not c_function_service.is_regular(system, k)
    assert dunkl_service.regular_by_gram(system, k, len(system.positive_roots)) is False
    # the degree-one block is already singular
    assert dunkl_service.regular_by_gram(system, k, 1) is False
