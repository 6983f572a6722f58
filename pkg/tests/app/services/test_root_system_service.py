from fractions import Fraction

import numpy as np
import pytest

from app.config import Settings
from app.exceptions import (
    HeightOverflow,
    NotARoot,
    ParameterOutOfRange,
    RankOutOfRange,
    UnknownFamily,
    WeylGroupTooLarge,
)
from app.models.cone import ConePoint
from app.models.multiplicity import MultiplicityFunction
from app.services.root_system_service import RootSystemService
from app.utils.exact import scale


def test_build_a1(a1):
    assert len(a1.roots) == 2
    assert len(a1.positive_roots) == 1
    assert a1.orbit_labels == ("long",)
    assert a1.is_reduced


def test_build_bc1(bc1):
    """BC1 = {±α, ±2α} with α as its only simple root."""
    assert len(bc1.roots) == 4
    assert len(bc1.positive_roots) == 2
    assert bc1.simple_roots == ((Fraction(1),),)
    assert bc1.orbit_labels == ("short", "double")
    assert not bc1.is_reduced
    assert bc1.indivisible_positive == ((Fraction(1),),)


def test_build_bc2_labels(bc2):
    assert bc2.orbit_labels == ("short", "medium", "double")
    assert len(bc2.orbit("medium")) == 4
    assert len(bc2.roots) == 12


def test_build_g2(root_service, g2):
    assert len(g2.roots) == 12
    assert len(g2.orbit("short")) == 6
    assert len(g2.orbit("long")) == 6
    assert root_service.weyl_order(g2) == 12
    assert len(root_service.weyl_elements(g2)) == 12


def test_build_from_full_name(root_service):
    system = root_service.build_root_system("bc2")
    assert system.name == "BC2"
    assert system.rank == 2


def test_f4_weyl_group_by_closure(root_service):
    f4 = root_service.build_root_system("F", 4)
    elements = root_service.weyl_elements(f4)
    assert len(elements) == 1152
    assert root_service.weyl_order(f4) == 1152
    assert sum(1 for w in elements if w.sign == 1) == 576


def test_weyl_group_cap(root_service):
    e8 = root_service.build_root_system("E", 8)
    with pytest.raises(WeylGroupTooLarge):
        root_service.weyl_elements(e8)


def test_unknown_family(root_service):
    with pytest.raises(UnknownFamily):
        root_service.build_root_system("Q", 2)
    with pytest.raises(UnknownFamily):
        root_service.build_root_system("Q2")


@pytest.mark.parametrize("family,rank", [("G", 3), ("E", 5), ("B", 1), ("D", 2), ("F", 2)])
def test_rank_out_of_range(root_service, family, rank):
    with pytest.raises(RankOutOfRange):
        root_service.build_root_system(family, rank)


def test_coroot(root_service, a1, bc1):
    alpha = a1.positive_roots[0]
    assert root_service.coroot(a1, alpha) == alpha
    # (2α)^∨ = α^∨ / 2
    assert root_service.coroot(bc1, (2,)) == (Fraction(1),)
    assert root_service.coroot(bc1, (1,)) == (Fraction(2),)


def test_coroot_rejects_non_roots(root_service, a1):
    with pytest.raises(NotARoot):
        root_service.coroot(a1, (1, 1))


def test_coroot_pairing_is_two(g2, bc2):
    for system in (g2, bc2):
        for root in system.roots:
            assert system.coroot_pairing(root, root) == 2


def test_cartan_matrix_g2(g2):
    entries = sorted(x for row in g2.cartan_matrix for x in row)
    assert entries == [-3, -1, 2, 2]


def test_rho_weighted_a1(root_service, a1):
    k = MultiplicityFunction.build(a1, 1)
    alpha = a1.positive_roots[0]
    assert root_service.rho_weighted(a1, k) == scale(Fraction(1, 2), alpha)


def test_rho_weighted_bc1(root_service, bc1, faker):
    a = Fraction(faker.random_int(min=1, max=9), 2)
    b = Fraction(faker.random_int(min=1, max=9), 4)
    k = MultiplicityFunction.build(bc1, {"short": a, "double": b})
    assert root_service.rho_weighted(bc1, k) == (a / 2 + b,)


def test_rho_weighted_b2(root_service, b2):
    k = MultiplicityFunction.build(b2, Fraction(1, 2))
    total = [sum(r[i] for r in b2.positive_roots) for i in range(2)]
    assert root_service.rho_weighted(b2, k) == tuple(Fraction(x, 4) for x in total)
    assert root_service.rho_weighted(b2, k) == (Fraction(3, 4), Fraction(1, 4))


def test_enumerate_cone_a1(root_service, a1):
    points = root_service.enumerate_cone(a1, 3)
    assert points == [ConePoint((j,)) for j in range(4)]
    assert [p.vector(a1) for p in points][1] == a1.simple_roots[0]


def test_enumerate_cone_a2(root_service, a2):
    points = root_service.enumerate_cone(a2, 2)
    assert [p.coords for p in points] == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def test_enumerate_cone_bc1(root_service, bc1):
    points = root_service.enumerate_cone(bc1, 2)
    assert [p.vector(bc1) for p in points] == [(0,), (1,), (2,)]


def test_cone_points_overflow(a2):
    service = RootSystemService(Settings(max_cone_points=10))
    with pytest.raises(HeightOverflow):
        service.cone_points(a2, 5)


def test_validate_g2(root_service, g2):
    report = root_service.validate_root_system(g2.roots, g2.gram, expected_rank=2)
    assert report.valid
    assert report.size == 12
    assert report.rank == 2


def test_validate_rejects_three_collinear_lengths(root_service):
    vectors = [(1,), (-1,), (2,), (-2,), (4,), (-4,)]
    report = root_service.validate_root_system(vectors, [[1]])
    assert not report.valid
    assert "proportionality" in report.failed_steps()


def test_validate_rejects_g2_short_doubled(root_service, g2):
    """Σ_short ∪ 2Σ_short ∪ Σ_long has ⟨γ, (2β)^∨⟩ = 3/2."""
    short = g2.orbit("short")
    vectors = short + [scale(2, r) for r in short] + g2.orbit("long")
    report = root_service.validate_root_system(vectors, g2.gram)
    assert not report.valid
    assert "crystallographic" in report.failed_steps()
    assert "3/2" in report.step("crystallographic").message


def test_validate_rejects_missing_negatives(root_service):
    report = root_service.validate_root_system([(1, 0), (0, 1), (0, -1)], [[1, 0], [0, 1]])
    assert "symmetric" in report.failed_steps()


def test_custom_root_system_rejects_invalid(root_service):
    with pytest.raises(ParameterOutOfRange):
        root_service.custom_root_system([(1,), (-1,), (3,), (-3,)], [[1]])


def test_rank_one_systems(root_service):
    bc = root_service.rank_one((1, 2))
    doubled = root_service.rank_one((2,))
    assert bc.orbit_labels == ("short", "double")
    assert doubled.orbit_labels == ("long",)
    assert doubled.simple_roots == ((Fraction(2),),)
    assert root_service.weyl_order(bc) is None
    assert len(root_service.weyl_elements(bc)) == 2


def test_rescale_keeps_roots(root_service, b2):
    scaled = root_service.rescale(b2, 3)
    assert scaled.roots == b2.roots
    for root in b2.roots:
        assert scaled.norm2(root) == 3 * b2.norm2(root)
    assert scaled.cartan_matrix == b2.cartan_matrix


def test_chamber_map_fixes_negative_chamber(root_service, a1):
    point = np.array([-1.0, 1.0])
    w, moved = root_service.chamber_map(a1, point)
    assert w.is_identity
    np.testing.assert_allclose(moved, point)


def test_chamber_map_reflects_a1(root_service, a1):
    w, moved = root_service.chamber_map(a1, np.array([1.0, -1.0]))
    assert w.sign == -1
    assert w.word_length == 1
    np.testing.assert_allclose(moved, [-1.0, 1.0])


def test_chamber_map_lands_in_closed_negative_chamber(root_service, b2, g2, faker):
    for system in (b2, g2):
        point = np.array(
            [faker.pyfloat(min_value=-3, max_value=3) for _ in range(system.ambient_dim)]
        )
        w, moved = root_service.chamber_map(system, point)
        assert np.all(system.simple_array @ moved <= 1e-12)
        np.testing.assert_allclose(w.act_cartan(point), moved, atol=1e-12)
        # α(H) is preserved as a multiset over the roots
        np.testing.assert_allclose(
            np.sort(np.abs(system.positive_array @ point)),
            np.sort(np.abs(system.positive_array @ moved)),
            atol=1e-12,
        )


def test_cartan_point(root_service, b2):
    h = root_service.cartan_point(b2, [0.7, -1.1])
    np.testing.assert_allclose(b2.simple_array @ h, [0.7, -1.1])


def test_describe(root_service, g2):
    view = root_service.describe(g2)
    assert view.name == "G2"
    assert view.weyl_order == 12
    assert view.reduced
    assert [orbit.size for orbit in view.orbits] == [6, 6]


def test_multiplicity_build_errors(bc1):
    with pytest.raises(ParameterOutOfRange):
        MultiplicityFunction.build(bc1, {"short": 1, "long": 2})
    with pytest.raises(ParameterOutOfRange):
        MultiplicityFunction.build(bc1, {"short": 1})
    with pytest.raises(ParameterOutOfRange):
        MultiplicityFunction.build(bc1, [1, 2, 3])


def test_multiplicity_reads_zero_off_the_system(a1):
    k = MultiplicityFunction.build(a1, 1)
    alpha = a1.positive_roots[0]
    assert k.at(alpha) == 1
    assert k.at(scale(2, alpha)) == 0
    assert k.at_half(alpha) == 0
