from fractions import Fraction

import pytest

from app.models.multiplicity import MultiplicityFunction
from app.utils.exact import format_rational, scale


HERMITIAN_GROUPS = [
    ("su(p,q)", {"p": 3, "q": 1}),
    ("su(p,q)", {"p": 2, "q": 2}),
    ("su(p,q)", {"p": 4, "q": 2}),
    ("sp(n,R)", {"n": 2}),
    ("sp(n,R)", {"n": 3}),
    ("so*(2n)", {"n": 3}),
    ("so*(2n)", {"n": 4}),
    ("so(p,2)", {"p": 3}),
    ("so(p,2)", {"p": 5}),
    ("e6(-14)", {}),
    ("e7(-25)", {}),
]
HERMITIAN_NU = [Fraction(s, 2) for s in (1, -1, 2, -2, 3, -3, 4)]
SO_PQ_PAIRS = [(5, 3), (6, 3), (7, 3), (7, 5), (8, 5)]

CATALOG_SWEEP = (
    [("sp(p,1)", {"p": p, "n": n}) for p in range(1, 6) for n in range(1, 7)]
    + [("so(2r,1)", {"r": r, "s": s}) for r in range(2, 6) for s in range(0, 5)]
    + [("so(p,q)", {"p": p, "q": q, "case": "i"}) for p, q in SO_PQ_PAIRS]
    + [
        ("so(p,q)", {"p": p, "q": q, "case": "ii"})
        for p, q in SO_PQ_PAIRS
        if p % 2 == 0 and q % 2 == 1
    ]
    + [(key, {**params, "nu": nu}) for key, params in HERMITIAN_GROUPS for nu in HERMITIAN_NU]
    + [(key, {}) for key in ("f4(4)", "e6(2)", "e7(-5)", "e8(-24)")]
    + [("sl(p,R)", {"p": p}) for p in (3, 4, 5)]
    + [("so(p,p)", {"p": p}) for p in (3, 4)]
    + [("G2", {})]
)


def _key(k_by_root):
    return frozenset((tuple(root), format_rational(value)) for root, value in k_by_root)


def _values(candidate, multiples):
    return tuple(candidate.k_pi.at((Fraction(c),)) for c in multiples)


@pytest.fixture(scope="function")
def bc1_group(bc1):
    """Σ = BC1 with m = (4, 3) and κ = (0, −1), the data of sp(2,1) at n = 2."""
    m = MultiplicityFunction.build(bc1, {"short": 4, "double": 3})
    kappa = MultiplicityFunction.build(bc1, {"short": 0, "double": -1})
    return bc1, m, kappa


def test_branches_bc1(matching_service, bc1_group):
    system, m, kappa = bc1_group
    branches = matching_service.branches(system, m, kappa, system.simple_roots[0])
    assert [b.tag for b in branches] == ["(2)+", "(2)-"]
    assert [dict(b.values) for b in branches] == [
        {1: 0, 2: 5, 4: Fraction(-3, 2)},
        {1: 0, 2: 1, 4: Fraction(5, 2)},
    ]
    assert not any(b.irrational for b in branches)


def test_solve_matching_bc1(matching_service, bc1_group):
    system, m, kappa = bc1_group
    candidates = matching_service.solve_matching(system, m, kappa)
    assert len(candidates) == 2
    assert all(c.valid for c in candidates)
    assert {_values(c, (2, 4)) for c in candidates} == {
        (5, Fraction(-3, 2)),
        (1, Fraction(5, 2)),
    }
    for candidate in candidates:
        assert candidate.k_pi.at((Fraction(1),)) == 0
        assert [step.name for step in candidate.checks] == [
            "mc1",
            "root_system",
            "weyl_group",
            "matching",
            "regularity",
        ]


def test_mirror_branch_so_2r1(matching_service, root_service):
    """so(4,1), s = 1: m = 3, κ = −1 has the catalog pair and its mirror."""
    system = root_service.rank_one((1,))
    m = MultiplicityFunction.build(system, 3)
    kappa = MultiplicityFunction.build(system, -1)
    candidates = matching_service.solve_matching(system, m, kappa)
    assert all(c.valid for c in candidates)
    assert {_values(c, (1, 2)) for c in candidates} == {
        (-1, Fraction(5, 2)),
        (3, Fraction(-3, 2)),
    }


def test_perturbed_value_fails_the_matching_step(matching_service, bc1_group):
    system, m, kappa = bc1_group
    candidate = matching_service.solve_matching(system, m, kappa)[0]
    shifted = candidate.k_pi.shifted(Fraction(1, 7))
    report = matching_service.verify_matching(system, m, kappa, candidate.system_pi, shifted)
    assert not report.valid
    assert "matching" in report.failed_steps()
    assert "regularity" in report.failed_steps()
    assert report.step("mc1").passed
    assert report.step("weyl_group").passed
    assert report.step("matching").message.startswith("fails at α = (2)")


def test_g2_second_ktype_has_no_solution(matching_service, catalog_service):
    entry = next(
        e for e in catalog_service.entries("G2", {}) if e.ktype_name.startswith("π_2")
    )
    candidates = matching_service.solve_matching(entry.system, entry.m, entry.kappa)
    assert candidates
    assert not any(c.valid for c in candidates)
    assert all(c.failure_reason for c in candidates)


def test_negative_discriminant(matching_service, root_service):
    system = root_service.rank_one((1,))
    m = MultiplicityFunction.build(system, 1)
    kappa = MultiplicityFunction.build(system, 1)
    (candidate,) = matching_service.solve_matching(system, m, kappa)
    assert not candidate.valid
    assert candidate.system_pi is None
    assert "negative discriminant" in candidate.failure_reason


def test_irrational_branches(matching_service, root_service):
    """D = (m−1)² − 4mκ = 2 for m = 2, κ = −1/8."""
    system = root_service.rank_one((1,))
    m = MultiplicityFunction.build(system, 2)
    kappa = MultiplicityFunction.build(system, Fraction(-1, 8))
    branches = matching_service.branches(system, m, kappa, system.simple_roots[0])
    assert len(branches) == 2
    assert all(b.irrational for b in branches)
    candidates = matching_service.solve_matching(system, m, kappa)
    assert candidates
    assert all(c.irrational for c in candidates)


def test_representatives_g2(matching_service, g2):
    reps = matching_service.representatives(g2)
    assert sorted(g2.label(r) for r in reps) == ["long", "short"]


def test_matching_sides_for_the_catalog_pair(matching_service, sp21_entry):
    pair = sp21_entry.pair()
    for root in sp21_entry.system.positive_roots:
        for alpha in (root, scale(2, root)):
            lhs, rhs = matching_service.matching_sides(
                sp21_entry.m, sp21_entry.kappa, pair.k_pi, alpha
            )
            assert lhs == rhs


def test_same_weyl_group(matching_service, root_service, bc1):
    assert matching_service.same_weyl_group(bc1, root_service.rank_one((2,)))
    assert matching_service.same_weyl_group(bc1, root_service.rank_one((2, 4)))


@pytest.mark.parametrize(
    "key,params", CATALOG_SWEEP, ids=[f"{k}-{p}" for k, p in CATALOG_SWEEP]
)
def test_solver_reproduces_the_catalog(matching_service, catalog_service, key, params):
    entries = [e for e in catalog_service.entries(key, params) if e.matched]
    assert entries
    for entry in entries:
        found = {
            _key(c.k_by_root)
            for c in matching_service.solve_matching(entry.system, entry.m, entry.kappa)
            if c.valid
        }
        for pair in entry.matched:
            assert pair.valid, pair.failure_reason
            assert _key(pair.k_by_root) in found, (entry.ktype_name, pair.branch_tags)
