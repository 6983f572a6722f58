from fractions import Fraction

import pytest

from app.exceptions import ParameterOutOfRange, UnknownFamily
from app.schemas.ktype import KTypeFilter, SmallKTypeView
from app.utils.exact import scale


def test_sp_p1_entry(catalog_entry_factory):
    """sp(2,1) with n = 3: m = (4, 3) and κ_double = −(n²−1)/3 = −8/3."""
    entry = catalog_entry_factory("sp(p,1)", p=2, n=3)
    assert entry.system.orbit_labels == ("short", "double")
    assert entry.m["short"] == 4
    assert entry.m["double"] == 3
    assert entry.kappa["short"] == 0
    assert entry.kappa["double"] == Fraction(-8, 3)
    assert len(entry.valid_pairs) == 2
    assert [pair.branch_tags["catalog"] for pair in entry.valid_pairs] == ["upper", "lower"]


def test_sp_11_uses_the_doubled_line(catalog_entry_factory):
    entry = catalog_entry_factory("sp(p,1)", p=1, n=2)
    assert entry.system.orbit_labels == ("long",)
    assert entry.m["long"] == 3
    assert len(entry.valid_pairs) == 2


@pytest.mark.parametrize("p", [1, 2, 3])
def test_sp_p1_accepts_n_equal_to_one(catalog_entry_factory, p):
    """n = 1: κ vanishes and both lines k_2α = 2p−1±1, k_4α = ½∓1 verify."""
    entry = catalog_entry_factory("sp(p,1)", p=p, n=1)
    assert set(entry.kappa.as_dict().values()) == {0}
    assert len(entry.valid_pairs) == 2
    alpha = (Fraction(1),)
    upper, lower = entry.valid_pairs
    assert upper.k_pi.at(scale(2, alpha)) == 2 * p
    assert upper.k_pi.at(scale(4, alpha)) == Fraction(-1, 2)
    assert lower.k_pi.at(scale(2, alpha)) == 2 * p - 2
    assert lower.k_pi.at(scale(4, alpha)) == Fraction(3, 2)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_so_2r1_accepts_s_equal_to_zero(catalog_entry_factory, r):
    """s = 0 keeps α in Σ^π with k_α = 0 next to k_2α = r − ½."""
    entry = catalog_entry_factory("so(2r,1)", r=r, s=0)
    assert entry.kappa["long"] == 0
    pair = entry.pair()
    assert set(pair.system_pi.roots) == {
        (Fraction(1),),
        (Fraction(-1),),
        (Fraction(2),),
        (Fraction(-2),),
    }
    assert pair.k_pi.at((Fraction(1),)) == 0
    assert pair.k_pi.at((Fraction(2),)) == r - Fraction(1, 2)


def test_so_2r1_entry(so41_entry):
    assert so41_entry.m["long"] == 3
    assert so41_entry.kappa["long"] == -1
    pair = so41_entry.pair()
    assert pair.k_pi.at((Fraction(1),)) == -1
    assert pair.k_pi.at((Fraction(2),)) == Fraction(5, 2)


def test_g2_entries(catalog_service):
    entries = catalog_service.entries("G2", {})
    assert len(entries) == 2
    first, second = entries
    assert first.ktype_name == "π_1 = σ∘pr_1"
    pair = first.pair()
    assert set(pair.system_pi.roots) == set(first.system.roots)
    assert set(pair.k_pi.as_dict().values()) == {Fraction(1, 2)}
    assert second.ktype_name == "π_2 = σ∘pr_2"
    assert second.matched == []
    assert second.note.startswith("no hypergeometric expression")
    with pytest.raises(ParameterOutOfRange):
        second.pair()


def test_trivial_only_groups(catalog_service):
    entries = catalog_service.catalog(KTypeFilter(family="sl(p,C)"))
    assert [entry.parameters["p"] for entry in entries] == [2, 3]
    for entry in entries:
        assert not entry.has_nontrivial
        assert entry.note == "only the trivial K-type is small"
        assert entry.ktype_name == "trivial"
        assert entry.valid_pairs


def test_include_trivial(catalog_service):
    entries = catalog_service.catalog(
        KTypeFilter(family="so(2r,1)", r=2, s=1, include_trivial=True)
    )
    assert [entry.ktype_name for entry in entries] == ["trivial", "π_s^+ / π_s^-"]
    trivial = entries[0]
    pair = trivial.pair()
    assert pair.k_pi.at((Fraction(2),)) == Fraction(3, 2)


@pytest.mark.parametrize(
    "family", ["sp(p,1)", "so(2r,1)", "so(p,q)", "hermitian", "F4-family", "sl(p,R)"]
)
def test_default_sweep_pairs_verify(catalog_service, matching_service, family):
    entries = catalog_service.catalog(KTypeFilter(family=family))
    assert entries
    for entry in entries:
        assert entry.valid_pairs, (entry.group_label, entry.parameters)
        for pair in entry.valid_pairs:
            report = matching_service.verify_matching(
                entry.system, entry.m, entry.kappa, pair.system_pi, pair.k_pi
            )
            assert report.valid, report.message


def test_stem_filter_skips_groups_that_do_not_fit(catalog_service):
    entries = catalog_service.catalog(KTypeFilter(family="so", r=2))
    assert {entry.group_label for entry in entries} == {"so(2r,1)", "so(2r+1,1)"}


def test_unknown_family(catalog_service):
    with pytest.raises(UnknownFamily):
        catalog_service.catalog(KTypeFilter(family="xyz"))
    with pytest.raises(UnknownFamily):
        catalog_service.entries("nope", {})


def test_explicit_parameters_out_of_range(catalog_service):
    with pytest.raises(ParameterOutOfRange):
        catalog_service.catalog(KTypeFilter(family="sp(p,1)", p=2, n=0))
    with pytest.raises(ParameterOutOfRange):
        catalog_service.catalog(KTypeFilter(family="so(2r,1)", r=2, s=-1))
    with pytest.raises(ParameterOutOfRange):
        catalog_service.catalog(KTypeFilter(family="so(2r,1)", r=1, s=1))


def test_view_serializes_a_record(sp21_entry):
    view = SmallKTypeView.from_entry(sp21_entry)
    assert view.group_label == "sp(p,1)"
    assert view.kappa == {"short": "0", "double": "-1"}
    assert len(view.matched) == 2
    assert view.matched[0].valid
    assert {value.k for value in view.matched[0].k_by_root} == {"5", "-3/2"}
