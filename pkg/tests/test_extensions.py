"""Tests for cover construction: tame, wild, composita, base change."""

import pytest

from ramislope.errors import (
    FieldTooSmall,
    NotClosed,
    NotGalois,
    TameDegreeError,
    UnsupportedCompositum,
    WildBreakError,
    ZeroCoefficient,
)
from ramislope.extensions import (
    Automorphism,
    automorphism_group,
    build_cover,
    compositum,
    inseparable_base_change,
    make_artin_schreier,
    make_frobenius_base_extension,
    make_kummer,
    make_trivial,
    minimal_tame_field,
)
from ramislope.series_fields import LaurentSeries, Substituter, series_valuation


def assert_embedding_fixed(cover, group):
    for el in group.elements:
        image = Substituter(el.substitution).substitute(cover.embedding)
        assert image == cover.embedding, f"{el.label} moves the embedding"


class TestKummer:
    def test_degree_four_over_f9(self):
        cover, group = make_kummer(3, 9, 4)
        assert cover.degree == 4
        assert group.order == 4
        assert cover.separable
        assert series_valuation(cover.embedding) == 4
        assert_embedding_fixed(cover, group)

    def test_trivial_cover(self):
        cover, group = make_kummer(3, 3, 1)
        assert cover.degree == 1
        assert group.order == 1
        assert cover.kind == "trivial"

    def test_wild_degree_rejected(self):
        with pytest.raises(TameDegreeError):
            make_kummer(2, 2, 2)

    def test_missing_root_of_unity(self):
        with pytest.raises(FieldTooSmall):
            make_kummer(3, 3, 4)

    def test_cyclic_structure(self):
        _, group = make_kummer(3, 9, 4)
        assert sorted(group.orders) == [1, 2, 4, 4]
        assert group.is_abelian()


class TestArtinSchreier:
    def test_p3_m2(self):
        cover, group = make_artin_schreier(3, 3, 2, 1)
        assert cover.degree == 3
        assert group.order == 3
        assert cover.separable
        assert series_valuation(cover.embedding) == 3
        assert_embedding_fixed(cover, group)
        assert group.orders == [1, 3, 3]

    def test_p2_m1(self):
        cover, group = make_artin_schreier(2, 2, 1, 1)
        assert cover.degree == 2
        assert group.order == 2
        assert_embedding_fixed(cover, group)

    def test_break_divisible_by_p_rejected(self):
        with pytest.raises(WildBreakError):
            make_artin_schreier(3, 3, 3, 1)

    def test_zero_coefficient_rejected(self):
        with pytest.raises(ZeroCoefficient):
            make_artin_schreier(3, 3, 2, 0)

    def test_substitution_distance_from_identity(self):
        # sigma(u) - u has valuation m + 1; the classical break cross-check
        cover, group = make_artin_schreier(3, 3, 2, 1)
        u = LaurentSeries.uniformizer(cover.field, cover.precision)
        for el in group.elements[1:]:
            assert series_valuation(el.substitution - u) == 3


class TestAutomorphismGroup:
    def test_closure_failure_when_candidate_removed(self):
        cover, group = make_kummer(3, 9, 4)
        candidates = [
            Automorphism(el.substitution, el.label) for el in group.elements[:-1]
        ]
        with pytest.raises((NotClosed, NotGalois)):
            automorphism_group(cover, candidates)

    def test_not_galois_when_too_few(self):
        cover, _ = make_kummer(3, 9, 4)
        u = LaurentSeries.uniformizer(cover.field, cover.precision + 4)
        with pytest.raises(NotGalois):
            automorphism_group(cover, [Automorphism(u, ("id",))])

    def test_trivial_cover_identity_only(self):
        cover, group = make_trivial(3, 3)
        assert group.order == 1

    def test_rejects_non_fixing_candidate(self):
        cover, group = make_kummer(3, 9, 4)
        u = LaurentSeries.uniformizer(cover.field, cover.precision + 4)
        bad = Automorphism(u + u * u, ("bad",))
        with pytest.raises(NotGalois):
            automorphism_group(cover, list(group.elements[:3]) + [bad])


class TestCompositum:
    def test_coprime_tame_pair(self):
        k2 = make_kummer(5, 25, 2)
        k3 = make_kummer(5, 25, 3)
        cover, group = compositum(k2, k3)
        assert cover.degree == 6
        assert group.order == 6
        assert_embedding_fixed(cover, group)
        for factor in cover.factors:
            assert len(factor.kernel) * factor.group.order == group.order

    def test_non_coprime_tame_pair_rejected(self):
        k2 = make_kummer(5, 25, 2)
        k4 = make_kummer(5, 5, 4)
        with pytest.raises(UnsupportedCompositum):
            compositum(k2, k4)

    def test_tame_wild(self):
        km = make_kummer(3, 9, 2)
        as_ = make_artin_schreier(3, 9, 1, 1)
        cover, group = compositum(km, as_)
        assert cover.degree == 6
        assert group.order == 6
        assert group.is_abelian()
        assert_embedding_fixed(cover, group)

    def test_wild_pair_distinct_breaks(self):
        a1 = make_artin_schreier(2, 2, 1, 1)
        a3 = make_artin_schreier(2, 2, 3, 1)
        cover, group = compositum(a1, a3)
        assert cover.degree == 4
        assert group.order == 4
        # (Z/2)^2: every nonidentity element has order 2
        assert sorted(group.orders) == [1, 2, 2, 2]
        assert_embedding_fixed(cover, group)

    def test_equal_breaks_rejected(self):
        a1 = make_artin_schreier(2, 2, 1, 1)
        a1b = make_artin_schreier(2, 2, 1, 1)
        with pytest.raises(UnsupportedCompositum):
            compositum(a1, a1b)

    def test_wild_order_swap_is_canonical(self):
        a1 = make_artin_schreier(3, 3, 1, 1)
        a4 = make_artin_schreier(3, 3, 4, 1)
        c12, g12 = compositum(a1, a4)
        c21, g21 = compositum(a4, a1)
        assert c12.degree == c21.degree == 9
        assert c21.factors[0].cover.recipe == a4[0].recipe
        assert c21.factors[1].cover.recipe == a1[0].recipe

    def test_trivial_absorbed(self):
        tr = make_trivial(3, 3)
        as_ = make_artin_schreier(3, 3, 2, 1)
        cover, group = compositum(tr, as_)
        assert cover.degree == 3
        assert group.order == 3

    def test_factor_projections_are_homomorphisms(self):
        km = make_kummer(3, 9, 4)
        as_ = make_artin_schreier(3, 9, 2, 1)
        cover, group = compositum(km, as_)
        for factor in cover.factors:
            proj = factor.projection
            for i in range(group.order):
                for j in range(group.order):
                    assert (
                        proj[group.table[i][j]]
                        == factor.group.table[proj[i]][proj[j]]
                    )

    def test_field_mismatch_rejected(self):
        k4 = make_kummer(3, 9, 4)
        as_ = make_artin_schreier(3, 3, 2, 1)
        with pytest.raises(UnsupportedCompositum):
            compositum(k4, as_)


class TestInseparableBaseChange:
    def test_degree_p(self):
        pair = make_artin_schreier(3, 3, 2, 1)
        (cover, group), (cover2, group2) = inseparable_base_change(pair, 1)
        assert cover2.degree == cover.degree
        assert group2.order == group.order
        assert cover2.separable
        assert_embedding_fixed(cover2, group2)

    def test_n_zero_unchanged(self):
        pair = make_kummer(3, 9, 4)
        same, same2 = inseparable_base_change(pair, 0)
        assert same[0] is pair[0]
        assert same2[0] is pair[0]

    def test_tame_cover_base_change(self):
        pair = make_kummer(3, 9, 4)
        _, (cover2, group2) = inseparable_base_change(pair, 2)
        assert cover2.degree == 4
        assert group2.order == 4

    def test_frobenius_base_map_is_inseparable(self):
        cover, group = make_frobenius_base_extension(3, 3, 1)
        assert not cover.separable
        assert cover.separable_degree == 1
        assert group.order == 1


class TestSeparability:
    def test_flags(self):
        for pair in (
            make_kummer(3, 9, 4),
            make_artin_schreier(2, 2, 3, 1),
            compositum(make_artin_schreier(2, 2, 1, 1), make_artin_schreier(2, 2, 3, 1)),
        ):
            assert pair[0].separable


def test_minimal_tame_field():
    assert minimal_tame_field(3, 4) == 9
    assert minimal_tame_field(2, 3) == 4
    assert minimal_tame_field(5, 6) == 25
    assert minimal_tame_field(5, 4) == 5


def test_build_cover_roundtrip():
    cover, group = compositum(
        make_kummer(3, 9, 2), make_artin_schreier(3, 9, 1, 1)
    )
    rebuilt, rebuilt_group = build_cover(cover.recipe, 96)
    assert rebuilt.degree == cover.degree
    assert rebuilt_group.order == group.order
    assert rebuilt.precision == 96
