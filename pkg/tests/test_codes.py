import pytest

from kloos.codes import (
    TraceProfile,
    check_injectivity,
    check_printed_columns,
    dual_weight,
    dual_weight_from_profile,
    dual_weights,
    enumerate_code_tiny,
    min_dual_weight,
    printed_column_counts,
    trace_profile,
    weight_distribution_prefix,
    weight_prefix_from_printed_columns,
)
from kloos.constants import ALL_FAMILIES, CosetFamily, family_constants
from kloos.field import Field
from kloos.groups import double_coset

F3 = Field(1)
F9 = Field(2)
F27 = Field(3)


def test_profiles_match_enumerated_histograms():
    cases = [
        (CosetFamily(1, -1), 1),
        (CosetFamily(1, 1), 2),
        (CosetFamily(2, 1), 2),
        (CosetFamily(3, 1), 2),
    ]
    for family, n in cases:
        profile = trace_profile(family, n, F3)
        histogram = double_coset(F3, family, n).trace_histogram()
        assert profile.as_dict() == histogram, family.label


def test_profile_reference_values():
    assert trace_profile(CosetFamily(1, -1), 1, F3).counts == (2, 1, 1)
    assert trace_profile(CosetFamily(2, 1), 2, F3).counts == (18, 27, 27)
    assert trace_profile(CosetFamily(3, 1), 2, F3).counts == (0, 36, 36)
    assert trace_profile(CosetFamily(1, 1), 2, F3).counts == (180, 234, 234)


def test_profile_mass_every_family_up_to_n8():
    for field in (F3, F9, F27):
        for family in ALL_FAMILIES:
            for n in family.valid_ns(8):
                profile = trace_profile(family, n, field)
                consts = family_constants(family, n, field.q)
                assert profile.length == consts.N
                assert all(c >= 0 for c in profile.counts)


def test_dual_weights_two_routes_agree():
    for field in (F3, F9, F27):
        for family in ALL_FAMILIES:
            for n in family.valid_ns(6):
                profile = trace_profile(family, n, field)
                weights = dual_weights(profile)  # asserts agreement internally
                for a, w in weights.items():
                    assert w == dual_weight_from_profile(profile, a)


def test_dual_weight_reference_values():
    assert dual_weight(CosetFamily(1, -1), 1, F3, 1) == 2
    assert dual_weight(CosetFamily(1, -1), 1, F3, 2) == 2
    assert dual_weight(CosetFamily(2, 1), 2, F3, 1) == 54
    # i=4 at n=3: (2/3) 2916 (16 - (6 + 1)) = 17496
    assert dual_weight(CosetFamily(4, -1), 3, F3, 1) == 17496


def test_dual_weights_invariant_under_negation():
    # a and -a square to the same argument, so their dual words share a weight
    for field in (F9, F27):
        family, n = CosetFamily(1, -1), 3
        weights = dual_weights(trace_profile(family, n, field))
        for a in field.units():
            assert weights[a] == weights[field.neg(a)]


def test_injectivity_all_instances():
    for field in (F3, F9, F27):
        for family in ALL_FAMILIES:
            for n in family.valid_ns(6):
                res = check_injectivity(family, n, field)
                assert res.ok, res
                assert min_dual_weight(trace_profile(family, n, field)) > 0


def test_weight_prefix_small_code_full_distribution():
    profile = trace_profile(CosetFamily(1, -1), 1, F3)
    assert profile.length == 4
    prefix = weight_distribution_prefix(profile, 4)
    assert prefix == [1, 4, 6, 8, 8]
    assert enumerate_code_tiny(profile) == [1, 4, 6, 8, 8]
    printed = weight_prefix_from_printed_columns(CosetFamily(1, -1), 1, F3, 4)
    assert printed == [1, 4, 6, 8, 8]
    assert sum(prefix) == 3**3  # dual dimension r = 1: |code| = 3^(N-1)


def test_weight_prefix_degenerate_all_zero_block():
    # all mass at beta = 0: every word is a codeword, C_j = binom(N,j) 2^j
    from math import comb

    profile = TraceProfile(F3, (5, 0, 0))
    prefix = weight_distribution_prefix(profile, 5)
    assert prefix == [comb(5, j) * 2**j for j in range(6)]
    assert enumerate_code_tiny(profile) == prefix


def test_weight_prefix_leading_terms():
    for field in (F3, F9):
        for family in ALL_FAMILIES:
            for n in family.valid_ns(4):
                profile = trace_profile(family, n, field)
                prefix = weight_distribution_prefix(profile, 2)
                assert prefix[0] == 1
                assert prefix[1] == 2 * profile.counts[0]


def test_weight_prefix_matches_tiny_enumeration_qgt3():
    # a single-block profile over GF(9): condition is a genuine field equation
    profile = TraceProfile(F9, (1, 2, 0, 1, 0, 0, 0, 0, 0))
    full = enumerate_code_tiny(profile)
    prefix = weight_distribution_prefix(profile, 4)
    assert prefix == full[:5]


def test_printed_columns_agree_with_profile():
    for field in (F3, F9, F27):
        for family in ALL_FAMILIES:
            for n in family.valid_ns(4):
                for res in check_printed_columns(family, n, field):
                    assert res.ok, res


def test_printed_prefix_agrees_with_profile_prefix():
    cases = [
        (CosetFamily(1, -1), 1, F3, 4),
        (CosetFamily(2, 1), 2, F3, 4),
        (CosetFamily(4, -1), 3, F3, 4),
        (CosetFamily(3, 1), 2, F9, 3),
    ]
    for family, n, field, j_max in cases:
        a = weight_distribution_prefix(trace_profile(family, n, field), j_max)
        b = weight_prefix_from_printed_columns(family, n, field, j_max)
        assert a == b


def test_prefix_guard_and_tiny_guard():
    profile = trace_profile(CosetFamily(1, -1), 1, F3)
    with pytest.raises(ValueError):
        weight_distribution_prefix(profile, 13)
    big = trace_profile(CosetFamily(2, 1), 2, F3)  # N = 72
    with pytest.raises(ValueError):
        enumerate_code_tiny(big)


def test_profile_requires_valid_family():
    with pytest.raises(ValueError):
        trace_profile(CosetFamily(1, 1), 3, F3)
