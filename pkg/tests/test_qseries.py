"""Truncated q-series, characters, recursions, partition identities."""

import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistchar.lattice import NotPositiveDefinite, analyze
from twistchar.presets import preset
from twistchar.qseries import (
    QSeries,
    RecursionMismatch,
    character,
    check_coefficient_recursion,
    check_recursion,
    enumerate_charges,
    halved_exponents,
    inverse_poch_product,
    poch_infinite,
    poch_inverse,
    quadratic_value,
    rogers_ramanujan_sum,
    separated_partition_count,
    verify_partition_identity,
)

PRESETS = ("rank1", "swap2", "x3", "x4")


def series(truncation, coeffs):
    return QSeries(truncation, coeffs)


# ---------------------------------------------------------------- QSeries core


def test_constructor_drops_zero_and_overflow_terms():
    s = series(4, {0: 1, 2: 0, 3: 5, 9: 7})
    assert s.coeffs == {0: 1, 3: 5}
    with pytest.raises(ValueError):
        series(-1, {})
    with pytest.raises(ValueError):
        series(4, {-1: 1})


def test_coeff_beyond_truncation_raises():
    s = QSeries.one(3)
    assert s.coeff(3) == 0
    with pytest.raises(ValueError):
        s.coeff(4)


def test_arithmetic_truncates_to_shorter_operand():
    a = series(5, {0: 1, 5: 2})
    b = series(3, {1: 1})
    assert (a + b).truncation == 3
    assert (a + b).coeffs == {0: 1, 1: 1}
    assert (a - b).coeffs == {0: 1, 1: -1}
    assert (a * b).coeffs == {1: 1}
    assert (3 * b).coeffs == {1: 3}
    assert (b * 0).is_zero


def test_shift_and_truncate():
    s = series(2, {0: 1, 1: 4})
    assert s.shifted(3).coeffs == {3: 1, 4: 4}
    assert s.shifted(3).truncation == 5
    assert s.truncated(0).coeffs == {0: 1}
    with pytest.raises(ValueError):
        s.truncated(3)
    with pytest.raises(ValueError):
        s.shifted(-1)


def test_first_difference_respects_truncation():
    a = series(10, {2: 1, 7: 3})
    b = series(4, {2: 1, 7: 9})
    assert a.first_difference(b) is None
    assert a.first_difference(series(10, {2: 1, 7: 4})) == (7, 3, 4)
    assert series(5, {}).first_difference(series(5, {0: 1})) == (0, 0, 1)


def test_str_formats():
    assert str(series(4, {0: 2, 1: -1, 3: 1})) == "2 - q + q^3 + O(q^5)"
    assert str(QSeries.zero(2)) == "0 + O(q^3)"
    assert str(series(9, {2: -3})) == "-3*q^2 + O(q^10)"


# ------------------------------------------------------------------ Pochhammer


def test_poch_inverse_small_table():
    # Partitions into parts from {1, 2}.
    assert poch_inverse(1, 2, 4).coeffs == {0: 1, 1: 1, 2: 2, 3: 2, 4: 3}
    assert poch_inverse(3, 0, 10) == QSeries.one(10)
    with pytest.raises(ValueError):
        poch_inverse(0, 1, 5)
    with pytest.raises(ValueError):
        poch_inverse(1, -1, 5)


def test_poch_infinite_pentagonal_numbers():
    assert poch_infinite(1, 1, 12).coeffs == {
        0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1
    }
    with pytest.raises(ValueError):
        poch_infinite(0, 1, 5)


def test_inverse_poch_product_inverts_the_product():
    t = 18
    inv = inverse_poch_product(((1, 1),), t)
    assert inv * poch_infinite(1, 1, t) == QSeries.one(t)
    inv2 = inverse_poch_product(((2, 3), (5, 7)), t)
    assert inv2 * poch_infinite(2, 3, t) * poch_infinite(5, 7, t) == QSeries.one(t)


def test_inverse_poch_product_matches_direct_partition_count():
    """Cross-check the mod-9 product against an independent counter."""
    t = 24
    allowed = [
        p
        for start in (1, 3, 6, 8)
        for p in range(start, t + 1, 9)
    ]
    table = [0] * (t + 1)
    table[0] = 1
    for part in sorted(allowed):
        for n in range(part, t + 1):
            table[n] += table[n - part]
    got = inverse_poch_product(((1, 9), (3, 9), (6, 9), (8, 9)), t)
    assert got.coeffs == {n: c for n, c in enumerate(table) if c}


# ------------------------------------------------------------------ characters


def test_enumerate_charges_is_pruned_by_diagonal():
    assert enumerate_charges([[4]], 8) == [(0,), (1,), (2,)]
    assert enumerate_charges([[4]], 1) == [(0,)]
    charges = enumerate_charges([[4, 1], [1, 4]], 6)
    assert (0, 0) in charges and (1, 1) in charges
    assert all(quadratic_value([[4, 1], [1, 4]], m) <= 12 for m in charges)


def test_quadratic_value():
    assert quadratic_value([[4]], (3,)) == 36
    assert quadratic_value([[2, 1], [1, 2]], (1, -1)) == 2


def test_single_orbit_character_table():
    orbits, tables = analyze(preset("rank1"))
    table = character(orbits, tables, 8)
    assert table.charges() == [(0,), (1,), (2,)]
    assert table.series((0,)) == QSeries.one(8)
    assert table.series((1,)).coeffs == {2: 1, 4: 1, 6: 1, 8: 1}
    assert table.series((2,)).coeffs == {8: 1}
    assert table.series((5,)).is_zero
    assert table.evaluate_at_one().coeffs == {0: 1, 2: 1, 4: 1, 6: 1, 8: 2}


def test_swapped_pair_character_table():
    orbits, tables = analyze(preset("swap2"))
    table = character(orbits, tables, 14)
    assert table.charge_matrix == ((6,),)
    assert table.series((1,)).coeffs == {3: 1, 5: 1, 7: 1, 9: 1, 11: 1, 13: 1}
    assert table.series((2,)).coeffs == {12: 1, 14: 1}
    # Charge m always starts at exactly 3*m^2.
    for (m,) in table.charges():
        if m:
            assert min(table.series((m,)).coeffs) == 3 * m * m


def test_character_coefficients_are_nonnegative():
    for name in PRESETS:
        orbits, tables = analyze(preset(name))
        table = character(orbits, tables, 16)
        for m in table.charges():
            assert all(c > 0 for c in table.series(m).coeffs.values())


def test_character_rejects_singular_orbit_gram():
    orbits, tables = analyze(preset("rank1"))
    forged = dataclasses.replace(tables, twisted_gram=((0,),))
    with pytest.raises(NotPositiveDefinite):
        character(orbits, forged, 6)


def test_table_json_has_string_coefficients():
    orbits, tables = analyze(preset("rank1"))
    data = character(orbits, tables, 6).to_json_dict()
    assert data["k"] == 2
    assert data["normalization"] == "k-weight-shifted"
    assert data["charges"][1]["m"] == [1]
    assert data["charges"][1]["series"] == {"2": "1", "4": "1", "6": "1"}


# ------------------------------------------------------------------ recursions


@pytest.mark.parametrize("name", PRESETS)
def test_length_step_recursion_all_orbits(name):
    orbits, tables = analyze(preset(name))
    table = character(orbits, tables, 20)
    for i in range(orbits.d):
        report = check_recursion(table, i)
        assert report.kind == "length-step"
        assert report.cells > 0


@pytest.mark.parametrize("name", PRESETS)
def test_adjacent_charge_recursion_all_orbits(name):
    orbits, tables = analyze(preset(name))
    table = character(orbits, tables, 20)
    for i in range(orbits.d):
        report = check_coefficient_recursion(table, i)
        assert report.kind == "adjacent-charge"
        assert report.cells > 0


def test_length_step_recursion_detects_injected_fault():
    orbits, tables = analyze(preset("rank1"))
    table = character(orbits, tables, 8)
    table.entries[(1,)].coeffs[4] += 1
    with pytest.raises(RecursionMismatch) as err:
        check_recursion(table, 0)
    exc = err.value
    assert exc.kind == "length-step"
    assert exc.charge == (1,)
    assert exc.exponent == 4
    assert (exc.lhs, exc.rhs) == (2, 1)


def test_adjacent_charge_recursion_detects_injected_fault():
    orbits, tables = analyze(preset("rank1"))
    table = character(orbits, tables, 8)
    table.entries[(2,)].coeffs[8] = 3
    with pytest.raises(RecursionMismatch) as err:
        check_coefficient_recursion(table, 0)
    assert err.value.kind == "adjacent-charge"
    assert err.value.charge == (2,)


# ------------------------------------------------------- partition identities


def test_separated_partition_counts():
    # n = 5 admits exactly 5, 4+1, 3+1+1; gap-1 pairs and triples are out.
    assert [separated_partition_count(n) for n in range(6)] == [1, 1, 2, 1, 3, 3]
    with pytest.raises(ValueError):
        separated_partition_count(-1)


def test_separated_counts_against_brute_force():
    def brute(n):
        count = 0

        def rec(remaining, max_part, parts):
            nonlocal count
            if remaining == 0:
                ok = all(parts.count(p) <= 2 for p in parts) and all(
                    abs(a - b) != 1 for a in parts for b in parts
                )
                count += bool(ok)
                return
            for p in range(min(remaining, max_part), 0, -1):
                rec(remaining - p, p, parts + [p])

        rec(n, n, [])
        return count

    for n in range(13):
        assert separated_partition_count(n) == brute(n)


def test_rogers_ramanujan_sum_coefficients():
    assert rogers_ramanujan_sum(10).coeffs == {
        0: 1, 1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 3, 7: 3, 8: 4, 9: 5, 10: 6
    }


def test_halved_exponents():
    assert halved_exponents(series(8, {0: 1, 2: 3, 8: 1})).coeffs == {
        0: 1, 1: 3, 4: 1
    }
    assert halved_exponents(series(9, {})).truncation == 4
    with pytest.raises(ValueError):
        halved_exponents(series(8, {3: 1}))


def test_identity_only_wired_for_x3_and_x4():
    with pytest.raises(ValueError):
        verify_partition_identity("rank1", 10)
    with pytest.raises(ValueError):
        verify_partition_identity("nope", 10)


def test_x3_identity_matches():
    report = verify_partition_identity("x3", 20)
    assert report.all_match
    assert len(report.comparisons) == 1
    assert report.comparisons[0].first_mismatch is None


def test_x4_printed_product_differs_but_mod9_matches():
    report = verify_partition_identity("x4", 20)
    printed, mod9 = report.comparisons
    assert printed.matches is False
    assert (printed.first_mismatch, printed.lhs, printed.rhs) == (2, 1, 2)
    assert mod9.matches is True
    assert not report.all_match
    data = report.to_json_dict()
    assert data["comparisons"][0]["first_mismatch"] == 2
    assert data["comparisons"][1]["matches"] is True


def test_x3_summed_character_has_even_exponents_only():
    orbits, tables = analyze(preset("x3"))
    total = character(orbits, tables, 30).evaluate_at_one()
    assert all(e % 2 == 0 for e in total.coeffs)


# ------------------------------------------------------------- property tests


small_series = st.builds(
    QSeries,
    st.just(12),
    st.dictionaries(
        st.integers(min_value=0, max_value=12),
        st.integers(min_value=-5, max_value=5),
        max_size=6,
    ),
)


@settings(max_examples=120, deadline=None, derandomize=True)
@given(small_series, small_series, small_series)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + QSeries.zero(12) == a
    assert a * QSeries.one(12) == a
    assert (a - a).is_zero


@settings(max_examples=120, deadline=None, derandomize=True)
@given(small_series, small_series, st.integers(min_value=0, max_value=12))
def test_truncation_stability(a, b, t):
    assert (a + b).truncated(t) == a.truncated(t) + b.truncated(t)
    assert (a * b).truncated(t) == a.truncated(t) * b.truncated(t)
