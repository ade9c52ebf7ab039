import math

import pytest

from shiftspace import (DomainError, disjoint_union, even_shift, full_shift,
                        higher_block, reverse)
from shiftspace.cli import run_classes
from shiftspace.entropy import estimate, gap_report


def _even_table(max_n=6):
    return run_classes(even_shift(), max_n,
                       ["follower", "predecessor", "extender"])


def test_word_count_rate_rows():
    est = estimate(_even_table(), "h")
    assert [r.n for r in est.rows] == list(range(1, 7))
    assert est.rows[2].count == 7
    assert est.rows[2].value == pytest.approx(math.log(7) / 3)
    assert all(r.exact for r in est.rows)


def test_rate_upper_bound_is_min_over_exact_rows():
    est = estimate(_even_table(), "h")
    assert est.certified_upper_bound == pytest.approx(math.log(33) / 6)
    # the even shift's true growth rate (golden mean) sits below it
    assert est.certified_upper_bound > math.log((1 + 5 ** 0.5) / 2)


def test_extender_rate_has_a_bound_too():
    est = estimate(_even_table(), "h_E")
    assert est.certified_upper_bound == pytest.approx(math.log(5) / 6)


def test_one_sided_rates_are_not_certified():
    t = _even_table()
    assert estimate(t, "h_F").certified_upper_bound is None
    assert estimate(t, "h_P").certified_upper_bound is None
    assert estimate(t, "h_F").rows[-1].count == 3


def test_full_shift_rates():
    t = run_classes(full_shift(["0", "1"]), 5,
                    ["follower", "predecessor", "extender"])
    est = estimate(t, "h")
    assert all(r.value == pytest.approx(math.log(2)) for r in est.rows)
    assert estimate(t, "h_E").certified_upper_bound == 0.0


def test_left_constraint_rate_takes_triples():
    est = estimate([(2, 1, True), (3, 0, True), (4, 4, False)], "h_C")
    values = {r.n: r.value for r in est.rows}
    assert values[2] == 0.0
    assert values[3] == 0.0  # zero counts happen here; rate reads as zero
    assert values[4] == pytest.approx(math.log(4) / 4)
    assert est.certified_upper_bound is None


def test_left_constraint_rate_rejects_count_tables():
    with pytest.raises(DomainError):
        estimate(_even_table(), "h_C")


def test_estimate_needs_rows():
    with pytest.raises(DomainError):
        estimate([], "h")


def test_unknown_quantity():
    with pytest.raises(DomainError):
        estimate(_even_table(), "h_X")


# --- gap reports ---------------------------------------------------------------


def test_equal_relation():
    t = _even_table()
    rep = gap_report(t, t, "equal", column="E")
    assert rep.all_ok
    assert all(r.ratio == 1.0 for r in rep.rows)


def test_swap_relation_against_reversal():
    t = _even_table()
    t2 = run_classes(reverse(even_shift()), 6,
                     ["follower", "predecessor", "extender"])
    assert gap_report(t, t2, "swap").all_ok


def test_scale_relation_against_union_doubling():
    t = _even_table()
    u = run_classes(disjoint_union(even_shift(), even_shift()), 6,
                    ["follower"])
    rep = gap_report(t, u, "scale", column="F", factor=2)
    assert rep.all_ok
    assert all(r.ratio == 2.0 for r in rep.rows)


def test_sandwich_relation_against_higher_block():
    t = _even_table()
    z = run_classes(higher_block(even_shift(), 3), 6, ["extender"])
    assert gap_report(t, z, "sandwich", column="E", factor=16).all_ok


def test_sandwich_detects_violations():
    t = _even_table()
    z = run_classes(higher_block(even_shift(), 3), 6, ["extender"])
    rep = gap_report(z, t, "sandwich", column="E", factor=1)
    assert not rep.all_ok


def test_gap_needs_matching_ranges():
    t = _even_table()
    short = run_classes(even_shift(), 4, ["follower"])
    with pytest.raises(DomainError):
        gap_report(t, short, "equal", column="F")
