import timeit

import pytest

from core.errors import InconsistentPrefixError, UsageError
from core.numeric import Tolerances
from eigensteps.bounds import INTERLACING, MAJORIZATION, TRACE_BUDGET, inner_bounds, outer_bounds

SEVEN = (7 / 4, 3 / 4, 1 / 2)
ONES3 = (1.0, 1.0, 1.0)


def _close(bounds, A, B):
    assert bounds.A == pytest.approx(A, abs=1e-12)
    assert bounds.B == pytest.approx(B, abs=1e-12)


def test_five_in_three_worked_intervals(five_in_three):
    lam, mu = five_in_three
    row4 = (5 / 3, 5 / 3, 2 / 3, 0.0)
    _close(inner_bounds(lam, [], mu, 5, 4), 0.0, 0.0)
    _close(inner_bounds(lam, [0.0], mu, 5, 3), 2 / 3, 2 / 3)
    _close(inner_bounds(row4, [], mu, 4, 3), 0.0, 2 / 3)
    for i in range(5):
        x = i / 6
        _close(inner_bounds(row4, [x], mu, 4, 2), 4 / 3 - x, 4 / 3 - x)
        row3 = (5 / 3, 4 / 3 - x, x)
        _close(inner_bounds(row3, [], mu, 3, 2), max(1 / 3, x), min(2 / 3 + x, 4 / 3 - x))

    def every_interval():
        inner_bounds(lam, [], mu, 5, 4)
        inner_bounds(lam, [0.0], mu, 5, 3)
        inner_bounds(row4, [], mu, 4, 3)
        inner_bounds(row4, [0.0], mu, 4, 2)
        inner_bounds((5 / 3, 4 / 3, 0.0), [], mu, 3, 2)

    assert min(timeit.repeat(every_interval, number=1, repeat=5)) < 1e-2


def test_seven_quarters_free_entry():
    b = inner_bounds(SEVEN, [], ONES3, 3, 2)
    _close(b, 0.5, 0.75)
    assert b.active_lower == INTERLACING
    assert b.active_upper == INTERLACING
    assert not b.degenerate(Tolerances())


def test_forced_entry_reports_active_constraints():
    # lambda_{2;1} once lambda_{2;2} = 1/2 is chosen: the trace pins it to 3/2
    b = inner_bounds(SEVEN, [0.5], ONES3, 3, 1)
    _close(b, 1.5, 1.5)
    assert b.active_lower == TRACE_BUDGET
    assert b.active_upper == MAJORIZATION
    assert b.upper_index == 1


def test_out_of_bounds_prefix_is_inconsistent():
    with pytest.raises(InconsistentPrefixError):
        inner_bounds(SEVEN, [0.2], ONES3, 3, 1)


def test_index_checks():
    with pytest.raises(UsageError):
        inner_bounds(SEVEN, [], ONES3, 3, 3)
    with pytest.raises(UsageError):
        inner_bounds(SEVEN, [0.5, 0.5], ONES3, 3, 1)
    with pytest.raises(UsageError):
        inner_bounds(SEVEN[:2], [], ONES3, 3, 2)


def test_outer_bounds_match_inner_on_padded_rows(five_in_three):
    lam, mu = five_in_three
    # row 4 of the 5-in-3 walk, kept at length M = 3
    row4 = (5 / 3, 5 / 3, 2 / 3)
    for x in (0.0, 1 / 3, 2 / 3):
        inner = inner_bounds(row4 + (0.0,), [x], mu, 4, 2)
        outer = outer_bounds(row4, [x], mu, 4, 2)
        _close(outer, inner.A, inner.B)
    _close(outer_bounds(row4, [], mu, 4, 3), 0.0, 2 / 3)


def test_outer_bounds_reject_k_beyond_M():
    with pytest.raises(UsageError):
        outer_bounds((1.0, 0.5), [], (1.0, 0.5, 0.0), 3, 3)
