import timeit

import pytest
from hypothesis import given, settings, strategies as st

from core.errors import InfeasibleError, UsageError
from core.majorization import random_majorized_pair
from eigensteps.tables import validate_inner
from eigensteps.topkill import admissible_pivots, topkill_step, topkill_table


def test_seven_quarters_rows_are_exact(seven_quarters):
    lam, mu = seven_quarters
    table = topkill_table(lam, mu)
    assert table.rows == ((1.0,), (1.5, 0.5), (1.75, 0.75, 0.5))
    assert min(timeit.repeat(lambda: topkill_table(lam, mu), number=1, repeat=5)) < 1e-3


def test_five_in_three_lower_walk(five_in_three):
    lam, mu = five_in_three
    table = topkill_table(lam, mu)
    assert table.row(4) == pytest.approx((5 / 3, 5 / 3, 2 / 3, 0.0))
    assert table.row(3) == pytest.approx((5 / 3, 4 / 3, 0.0))
    assert table.row(2) == pytest.approx((5 / 3, 1 / 3))
    assert table.row(1) == pytest.approx((1.0,))


def test_single_level():
    assert topkill_step((2.0,), 2.0) == ()
    with pytest.raises(InfeasibleError):
        topkill_step((2.0,), 1.0)


def test_length_above_top_level_is_infeasible():
    with pytest.raises(InfeasibleError):
        topkill_step((1.0, 0.5), 1.5)


def test_non_majorizing_pair_is_infeasible():
    with pytest.raises(InfeasibleError) as err:
        topkill_table((1.0, 1.0), (1.5, 0.5))
    assert err.value.report is not None
    assert not err.value.report.holds


def test_inadmissible_pivot_rejected():
    with pytest.raises(UsageError):
        topkill_step((7 / 4, 3 / 4, 1 / 2), 1.0, pivot=2)


def test_tied_levels_admit_several_pivots():
    row = (2.0, 1.0, 1.0, 0.0)
    assert admissible_pivots(row, 1.0) == [1, 2, 3]


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=2**31 - 1))
def test_topkill_tables_are_valid(N, seed):
    lam, mu = random_majorized_pair(N, seed)
    assert validate_inner(topkill_table(lam, mu)).holds


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.integers(min_value=0, max_value=2**31 - 1))
def test_every_admissible_pivot_gives_the_same_row(N, seed):
    lam, mu = random_majorized_pair(N, seed)
    table = topkill_table(lam, mu)
    for n in range(N, 1, -1):
        row = table.row(n)
        results = [topkill_step(row, mu[n - 1], pivot=k) for k in admissible_pivots(row, mu[n - 1])]
        for other in results[1:]:
            assert other == pytest.approx(results[0], abs=1e-8)


def test_levels_closer_than_the_tolerance():
    lam = tuple(2.0 - 5e-10 * i for i in range(7))
    mu = (sum(lam) / 7,) * 7
    table = topkill_table(lam, mu)
    assert validate_inner(table).holds
    for n in range(2, 8):
        upper, lower = table.row(n), table.row(n - 1)
        assert all(upper[m + 1] <= lower[m] <= upper[m] for m in range(n - 1)), n


def test_slack_pivot_is_clamped_into_its_interval():
    row = (2.0, 2.0 - 5e-10, 1.0)
    mu_n = 2.0 - 1e-9
    assert admissible_pivots(row, mu_n) == [1, 2]
    # level 2 fits exactly and is the default
    assert topkill_step(row, mu_n) == pytest.approx((2.0, 1.0 + 5e-10), abs=1e-14)
    forced = topkill_step(row, mu_n, pivot=1)
    assert forced[0] == 2.0
    assert forced[1] == 1.0
