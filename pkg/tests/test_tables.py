import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import ParseError, UsageError
from core.majorization import majorizes, random_majorized_pair
from core.numeric import Tolerances
from eigensteps.sampling import num_coordinates, parametrize_inner
from eigensteps.tables import (
    InnerEigenstepTable,
    OuterEigenstepTable,
    inner_to_outer,
    interlacing_defect,
    outer_to_inner,
    table_from_dict,
    validate_inner,
    validate_outer,
)
from eigensteps.topkill import topkill_table


def test_topkill_table_validates(seven_quarters):
    report = validate_inner(topkill_table(*seven_quarters))
    assert report.holds
    assert report.residuals["interlacing"] == 0.0


def test_greedy_bottom_up_table_is_rejected(seven_quarters):
    # picking lambda_2 = (7/4, 1/4) first cannot reach the target spectrum
    lam, mu = seven_quarters
    table = InnerEigenstepTable(((1.0,), (7 / 4, 1 / 4), lam), lam, mu)
    report = validate_inner(table)
    assert not report.holds
    assert report.violations() == ["interlacing"]
    assert report.residuals["interlacing"] == pytest.approx(0.25)
    assert report.details["interlacing_at"] == [3, 2]


def test_best_reachable_spectrum_misses_the_target(seven_quarters):
    lam, mu = seven_quarters
    table = InnerEigenstepTable(((1.0,), (3 / 2, 1 / 2), (7 / 4, 1.0, 1 / 4)), lam, mu)
    report = validate_inner(table)
    assert report.violations() == ["final_row"]


def test_interlacing_defect_forms():
    assert interlacing_defect((1.0,), (2.0, 0.5)) == (0.0, 1)
    worst, m = interlacing_defect((1.0, 0.0), (0.5, 0.0), equal_length=True)
    assert worst == pytest.approx(0.5)
    assert m == 1


def test_shape_is_checked():
    with pytest.raises(UsageError):
        InnerEigenstepTable(((1.0,), (1.0,)), (1.0, 0.0), (1.0, 0.0))
    with pytest.raises(UsageError):
        OuterEigenstepTable(((0.0,), (1.0,)), (1.0,), (1.0, 0.0))


def test_outer_round_trip(five_in_three):
    inner = topkill_table(*five_in_three)
    outer = inner_to_outer(inner, 3)
    assert outer.M == 3 and outer.N == 5
    assert outer.row(0) == (0.0, 0.0, 0.0)
    assert validate_outer(outer).holds
    back = outer_to_inner(outer)
    for n in range(1, 6):
        assert back.row(n) == pytest.approx(inner.row(n))


def test_support_must_fit_in_M(five_in_three):
    with pytest.raises(UsageError):
        inner_to_outer(topkill_table(*five_in_three), 2)


def test_outer_zero_row_is_checked():
    table = OuterEigenstepTable(((0.5,), (1.0,)), (1.0,), (1.0,))
    assert validate_outer(table).violations() == ["zero_row"]


def test_dict_round_trip_and_kind_inference(seven_quarters):
    inner = topkill_table(*seven_quarters)
    data = inner.to_dict()
    assert data["kind"] == "inner" and data["M"] == 3
    assert table_from_dict(data).rows == inner.rows
    del data["kind"]
    assert isinstance(table_from_dict(data), InnerEigenstepTable)
    outer = inner_to_outer(inner, 3).to_dict()
    del outer["kind"]
    assert isinstance(table_from_dict(outer), OuterEigenstepTable)


def test_bad_table_json():
    with pytest.raises(ParseError):
        table_from_dict({"rows": []})
    with pytest.raises(ParseError):
        table_from_dict({"kind": "sideways", "rows": [], "lam": [], "mu": []})
    with pytest.raises(ParseError):
        table_from_dict({"rows": [["x"]], "lam": [1.0], "mu": [1.0]})


def test_table_json_with_wrong_field_types():
    with pytest.raises(ParseError):
        table_from_dict({"rows": 5, "lam": [1.0], "mu": [1.0]})
    with pytest.raises(ParseError):
        table_from_dict({"rows": [5], "lam": [1.0], "mu": [1.0]})
    with pytest.raises(ParseError):
        table_from_dict({"rows": [[1.0]], "lam": 1.0, "mu": [1.0]})
    with pytest.raises(ParseError):
        table_from_dict({"kind": ["inner"], "rows": [[1.0]], "lam": [1.0], "mu": [1.0]})


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.data())
def test_inner_outer_inner_round_trip(N, data):
    M = data.draw(st.integers(min_value=1, max_value=N))
    seed = data.draw(st.integers(min_value=0, max_value=2**31 - 1))
    lam, mu = random_majorized_pair(N, seed, rank=M)
    inner = parametrize_inner(lam, mu, np.random.default_rng(seed).random(num_coordinates(N)))
    outer = inner_to_outer(inner, M)
    assert validate_outer(outer).holds
    back = outer_to_inner(outer)
    for n in range(1, N + 1):
        assert back.row(n) == pytest.approx(inner.row(n), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.integers(min_value=0, max_value=2**31 - 1))
def test_valid_rows_majorize_their_length_prefix(N, seed):
    lam, mu = random_majorized_pair(N, seed)
    table = parametrize_inner(lam, mu, np.random.default_rng(seed).random(num_coordinates(N)))
    assert validate_inner(table).holds
    loose = Tolerances(feas_tol=1e-8)
    for n in range(1, N + 1):
        row = sorted(table.row(n), reverse=True)
        assert majorizes(row, mu[:n], loose).holds, n
