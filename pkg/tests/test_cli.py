import json

import numpy as np
import pytest

from cli import main
from core.errors import ParseError
from core.majorization import random_majorized_pair
from frames.io import parse_matrix, parse_sequence, read_table


def test_check_exit_codes(write_seq, capsys, five_in_three):
    lam, mu = five_in_three
    assert main(["check", "--spectrum", write_seq("lam", lam[:3]), "--lengths", write_seq("mu", mu)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["holds"] is True
    assert main(["check", "--spectrum", write_seq("a", (1.0, 1.0)), "--lengths", write_seq("b", (1.5, 0.5))]) == 1
    assert main(["check", "--spectrum", write_seq("c", (1.0, 2.0)), "--lengths", write_seq("d", (1.5, 1.5))]) == 2


def test_line_oriented_input(tmp_path, capsys):
    lam = tmp_path / "lam.txt"
    lam.write_text("1\n1\n\n")
    assert main(["check", "--spectrum", str(lam), "--lengths", str(lam)]) == 0


def test_unreadable_input_is_a_parse_error(tmp_path, write_seq):
    bad = tmp_path / "bad.txt"
    bad.write_text("1\nabc\n")
    assert main(["check", "--spectrum", str(bad), "--lengths", write_seq("mu", (1.0,))]) == 2
    assert main(["check", "--spectrum", str(tmp_path / "missing"), "--lengths", write_seq("mu", (1.0,))]) == 2


def test_eigensteps_topkill_table(write_seq, capsys, seven_quarters):
    lam, mu = seven_quarters
    assert main(["eigensteps", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu)]) == 0
    table = json.loads(capsys.readouterr().out)
    assert table["kind"] == "inner"
    assert [pytest.approx(r) for r in table["rows"]] == [[1.0], [1.5, 0.5], [1.75, 0.75, 0.5]]


def test_eigensteps_zero_t_vector(write_seq, capsys, five_in_three):
    lam, mu = five_in_three
    args = ["eigensteps", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu)]
    t = write_seq("t", [0.0] * 10)
    assert main(args + ["--mode", "t-vector", "--t", t]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert rows[2][2] == pytest.approx(0.0, abs=1e-12)
    assert rows[1][1] == pytest.approx(1 / 3)


def test_t_vector_of_wrong_length(write_seq, seven_quarters):
    lam, mu = seven_quarters
    args = ["eigensteps", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu)]
    assert main(args + ["--mode", "t-vector", "--t", write_seq("t", [0.5])]) == 2
    assert main(args + ["--mode", "t-vector"]) == 2


def test_frame_five_in_three_csv(write_seq, tmp_path, five_in_three):
    lam, mu = five_in_three
    out = tmp_path / "F.csv"
    code = main(["frame", "--spectrum", write_seq("lam", lam[:3]), "--lengths", write_seq("mu", mu),
                 "--format", "csv", "--out", str(out)])
    assert code == 0
    F = parse_matrix(out.read_text())
    assert F.shape == (3, 5)
    np.testing.assert_allclose(F @ F.T, (5 / 3) * np.eye(3), atol=1e-9)


def test_scalar_frame(write_seq, capsys):
    assert main(["frame", "--spectrum", write_seq("lam", (1.0,)), "--lengths", write_seq("mu", (1.0,))]) == 0
    matrix = json.loads(capsys.readouterr().out)
    assert matrix["M"] == 1 and abs(matrix["entries"][0][0]) == pytest.approx(1.0)


def test_round_trip_through_supplied_table(write_seq, tmp_path):
    lam, mu = random_majorized_pair(5, 8, rank=3)
    spectrum, lengths = write_seq("lam", lam), write_seq("mu", mu)
    table, frame = tmp_path / "table.json", tmp_path / "frame.json"
    base = ["--spectrum", spectrum, "--lengths", lengths]
    assert main(["eigensteps", *base, "--mode", "random", "--seed", "3", "--out", str(table)]) == 0
    assert read_table(table).N == 5
    assert main(["frame", *base, "--dim", "3", "--eigensteps", str(table), "--out", str(frame)]) == 0
    assert main(["verify", "--matrix", str(frame), *base, "--kind", "frame", "--eigensteps", str(table)]) == 0


def test_verify_printed_and_perturbed_frame(write_seq, tmp_path, printed_frame, five_in_three):
    lam, mu = five_in_three
    base = ["--spectrum", write_seq("lam", lam[:3]), "--lengths", write_seq("mu", mu)]
    good = tmp_path / "F.json"
    good.write_text(json.dumps({"M": 3, "N": 5, "entries": printed_frame.tolist()}))
    assert main(["verify", "--matrix", str(good), *base]) == 0
    broken = printed_frame.copy()
    broken[0, 0] += 0.1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"M": 3, "N": 5, "entries": broken.ravel().tolist()}))
    assert main(["verify", "--matrix", str(bad), *base]) == 1


def test_verify_diagonal_schur_horn(write_seq, tmp_path):
    d = (2.0, 1.0, 0.5)
    G = tmp_path / "G.csv"
    G.write_text("2,0,0\n0,1,0\n0,0,0.5\n")
    args = ["verify", "--matrix", str(G), "--spectrum", write_seq("lam", d), "--diagonal", write_seq("d", d)]
    assert main(args + ["--kind", "schur-horn"]) == 0


def test_schur_horn_command(write_seq, capsys):
    args = ["schur-horn", "--spectrum", write_seq("lam", (7 / 4, 3 / 4, 1 / 2)), "--diagonal", write_seq("d", (1.0,) * 3)]
    assert main(args + ["--alpha", "0.5"]) == 0
    G = np.array(json.loads(capsys.readouterr().out)["entries"])
    np.testing.assert_allclose(np.diag(G), 1.0, atol=1e-8)
    assert main(args + ["--alpha", "0.75"]) == 2


def test_frame_exists_exactly_when_majorized(write_seq):
    for case in range(200):
        rng = np.random.default_rng([7, case])
        N = int(rng.integers(1, 7))
        lam, mu = random_majorized_pair(N, 300 + case)
        mu = mu.as_array().copy()
        feasible = case % 2 == 0
        if not feasible:
            mu[0] += float(rng.uniform(1e-3, 0.1))
        code = main(["frame", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu)])
        assert code == (0 if feasible else 1), case


def test_same_seed_same_bytes(write_seq, tmp_path, five_in_three):
    lam, mu = five_in_three
    base = ["frame", "--spectrum", write_seq("lam", lam[:3]), "--lengths", write_seq("mu", mu),
            "--mode", "random", "--seed", "42", "--count", "3", "--probe", "random"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(base + ["--out", str(first)]) == 0
    assert main(base + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert len(json.loads(first.read_text())) == 3


def test_count_needs_random_mode(write_seq, seven_quarters):
    lam, mu = seven_quarters
    args = ["eigensteps", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu), "--count", "2"]
    assert main(args) == 2


def test_sequence_parsing():
    assert parse_sequence("[3, 2.5, 1]") == (3.0, 2.5, 1.0)
    assert parse_sequence(" 3\n2\n") == (3.0, 2.0)
    assert parse_sequence("[1, 2]", sorted_check=False) == (1.0, 2.0)


@pytest.mark.parametrize(
    "text",
    [
        '{"M": 1, "N": 1, "entries": 5}',
        '{"M": 1, "N": 1, "entries": "1"}',
        '{"M": -1, "N": -1, "entries": [1.0]}',
        '{"M": 1, "N": 2, "entries": [[1.0, "x"]]}',
        "1.0,2.0\n3.0\n",
    ],
)
def test_malformed_matrix_is_a_parse_error(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_quoted_csv_cells_parse():
    np.testing.assert_array_equal(parse_matrix('"1.5",2\n3,"-4"\n'), [[1.5, 2.0], [3.0, -4.0]])


def test_verify_malformed_matrix_exits_two(write_seq, tmp_path, five_in_three):
    lam, mu = five_in_three
    bad = tmp_path / "F.json"
    bad.write_text('{"M": 3, "N": 5, "entries": 5}')
    args = ["verify", "--matrix", str(bad), "--spectrum", write_seq("lam", lam[:3]), "--lengths", write_seq("mu", mu)]
    assert main(args) == 2


def test_near_equal_spectrum_frame_exits_zero(write_seq, tmp_path):
    lam = [2.0 - 5e-10 * i for i in range(7)]
    mu = [sum(lam) / 7] * 7
    out = tmp_path / "F.json"
    args = ["frame", "--spectrum", write_seq("lam", lam), "--lengths", write_seq("mu", mu), "--mode", "random", "--seed", "3"]
    assert main([*args, "--out", str(out)]) == 0
    assert parse_matrix(out.read_text()).shape == (7, 7)
