import csv
import io
import math

import numpy as np
import pytest

from fracolloc import cli
from fracolloc.experiments import fig1_function
from fracolloc.oracle import rl_quadrature


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, list(csv.reader(io.StringIO(out)))


def test_table1_default(capsys):
    code, rows = run(["--command", "table1"], capsys)
    assert code == 0 and rows[0] == ["N", "cond2"]
    values = {int(r[0]): float(r[1]) for r in rows[1:]}
    assert values[5] == pytest.approx(3.7240, rel=0.01)
    assert values[10] == pytest.approx(8.9481, rel=0.01)
    assert values[100] == pytest.approx(103.4209, rel=0.01)


def test_table1_size_labels(capsys):
    code, rows = run(["--command", "table1", "--N-range", "5", "--labels", "size"], capsys)
    assert code == 0 and float(rows[1][1]) == pytest.approx(4.9879, rel=1e-3)


def test_invalid_parameters_exit_two(capsys):
    assert cli.main(["--command", "table1", "--mu", "1.5"]) == 2
    assert cli.main(["--command", "table2", "--sigma", "0"]) == 2
    assert cli.main(["--command", "solve", "--choices", "C9"]) == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["--command", "nope"])
    assert info.value.code == 2


def test_numerical_failure_exit_three(capsys):
    code, rows = run(["--command", "table3", "--sigma", "0.8", "--K", "50", "--N-range", "4"], capsys)
    assert code == 3
    assert rows[1][3] == "NA"


def test_table2_row(capsys):
    code, rows = run(["--command", "table2", "--N-range", "8,12"], capsys)
    assert code == 0 and rows[0] == ["N", "err_choice1", "err_choice2", "err_choice3"]
    row8 = [float(v) for v in rows[1][1:]]
    for got, want in zip(row8, (0.0140, 0.0316, 0.0015)):
        assert got == pytest.approx(want, rel=0.05)
    assert float(rows[2][3]) == pytest.approx(1.1296e-05, rel=0.05)


def test_table3_row(capsys):
    code, rows = run(["--command", "table3", "--N-range", "4,15"], capsys)
    assert code == 0 and rows[0] == ["N", "err_choice4", "err_choice5", "err_choice6"]
    for got, want in zip([float(v) for v in rows[1][1:]], (0.0111, 0.0276, 0.0045)):
        assert got == pytest.approx(want, rel=0.05)
    assert float(rows[2][3]) == pytest.approx(5.8520e-04, rel=0.05)


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# table1 sweep\ncommand = table1\nN_range = 5,10\nmu = 0.3\n")
    code, from_file = run(["--config", str(cfg)], capsys)
    assert code == 0 and [r[0] for r in from_file[1:]] == ["5", "10"]
    code, overridden = run(["--config", str(cfg), "--N-range", "20"], capsys)
    assert [r[0] for r in overridden[1:]] == ["20"]
    code, default_mu = run(["--command", "table1", "--N-range", "5"], capsys)
    assert from_file[1][1] != default_mu[1][1]


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("command = table1\ncolour = blue\n")
    assert cli.main(["--config", str(cfg)]) == 2


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["--command", "solve", "--N", "6", "--choices", "C1,C3,C6"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_timing_column(capsys):
    code, rows = run(["--command", "solve", "--N", "5", "--choices", "C2", "--timing"], capsys)
    assert rows[0][-1] == "runtime_ms" and float(rows[1][-1]) >= 0.0


def test_nodes_sweep_counts(capsys):
    code, rows = run(["--command", "nodes", "--N", "2", "--mu", "0:1:0.1"], capsys)
    assert code == 0
    psi = [r for r in rows[1:] if r[3] == "psi"]
    assert len(psi) == 22
    assert len({r[2] for r in psi}) == 11


def test_nodes_interleave(capsys):
    code, rows = run(["--command", "nodes", "--N", "5", "--mu", "0.5"], capsys)
    psi = sorted(float(r[5]) for r in rows[1:] if r[3] == "psi")
    leg = sorted(float(r[5]) for r in rows[1:] if r[3] == "legendre")
    merged = sorted([(v, "p") for v in psi] + [(v, "l") for v in leg])
    kinds = [k for _, k in merged]
    assert len(psi) == 5 and all(a != b for a, b in zip(kinds, kinds[1:]))


def test_nodes_cheb_representation(capsys):
    code, rows = run(["--command", "nodes", "--family", "cheb", "--N", "10", "--mu", "0.5"], capsys)
    rep = [float(r[5]) for r in rows[1:] if r[3] == "rep"]
    assert len(rep) == 11
    np.testing.assert_allclose(rep, -np.cos(np.arange(11) * math.pi / 10), atol=1e-15)


def test_nodes_mixed_with_K(capsys):
    code, rows = run(["--command", "nodes", "--N", "5", "--mu", "0.5", "--K", "10"], capsys)
    assert len([r for r in rows[1:] if r[3] == "mixed"]) == 4


def test_grid_command(capsys):
    code, rows = run(["--command", "grid", "--family", "cheb", "--N", "10"], capsys)
    assert code == 0 and rows[0] == ["index", "node"] and len(rows) == 12


def test_fig1_columns(capsys):
    code, rows = run(["--command", "fig1", "--sigma", "0.5,1.5", "--mesh-points", "5"], capsys)
    assert code == 0 and rows[0] == ["x", "sigma_0.5", "sigma_1.5"]
    data = np.array(rows[1:], dtype=float)
    assert data[2, 0] == 0.0
    ref = rl_quadrature(lambda s: float(fig1_function(s)), 0.5, 0.0)
    assert data[2, 1] == pytest.approx(ref.value, abs=1e-4)


def test_fig1_default_has_all_columns(capsys):
    code, rows = run(["--command", "fig1", "--mesh-points", "3"], capsys)
    assert len(rows[0]) == 19 and "sigma_1.5" in rows[0]


def test_matrix_command(capsys):
    code, rows = run(["--command", "matrix", "--N", "4", "--choices", "C3"], capsys)
    assert code == 0 and len(rows) == 4 and all(len(r) == 4 for r in rows)
    code, rows = run(["--command", "matrix", "--N", "4", "--choices", "C4"], capsys)
    assert len(rows) == 3 and len(rows[0]) == 3


def test_list_parsers():
    assert cli.parse_int_list("4:7") == [4, 5, 6, 7]
    assert cli.parse_int_list("4..6") == [4, 5, 6]
    assert cli.parse_int_list("5,10") == [5, 10]
    np.testing.assert_allclose(cli.parse_float_list("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1.0])
