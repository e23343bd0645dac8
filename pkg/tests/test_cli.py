"""Command-line tests: output, JSON records and exit codes."""
import json

import pytest

from src.cli import main
from src.freelie import FreeLieSeries
from src.kv import KVPair, save_pair


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_bch_prints_the_series(capsys):
    code, out = run(capsys, "bch", "--order", "2")
    assert code == 0
    assert out.strip() == "y1 + y2 + 1/2 [y1,y2]"


def test_star_on_sl2(capsys):
    code, out = run(capsys, "star", "--lie", "builtin:sl2", "x0", "x1")
    assert code == 0
    assert out.strip() == "-1/6 + 1/2 x2 + x0*x1"


def test_star_json_record_carries_the_config(capsys):
    code, record = run_json(capsys, "star", "--lie", "builtin:aff1", "x0", "x1")
    assert code == 0
    assert record["schema"] == 1 and record["ok"] is True
    assert record["command"] == "star"
    assert record["config"]["lie"] == "builtin:aff1"
    assert record["lie"] == "aff1"


def test_assoc_passes_on_aff1(capsys):
    code, out = run(capsys, "assoc", "--lie", "builtin:aff1", "--max-degree", "2")
    assert code == 0
    assert out.startswith("PASS (")


def test_expcheck_reports_the_density(capsys):
    code, record = run_json(capsys, "expcheck", "--lie", "builtin:aff1", "--order", "2")
    assert code == 0
    assert record["defect"] == "0"
    assert "u" in record["density"] or record["density"] == "1"


def test_weights_of_the_empty_graph(capsys):
    code, out = run(capsys, "weights", "--graph", "0 2 ;", "--expect", "1")
    assert code == 0
    assert out.splitlines()[-1].startswith("PASS")


def test_weights_json_estimate(capsys):
    code, record = run_json(capsys, "weights", "--graph", "1 2 ; 0:(g0,g1)", "--samples", "2000", "--seed", "3")
    assert code == 0
    (estimate,) = record["estimates"]
    assert estimate["n"] == 1 and estimate["samples"] == 2000 and estimate["seed"] == 3


def test_graphstar_order_one_on_sl2_passes(capsys):
    code, out = run(capsys, "graphstar", "--lie", "builtin:sl2", "--order", "1", "--samples", "20000")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "PASS"
    assert "x0 * x1:" in lines
    assert not any("MISMATCH" in line for line in lines)


def test_graphstar_json_drops_the_hbar_squared_constant(capsys):
    code, record = run_json(capsys, "graphstar", "--lie", "builtin:sl2", "--order", "1", "--samples", "2000", "x0", "x1")
    assert code == 0
    (table,) = record["tables"]
    assert [row["monomial"] for row in table["rows"]] == ["x2", "x0*x1"]


def test_kv_text_report(capsys):
    code, out = run(capsys, "kv", "--order", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "F = 1/4 y2 + 1/24 [y1,y2]"
    assert lines[1] == "G = -1/4 y1 - 1/24 [y1,y2]"
    assert lines[-1] == "PASS"


def test_kv_save_then_reload(tmp_path, capsys):
    path = tmp_path / "pair.json"
    code, _ = run(capsys, "kv", "--order", "4", "--save", str(path))
    assert code == 0
    assert json.loads(path.read_text())["order"] == 4


def test_kv2_on_aff1(capsys):
    code, record = run_json(capsys, "kv2", "--lie", "builtin:aff1", "--order", "2")
    assert code == 0
    names = [check["name"] for check in record["checks"]]
    assert "kv2_residual[aff1]" in names
    assert record["pair"]["order"] == 3


def test_homotopy_line(capsys):
    code, out = run(capsys, "homotopy", "--lie", "builtin:sl2", "--order", "3", "x0", "x1")
    assert code == 0
    assert "LHS = -1/6 + 1/2 x2, RHS = -1/6 + 1/2 x2, diff = 0" in out.splitlines()


def test_failing_pair_exits_with_one(tmp_path, capsys):
    path = tmp_path / "zero.json"
    save_pair(KVPair(FreeLieSeries.zero(1), FreeLieSeries.zero(1), 2), path)
    code, out = run(capsys, "kv2", "--lie", "builtin:aff1", "--order", "1", "--pair", str(path))
    assert code == 1
    assert out.splitlines()[-1] == "FAIL"


@pytest.mark.parametrize(
    "argv, error_type",
    [
        (["star", "x0", "x1"], "UnknownAlgebra"),
        (["star", "--lie", "builtin:nope", "x0", "x1"], "UnknownAlgebra"),
        (["star", "--lie", "builtin:aff1", "x7", "x1"], "ParseError"),
        (["bch", "--order", "9"], "ValidationError"),
        (["wheels", "--k", "5"], "BudgetCap"),
        (["weights", "--family", "4"], "BudgetCap"),
        (["kv", "--order", "6"], "OrderCap"),
    ],
)
def test_errors_exit_with_two(capsys, argv, error_type):
    code, record = run_json(capsys, *argv)
    assert code == 2
    assert record["ok"] is False
    assert record["error"]["type"] == error_type


def test_expcheck_abelian_density_is_one(capsys):
    code, out = run(capsys, "expcheck", "--lie", "builtin:abelian3", "--order", "3")
    assert code == 0
    assert out.strip() == "PASS, D = 1"


def test_assoc_on_heis3(capsys):
    code, out = run(capsys, "assoc", "--lie", "builtin:heis3", "--max-degree", "3")
    assert code == 0
    assert out.startswith("PASS (") and out.strip().endswith("triples)")
