import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import quaternion_table
from homcount.cli import execute, main
from homcount.frobenius import table_document
from homcount.groups import build_group
from homcount.symchar import character_table

GOLDEN = Path(__file__).parent / "golden" / "surface_tables.csv"


def run(*argv):
    return execute(list(argv))


def _strings_only(doc):
    if isinstance(doc, dict):
        return all(_strings_only(v) for v in doc.values())
    if isinstance(doc, list):
        return all(_strings_only(v) for v in doc)
    return isinstance(doc, (str, bool))


def test_surface_table_matches_golden():
    status, text = run("surface-table", "--max-genus", "5", "--max-n", "5", "--format", "csv")
    assert status == 0
    assert text == GOLDEN.read_text()
    assert "429988374084026406" in text and "85997674816805281" in text


def test_hom_count_example():
    status, text = run("hom", "count", "--group", "S3", "--pres", "gens:x,y; rels:[x,y]", "--format", "json")
    doc = json.loads(text)
    assert status == 0
    assert (doc["count"], doc["quotient"], doc["divisible"]) == ("18", "3", True)
    assert _strings_only(doc)


def test_torsor_example():
    status, text = run("torsor", "verify", "--group", "C3", "--pres", "gens:x; rels:",
                       "--sigma", "x -> x^-1", "--format", "json")
    doc = json.loads(text)
    assert status == 0
    assert doc["pass"] is True
    assert (doc["upstairs_count"], doc["quotient"], doc["twisted_orbit_count"]) == ("3", "1", "1")


def test_torsor_inconsistent_sigma_exits_1():
    status, text = run("torsor", "verify", "--group", "S3", "--pres", "gens: x, y; rels: x^2",
                       "--sigma", "x -> y; y -> x", "--format", "json")
    assert status == 1
    assert json.loads(text)["reason"] == "sigma_inconsistent"


def test_torsor_with_constraint():
    status, text = run("torsor", "verify", "--group", "S3", "--pres", "gens: x; rels:",
                       "--constrain", "x@(1,2)", "--format", "json")
    doc = json.loads(text)
    assert status == 0 and doc["pass"] is True
    assert doc["quotient"] == "1"


def test_hom_constrained():
    status, text = run("hom", "constrained", "--group", "S3", "--pres", "gens: x, y, z; rels: x y z",
                       "--constrain", "x@(1,2,3)", "--constrain", "y@(1,2,3)", "--constrain", "z@(1,3,2)",
                       "--format", "json")
    assert status == 0
    assert json.loads(text)["count"] == "2"


def test_constrain_by_class_id():
    g = build_group("S3")
    cid = g.class_of[g.element("(1,2,3)")]
    a = json.loads(run("hom", "constrained", "--group", "S3", "--pres", "gens: x; rels: x^3",
                       "--constrain", f"x@#{cid}", "--format", "json")[1])
    assert a["count"] == "2"
    status, _ = run("hom", "constrained", "--group", "S3", "--pres", "gens: x; rels:",
                    "--constrain", "x@#99")
    assert status == 2
    status, _ = run("hom", "constrained", "--group", "S3", "--pres", "gens: x; rels:", "--constrain", "x")
    assert status == 2


def test_budget_exit_code():
    status, text = run("hom", "count", "--group", "S5", "--pres", "gens: a, b, c, d; rels: [a,b][c,d]",
                       "--format", "json")
    doc = json.loads(text)
    assert status == 3
    assert doc["reason"] == "budget_exceeded"
    assert int(doc["cost"]) > int(doc["budget"])


def test_budget_environment(monkeypatch):
    monkeypatch.setenv("HOMCOUNT_BUDGET", "10000")
    status, _ = run("hom", "count", "--group", "S5", "--pres", "gens: x, y; rels: [x,y]")
    assert status == 3
    monkeypatch.delenv("HOMCOUNT_BUDGET")
    status, _ = run("hom", "count", "--group", "S5", "--pres", "gens: x, y; rels: [x,y]")
    assert status == 0


@pytest.mark.parametrize("argv", [
    ["hom", "count", "--group", "S3", "--pres", "gens: x; rels: [x"],
    ["hom", "count", "--group", "Q8", "--pres", "gens: x; rels:"],
    ["hom", "count", "--group", "S3"],
    ["hom", "count", "--group", "S3", "--pres", "gens: x; rels:", "--budget", "10"],
    ["growth", "--max-n", "3"],
    ["char", "table"],
    ["bogus"],
])
def test_usage_errors(argv):
    assert execute(argv)[0] == 2


def test_parse_error_is_machine_readable():
    status, text = run("hom", "count", "--group", "S3", "--pres", "gens: x; rels: y", "--format", "json")
    assert status == 2
    assert json.loads(text)["reason"] == "parse_error"


def test_divisibility_failure_exit_code():
    # x^2 has finite abelianization, so no failure is reported
    status, text = run("hom", "count", "--group", "C3", "--pres", "gens: x; rels: x^2", "--format", "json")
    assert status == 0
    assert json.loads(text)["divisible"] is False


def test_workers_byte_identical():
    argv = ["hom", "count", "--group", "S4", "--pres", "gens: x, y, z; rels: [x,y] z^2", "--format", "json"]
    assert run(*argv, "--workers", "1") == run(*argv, "--workers", "3")
    argv = ["torsor", "verify", "--group", "S4", "--pres", "gens: x, y; rels: x^2, y^2",
            "--sigma", "x -> y; y -> x", "--format", "csv"]
    assert run(*argv, "--workers", "1") == run(*argv, "--workers", "2")


def test_group_info():
    status, text = run("group", "info", "--group", "SL2_3", "--format", "json")
    doc = json.loads(text)
    assert status == 0
    assert doc["order"] == "24" and doc["class_count"] == "7"
    assert sum(int(c["size"]) for c in doc["classes"]) == 24
    assert _strings_only(doc)


def test_cayley_group(tmp_path):
    path = tmp_path / "q8.txt"
    path.write_text("8\n" + "\n".join(" ".join(map(str, r)) for r in quaternion_table()))
    status, text = run("hom", "count", "--group", f"cayley:{path}", "--pres", "gens: x, y; rels: [x,y]",
                       "--format", "json")
    assert status == 0
    assert json.loads(text)["quotient"] == "5"
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 0\n0 0\n")
    assert run("group", "info", "--group", f"cayley:{bad}")[0] == 2


def test_growth_commands():
    status, text = run("growth", "--genus", "2", "--max-n", "5", "--method", "character", "--format", "json")
    doc = json.loads(text)
    assert status == 0
    assert doc["u"] == ["1", "15", "220", "5275", "151086"]
    assert doc["v"] == ["1", "7", "73", "1315", "30217"]
    assert doc["product_form"] is True
    status, text = run("growth", "--pres", "gens: x, t; rels: t x t^-1 x", "--max-n", "4", "--format", "json")
    assert status == 0
    assert json.loads(text)["u"] == ["1", "3", "4", "7"]
    assert run("growth", "--genus", "1", "--pres", "gens: x; rels:")[0] == 2


def test_char_table_commands(tmp_path):
    status, text = run("char", "table", "--n", "4", "--format", "json")
    doc = json.loads(text)
    assert status == 0
    assert sorted(int(d) for d in doc["degrees"]) == [1, 1, 2, 3, 3]
    path = tmp_path / "s4.json"
    path.write_text(json.dumps(table_document(character_table(4))))
    status, text = run("char", "table", "--file", str(path), "--format", "json")
    assert status == 0
    assert json.loads(text)["degrees"] == doc["degrees"]
    doc = json.loads(path.read_text())
    doc["values"][0][0] = "2"
    path.write_text(json.dumps(doc))
    assert run("char", "table", "--file", str(path))[0] == 2


def test_bs_check():
    status, text = run("bs", "check", "--n-sym", "3", "--m", "2", "--n", "1", "--format", "json")
    doc = json.loads(text)
    assert status == 0 and doc["pass"] is True
    assert doc["stable_classes"] == doc["quotient"] == "2"


def test_output_file(tmp_path, capsys):
    out = tmp_path / "report.csv"
    status = main(["surface-table", "--format", "csv", "--output", str(out)])
    assert status == 0
    assert capsys.readouterr().out == ""
    assert out.read_text() == GOLDEN.read_text()


def test_text_format():
    status, text = run("hom", "count", "--group", "S3", "--pres", "gens: x, y; rels: [x,y]")
    assert status == 0
    assert "count: 18" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homcount", "hom", "count", "--group", "C4",
                           "--pres", "gens: x; rels: x^2", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["count"] == "2"
