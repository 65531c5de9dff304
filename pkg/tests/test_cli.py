import json

import pytest

from plinth import __version__
from plinth.cli import main


def test_poly_expand(capsys):
    assert main(["poly", "expand", "--p", "7", "--vars", "x,y",
                 "(x + y)^2 - x*y"]) == 0
    assert capsys.readouterr().out.strip() == "y^2 + x*y + x^2"


@pytest.mark.parametrize("expr", ["x^-1", "w + 1", "x +"])
def test_poly_expand_rejects(capsys, expr):
    assert main(["poly", "expand", "--p", "7", "--vars", "x,y", expr]) == 2
    assert "error:" in capsys.readouterr().err


def test_poly_expand_rejects_composite_p(capsys):
    assert main(["poly", "expand", "--p", "6", "--vars", "x", "x"]) == 2


def test_missing_arguments_exit_2():
    with pytest.raises(SystemExit) as ei:
        main(["verify", "rank3", "--p", "2"])
    assert ei.value.code == 2


def test_nagata_suite(capsys, tmp_path):
    path = tmp_path / "out.json"
    code = main(["verify", "nagata", "--p", "2", "--zvars", "1",
                 "--a", "z1", "--theta", "y^2", "--F", "f",
                 "--fixed-space-degree", "4", "--json", str(path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "nagata.04-relation" in out
    doc = json.loads(path.read_text())
    assert doc["tool-version"] == __version__
    assert doc["params"]["theta"] == "y^2"
    ids = [rec["check-id"] for rec in doc["records"]]
    assert ids == sorted(ids) and len(ids) == 10
    assert all(rec["status"] == "pass" for rec in doc["records"])
    principality = next(r for r in doc["records"]
                        if r["check-id"] == "nagata.05-principality")
    assert principality["details"] == "principal: True"


def test_nagata_check_selection(capsys):
    code = main(["verify", "nagata", "--p", "3", "--zvars", "1",
                 "--a", "z", "--theta", "y^2", "--F", "f",
                 "--checks", "relation,principality"])
    assert code == 0
    out = capsys.readouterr().out
    assert "nagata.04-relation" in out and "nagata.05-principality" in out
    assert "nagata.01-build" not in out
    assert "principal: False" in out


def test_nagata_rejects_bad_theta(capsys):
    code = main(["verify", "nagata", "--p", "2", "--zvars", "1",
                 "--a", "z", "--theta", "1 + y", "--F", "f"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_rank3_suite(capsys):
    code = main(["verify", "rank3", "--p", "2", "--l", "1", "--m", "2",
                 "--t", "2", "--h", "f"])
    assert code == 0
    out = capsys.readouterr().out
    # frobenius and derivations need p coprime to t, and the fixed-space
    # oracle is off at its default degree bound of 0
    assert out.count("INCONCLUSIVE") == 3
    assert out.count("PASS") == 7


def test_rank3_strict_fails_on_inconclusive():
    args = ["verify", "rank3", "--p", "2", "--l", "1", "--m", "2",
            "--t", "2", "--checks", "frobenius"]
    assert main(args) == 0
    assert main(args + ["--strict"]) == 1


def test_rank3_unknown_h_identifier(capsys):
    code = main(["verify", "rank3", "--p", "2", "--l", "1", "--m", "2",
                 "--t", "2", "--h", "q + f"])
    assert code == 2


def test_dedekind_suite(capsys, tmp_path):
    path = tmp_path / "dd.json"
    code = main(["verify", "dedekind", "--p", "3", "--d", "2", "--l", "0",
                 "--json", str(path)])
    assert code == 0
    doc = json.loads(path.read_text())
    assert [r["status"] for r in doc["records"]] == ["pass", "pass"]
    code = main(["verify", "dedekind", "--p", "3", "--d", "3", "--l", "0"])
    assert code == 2  # d must be coprime to p


def test_budget_abort_exits_1(capsys):
    code = main(["verify", "nagata", "--p", "3", "--zvars", "1",
                 "--a", "z", "--theta", "y^2", "--F", "f",
                 "--budget-pairs", "1"])
    assert code == 1
    assert "BUDGET-EXCEEDED" in capsys.readouterr().out


def test_reports_are_deterministic(capsys, tmp_path):
    base = ["verify", "nagata", "--p", "3", "--zvars", "1",
            "--a", "z", "--theta", "y + z*y^2", "--F", "f"]
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(base + ["--json", str(p1)]) == 0
    assert main(base + ["--json", str(p2)]) == 0

    def strip(path):
        doc = json.loads(path.read_text())
        for rec in doc["records"]:
            rec.pop("elapsed-ms")
        return doc

    assert strip(p1) == strip(p2)
