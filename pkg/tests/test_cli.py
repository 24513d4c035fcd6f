import json

import pytest

from artifact.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_repzeta_ok(capsys):
    code, out = _run(capsys, "repzeta", "check", "--q", "5", "--levels", "4")
    rep = json.loads(out)
    assert code == 0 and rep["result"]["ledger"][-1]["status"] == "OK"
    assert rep["version"] and rep["ref"]


def test_malformed_polynomial(capsys):
    code, out = _run(capsys, "mahler", "measure", "--poly", "x^^2")
    assert code == 2 and json.loads(out)["error"] == "PolynomialParseError"


def test_volume_ratios_table(capsys):
    code, out = _run(capsys, "volume", "ratios", "--all")
    assert code == 0 and len(json.loads(out)["result"]["rows"]) == 6


def test_seed_required(capsys):
    code, out = _run(capsys, "nerve", "run", "--space", "torus2")
    assert code == 2 and "seed" in json.loads(out)["message"]


def test_byte_identical(capsys):
    a = _run(capsys, "nerve", "run", "--space", "poincare", "--samples", "400", "--seed", "4")[1]
    b = _run(capsys, "nerve", "run", "--space", "poincare", "--samples", "400", "--seed", "4")[1]
    assert a == b


def test_profile_typo(capsys):
    assert main(["suite", "--profile", "quik"]) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 7\nlevels = 2  # two levels\n")
    code, out = _run(capsys, "repzeta", "check", "--config", str(cfg))
    assert code == 0 and json.loads(out)["result"]["q"] == 7
    cfg.write_text("colour = 7\n")
    assert main(["repzeta", "check", "--config", str(cfg)]) == 2


def test_csv_projection(capsys):
    code, out = _run(capsys, "bilu", "--nmax", "32", "--output", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("degree,") and len(lines) == 4


@pytest.mark.parametrize("argv", [
    ["nf", "splitting", "--field", "Q(sqrt(-3))", "--p", "7"],
    ["tree", "check", "--type", "split", "--p", "2", "--v", "2"],
    ["geom", "invariants", "--matrix", "0,-1,1,0", "--R", "3"],
    ["conjcount", "kl", "--n", "100", "--A", "1"],
    ["volume", "torus", "--d", "5"],
])
def test_subcommands_run(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == 0 and "result" in json.loads(out)
