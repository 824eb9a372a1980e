import json

import pytest
import yaml

from hvfractal.cli import main
from test_pipeline import SMALL


@pytest.fixture()
def config_path(tmp_path):
    p = tmp_path / "run.yaml"
    p.write_text(yaml.safe_dump(SMALL))
    return str(p)


def test_verify_success(config_path, capsys):
    assert main(["verify", "--config", config_path]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["stage"] == "verify"
    assert body["report"]["passed"]


def test_verify_failure_exit_code(tmp_path, capsys):
    bad = dict(SMALL)
    bad["maps"] = dict(
        SMALL["maps"],
        b={"kind": "constant", "value": 0.8},
        d={"kind": "constant", "value": 0.3},
    )
    p = tmp_path / "bad.yaml"
    p.write_text(yaml.safe_dump(bad))
    assert main(["verify", "--config", str(p)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "validation"


def test_missing_config_exit_code(capsys):
    assert main(["verify", "--config", "nope.yaml"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "config"


def test_solve_and_analyze_chain(config_path, tmp_path):
    out = tmp_path / "out"
    assert main(["solve", "--config", config_path, "--out", str(out)]) == 0
    assert (out / "samples.csv").exists()
    assert main(["analyze", "--config", config_path, "--out", str(out)]) == 0
    assert (out / "boxcount.csv").exists()


def test_analyze_before_solve_fails(config_path, tmp_path, capsys):
    out = str(tmp_path / "empty")
    assert main(["analyze", "--config", config_path, "--out", out]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["category"] == "io"


def test_all_command(config_path, tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["all", "--config", config_path, "--out", out]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["report"]["analysis"]["bound_check"]["passed"]
