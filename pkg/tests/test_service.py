import pytest
from fastapi.testclient import TestClient

from hvfractal.service import app
from test_pipeline import SMALL


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_verify_endpoint(client):
    resp = client.post("/verify", json={"config": SMALL})
    assert resp.status_code == 200
    body = resp.json()
    assert body["stage"] == "verify"
    assert body["report"]["edelstein"]["max_ratio"] < 1.0


def test_verify_failure_maps_to_422_with_category(client):
    bad = dict(SMALL)
    bad["maps"] = dict(
        SMALL["maps"],
        b={"kind": "constant", "value": 0.8},
        d={"kind": "constant", "value": 0.3},
    )
    resp = client.post("/verify", json={"config": bad})
    assert resp.status_code == 422
    body = resp.json()
    assert body["category"] == "validation"
    assert "1.1" in body["message"]


def test_malformed_config_rejected(client):
    resp = client.post("/verify", json={"config": {"data": {"t": [0, 1]}}})
    assert resp.status_code == 422


def test_solve_endpoint_writes_files(client, tmp_path):
    resp = client.post("/solve", json={"config": SMALL, "out_dir": str(tmp_path)})
    assert resp.status_code == 200
    assert (tmp_path / "samples.csv").exists()
    assert resp.json()["report"]["converged"]


def test_analyze_without_solve_gives_io_error(client, tmp_path):
    resp = client.post("/analyze", json={"config": SMALL, "out_dir": str(tmp_path)})
    assert resp.status_code == 422
    assert resp.json()["category"] == "io"


def test_full_run_endpoint(client, tmp_path):
    resp = client.post("/run", json={"config": SMALL, "out_dir": str(tmp_path)})
    assert resp.status_code == 200
    rep = resp.json()["report"]
    assert rep["analysis"]["bound_check"]["passed"]
    assert (tmp_path / "report.json").exists()


def test_seed_override_in_request(client, tmp_path):
    a = client.post(
        "/attractor", json={"config": SMALL, "out_dir": str(tmp_path / "a"), "seed": 5}
    )
    b = client.post(
        "/attractor", json={"config": SMALL, "out_dir": str(tmp_path / "b"), "seed": 5}
    )
    assert a.status_code == b.status_code == 200
    assert (tmp_path / "a" / "attractor_chaos.csv").read_bytes() == (
        tmp_path / "b" / "attractor_chaos.csv"
    ).read_bytes()
