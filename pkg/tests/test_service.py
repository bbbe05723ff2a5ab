"""HTTP service endpoints and the background-job flow."""

import time

import pytest
from fastapi.testclient import TestClient

from zerosum2 import __version__
from zerosum2.certificates import Certificate
from zerosum2.service import app

client = TestClient(app)


def test_health():
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json() == {"status": "ok", "version": __version__}


def test_propb_endpoint():
    r = client.post("/verify/propb", json={"n": 6})
    assert r.status_code == 200
    cert = Certificate.model_validate(r.json())
    assert cert.verdict == "verified"
    assert cert.params["n"] == 6


def test_propb_counterexample_payload():
    r = client.post("/verify/propb", json={"n": 5, "max_mult": 4})
    assert r.status_code == 200
    body = r.json()
    assert body["verdict"] == "counterexample"
    assert body["evidence"]["counterexample"]["profile"][0] == 4


def test_triple_endpoint():
    r = client.post("/verify/triple", json={"p": 11})
    assert r.status_code == 200
    assert r.json()["verdict"] == "verified"


def test_twomult_endpoint():
    r = client.post("/verify/twomult", json={"k1": 3, "k2": 3})
    assert r.status_code == 200
    body = r.json()
    assert body["verdict"] == "verified"
    assert body["evidence"]["pairs"][0]["survivors"] == []


def test_lemma_endpoint():
    r = client.post("/lemmas/olson-fmc", json={"params": {"p": 11, "s": 3}})
    assert r.status_code == 200
    assert r.json()["verdict"] == "no-violations"


def test_davenport_endpoint():
    r = client.post("/davenport", json={"n": 5})
    assert r.status_code == 200
    assert r.json()["evidence"]["davenport_constant"] == 9


def test_validation_errors():
    assert client.post("/verify/propb", json={"n": 70}).status_code == 422
    assert client.post("/verify/propb", json={}).status_code == 422
    assert client.post("/davenport", json={"n": 9}).status_code == 422


def test_domain_errors_are_400():
    r = client.post("/lemmas/no-such-lemma", json={"params": {}})
    assert r.status_code == 400
    r = client.post("/verify/triple", json={"p": 9})
    assert r.status_code == 400
    r = client.post("/verify/twomult", json={"k1": 3})
    assert r.status_code == 400


def test_job_flow():
    r = client.post("/jobs", json={"command": "propb", "params": {"n": 5, "max_mult": 4}})
    assert r.status_code == 202
    job_id = r.json()["job_id"]
    for _ in range(100):
        st = client.get(f"/jobs/{job_id}").json()
        if st["status"] in ("done", "failed"):
            break
        time.sleep(0.05)
    assert st["status"] == "done"
    assert st["certificate"]["verdict"] == "counterexample"
    listing = client.get("/jobs").json()
    assert any(j["job_id"] == job_id for j in listing)


def test_job_failure_is_reported():
    r = client.post("/jobs", json={"command": "lemma", "params": {"name": "nope"}})
    job_id = r.json()["job_id"]
    for _ in range(100):
        st = client.get(f"/jobs/{job_id}").json()
        if st["status"] in ("done", "failed"):
            break
        time.sleep(0.05)
    assert st["status"] == "failed"
    assert "nope" in st["error"]


def test_unknown_job_404():
    assert client.get("/jobs/deadbeef").status_code == 404
