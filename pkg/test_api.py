#!/usr/bin/env python3
"""
HTTP service endpoints
"""
import pytest
from fastapi.testclient import TestClient
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool
from sqlalchemy import create_engine

from database import Base, get_db
from main import app
from app.reporting import parse_complex_vector

SMALL = {
    "n_antennas": 32, "n_sectors": 4, "m": 8, "snr_db": None, "trials": 2,
    "k_rays": 2, "grid_mode": "on_grid", "n_mask_candidates": 20, "cdf_trials": 10,
}


@pytest.fixture
def client():
    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    Base.metadata.create_all(bind=engine)
    TestingSession = sessionmaker(autocommit=False, autoflush=False, bind=engine)

    def override_get_db():
        db = TestingSession()
        try:
            yield db
        finally:
            db.close()

    app.dependency_overrides[get_db] = override_get_db
    yield TestClient(app)
    app.dependency_overrides.clear()


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_design(client):
    response = client.post("/api/design", json={"config": SMALL})
    assert response.status_code == 200
    sectors = response.json()["sectors"]
    assert [s["d1"] for s in sectors] == [0, 8, 16, 24]
    assert parse_complex_vector(sectors[0]["mask"]).size == 8


def test_psf(client):
    body = client.post("/api/psf", json={"config": SMALL}).json()
    assert body["uniform_mu"] <= 1e-12
    assert len(body["cdfs"]["pcs"]) == 10 and len(body["cdfs"]["rcs"]) == 10


def test_estimate_single_and_full_band(client):
    body = client.post("/api/estimate", json={"config": SMALL}).json()
    g, g_hat = parse_complex_vector(body["g_L"]), parse_complex_vector(body["g_hat_L"])
    assert abs(g - g_hat).max() < 1e-9
    assert body["record"]["rate_bits"] is None

    full = client.post("/api/estimate", json={"config": SMALL, "full_band": True}).json()
    assert full["n_measurements"] == 32
    assert full["nmse"] < 1e-18


def test_sweep_store_and_list_runs(client):
    config = dict(SMALL, snr_values=[0.0, 10.0], scheme="rcs")
    response = client.post("/api/sweep", json={"config": config, "store": True})
    assert response.status_code == 200
    body = response.json()
    assert [row["snr_db"] for row in body["rows"]] == [0.0, 10.0]
    assert len(body["run_ids"]) == 2

    runs = client.get("/api/runs", params={"scheme": "rcs"}).json()["runs"]
    assert {run["id"] for run in runs} == set(body["run_ids"])
    assert client.get("/api/runs", params={"scheme": "pcs"}).json()["runs"] == []


def test_sweep_with_trial_records(client):
    config = dict(SMALL, snr_db=0.0, scheme="rcs")
    body = client.post("/api/sweep", json={"config": config, "include_trials": True}).json()
    assert "run_ids" not in body
    (run,) = body["runs"]
    assert run["summary"]["scheme"] == "rcs" and run["summary"]["trials"] == 2
    assert [t["trial_index"] for t in run["trials"]] == [0, 1]
    assert all(t["rate_bits"] is not None for t in run["trials"])


def test_invalid_config_is_a_client_error(client):
    response = client.post("/api/design", json={"config": {"n_sectors": 3}})
    assert response.status_code == 400
    response = client.post("/api/sweep", json={"config": {"bogus": 1}})
    assert response.status_code == 400
    assert "bogus" in response.json()["detail"]


def test_unexpected_failure_is_a_server_error(client, monkeypatch):
    import main

    def explode(*args, **kwargs):
        raise RuntimeError("disk on fire")

    monkeypatch.setattr(main, "run_coherence_study", explode)
    response = client.post("/api/psf", json={"config": SMALL})
    assert response.status_code == 500
    assert "disk on fire" in response.json()["detail"]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
