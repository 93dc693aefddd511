"""The HTTP surface: request/response models, status codes, schema stability."""

import json
import warnings

import pytest

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from dirac_kit.service.app import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok" and "version" in body


def test_catalog_listing(client):
    resp = client.get("/catalog")
    assert resp.status_code == 200
    names = resp.json()["names"]
    assert set(names) == {"polwie", "amm", "arrows", "gauss_cartan",
                          "g0_moment", "luwei", "weil_sl2", "doubles"}


def test_catalog_run_and_unknown(client):
    resp = client.post("/catalog/doubles", json={"settings": {"seed": 5}})
    assert resp.status_code == 200
    body = resp.json()
    assert body["pass"] is True and body["catalog"] == "doubles"
    assert body["seed"] == 5
    resp = client.post("/catalog/unheard_of", json={})
    assert resp.status_code == 404


def test_verify_endpoint(client):
    scenario = {
        "schema": "dirac-kit/1",
        "declarations": {"algebras": {"sl2": {"catalog": "sl2_trace"}}},
        "checks": [{"name": "verify_quadratic", "algebra": "sl2"}],
    }
    resp = client.post("/verify", json={"scenario": scenario})
    assert resp.status_code == 200
    body = resp.json()
    assert body["pass"] is True
    assert body["checks"][0]["status"] == "pass"
    assert body["checks"][0]["signature"] == [2, 1, 0]


def test_verify_failing_check_is_200_with_fail(client):
    scenario = {
        "schema": "dirac-kit/1",
        "declarations": {"algebras": {"broken": {
            "dim": 3,
            "brackets": [[0, 1, 2, "1"], [1, 2, 0, "1"], [0, 2, 0, "1"]],
            "gram": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]}}},
        "checks": [{"name": "jacobi", "algebra": "broken"}],
    }
    resp = client.post("/verify", json={"scenario": scenario})
    assert resp.status_code == 200
    assert resp.json()["pass"] is False


def test_verify_bad_scenario_is_400(client):
    scenario = {"schema": "dirac-kit/1",
                "checks": [{"name": "mystery_check"}]}
    resp = client.post("/verify", json={"scenario": scenario})
    assert resp.status_code == 400


def test_verify_malformed_body_is_422(client):
    resp = client.post("/verify", json={"scenario": {"checks": "not-a-list"}})
    assert resp.status_code == 422
    resp = client.post("/verify", json={"not_scenario": 1})
    assert resp.status_code == 422


def test_settings_override_through_service(client):
    scenario = {"schema": "dirac-kit/1", "checks": []}
    resp = client.post("/verify", json={"scenario": scenario,
                                        "settings": {"seed": 123}})
    assert resp.status_code == 200
    assert resp.json()["seed"] == 123
    resp = client.post("/verify", json={"scenario": scenario,
                                        "settings": {"samples": 0}})
    assert resp.status_code == 422  # model-level range validation
