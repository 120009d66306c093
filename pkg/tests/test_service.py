import pytest
from fastapi.testclient import TestClient

from polyfiber.service import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_healthz(self, client):
        r = client.get("/healthz")
        assert r.status_code == 200
        assert r.json()["status"] == "ok"


class TestAnalyzeEndpoint:
    def test_expression(self, client):
        r = client.post("/analyze", json={"polynomial": "1+x+y+x^2*y+2*x*y^2+y^3"})
        assert r.status_code == 200
        body = r.json()
        assert body["status"] == "ok"
        assert body["report"]["n_function"]["type"] == "2 **3** 2"

    def test_builtin(self, client):
        r = client.post("/analyze", json={"polynomial": "builtin:circle"})
        assert r.status_code == 200
        # x^2 + y^2 is not a submersion: honest inconclusive verdict.
        assert r.json()["report"]["certifier"]["verdict"] == "Inconclusive"

    def test_json_terms(self, client):
        r = client.post("/analyze", json={"polynomial": [[1, 0, "1"], [0, 1, "1"]]})
        assert r.status_code == 200
        assert r.json()["report"]["certifier"]["verdict"] == "TrivialFibration"

    def test_oracle_flag(self, client):
        r = client.post(
            "/analyze",
            json={"polynomial": "x+y", "oracle": True, "probes": ["0"], "grid": 128, "box": "3"},
        )
        assert r.status_code == 200
        checks = r.json()["report"]["oracle"]
        assert checks and checks[0]["match"] is True

    def test_bad_input_400(self, client):
        assert client.post("/analyze", json={"polynomial": "x^^"}).status_code == 400

    def test_validation_422(self, client):
        assert client.post("/analyze", json={}).status_code == 422


class TestVerifyPairEndpoint:
    def test_builtin(self, client):
        r = client.post("/verify-pair", json={"builtin": "degree7"})
        assert r.status_code == 200
        assert r.json()["verified"] is True

    def test_requires_payload(self, client):
        assert client.post("/verify-pair", json={}).status_code == 400

    def test_unknown_builtin(self, client):
        assert client.post("/verify-pair", json={"builtin": "nope"}).status_code == 400


class TestTraceEndpoint:
    def test_trace_circle(self, client):
        r = client.post("/trace", json={"polynomial": "x^2+y^2", "levels": ["1", "2"], "steps": 600})
        assert r.status_code == 200
        body = r.json()
        assert "<svg" in body["svg"]
        assert body["csv"].startswith("orbit,chart,t,u,v")
        assert body["summary"]["orbits"] >= 2
