import pytest
from fastapi.testclient import TestClient

from app.main import app


@pytest.fixture(scope="module")
def client():
    with TestClient(app) as test_client:
        yield test_client


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "operational"
    assert body["endpoints"]["classify"] == "/classify"


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "healthy"


def test_commute(client):
    response = client.post("/commute", json={"left": "q[1]", "right": "lq[1]"})
    assert response.status_code == 200
    results = response.json()["results"]
    assert results["dsl"] == "I"
    assert results["unicode"] == "i·𝟙"
    assert results["degree"] == 0


def test_normal_form(client):
    response = client.post("/normal-form", json={"expression": "k[1]*r[1]"})
    assert response.status_code == 200
    assert response.json()["results"]["dsl"] == "r[1]*k[1] - I"


def test_syntax_error_is_bad_request(client):
    response = client.post("/commute", json={"left": "q[", "right": "p[1]"})
    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "EXPRESSIONSYNTAX"
    assert body["details"]["position"] == 2


def test_verify(client):
    response = client.post("/verify", json={"rep": "classical"})
    assert response.status_code == 200
    body = response.json()
    assert body["passed"] is True
    assert body["results"]["central_charge"] == "0"


def test_failed_verification_is_still_ok(client):
    response = client.post("/verify", json={"rep": "hybrid", "interaction": "r[1]"})
    assert response.status_code == 200
    assert response.json()["passed"] is False


def test_unknown_representation_is_unprocessable(client):
    response = client.post("/verify", json={"rep": "relativistic"})
    assert response.status_code == 422


def test_non_hermitian_interaction_is_unprocessable(client):
    response = client.post("/verify", json={"rep": "hybrid", "interaction": "I*r[1]"})
    assert response.status_code == 422
    assert response.json()["error"] == "NONHERMITIANOPERATOR"


def test_liouvillian(client):
    response = client.post("/liouvillian", json={"hamiltonian": "p[1]^2/2 + q[1]^2/2"})
    assert response.status_code == 200
    assert response.json()["results"]["hermitian"] is True


def test_simulate(client):
    axis = {"points": 32, "half_width": 8.0}
    document = {
        "grid": {"x": axis, "q": axis, "p": axis, "dt": 0.01, "steps": 2},
        "hamiltonian": {"g2": 0.1},
        "packet": {"x0": 1.0, "sigma_x": 2.0, "sigma_q": 2.0, "sigma_p": 2.0},
        "check_tail_mass": False,
    }
    response = client.post("/simulate", json=document)
    assert response.status_code == 200
    results = response.json()["results"]
    assert results["records"] == 3
    assert results["output"] is None
    assert results["norm_drift"] < 1e-10
    assert results["energy_drift"] < 1e-9


def test_simulate_under_resolved_packet(client):
    axis = {"points": 16, "half_width": 8.0}
    document = {"grid": {"x": axis, "q": axis, "p": axis, "dt": 0.01}, "packet": {"sigma_x": 1.0}}
    response = client.post("/simulate", json=document)
    assert response.status_code == 422
    assert response.json()["error"] == "GRIDRESOLUTION"


def test_classify(client):
    response = client.post("/classify", json={"max_degree": 1})
    assert response.status_code == 200
    results = response.json()["results"]
    assert results["dimension"] == 1
    assert results["elements"][0]["label"] == "1"


def test_classify_rejects_large_degree(client):
    response = client.post("/classify", json={"max_degree": 9})
    assert response.status_code == 422
