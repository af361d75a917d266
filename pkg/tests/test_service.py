import pytest
from fastapi.testclient import TestClient

from zxopt import Phase, VertexKind, compose_seq, spider
from zxopt.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def _tt_diagram_json():
    t = spider(VertexKind.Z, Phase.exact(1, 4), 1, 1)
    return compose_seq(t, t).to_json_dict()


def test_health(client):
    reply = client.get("/health")
    assert reply.status_code == 200
    body = reply.json()
    assert body["status"] == "ok" and body["report_version"] == 1


def test_rules_listing(client):
    reply = client.get("/rules")
    assert reply.status_code == 200
    names = {r["name"] for r in reply.json()}
    assert {"fusion", "hopf", "bialgebra"} <= names


def test_eval_endpoint(client):
    reply = client.post("/eval", json={"diagram": _tt_diagram_json()})
    assert reply.status_code == 200
    body = reply.json()
    assert body["rows"] == 2 and body["cols"] == 2
    assert body["matrix"][0][0] == [1.0, 0.0]
    assert abs(body["matrix"][1][1][1] - 1.0) < 1e-12  # e^{i pi/2} = i


def test_eval_rejects_garbage(client):
    reply = client.post("/eval", json={"diagram": {"version": 1, "scalar": {"re": 1, "im": 0},
                                                   "vertices": [], "edges": [],
                                                   "inputs": [7], "outputs": []}})
    assert reply.status_code == 400
    assert reply.json()["detail"]["code"] == "ill-formed"


def test_eval_too_large(client):
    import zxopt

    d = zxopt.identity(5).to_json_dict()
    reply = client.post("/eval", json={"diagram": d, "max_legs": 4})
    assert reply.status_code == 400
    assert reply.json()["detail"]["code"] == "too-large"


def test_simplify_endpoint(client):
    reply = client.post("/simplify", json={"diagram": _tt_diagram_json(), "strategy": "full"})
    assert reply.status_code == 200
    body = reply.json()
    assert body["steps"] == len(body["trace"]) > 0
    kinds = {v["kind"] for v in body["diagram"]["vertices"]}
    assert kinds == {"Z", "B"}


def test_optimize_endpoint(client):
    qasm = "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\ncx q[0],q[1];\n"
    reply = client.post("/optimize", json={"qasm": qasm})
    assert reply.status_code == 200
    body = reply.json()
    assert body["report"]["report_version"] == 1
    assert body["report"]["metrics_after"]["total_gates"] == 0
    assert body["report"]["verified"] is True
    assert body["qasm"].strip().endswith("qreg q[2];")


def test_optimize_bad_qasm(client):
    reply = client.post("/optimize", json={"qasm": "OPENQASM 2.0;\nqreg q[1];\nbogus q[0];\n"})
    assert reply.status_code == 400
    assert reply.json()["detail"]["code"] == "qasm"


def test_equal_endpoint_mixed_sources(client):
    swap_qasm = "OPENQASM 2.0;\nqreg q[2];\nswap q[0],q[1];\n"
    three_cnots = ("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\ncx q[1],q[0];\ncx q[0],q[1];\n")
    reply = client.post("/equal", json={
        "a": {"qasm": three_cnots}, "b": {"qasm": swap_qasm}, "up_to_scalar": True,
    })
    assert reply.status_code == 200
    assert reply.json()["equal"] is True

    reply = client.post("/equal", json={
        "a": {"qasm": swap_qasm}, "b": {"diagram": _tt_diagram_json()},
    })
    assert reply.status_code == 200
    assert reply.json()["equal"] is False


def test_equal_requires_one_source(client):
    reply = client.post("/equal", json={"a": {}, "b": {"qasm": "x"}})
    assert reply.status_code == 422  # pydantic validation


def test_validate_rules_endpoint(client):
    reply = client.post("/validate-rules", json={"trials": 5, "seed": 1})
    assert reply.status_code == 200
    body = reply.json()
    assert body["ok"] is True
    assert all(r["passed"] for r in body["rules"])
    assert {r["name"] for r in body["rules"]} >= {"fusion", "hopf"}


def test_responses_deterministic(client):
    payload = {"diagram": _tt_diagram_json(), "strategy": "full"}
    a = client.post("/simplify", json=payload).text
    b = client.post("/simplify", json=payload).text
    assert a == b
