import pytest
from fastapi.testclient import TestClient

from conftest import F1, F1_CANON, ROOT_F1
from lgword.api import app


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    assert client.get("/health").json() == {"status": "ok"}


def test_canon(client):
    r = client.post("/canon", json={"term": F1, "trace": True})
    assert r.status_code == 200
    body = r.json()
    assert body["output"] == F1_CANON
    assert body["derivation"].startswith("source " + F1)
    assert [s["name"] for s in body["stages"]][-1] == "output"


def test_canon_syntax_error(client):
    r = client.post("/canon", json={"term": "a^["})
    assert r.status_code == 422
    assert "detail" in r.json()


def test_decide(client):
    r = client.post("/decide", json={"lhs": "a^[w]", "rhs": "a^[w+1]", "method": "both"})
    body = r.json()
    assert body["equal"] is False
    assert body["witness"] == {"semigroup": "Z2", "assignment": {"a": 1}}
    assert body["method_results"] == {"canon": False, "root": False}


def test_decide_schema_validation(client):
    assert client.post("/decide", json={"lhs": "a", "rhs": "a", "method": "fast"}).status_code == 422


def test_outline_and_root(client):
    assert client.post("/root", json={"term": F1}).json()["word"] == ROOT_F1
    body = client.post("/outline", json={"term": "a^[w]", "q": 2}).json()
    assert body == {"term": "a^[w]", "q_param": 1, "word": "i{_,a} b{a}^2 t{a,_}"}


def test_eval(client):
    r = client.post("/eval", json={"term": "ab", "table": [[0, 0], [1, 1]], "assignment": {"a": 1, "b": 0}})
    assert r.json() == {"element": 1}


def test_check_semigroup(client):
    r = client.post("/check-sg", json={"table": [[0, 0], [0, 1]]})
    assert r.json() == {"order": 2, "idempotents": [0, 1], "local_group": False}


def test_check_semigroup_not_associative(client):
    assert client.post("/check-sg", json={"table": [[1, 0], [0, 0]]}).status_code == 422


def test_trace(client):
    d = client.post("/canon", json={"term": "(a^[w]ba^[w])^[w]", "trace": True}).json()["derivation"]
    body = client.post("/trace", json={"derivation": d}).json()
    assert body["valid"] and body["target"] == "a^[w]"


def test_selftest(client):
    body = client.post("/selftest", json={"n": 5, "seed": 2}).json()
    assert body["pairs"] == 10 and body["failures"] == []
