import pytest
from fastapi.testclient import TestClient

from gourds.board import serialize_board, star_of_david_board
from gourds.boards import random_proper_board
from gourds.puzzle import serialize_config
from gourds.service import create_app
from tests.conftest import numbered_config


@pytest.fixture
def client():
    return TestClient(create_app())


def _payload(size=11, seed=1, with_target=True, mode="pivot"):
    b = random_proper_board(size, seed)
    c = numbered_config(b)
    body = {
        "board": serialize_board(b),
        "config": serialize_config(c),
        "mode": mode,
    }
    if with_target:
        body["target"] = serialize_config(c)
    return body


def _create(client, **kw):
    r = client.post("/session", json=_payload(**kw))
    assert r.status_code == 200, r.text
    return r.json()


def test_create_and_get(client):
    state = _create(client)
    assert state["proper"] is True
    assert state["solved"] is True
    sid = state["id"]
    again = client.get(f"/session/{sid}").json()
    assert again == state


def test_unknown_session_404(client):
    assert client.get("/session/nope").status_code == 404
    assert client.post("/session/nope/hint").status_code == 404


def test_bad_board_400_mentions_line(client):
    body = _payload()
    body["board"] = "gourds-board v1\n0 0 .\n0 0 .\n"
    r = client.post("/session", json=body)
    assert r.status_code == 400
    assert "line 3" in r.json()["detail"]


def test_bad_mode_400(client):
    body = _payload()
    body["mode"] = "diagonal"
    assert client.post("/session", json=body).status_code == 400


def test_moves_then_move(client):
    state = _create(client)
    sid = state["id"]
    moves = client.get(f"/session/{sid}/moves").json()["moves"]
    assert moves
    r = client.post(f"/session/{sid}/move", json=moves[0])
    assert r.status_code == 200
    new = r.json()
    assert new["history"] == [moves[0]]
    assert new["current"] != state["current"]


def test_illegal_move_409(client):
    state = _create(client)
    sid = state["id"]
    moves = client.get(f"/session/{sid}/moves").json()["moves"]
    bad = dict(moves[0])
    bad["target"] = dict(moves[0]["tail"])
    r = client.post(f"/session/{sid}/move", json=bad)
    assert r.status_code == 409
    # state unchanged
    assert client.get(f"/session/{sid}").json()["history"] == []


def test_scramble_and_solve(client):
    state = _create(client)
    sid = state["id"]
    mixed = client.post(
        f"/session/{sid}/scramble", json={"steps": 30, "seed": 4}
    ).json()
    assert len(mixed["history"]) == 30
    plan = client.post(f"/session/{sid}/solve").json()
    assert plan["strategy"] == "quadratic"
    assert set(plan["stats"]) >= {"s1", "s2", "s3"}
    # solve does not mutate the session
    assert client.get(f"/session/{sid}").json()["current"] == mixed["current"]


def test_hints_terminate(client):
    state = _create(client)
    sid = state["id"]
    client.post(f"/session/{sid}/scramble", json={"steps": 25, "seed": 9})
    for step in range(5000):
        h = client.post(f"/session/{sid}/hint").json()
        if h["move"] is None:
            break
        r = client.post(f"/session/{sid}/move", json=h["move"])
        assert r.status_code == 200
    else:
        pytest.fail("hints never reached the target")
    assert client.get(f"/session/{sid}").json()["solved"] is True


def test_hint_replans_after_deviation(client):
    state = _create(client)
    sid = state["id"]
    client.post(f"/session/{sid}/scramble", json={"steps": 20, "seed": 2})
    h1 = client.post(f"/session/{sid}/hint").json()
    assert h1["move"] is not None
    # ignore the hint and play something else
    moves = client.get(f"/session/{sid}/moves").json()["moves"]
    other = next(m for m in moves if m != h1["move"])
    client.post(f"/session/{sid}/move", json=other)
    h2 = client.post(f"/session/{sid}/hint").json()
    assert h2["move"] is not None


def test_hint_without_target_409(client):
    state = _create(client, with_target=False)
    sid = state["id"]
    assert client.post(f"/session/{sid}/hint").status_code == 409
    assert client.post(f"/session/{sid}/solve").status_code == 409


def test_improper_board_session(client):
    from gourds.placement import search_tiling
    from gourds.puzzle import Configuration, Gourd

    star = star_of_david_board()
    pairs = search_tiling(star, {(".", "."): 6})
    covered = {c for p in pairs for c in p}
    (empty,) = set(star.cells) - covered
    gourds = tuple(
        Gourd(a, b, f"#{2 * i + 1}", f"#{2 * i + 2}")
        for i, (a, b) in enumerate(sorted(pairs))
    )
    cfg = Configuration(gourds, empty)
    r = client.post(
        "/session",
        json={
            "board": serialize_board(star),
            "config": serialize_config(cfg),
            "target": serialize_config(cfg),
        },
    )
    assert r.status_code == 200
    state = r.json()
    assert state["proper"] is False
    sid = state["id"]
    # moves still work on an improper board, but solving refuses
    assert client.get(f"/session/{sid}/moves").json()["moves"]
    assert client.post(f"/session/{sid}/solve").status_code == 409


def test_sessions_are_isolated(client):
    a = _create(client, seed=1)
    b = _create(client, seed=2)
    assert a["id"] != b["id"]
    client.post(f"/session/{a['id']}/scramble", json={"steps": 10, "seed": 1})
    assert client.get(f"/session/{b['id']}").json()["history"] == []


def test_sharp_mode_sessions(client):
    state = _create(client, mode="sharp")
    sid = state["id"]
    moves = client.get(f"/session/{sid}/moves").json()["moves"]
    assert all(m["kind"] in ("slide", "turn", "sharp") for m in moves)
    assert not any(m["kind"] == "pivot" for m in moves)
