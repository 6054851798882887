"""Session service behavior over the wire, via the in-process test client.

Every judgment the browser client would rely on (legality, replies,
certificates, transcripts) must come from these endpoints; the tests also
pin the error contract the client dispatches on.
"""

from fractions import Fraction

import pytest
from fastapi.testclient import TestClient

from intervalgame import Transcript, check_transcript, parse_order, run_match
from intervalgame.service import create_app


@pytest.fixture()
def client():
    with TestClient(create_app()) as c:
        yield c


def make_session(client, order="Q", strategy="sigma(enumerated(e,8))", horizon=8,
                 **extra):
    body = {"order": order, "strategy": strategy, "horizon": horizon, **extra}
    resp = client.post("/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()


def test_create_session_reports_the_opening_state(client):
    data = make_session(client)
    assert data["id"]
    state = data["state"]
    assert state["stage"] == 0
    assert state["to_move"] == "I"
    assert state["over"] is False
    assert state["interval"] == {
        "lower": None, "upper": None, "lower_text": None, "upper_text": None,
    }
    assert state["phase"] == {"kind": "sigma", "next_piece": 0}
    assert state["moves"] == 0


def test_move_returns_reply_and_certificates(client):
    sess = make_session(client)
    resp = client.post(f"/sessions/{sess['id']}/move", json={"point": "0"})
    data = resp.json()
    assert data["legal"] is True
    assert data["reply"] == {"num": "1", "den": "1"}
    assert data["reply_text"] == "1"
    assert len(data["certificates"]) == 1
    cert = data["certificates"][0]
    assert cert["kind"] == "sigma_exclusion"
    assert "piece 0" in cert["text"]
    assert data["state"]["stage"] == 1
    assert data["state"]["moves"] == 2


def test_points_can_arrive_as_json_objects(client):
    sess = make_session(client)
    resp = client.post(
        f"/sessions/{sess['id']}/move",
        json={"point": {"num": "1", "den": "3"}},
    )
    data = resp.json()
    assert data["legal"] is True


def test_illegal_move_names_the_violated_bounds(client):
    sess = make_session(client)
    client.post(f"/sessions/{sess['id']}/move", json={"point": "0"})
    resp = client.post(f"/sessions/{sess['id']}/move", json={"point": "7"})
    assert resp.status_code == 200
    data = resp.json()
    assert data["legal"] is False
    assert data["violated"] == [
        {"side": "upper", "bound": {"num": "1", "den": "1"}, "bound_text": "1"}
    ]
    assert "violates" in data["message"]
    assert data["state"]["moves"] == 2  # nothing was committed


def test_unreadable_point_is_a_400(client):
    sess = make_session(client)
    resp = client.post(f"/sessions/{sess['id']}/move", json={"point": "wat"})
    assert resp.status_code == 400
    assert "unreadable point" in resp.json()["error"]
    resp = client.post(f"/sessions/{sess['id']}/move", json={})
    assert resp.status_code == 400


def test_unknown_session_is_a_404(client):
    for method, path in [
        ("post", "/sessions/nope/move"),
        ("post", "/sessions/nope/preview"),
        ("get", "/sessions/nope"),
        ("delete", "/sessions/nope"),
    ]:
        resp = getattr(client, method)(path, json={"point": "0"}) if method == "post" \
            else getattr(client, method)(path)
        assert resp.status_code == 404, path


def test_preview_does_not_advance_the_game(client):
    sess = make_session(client)
    before = client.get(f"/sessions/{sess['id']}").json()
    preview = client.post(f"/sessions/{sess['id']}/preview", json={"point": "0"})
    after = client.get(f"/sessions/{sess['id']}").json()
    assert before == after
    data = preview.json()
    assert data["legal"] is True
    assert data["state"]["moves"] == 0  # the stored session is untouched
    # committing the same point gives the identical reply
    committed = client.post(f"/sessions/{sess['id']}/move", json={"point": "0"}).json()
    assert committed["reply"] == data["reply"]
    assert committed["certificates"] == data["certificates"]


def test_preview_then_different_commit(client):
    sess = make_session(client, strategy="sigma(finite{-1,1/2})")
    client.post(f"/sessions/{sess['id']}/preview", json={"point": "-2"})
    resp = client.post(f"/sessions/{sess['id']}/move", json={"point": "0"})
    data = resp.json()
    # against the floor at 0 the first piece misses and the filler answers
    assert data["reply_text"] == "1"


def test_game_over_is_a_409(client):
    sess = make_session(client, horizon=1)
    client.post(f"/sessions/{sess['id']}/move", json={"point": "0"})
    resp = client.post(f"/sessions/{sess['id']}/move", json={"point": "1/2"})
    assert resp.status_code == 409
    assert resp.json() == {"error": "game over"}


def test_transcript_download_matches_the_cli_format(client):
    sess = make_session(client, order="lex(rev(ord(w)),Q)", strategy="universal",
                        horizon=2)
    client.post(f"/sessions/{sess['id']}/move", json={"point": "(2,0)"})
    obj = client.get(f"/sessions/{sess['id']}").json()
    assert list(obj) == [
        "order", "payoff", "strategies", "seed", "horizon",
        "moves", "certificates", "termination",
    ]
    assert obj["strategies"] == {"p1": "human", "p2": "universal"}
    assert obj["payoff"] == "fullblocks"
    assert obj["termination"] == "in_progress"
    t = Transcript.from_json_dict(obj)
    report = check_transcript(t)
    assert report.ok, report.to_json_text()


def test_finished_session_transcript_reports_horizon(client):
    sess = make_session(client, horizon=1)
    client.post(f"/sessions/{sess['id']}/move", json={"point": "0"})
    obj = client.get(f"/sessions/{sess['id']}").json()
    assert obj["termination"] == "horizon"


def test_delete_forgets_the_session(client):
    sess = make_session(client)
    assert client.delete(f"/sessions/{sess['id']}").json() == {"deleted": True}
    assert client.get(f"/sessions/{sess['id']}").status_code == 404


def test_bad_session_requests_are_400(client):
    for body in [
        {},
        {"order": "Q"},
        {"order": "nope", "strategy": "sigma(finite{0})"},
        {"order": "Q", "strategy": "universal"},  # wrong carrier
        {"order": "Q", "strategy": "sigma(finite{0})", "horizon": "many"},
        {"order": "ord(w)", "strategy": "sigma(finite{0})"},
    ]:
        resp = client.post("/sessions", json=body)
        assert resp.status_code == 400, body
        assert "error" in resp.json()


def test_custom_payoff_text_is_recorded(client):
    sess = make_session(client, payoff="enumerated(e,64)")
    obj = client.get(f"/sessions/{sess['id']}").json()
    assert obj["payoff"] == "enumerated(e,64)"


def test_service_agrees_with_run_match(client):
    script = [Fraction(0), Fraction(1, 3), Fraction(2, 5)]
    sess = make_session(client, horizon=3)
    for p in script:
        resp = client.post(
            f"/sessions/{sess['id']}/move", json={"point": str(p)}
        )
        assert resp.json()["legal"] is True
    served = client.get(f"/sessions/{sess['id']}").json()

    scripted = ",".join(str(p) for p in script)
    local = run_match(
        parse_order(served["order"]), served["payoff"], f"scripted({scripted})",
        served["strategies"]["p2"], 3, 0,
    ).to_json_dict()
    local["strategies"]["p1"] = "human"
    assert served == local
