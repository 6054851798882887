"""Local JSON session service.

A thin loopback companion for the browser playground: sessions are held in
memory, every rule judgment happens here (the client renders responses and
nothing else), and the transcript endpoint returns the same canonical JSON
the command line writes.  Each session serializes its mutations behind a
lock; reads take a consistent snapshot under the same lock.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Dict, Optional

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import (
    GameState,
    LegalityError,
    Move,
    Transcript,
    cert_to_json,
    new_game,
    play_move,
    render_certificate,
)
from .orders import (
    OrderExpr,
    Point,
    order_to_text,
    parse_order,
    parse_point,
    point_from_json,
    point_to_json,
    point_to_text,
)
from .strategies import make_player_II, payoff_text_for_strategy

PORT_ENV = "INTERVALGAME_PORT"
DEFAULT_PORT = 8471


@dataclass
class SessionRecord:
    id: str
    order: OrderExpr
    horizon: int
    strategy_text: str
    strategy: object
    state: GameState
    transcript: Transcript
    lock: threading.Lock = field(default_factory=threading.Lock)


def _optional_point_json(order: OrderExpr, p: Optional[Point]) -> object:
    return None if p is None else point_to_json(order, p)


def _optional_point_text(order: OrderExpr, p: Optional[Point]) -> Optional[str]:
    return None if p is None else point_to_text(order, p)


def _state_view(sess: SessionRecord) -> dict:
    lower, upper = sess.state.next_bounds()
    return {
        "stage": sess.state.stage,
        "to_move": sess.state.to_move,
        "over": sess.state.over,
        "horizon": sess.state.horizon,
        "interval": {
            "lower": _optional_point_json(sess.order, lower),
            "upper": _optional_point_json(sess.order, upper),
            "lower_text": _optional_point_text(sess.order, lower),
            "upper_text": _optional_point_text(sess.order, upper),
        },
        "phase": sess.strategy.phase_view(),
        "moves": len(sess.transcript.moves),
    }


def _resolve_point(order: OrderExpr, raw: object) -> Point:
    if isinstance(raw, str):
        return parse_point(order, raw)
    return point_from_json(order, raw)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def create_app() -> FastAPI:
    app = FastAPI(title="interval game service")
    # the playground page may be served from another origin (a file:// page or
    # a static dev server); the service holds no credentials, so open CORS is fine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: Dict[str, SessionRecord] = {}
    registry_lock = threading.Lock()

    def lookup(session_id: str) -> Optional[SessionRecord]:
        with registry_lock:
            return sessions.get(session_id)

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        try:
            order_text = body["order"]
            strategy_text = body["strategy"]
            horizon = int(body.get("horizon", 64))
            order = parse_order(order_text)
            strategy = make_player_II(order, strategy_text)
            payoff_text = body.get("payoff") or payoff_text_for_strategy(strategy_text)
            state = new_game(order, horizon)
        except KeyError as exc:
            return _error(400, f"missing field {exc.args[0]!r}")
        except Exception as exc:
            return _error(400, str(exc))
        sess = SessionRecord(
            id=uuid.uuid4().hex[:12],
            order=order,
            horizon=horizon,
            strategy_text=strategy_text,
            strategy=strategy,
            state=state,
            transcript=Transcript(
                order=order,
                order_text=order_to_text(order),
                payoff_text=payoff_text,
                p1="human",
                p2=strategy_text,
                seed=0,
                horizon=horizon,
                termination="in_progress" if horizon > 0 else "horizon",
            ),
        )
        with registry_lock:
            sessions[sess.id] = sess
        with sess.lock:
            return {"id": sess.id, "state": _state_view(sess)}

    def _step(sess: SessionRecord, raw_point: object, commit: bool):
        """Shared move/preview path; caller holds the session lock."""
        if sess.state.over:
            return _error(409, "game over")
        try:
            p = _resolve_point(sess.order, raw_point)
        except Exception as exc:
            return _error(400, f"unreadable point: {exc}")
        try:
            s1 = play_move(sess.state, p)
        except LegalityError as exc:
            return {
                "legal": False,
                "violated": [
                    {
                        "side": side,
                        "bound": point_to_json(sess.order, bound),
                        "bound_text": point_to_text(sess.order, bound),
                    }
                    for side, bound in exc.violations
                ],
                "message": str(exc),
                "state": _state_view(sess),
            }
        stage = sess.state.stage
        strategy = sess.strategy if commit else sess.strategy.clone()
        reply, certs = strategy.step(s1)
        s2 = play_move(s1, reply)
        if commit:
            sess.state = s2
            sess.transcript.moves.append(Move(stage, "I", s1.history[-1]))
            sess.transcript.moves.append(Move(stage, "II", s2.history[-1]))
            sess.transcript.certificates.extend(certs)
            if s2.over:
                sess.transcript.termination = "horizon"
        view = (
            _state_view(sess)
            if commit
            else _state_view(
                SessionRecord(
                    id=sess.id,
                    order=sess.order,
                    horizon=sess.horizon,
                    strategy_text=sess.strategy_text,
                    strategy=strategy,
                    state=s2,
                    transcript=sess.transcript,
                )
            )
        )
        return {
            "legal": True,
            "reply": point_to_json(sess.order, s2.history[-1]),
            "reply_text": point_to_text(sess.order, s2.history[-1]),
            "certificates": [
                dict(
                    cert_to_json(sess.order, c),
                    text=render_certificate(sess.order, c),
                )
                for c in certs
            ],
            "state": view,
        }

    @app.post("/sessions/{session_id}/move")
    def move(session_id: str, body: dict = Body(...)):
        sess = lookup(session_id)
        if sess is None:
            return _error(404, "unknown session")
        if "point" not in body:
            return _error(400, "missing field 'point'")
        with sess.lock:
            return _step(sess, body["point"], commit=True)

    @app.post("/sessions/{session_id}/preview")
    def preview(session_id: str, body: dict = Body(...)):
        sess = lookup(session_id)
        if sess is None:
            return _error(404, "unknown session")
        if "point" not in body:
            return _error(400, "missing field 'point'")
        with sess.lock:
            return _step(sess, body["point"], commit=False)

    @app.get("/sessions/{session_id}")
    def transcript(session_id: str):
        sess = lookup(session_id)
        if sess is None:
            return _error(404, "unknown session")
        with sess.lock:
            return sess.transcript.to_json_dict()

    @app.delete("/sessions/{session_id}")
    def delete(session_id: str):
        with registry_lock:
            sess = sessions.pop(session_id, None)
        if sess is None:
            return _error(404, "unknown session")
        return {"deleted": True}

    return app


def resolve_port(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    raw = os.environ.get(PORT_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ValueError(f"{PORT_ENV}={raw!r} is not a port number")
    return DEFAULT_PORT
