"""Game engine: rule enforcement, certificates, transcripts, match running.

The game runs on a dense unbounded order.  Player I opens with any point a0,
Player II answers with b0 > a0, and thereafter Player I must play strictly
inside the last interval and Player II strictly between Player I's point and
the previous upper endpoint.  Play is truncated at a finite horizon; the
acceptance semantics is the stagewise exclusion certificates Player II emits,
checked independently by the verifier.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .ordinals import Ordinal, ordinal_from_json, ordinal_to_json
from .orders import (
    OrderExpr,
    Point,
    compare,
    is_dense_unbounded,
    normalize_point,
    order_to_text,
    parse_order,
    point_from_json,
    point_to_json,
    point_to_text,
)


class LegalityError(Exception):
    """An attempted move breaks the interval rule.

    violations lists (side, bound) pairs: the move had to be strictly above
    every "lower" bound and strictly below every "upper" bound named here.
    """

    def __init__(
        self, message: str, violations: Tuple[Tuple[str, Point], ...]
    ) -> None:
        super().__init__(message)
        self.violations = violations


class GameOverError(Exception):
    """A move arrived after the game ended."""


class CorruptedTranscriptError(ValueError):
    """A transcript failed to parse or replay."""


class StrategyMoveError(Exception):
    """A strategy emitted an illegal move; surfaced, never auto-corrected."""

    def __init__(
        self,
        side: str,
        point: Point,
        cause: LegalityError,
        transcript: Optional["Transcript"] = None,
    ) -> None:
        super().__init__(f"player {side} strategy emitted illegal move: {cause}")
        self.side = side
        self.point = point
        self.cause = cause
        self.transcript = transcript


PLAYER_I = "I"
PLAYER_II = "II"


@dataclass(frozen=True)
class GameState:
    """Immutable game position; history alternates a0, b0, a1, b1, ..."""

    order: OrderExpr
    horizon: int
    history: Tuple[Point, ...] = ()

    @property
    def stage(self) -> int:
        """Index of the move being played next."""
        return len(self.history) // 2

    @property
    def to_move(self) -> str:
        return PLAYER_I if len(self.history) % 2 == 0 else PLAYER_II

    @property
    def over(self) -> bool:
        return len(self.history) >= 2 * self.horizon

    def player_point(self, player: str, stage: int) -> Point:
        i = 2 * stage + (0 if player == PLAYER_I else 1)
        return self.history[i]

    def next_bounds(self) -> Tuple[Optional[Point], Optional[Point]]:
        """Open interval the next move must fall in; None marks an infinity."""
        h = self.history
        if not h:
            return (None, None)
        if self.to_move == PLAYER_II:
            upper = h[-2] if len(h) >= 2 else None
            return (h[-1], upper)
        return (h[-2], h[-1])

    def current_interval(self) -> Tuple[Optional[Point], Optional[Point]]:
        """Latest completed (a, b) pair, or partial bounds early on."""
        h = self.history
        if len(h) >= 2:
            if len(h) % 2 == 0:
                return (h[-2], h[-1])
            return (h[-1], h[-2])
        if len(h) == 1:
            return (h[0], None)
        return (None, None)


def new_game(order: OrderExpr, horizon: int) -> GameState:
    if not is_dense_unbounded(order):
        raise ValueError(
            f"order {order_to_text(order)} is not dense and unbounded; "
            "the game needs room strictly inside every interval"
        )
    if horizon < 0:
        raise ValueError(f"horizon {horizon} is negative")
    return GameState(order=order, horizon=horizon)


def play_move(state: GameState, point: Point) -> GameState:
    """Append one move after checking the interval rule."""
    if state.over:
        raise GameOverError("game over")
    p = normalize_point(state.order, point)
    lower, upper = state.next_bounds()
    bad: List[Tuple[str, Point]] = []
    if lower is not None and compare(state.order, p, lower) <= 0:
        bad.append(("lower", lower))
    if upper is not None and compare(state.order, p, upper) >= 0:
        bad.append(("upper", upper))
    if bad:
        sides = " and ".join(
            f"{side} bound {point_to_text(state.order, b)}" for side, b in bad
        )
        raise LegalityError(
            f"move {point_to_text(state.order, p)} violates {sides}",
            tuple(bad),
        )
    return GameState(state.order, state.horizon, state.history + (p,))


# ---------------------------------------------------------------------------
# certificates
#
# Every certificate carries a scope path: the chain of block indices the
# strategy had delegated through when it spoke.  The root scope is ().

Scope = Tuple[Ordinal, ...]


@dataclass(frozen=True)
class SigmaExclusionCert:
    """(a_stage, b_stage) misses the scope presentation's numbered piece."""

    stage: int
    scope: Scope
    piece: int

    kind = "sigma_exclusion"


@dataclass(frozen=True)
class SeparationCert:
    """The played point sits at or below every block indexed under bound."""

    stage: int
    scope: Scope
    bound: Ordinal
    point: Point

    kind = "separation"


@dataclass(frozen=True)
class DelegationCert:
    """From here on the scope's play follows the named block's sub-strategy."""

    stage: int
    scope: Scope
    block: Ordinal

    kind = "delegation"


@dataclass(frozen=True)
class DescentCert:
    """The least block holding an element below Player I's point dropped."""

    stage: int
    scope: Scope
    from_index: Ordinal
    to_index: Ordinal
    witness: Point

    kind = "descent"


Certificate = Union[SigmaExclusionCert, SeparationCert, DelegationCert, DescentCert]


def _scope_to_json(scope: Scope) -> list:
    return [ordinal_to_json(a) for a in scope]


def _scope_from_json(obj) -> Scope:
    return tuple(ordinal_from_json(a) for a in obj)


def cert_to_json(order: OrderExpr, cert: Certificate) -> dict:
    data: Dict[str, object] = {"scope": _scope_to_json(cert.scope)}
    if isinstance(cert, SigmaExclusionCert):
        data["piece"] = cert.piece
    elif isinstance(cert, SeparationCert):
        data["bound"] = ordinal_to_json(cert.bound)
        data["point"] = point_to_json(order, cert.point)
    elif isinstance(cert, DelegationCert):
        data["block"] = ordinal_to_json(cert.block)
    elif isinstance(cert, DescentCert):
        data["from"] = ordinal_to_json(cert.from_index)
        data["to"] = ordinal_to_json(cert.to_index)
        data["witness"] = point_to_json(order, cert.witness)
    else:
        raise TypeError(f"unknown certificate {cert!r}")
    return {"stage": cert.stage, "kind": cert.kind, "data": data}


def cert_from_json(order: OrderExpr, obj: dict) -> Certificate:
    try:
        stage = obj["stage"]
        kind = obj["kind"]
        data = obj["data"]
        scope = _scope_from_json(data["scope"])
        if kind == "sigma_exclusion":
            return SigmaExclusionCert(stage, scope, int(data["piece"]))
        if kind == "separation":
            return SeparationCert(
                stage,
                scope,
                ordinal_from_json(data["bound"]),
                point_from_json(order, data["point"]),
            )
        if kind == "delegation":
            return DelegationCert(stage, scope, ordinal_from_json(data["block"]))
        if kind == "descent":
            return DescentCert(
                stage,
                scope,
                ordinal_from_json(data["from"]),
                ordinal_from_json(data["to"]),
                point_from_json(order, data["witness"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptedTranscriptError(f"bad certificate {obj!r}: {exc}") from exc
    raise CorruptedTranscriptError(f"unknown certificate kind {kind!r}")


def render_certificate(order: OrderExpr, cert: Certificate) -> str:
    """One human-readable line per certificate."""
    from .ordinals import ordinal_text

    prefix = ""
    if cert.scope:
        path = ">".join(ordinal_text(a) for a in cert.scope)
        prefix = f"[block {path}] "
    if isinstance(cert, SigmaExclusionCert):
        body = f"piece {cert.piece} has no point strictly inside interval {cert.stage}"
    elif isinstance(cert, SeparationCert):
        body = (
            f"played {point_to_text(order, cert.point)}, at or below every block "
            f"before {ordinal_text(cert.bound)}"
        )
    elif isinstance(cert, DelegationCert):
        body = f"delegating to block {ordinal_text(cert.block)}"
    elif isinstance(cert, DescentCert):
        body = (
            f"descent {ordinal_text(cert.from_index)} -> "
            f"{ordinal_text(cert.to_index)}, witness "
            f"{point_to_text(order, cert.witness)}"
        )
    else:
        raise TypeError(f"unknown certificate {cert!r}")
    return f"stage {cert.stage}: {prefix}{body}"


# ---------------------------------------------------------------------------
# transcripts

@dataclass(frozen=True)
class Move:
    stage: int
    player: str
    point: Point


TERMINATION_HORIZON = "horizon"
TERMINATION_RESIGNATION = "resignation"
TERMINATION_EARLY_WIN = "early_win"


@dataclass
class Transcript:
    order: OrderExpr
    order_text: str
    payoff_text: str
    p1: str
    p2: str
    seed: int
    horizon: int
    moves: List[Move] = field(default_factory=list)
    certificates: List[Certificate] = field(default_factory=list)
    termination: str = TERMINATION_HORIZON

    def to_json_dict(self) -> dict:
        return {
            "order": self.order_text,
            "payoff": self.payoff_text,
            "strategies": {"p1": self.p1, "p2": self.p2},
            "seed": self.seed,
            "horizon": self.horizon,
            "moves": [
                {
                    "stage": m.stage,
                    "player": m.player,
                    "point": point_to_json(self.order, m.point),
                }
                for m in self.moves
            ],
            "certificates": [cert_to_json(self.order, c) for c in self.certificates],
            "termination": self.termination,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    @staticmethod
    def from_json_dict(obj: dict) -> "Transcript":
        try:
            order = parse_order(obj["order"])
            strategies = obj["strategies"]
            t = Transcript(
                order=order,
                order_text=obj["order"],
                payoff_text=obj["payoff"],
                p1=strategies["p1"],
                p2=strategies["p2"],
                seed=int(obj["seed"]),
                horizon=int(obj["horizon"]),
                termination=obj["termination"],
            )
            for m in obj["moves"]:
                t.moves.append(
                    Move(
                        int(m["stage"]),
                        m["player"],
                        point_from_json(order, m["point"]),
                    )
                )
            for c in obj["certificates"]:
                t.certificates.append(cert_from_json(order, c))
        except CorruptedTranscriptError:
            raise
        except Exception as exc:
            raise CorruptedTranscriptError(f"malformed transcript: {exc}") from exc
        return t

    @staticmethod
    def from_json_text(text: str) -> "Transcript":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CorruptedTranscriptError(f"not JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise CorruptedTranscriptError("transcript JSON must be an object")
        return Transcript.from_json_dict(obj)


def replay(transcript: Transcript) -> GameState:
    """Feed the recorded moves back through the rules."""
    state = new_game(transcript.order, transcript.horizon)
    for i, move in enumerate(transcript.moves):
        expect_player = PLAYER_I if i % 2 == 0 else PLAYER_II
        expect_stage = i // 2
        if move.player != expect_player or move.stage != expect_stage:
            raise CorruptedTranscriptError(
                f"move {i} labeled stage {move.stage} player {move.player}, "
                f"expected stage {expect_stage} player {expect_player}"
            )
        try:
            state = play_move(state, move.point)
        except (LegalityError, GameOverError) as exc:
            raise CorruptedTranscriptError(f"replay failed at move {i}: {exc}") from exc
    return state


# ---------------------------------------------------------------------------
# match running

def run_match(
    order: OrderExpr,
    payoff_text: str,
    p1_text: str,
    p2_text: str,
    horizon: int,
    seed: int,
    stop_on_early_win: bool = False,
) -> Transcript:
    """Drive a full match between described strategies.

    Raises StrategyMoveError (with the partial transcript attached) if either
    strategy emits an illegal move.
    """
    from .strategies import make_player_I, make_player_II

    player_I = make_player_I(order, p1_text, seed)
    player_II = make_player_II(order, p2_text)
    state = new_game(order, horizon)
    transcript = Transcript(
        order=order,
        order_text=order_to_text(order),
        payoff_text=payoff_text,
        p1=p1_text,
        p2=p2_text,
        seed=seed,
        horizon=horizon,
    )
    while not state.over:
        stage = state.stage
        a = player_I.step(state)
        if a is None:
            transcript.termination = TERMINATION_RESIGNATION
            return transcript
        try:
            state = play_move(state, a)
        except LegalityError as exc:
            transcript.termination = f"strategy_error:{PLAYER_I}"
            raise StrategyMoveError(PLAYER_I, a, exc, transcript) from exc
        transcript.moves.append(Move(stage, PLAYER_I, state.history[-1]))

        b, certs = player_II.step(state)
        try:
            state = play_move(state, b)
        except LegalityError as exc:
            transcript.termination = f"strategy_error:{PLAYER_II}"
            raise StrategyMoveError(PLAYER_II, b, exc, transcript) from exc
        transcript.moves.append(Move(stage, PLAYER_II, state.history[-1]))
        transcript.certificates.extend(certs)
        if stop_on_early_win and getattr(player_II, "finished_early", False):
            transcript.termination = TERMINATION_EARLY_WIN
            return transcript
    transcript.termination = TERMINATION_HORIZON
    return transcript
