"""Independent verification of transcripts and strategies.

Nothing here trusts a certificate: every claim is recomputed from the raw
transcript points, the payoff descriptions, and deterministic probe sets.
The checks are the stagewise finitization of the win condition: each stage's
certificate must provably shut its piece or block range out of the recorded
interval, and every probe still inside the final interval must be classified
as awaiting a later stage of the declared plan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .engine import (
    Certificate,
    DelegationCert,
    DescentCert,
    GameState,
    Move,
    SeparationCert,
    SigmaExclusionCert,
    Transcript,
    new_game,
    play_move,
    replay,
    run_match,
)
from .ordinals import Ordinal, ordinal_cmp, ordinal_text, small_ordinals_below
from .orders import (
    Lex,
    OrderExpr,
    Point,
    Reversed,
    compare,
    in_open_interval,
    order_to_text,
    parse_order,
    point_to_text,
)
from .sets import (
    BlockFamily,
    BlockSlice,
    FiniteSet,
    PayoffModel,
    Piece,
    ProbeBounds,
    SetOracle,
    SigmaPresentation,
    Singleton,
    chain_singleton_family,
    gen_probes,
    make_full_lex_blocks,
    min_in_interval,
    oracle_for_payoff,
    parse_chain,
    parse_family,
    parse_presentation,
    piece_contains,
)
from .strategies import _descriptor_head, make_player_II, player_menu

Scope = Tuple[Ordinal, ...]


@dataclass
class Failure:
    stage: Optional[int]
    probe: Optional[str]
    assertion: str


@dataclass
class VerificationReport:
    checks: int = 0
    failures: List[Failure] = field(default_factory=list)
    branches: Optional[int] = None
    complete: bool = True

    @property
    def ok(self) -> bool:
        return not self.failures and self.complete

    def fail(self, stage: Optional[int], probe: Optional[str], assertion: str) -> None:
        self.failures.append(Failure(stage, probe, assertion))

    def merge(self, other: "VerificationReport") -> None:
        self.checks += other.checks
        self.failures.extend(other.failures)
        self.complete = self.complete and other.complete

    def to_json_dict(self) -> dict:
        return {
            "checks": self.checks,
            "failures": [
                {"stage": f.stage, "probe": f.probe, "assertion": f.assertion}
                for f in self.failures
            ],
            "branches": self.branches,
            "complete": self.complete,
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def payoff_model_for_strategy(order: OrderExpr, p2_text: str) -> Optional[PayoffModel]:
    """The payoff description a Player II descriptor commits to."""
    head, body = _descriptor_head(p2_text)
    if head == "sigma" and body is not None:
        return parse_presentation(order, body)
    if head == "blocks" and body is not None:
        return parse_family(order, body)
    if head == "universal":
        return make_full_lex_blocks(order)
    if head == "conversewo" and body is not None:
        return chain_singleton_family(order, parse_chain(order, body))
    return None


def _block_spread(gamma: Ordinal, limit: int = 8) -> Tuple[Ordinal, ...]:
    """Deterministic block sample below gamma: the generic ascending spread
    joined with a straight run of finite indices, so immediate neighbours of
    small bounds are always covered."""
    picked: List[Ordinal] = []
    pool = list(small_ordinals_below(gamma, limit))
    pool.extend(Ordinal.from_int(k) for k in range(limit))
    for o in pool:
        if ordinal_cmp(o, gamma) < 0 and all(ordinal_cmp(o, s) != 0 for s in picked):
            picked.append(o)
    picked.sort()
    return tuple(picked)


def default_probe_bounds(
    order: OrderExpr, model: Optional[PayoffModel] = None
) -> ProbeBounds:
    indices: Tuple[Ordinal, ...] = ()
    if isinstance(model, BlockFamily):
        indices = _block_spread(model.gamma)
    elif isinstance(order, Lex) and isinstance(order.first, Reversed):
        indices = _block_spread(order.first.inner.bound)
    return ProbeBounds(max_denominator=64, block_indices=indices, per_block=32)


def _family_block_sample(family: BlockFamily, bounds: ProbeBounds) -> List[Ordinal]:
    candidates = bounds.block_indices or _block_spread(family.gamma)
    return [b for b in candidates if ordinal_cmp(b, family.gamma) < 0]


def _piece_points(piece: Piece) -> Optional[List[Point]]:
    """Exact finite content when the piece has one; None otherwise."""
    if isinstance(piece, Singleton):
        return [piece.point]
    if isinstance(piece, FiniteSet):
        return list(piece.points)
    if isinstance(piece, BlockSlice):
        inner = _piece_points(piece.inner)
        if inner is None:
            return None
        return [(piece.block, p) for p in inner]
    return None


class _ScopeState:
    """Verifier-side reconstruction of one scope of the delegation tree."""

    def __init__(self, model: PayoffModel, probes: List[Point]) -> None:
        self.model = model
        self.phase = "searching"  # searching | delegating | won (families only)
        self.bound = model.gamma if isinstance(model, BlockFamily) else None
        self.delegated_to: Optional[Ordinal] = None
        self.sigma_next = 0
        self.last_separation: Optional[SeparationCert] = None
        self.probe_by_piece: Optional[Dict[int, List[Point]]] = None
        if isinstance(model, SigmaPresentation) and model.member_index_fn is not None:
            by_piece: Dict[int, List[Point]] = {}
            for p in probes:
                m = model.member_index(p)
                if m is not None:
                    by_piece.setdefault(m, []).append(p)
            self.probe_by_piece = by_piece


def check_transcript(
    transcript: Transcript,
    oracle: Optional[SetOracle] = None,
    bounds: Optional[ProbeBounds] = None,
) -> VerificationReport:
    """Replay, recheck every certificate, and classify horizon survivors."""
    report = VerificationReport()
    replay(transcript)  # CorruptedTranscriptError propagates
    order = transcript.order
    moves = transcript.moves
    stages = len(moves) // 2

    def a_at(k: int) -> Point:
        return moves[2 * k].point

    def b_at(k: int) -> Point:
        return moves[2 * k + 1].point

    # nesting, re-verified directly from the raw points
    for k in range(stages):
        report.checks += 1
        if compare(order, a_at(k), b_at(k)) >= 0:
            report.fail(k, None, "nesting: a_k must be below b_k")
        if k > 0:
            report.checks += 2
            if compare(order, a_at(k - 1), a_at(k)) >= 0:
                report.fail(k, None, "nesting: a_k must rise")
            if compare(order, b_at(k), b_at(k - 1)) >= 0:
                report.fail(k, None, "nesting: b_k must fall")

    root_model = payoff_model_for_strategy(order, transcript.p2)
    if oracle is None:
        oracle = oracle_for_payoff(order, transcript.payoff_text)
    if bounds is None:
        bounds = default_probe_bounds(order, root_model)
    probes = gen_probes(oracle, bounds)

    scopes: Dict[Scope, _ScopeState] = {}
    if root_model is not None:
        scopes[()] = _ScopeState(root_model, probes)

    for cert in transcript.certificates:
        report.checks += 1
        if cert.stage < 0 or cert.stage >= stages:
            report.fail(cert.stage, None, "certificate stage outside the played game")
            continue
        state = scopes.get(cert.scope)
        if state is None:
            report.fail(
                cert.stage,
                None,
                "certificate in unopened scope "
                + "/".join(map(ordinal_text, cert.scope)),
            )
            continue
        if state.phase == "delegating":
            report.fail(cert.stage, None, "certificate in a scope that delegated")
            continue
        if state.phase == "won":
            report.fail(cert.stage, None, "certificate after a winning separation")
            continue
        lo, hi = a_at(cert.stage), b_at(cert.stage)

        if isinstance(cert, SigmaExclusionCert):
            if not isinstance(state.model, SigmaPresentation):
                report.fail(cert.stage, None, "piece certificate against a block family")
                continue
            if cert.piece != state.sigma_next:
                report.fail(
                    cert.stage,
                    None,
                    f"piece {cert.piece} out of order (expected {state.sigma_next})",
                )
            state.sigma_next += 1
            piece = state.model.piece_at(cert.piece)
            report.checks += 1
            if min_in_interval(order, piece, lo, hi) is not None:
                report.fail(
                    cert.stage,
                    None,
                    f"piece {cert.piece} still meets the stage interval",
                )
            pts = _piece_points(piece)
            if pts is not None:
                for p in pts:
                    report.checks += 1
                    if in_open_interval(order, p, lo, hi):
                        report.fail(
                            cert.stage,
                            point_to_text(order, p),
                            f"piece {cert.piece} point inside the stage interval",
                        )
            if state.probe_by_piece is not None:
                candidates = state.probe_by_piece.get(cert.piece, [])
            else:
                candidates = [p for p in probes if piece_contains(order, piece, p)]
            for p in candidates:
                report.checks += 1
                if in_open_interval(order, p, lo, hi):
                    report.fail(
                        cert.stage,
                        point_to_text(order, p),
                        f"probe of piece {cert.piece} inside the stage interval",
                    )

        elif isinstance(cert, SeparationCert):
            if not isinstance(state.model, BlockFamily):
                report.fail(cert.stage, None, "separation against a staged payoff")
                continue
            family = state.model
            report.checks += 1
            if compare(order, cert.point, b_at(cert.stage)) != 0:
                report.fail(
                    cert.stage,
                    None,
                    "separation point is not the move played that stage",
                )
            report.checks += 1
            if state.bound is None or ordinal_cmp(cert.bound, state.bound) != 0:
                report.fail(
                    cert.stage,
                    None,
                    f"separation bound {ordinal_text(cert.bound)} does not match "
                    "the tracked bound",
                )
            for beta in _family_block_sample(family, bounds):
                rel = ordinal_cmp(beta, cert.bound)
                if rel < 0:
                    # earlier blocks must stay at or above the played point
                    for p in family.block_probes(beta, bounds.per_block):
                        report.checks += 1
                        if compare(order, p, cert.point) < 0:
                            report.fail(
                                cert.stage,
                                point_to_text(order, p),
                                f"block {ordinal_text(beta)} dips below the "
                                "separation point",
                            )
                elif rel > 0:
                    # later blocks sit wholly below the stage's lower endpoint
                    for p in family.block_probes(beta, bounds.per_block):
                        report.checks += 1
                        if compare(order, p, lo) >= 0:
                            report.fail(
                                cert.stage,
                                point_to_text(order, p),
                                f"block {ordinal_text(beta)} reaches past the "
                                "separation bound",
                            )
            state.last_separation = cert
            if ordinal_cmp(cert.bound, family.gamma) == 0:
                state.phase = "won"

        elif isinstance(cert, DelegationCert):
            if not isinstance(state.model, BlockFamily):
                report.fail(cert.stage, None, "delegation against a staged payoff")
                continue
            sep = state.last_separation
            report.checks += 1
            if (
                sep is None
                or sep.stage != cert.stage
                or ordinal_cmp(sep.bound, cert.block) != 0
            ):
                report.fail(
                    cert.stage,
                    None,
                    "delegation does not follow a matching separation",
                )
            state.phase = "delegating"
            state.delegated_to = cert.block
            try:
                child_model = state.model.block_payoff(cert.block)
            except Exception:
                report.fail(
                    cert.stage,
                    None,
                    f"delegated block {ordinal_text(cert.block)} has no payoff",
                )
            else:
                scopes[cert.scope + (cert.block,)] = _ScopeState(child_model, probes)

        elif isinstance(cert, DescentCert):
            if not isinstance(state.model, BlockFamily):
                report.fail(cert.stage, None, "descent against a staged payoff")
                continue
            family = state.model
            report.checks += 3
            if state.bound is None or ordinal_cmp(cert.from_index, state.bound) != 0:
                report.fail(
                    cert.stage, None, "descent does not start at the tracked bound"
                )
            if ordinal_cmp(cert.to_index, cert.from_index) >= 0:
                report.fail(cert.stage, None, "descent ordinals must strictly drop")
            if not family.block_contains(cert.to_index, cert.witness):
                report.fail(
                    cert.stage,
                    point_to_text(order, cert.witness),
                    f"descent witness is not in block {ordinal_text(cert.to_index)}",
                )
            report.checks += 1
            if compare(order, cert.witness, lo) >= 0:
                report.fail(
                    cert.stage,
                    point_to_text(order, cert.witness),
                    "descent witness is not below Player I's point",
                )
            state.bound = cert.to_index

    # a separation whose scope never delegated nor won is dangling
    for state in scopes.values():
        if (
            isinstance(state.model, BlockFamily)
            and state.phase == "searching"
            and state.last_separation is not None
        ):
            report.checks += 1
            report.fail(
                state.last_separation.stage,
                None,
                "separation never followed by delegation or win",
            )

    # horizon survivors: every payoff probe still inside the final interval
    # must be waiting on a later stage of the declared plan
    if stages > 0 and root_model is not None:
        lo, hi = a_at(stages - 1), b_at(stages - 1)
        for p in probes:
            report.checks += 1
            if in_open_interval(order, p, lo, hi):
                _classify_survivor(report, order, scopes, p, stages)
    return report


def _classify_survivor(
    report: VerificationReport,
    order: OrderExpr,
    scopes: Dict[Scope, _ScopeState],
    probe: Point,
    stages: int,
) -> None:
    """Walk the delegation tree; a survivor must be awaiting a later stage."""
    text = point_to_text(order, probe)
    scope: Scope = ()
    while True:
        state = scopes.get(scope)
        if state is None:
            report.fail(stages - 1, text, "survivor in a scope that never opened")
            return
        if isinstance(state.model, SigmaPresentation):
            m = state.model.member_index(probe)
            if m is None and state.model.member_index_fn is None:
                for k in range(state.sigma_next):
                    if piece_contains(order, state.model.piece_at(k), probe):
                        m = k
                        break
            if m is not None and m < state.sigma_next:
                report.fail(
                    stages - 1,
                    text,
                    f"survivor sits in already-processed piece {m}",
                )
            return  # otherwise pending: its piece has not been processed yet
        family = state.model
        beta = family.block_index(probe)
        if state.phase == "won":
            report.fail(stages - 1, text, "survivor despite a winning separation")
            return
        if state.phase == "searching":
            if beta is None:
                report.fail(stages - 1, text, "survivor outside the declared family")
                return
            if state.bound is not None and ordinal_cmp(beta, state.bound) > 0:
                report.fail(
                    stages - 1,
                    text,
                    f"survivor in block {ordinal_text(beta)} past the descent bound",
                )
            return  # otherwise pending: awaiting further descent
        # delegating
        if (
            state.delegated_to is None
            or beta is None
            or ordinal_cmp(beta, state.delegated_to) != 0
        ):
            report.fail(
                stages - 1,
                text,
                "survivor escaped the separation around the delegated block",
            )
            return
        scope = scope + (state.delegated_to,)


# ---------------------------------------------------------------------------
# exhaustive bounded-depth adversary

def exhaustive_branches(
    order: OrderExpr,
    p2_text: str,
    payoff_text: str,
    width: int,
    depth: int,
) -> Iterator[Transcript]:
    """Every Player I line over the deterministic width-w menu, to the depth."""

    def descend(
        state: GameState,
        strategy,
        moves: List[Move],
        certs: List[Certificate],
        remaining: int,
    ) -> Iterator[Transcript]:
        if remaining == 0:
            yield Transcript(
                order=order,
                order_text=order_to_text(order),
                payoff_text=payoff_text,
                p1=f"exhaustive({width};{depth})",
                p2=p2_text,
                seed=0,
                horizon=depth,
                moves=list(moves),
                certificates=list(certs),
                termination="horizon",
            )
            return
        stage = state.stage
        for cand in player_menu(order, state, width):
            s1 = play_move(state, cand)
            fork = strategy.clone()
            reply, new_certs = fork.step(s1)
            s2 = play_move(s1, reply)
            moves.append(Move(stage, "I", s1.history[-1]))
            moves.append(Move(stage, "II", s2.history[-1]))
            certs.extend(new_certs)
            yield from descend(s2, fork, moves, certs, remaining - 1)
            del moves[-2:]
            if new_certs:
                del certs[-len(new_certs) :]

    root = make_player_II(order, p2_text)
    yield from descend(new_game(order, depth), root, [], [], depth)


def exhaustive_adversary(
    order: OrderExpr,
    p2_text: str,
    payoff_text: str,
    width: int,
    depth: int,
    oracle: Optional[SetOracle] = None,
    bounds: Optional[ProbeBounds] = None,
    max_branches: int = 1_000_000,
) -> VerificationReport:
    """Aggregate check_transcript over every branch of the adversary tree."""
    report = VerificationReport()
    report.branches = 0
    for t in exhaustive_branches(order, p2_text, payoff_text, width, depth):
        if report.branches >= max_branches:
            report.complete = False
            break
        report.branches += 1
        report.merge(check_transcript(t, oracle=oracle, bounds=bounds))
    return report


# ---------------------------------------------------------------------------
# mutation corpus: one targeted, replay-preserving corruption per certificate
# kind, each of which an honest checker must flag

@dataclass
class Mutant:
    name: str
    clean: Transcript
    mutated: Transcript


def _copy_transcript(t: Transcript) -> Transcript:
    return Transcript(
        order=t.order,
        order_text=t.order_text,
        payoff_text=t.payoff_text,
        p1=t.p1,
        p2=t.p2,
        seed=t.seed,
        horizon=t.horizon,
        moves=list(t.moves),
        certificates=list(t.certificates),
        termination=t.termination,
    )


def mutation_corpus() -> List[Mutant]:
    out: List[Mutant] = []
    Q = parse_order("Q")
    L = parse_order("lex(rev(ord(w)),Q)")

    # piece exclusion: lift the stage-0 move so the claimed-empty interval
    # regains a payoff point
    t = run_match(
        Q, "enumerated(e,8)", "scripted(-2,-3/2)", "sigma(enumerated(e,8))", 2, 0
    )
    m = _copy_transcript(t)
    m.moves[1] = Move(0, "II", Fraction(0))
    out.append(Mutant("sigma_exclusion", t, m))

    # separation: move and certificate agree on a point that fails to pin the
    # earlier blocks from below
    t = run_match(L, "fullblocks", "scripted((5,0),(5,1/2))", "universal", 2, 0)
    m = _copy_transcript(t)
    bad = (Ordinal.from_int(4), Fraction(0))
    m.moves[1] = Move(0, "II", bad)
    for i, c in enumerate(m.certificates):
        if isinstance(c, SeparationCert):
            m.certificates[i] = SeparationCert(c.stage, c.scope, c.bound, bad)
            break
    out.append(Mutant("separation", t, m))

    # delegation: claim a block the separation never vouched for
    t = run_match(L, "fullblocks", "scripted((5,0),(5,1/2))", "universal", 2, 0)
    m = _copy_transcript(t)
    for i, c in enumerate(m.certificates):
        if isinstance(c, DelegationCert):
            m.certificates[i] = DelegationCert(c.stage, c.scope, Ordinal.from_int(3))
            break
    out.append(Mutant("delegation", t, m))

    # descent: swap the witness for a point above Player I's move
    t = run_match(
        Q,
        "singletonchain(harmonic)",
        "scripted(0,1/2,3/5)",
        "conversewo(harmonic)",
        3,
        0,
    )
    m = _copy_transcript(t)
    for i, c in enumerate(m.certificates):
        if isinstance(c, DescentCert):
            m.certificates[i] = DescentCert(
                c.stage, c.scope, c.from_index, c.to_index, Fraction(2, 3)
            )
            break
    out.append(Mutant("descent", t, m))
    return out
