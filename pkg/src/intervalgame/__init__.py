"""Interval-shrinking game on computable dense linear orders.

Player I opens with a point, Player II caps it from above, and the pair then
alternate strictly inside the previous interval.  Player I tries to trap a
point of a target set inside every interval; Player II's strategies here come
with per-stage certificates that a separate verifier rechecks from scratch.
"""

from .ordinals import (
    MalformedOrdinalError,
    OMEGA,
    ONE,
    Ordinal,
    ZERO,
    omega_power,
    ordinal_cmp,
    ordinal_text,
)
from .orders import (
    Lex,
    OrderExpr,
    OrderSyntaxError,
    Point,
    PreconditionError,
    Rationals,
    Reversed,
    ShapeError,
    UnsupportedOrderError,
    WellOrder,
    between,
    compare,
    in_open_interval,
    order_to_text,
    parse_order,
    parse_point,
    point_to_text,
)
from .sets import (
    BlockFamily,
    CapabilityError,
    Chain,
    ChainValidationError,
    ProbeBounds,
    SetOracle,
    SigmaPresentation,
    harmonic_chain,
    make_full_lex_blocks,
    oracle_for_payoff,
    resolve_payoff_model,
    stacked_chain_family,
)
from .engine import (
    CorruptedTranscriptError,
    DelegationCert,
    DescentCert,
    GameOverError,
    GameState,
    LegalityError,
    Move,
    SeparationCert,
    SigmaExclusionCert,
    StrategyMoveError,
    Transcript,
    new_game,
    play_move,
    render_certificate,
    replay,
    run_match,
)
from .strategies import (
    BlocksStrategy,
    RandomLegal,
    Scripted,
    SigmaStrategy,
    Trap,
    make_player_I,
    make_player_II,
    payoff_text_for_strategy,
    player_menu,
    universal_lex_strategy,
)
from .verifier import (
    VerificationReport,
    check_transcript,
    exhaustive_adversary,
    exhaustive_branches,
    mutation_corpus,
)

__all__ = [name for name in dir() if not name.startswith("_")]
