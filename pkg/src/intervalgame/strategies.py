"""Player strategies.

Player II side: three certificate-emitting winning strategies.

* the piecewise-min strategy over a staged presentation: at its n-th turn it
  plays the least element of piece n inside the current interval (or the
  deterministic filler when the piece misses the interval) and certifies that
  the closed-off interval cannot meet piece n;
* the block-descent strategy over a reverse-ordered block family: it hunts for
  a move lying at or below every block before the least block reaching under
  Player I's point, certifies separation, then delegates to that block's
  sub-strategy for good;
* the universal strategy on lex orders over reversed ordinals: block descent
  over the full-block family, needing no knowledge of the payoff at all.

Player I side: deterministic seeded random play over a reproducible move
menu, a trap that shadows a target point, and a scripted move list.  All
Player I kinds either move legally or resign; they emit no certificates.
"""

from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .engine import (
    Certificate,
    DelegationCert,
    DescentCert,
    GameState,
    SeparationCert,
    SigmaExclusionCert,
)
from .ordinals import Ordinal, ordinal_cmp, ordinal_text, small_ordinals_below
from .orders import (
    Lex,
    OrderExpr,
    Point,
    PreconditionError,
    Rationals,
    Reversed,
    UnsupportedOrderError,
    between,
    compare,
    normalize_point,
    parse_point,
    point_below,
)
from .sets import (
    BlockFamily,
    Chain,
    PayoffModel,
    SigmaPresentation,
    chain_singleton_family,
    deterministic_inside,
    make_full_lex_blocks,
    min_in_interval,
    parse_chain,
    parse_family,
    parse_presentation,
    split_top,
)

Scope = Tuple[Ordinal, ...]


class SigmaStrategy:
    """Piecewise-min play over a staged presentation.

    Consumes one piece per own turn, counting from its first turn (so a
    delegated instance starts at piece 0 regardless of the global stage).
    """

    def __init__(
        self, order: OrderExpr, presentation: SigmaPresentation, scope: Scope = ()
    ) -> None:
        self.order = order
        self.presentation = presentation
        self.scope = scope
        self.next_piece = 0
        self.describe = f"sigma({presentation.describe})"

    finished_early = False

    def step(self, state: GameState) -> Tuple[Point, List[Certificate]]:
        lower, upper = state.next_bounds()
        piece = self.presentation.piece_at(self.next_piece)
        m = min_in_interval(self.order, piece, lower, upper)
        move = m if m is not None else deterministic_inside(self.order, lower, upper)
        cert = SigmaExclusionCert(state.stage, self.scope, self.next_piece)
        self.next_piece += 1
        return move, [cert]

    def clone(self) -> "SigmaStrategy":
        dup = SigmaStrategy(self.order, self.presentation, self.scope)
        dup.next_piece = self.next_piece
        return dup

    def phase_view(self) -> dict:
        return {"kind": "sigma", "next_piece": self.next_piece}


SEARCHING = "searching"
DELEGATING = "delegating"
WON = "won"


def _default_sub_strategy(
    order: OrderExpr, model: PayoffModel, scope: Scope
) -> "PlayerIIStrategy":
    if isinstance(model, SigmaPresentation):
        return SigmaStrategy(order, model, scope)
    if isinstance(model, BlockFamily):
        return BlocksStrategy(order, model, scope)
    raise TypeError(f"no default sub-strategy for {model!r}")


class BlocksStrategy:
    """Block-descent play over a reverse-ordered family.

    While searching, each turn recomputes the least block reaching under
    Player I's point; the tracked bound can only descend.  A successful
    separator query pins every earlier block at or above the move and hands
    play to the bound block's sub-strategy permanently.  A failed query plays
    the filler and keeps searching.  When no block reaches under the point at
    all, a successful separator query against the family bound wins outright:
    everything in the payoff stays at or above the move forever.
    """

    def __init__(
        self, order: OrderExpr, family: BlockFamily, scope: Scope = ()
    ) -> None:
        self.order = order
        self.family = family
        self.scope = scope
        self.phase = SEARCHING
        self.bound = family.gamma
        self.inner: Optional[PlayerIIStrategy] = None
        self.describe = f"blocks({family.describe})"

    @property
    def finished_early(self) -> bool:
        if self.phase == WON:
            return True
        if self.phase == DELEGATING:
            assert self.inner is not None
            return self.inner.finished_early
        return False

    def _make_inner(self, alpha: Ordinal) -> "PlayerIIStrategy":
        inner_scope = self.scope + (alpha,)
        if self.family.block_strategy is not None:
            return self.family.block_strategy(alpha, inner_scope)
        model = self.family.block_payoff(alpha)
        return _default_sub_strategy(self.order, model, inner_scope)

    def step(self, state: GameState) -> Tuple[Point, List[Certificate]]:
        if self.phase == DELEGATING:
            assert self.inner is not None
            return self.inner.step(state)
        lower, upper = state.next_bounds()
        if self.phase == WON:
            return deterministic_inside(self.order, lower, upper), []
        stage = state.stage
        certs: List[Certificate] = []
        found = self.family.least_below(lower)
        if found is None:
            sep = self.family.separator(self.bound, lower, upper)
            if sep is None:
                return deterministic_inside(self.order, lower, upper), []
            certs.append(SeparationCert(stage, self.scope, self.bound, sep))
            self.phase = WON
            return sep, certs
        alpha, witness = found
        drop = ordinal_cmp(alpha, self.bound)
        if drop > 0:
            raise RuntimeError(
                f"family {self.family.describe} reported least block "
                f"{ordinal_text(alpha)} above the tracked bound "
                f"{ordinal_text(self.bound)}; capabilities are inconsistent"
            )
        if drop < 0:
            certs.append(DescentCert(stage, self.scope, self.bound, alpha, witness))
            self.bound = alpha
        sep = self.family.separator(self.bound, lower, upper)
        if sep is None:
            return deterministic_inside(self.order, lower, upper), certs
        certs.append(SeparationCert(stage, self.scope, self.bound, sep))
        certs.append(DelegationCert(stage, self.scope, self.bound))
        self.inner = self._make_inner(self.bound)
        self.phase = DELEGATING
        return sep, certs

    def clone(self) -> "BlocksStrategy":
        dup = BlocksStrategy(self.order, self.family, self.scope)
        dup.phase = self.phase
        dup.bound = self.bound
        dup.inner = self.inner.clone() if self.inner is not None else None
        return dup

    def phase_view(self) -> dict:
        if self.phase == SEARCHING:
            return {
                "kind": "blocks",
                "phase": SEARCHING,
                "bound": ordinal_text(self.bound),
            }
        if self.phase == WON:
            return {"kind": "blocks", "phase": WON, "bound": ordinal_text(self.bound)}
        assert self.inner is not None
        return {
            "kind": "blocks",
            "phase": DELEGATING,
            "block": ordinal_text(self.bound),
            "inner": self.inner.phase_view(),
        }


PlayerIIStrategy = object  # structural: SigmaStrategy | BlocksStrategy


def universal_lex_strategy(order: OrderExpr) -> BlocksStrategy:
    """Winning play on lex(rev(ord(d)),Q) with no payoff input at all."""
    if not (
        isinstance(order, Lex)
        and isinstance(order.first, Reversed)
        and isinstance(order.second, Rationals)
    ):
        raise UnsupportedOrderError(
            "the universal strategy needs a lex order over reversed ordinals"
        )
    return BlocksStrategy(order, make_full_lex_blocks(order))


def converse_well_order_strategy(order: OrderExpr, chain: Chain) -> BlocksStrategy:
    """Block descent over singleton blocks of a strictly decreasing chain."""
    return BlocksStrategy(order, chain_singleton_family(order, chain))


# ---------------------------------------------------------------------------
# Player I

def _zigzag(i: int) -> int:
    if i == 0:
        return 0
    return (i + 1) // 2 if i % 2 == 1 else -(i // 2)


def _opening_spread(order: OrderExpr, width: int) -> List[Point]:
    from fractions import Fraction

    if isinstance(order, Rationals):
        return [Fraction(_zigzag(i)) for i in range(width)]
    if (
        isinstance(order, Lex)
        and isinstance(order.first, Reversed)
        and isinstance(order.second, Rationals)
    ):
        delta = order.first.inner.bound
        ords = small_ordinals_below(delta, width)
        return [
            (ords[i % len(ords)], Fraction(_zigzag(i))) for i in range(width)
        ]
    raise UnsupportedOrderError(
        "opening menus support Q and lex(rev(ord(d)),Q) carriers"
    )


def _subdivision_menu(
    order: OrderExpr, lower: Point, upper: Point, width: int
) -> List[Point]:
    out: List[Point] = []
    queue: List[Tuple[Point, Point]] = [(lower, upper)]
    while len(out) < width:
        lo, hi = queue.pop(0)
        mid = between(order, lo, hi)
        out.append(mid)
        queue.append((lo, mid))
        queue.append((mid, hi))
    return out


def player_menu(order: OrderExpr, state: GameState, width: int) -> List[Point]:
    """Deterministic legal candidate moves for Player I.

    Stage 0 spreads over the carrier; later turns subdivide the pending
    interval by repeated midpoint insertion in breadth-first order, so width 3
    yields the midpoint and both quarter points.
    """
    if width < 1:
        raise PreconditionError(f"menu width {width} must be positive")
    lower, upper = state.next_bounds()
    if lower is None and upper is None:
        return _opening_spread(order, width)
    if lower is None or upper is None:
        raise PreconditionError("menus need a bounded interval after stage 0")
    return _subdivision_menu(order, lower, upper, width)


class RandomLegal:
    """Uniform choice from the deterministic menu, seeded per match."""

    def __init__(
        self, order: OrderExpr, own_seed: int, width: int, match_seed: int
    ) -> None:
        self.order = order
        self.width = width
        self.rng = random.Random(f"{match_seed}:{own_seed}")
        self.describe = f"random({own_seed},{width})"

    def step(self, state: GameState) -> Optional[Point]:
        menu = player_menu(self.order, state, self.width)
        return menu[self.rng.randrange(len(menu))]


class Trap:
    """Shadows a target point from below; resigns once the target escapes."""

    def __init__(self, order: OrderExpr, target: Point) -> None:
        self.order = order
        self.target = normalize_point(order, target)
        self.describe = "trap(...)"

    def step(self, state: GameState) -> Optional[Point]:
        lower, upper = state.next_bounds()
        if lower is None and upper is None:
            return point_below(self.order, self.target)
        assert lower is not None and upper is not None
        if compare(self.order, self.target, upper) >= 0:
            return None  # target at or above the ceiling: it escaped
        if compare(self.order, lower, self.target) >= 0:
            return None  # defensive; shadowing keeps the target above us
        return between(self.order, lower, self.target)


class Scripted:
    """Plays a fixed move list, then resigns.  Moves may be deliberately
    illegal; the engine surfaces that as a strategy error."""

    def __init__(self, order: OrderExpr, points: List[Point]) -> None:
        self.order = order
        self.queue = [normalize_point(order, p) for p in points]
        self.describe = f"scripted[{len(points)}]"

    def step(self, state: GameState) -> Optional[Point]:
        if not self.queue:
            return None
        return self.queue.pop(0)


# ---------------------------------------------------------------------------
# descriptor parsing
#
#   Player I:  random(seed,width) | trap(<point>) | scripted(p1,p2,...)
#   Player II: sigma(<set-dsl>) | blocks(<family-dsl>) | universal
#              | conversewo(<chain-dsl>)

def _descriptor_head(text: str) -> Tuple[str, Optional[str]]:
    text = text.strip()
    i = text.find("(")
    if i >= 0 and text.endswith(")"):
        return text[:i].strip(), text[i + 1 : -1]
    return text, None


def make_player_I(order: OrderExpr, text: str, match_seed: int):
    head, body = _descriptor_head(text)
    if head == "random":
        if body is None:
            raise PreconditionError("random(seed,width) needs arguments")
        args = split_top(body)
        if len(args) != 2:
            raise PreconditionError(f"expected random(seed,width), got {text!r}")
        return RandomLegal(order, int(args[0]), int(args[1]), match_seed)
    if head == "trap":
        if body is None:
            raise PreconditionError("trap(<point>) needs a target")
        return Trap(order, parse_point(order, body))
    if head == "scripted":
        if body is None:
            raise PreconditionError("scripted(p1,p2,...) needs a move list")
        points = (
            [parse_point(order, part) for part in split_top(body)] if body else []
        )
        return Scripted(order, points)
    raise PreconditionError(f"unknown Player I strategy {text!r}")


def make_player_II(order: OrderExpr, text: str):
    head, body = _descriptor_head(text)
    if head == "sigma":
        if body is None:
            raise PreconditionError("sigma(<set-dsl>) needs a payoff description")
        return SigmaStrategy(order, parse_presentation(order, body))
    if head == "blocks":
        if body is None:
            raise PreconditionError("blocks(<family-dsl>) needs a family description")
        return BlocksStrategy(order, parse_family(order, body))
    if head == "universal":
        if body is not None:
            raise PreconditionError("universal takes no arguments")
        return universal_lex_strategy(order)
    if head == "conversewo":
        if body is None:
            raise PreconditionError("conversewo(<chain-dsl>) needs a chain")
        return converse_well_order_strategy(order, parse_chain(order, body))
    raise PreconditionError(f"unknown Player II strategy {text!r}")


def payoff_text_for_strategy(p2_text: str) -> str:
    """Payoff description a Player II descriptor implicitly targets."""
    head, body = _descriptor_head(p2_text)
    if head in ("sigma", "blocks") and body is not None:
        return body
    if head == "universal":
        return "fullblocks"
    if head == "conversewo" and body is not None:
        return f"singletonchain({body})"
    raise PreconditionError(f"no payoff description derivable from {p2_text!r}")
