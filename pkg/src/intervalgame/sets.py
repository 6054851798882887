"""Payoff sets: pieces, staged presentations, block families, oracles.

A payoff is described in one of two ways:

* a ``SigmaPresentation`` -- a total map from stage numbers to well-founded
  pieces whose union is the set; the piecewise-min strategy consumes one piece
  per stage;
* a ``BlockFamily`` -- an indexed family of blocks, later-indexed blocks lying
  entirely below earlier ones, with exact query capabilities (least block with
  an element below a point, separating move below a bound) supplied by the
  constructor rather than searched for.

Verification never trusts either description: a ``SetOracle`` provides
membership plus a deterministic probe generator emitting only members, and
all certificate checks are replayed against probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, List, Optional, Tuple, Union

from .ordinals import OMEGA, Ordinal, ordinal_cmp, ordinal_text
from .orders import (
    Lex,
    OrderExpr,
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
    normalize_point,
    order_to_text,
    parse_point,
    point_above,
)


class CapabilityError(ValueError):
    """A block family lacks a capability the caller needs."""


class ChainValidationError(ValueError):
    """A chain of points failed the strictly-decreasing check."""

    def __init__(self, index: int, earlier: Point, later: Point) -> None:
        super().__init__(
            f"chain is not strictly decreasing at index {index}: "
            f"element {index} = {earlier!r} then element {index + 1} = {later!r}"
        )
        self.index = index
        self.earlier = earlier
        self.later = later


def deterministic_inside(
    order: OrderExpr, lower: Optional[Point], upper: Optional[Point]
) -> Point:
    """Canonical filler point strictly inside (lower, upper)."""
    if lower is None and upper is None:
        raise PreconditionError("need at least one finite bound")
    if upper is None:
        return point_above(order, lower)
    if lower is None:
        from .orders import point_below

        return point_below(order, upper)
    return between(order, lower, upper)


# ---------------------------------------------------------------------------
# the fixed rational enumeration
#
# Rationals are enumerated by height h = max(|num|, den) for reduced num/den,
# h = 1, 2, ...; within one height, ordered by (den, num) ascending.  So the
# sequence starts -1, 0, 1, -2, 2, -1/2, 1/2, -3, 3, -3/2, 3/2, ...  This
# enumeration is frozen: certificates and probe grids refer to its indices.

_height_blocks: List[List[Fraction]] = []
_height_offsets: List[int] = [0]


def _extend_heights(upto: int) -> None:
    while len(_height_blocks) < upto:
        h = len(_height_blocks) + 1
        block = []
        for den in range(1, h + 1):
            for num in range(-h, h + 1):
                if max(abs(num), den) != h:
                    continue
                if gcd(abs(num), den) != 1:
                    continue
                block.append(Fraction(num, den))
        _height_blocks.append(block)
        _height_offsets.append(_height_offsets[-1] + len(block))


def rational_enum(n: int) -> Fraction:
    """The n-th rational of the fixed enumeration, n >= 0."""
    if n < 0:
        raise PreconditionError(f"enumeration index {n} is negative")
    while _height_offsets[-1] <= n:
        _extend_heights(len(_height_blocks) + 1)
    h = 1
    while _height_offsets[h] <= n:
        h += 1
    return _height_blocks[h - 1][n - _height_offsets[h - 1]]


def rational_index(x: Fraction) -> int:
    """Exact inverse of rational_enum."""
    h = max(abs(x.numerator), x.denominator)
    if h == 0:
        h = 1
    _extend_heights(h)
    return _height_offsets[h - 1] + _height_blocks[h - 1].index(x)


# ---------------------------------------------------------------------------
# probe bounds

@dataclass(frozen=True)
class ProbeBounds:
    """Finite probe budget: rational denominator cap, block index list, and
    per-block sample count."""

    max_denominator: int = 64
    block_indices: Tuple[Ordinal, ...] = ()
    per_block: int = 32


def probe_rationals(bounds: ProbeBounds) -> List[Fraction]:
    """First per_block enumeration members with denominator under the cap."""
    out: List[Fraction] = []
    k = 0
    # enumeration indices are dense in heights, so this terminates quickly
    while len(out) < bounds.per_block:
        q = rational_enum(k)
        if q.denominator <= bounds.max_denominator:
            out.append(q)
        k += 1
    return out


def _denominator_ok(order: OrderExpr, p: Point, cap: int) -> bool:
    if isinstance(order, Rationals):
        assert isinstance(p, Fraction)
        return p.denominator <= cap
    if isinstance(order, (WellOrder, Reversed)):
        return True
    if isinstance(order, Lex):
        assert isinstance(p, tuple)
        return _denominator_ok(order.first, p[0], cap) and _denominator_ok(
            order.second, p[1], cap
        )
    raise ShapeError(f"unknown order expression {order!r}")


# ---------------------------------------------------------------------------
# pieces

@dataclass(frozen=True)
class FiniteSet:
    points: Tuple[Point, ...]


@dataclass(frozen=True)
class Singleton:
    point: Point


@dataclass(frozen=True)
class NaturalGrid:
    """{start, start+1, start+2, ...} inside the rational line."""

    start: Fraction


@dataclass(frozen=True)
class BlockSlice:
    """An inner piece placed at a fixed block of a lex order."""

    block: Ordinal
    inner: "Piece"


Piece = Union[FiniteSet, Singleton, NaturalGrid, BlockSlice]

EMPTY_PIECE = FiniteSet(())


def _check_interval(
    order: OrderExpr, lower: Optional[Point], upper: Optional[Point]
) -> None:
    if lower is not None and upper is not None and compare(order, lower, upper) >= 0:
        raise PreconditionError(
            f"inverted interval: lower {lower!r} is not below upper {upper!r}"
        )


def _slice_bounds(
    order: Lex, block: Ordinal, lower: Optional[Point], upper: Optional[Point]
):
    """Trace of the open interval on one block; None marks an empty trace."""
    lo2: Optional[Point] = None
    hi2: Optional[Point] = None
    if lower is not None:
        assert isinstance(lower, tuple)
        c = compare(order.first, block, lower[0])
        if c < 0:
            return "empty"
        if c == 0:
            lo2 = lower[1]
    if upper is not None:
        assert isinstance(upper, tuple)
        c = compare(order.first, block, upper[0])
        if c > 0:
            return "empty"
        if c == 0:
            hi2 = upper[1]
    if lo2 is not None and hi2 is not None and compare(order.second, lo2, hi2) >= 0:
        return "empty"
    return (lo2, hi2)


def min_in_interval(
    order: OrderExpr,
    piece: Piece,
    lower: Optional[Point],
    upper: Optional[Point],
) -> Optional[Point]:
    """Exact least element of the piece strictly inside (lower, upper).

    None bounds stand for the missing infinities (the stage-0 upper bound in
    particular).  Returns None when the trace is empty.
    """
    _check_interval(order, lower, upper)
    if isinstance(piece, Singleton):
        p = piece.point
        return p if in_open_interval(order, p, lower, upper) else None
    if isinstance(piece, FiniteSet):
        best: Optional[Point] = None
        for p in piece.points:
            if not in_open_interval(order, p, lower, upper):
                continue
            if best is None or compare(order, p, best) < 0:
                best = p
        return best
    if isinstance(piece, NaturalGrid):
        if not isinstance(order, Rationals):
            raise ShapeError("NaturalGrid pieces live in the rational line")
        if lower is None or lower < piece.start:
            cand = piece.start
        else:
            steps = math.floor(lower - piece.start) + 1
            cand = piece.start + steps
        if upper is not None and compare(order, cand, upper) >= 0:
            return None
        return cand
    if isinstance(piece, BlockSlice):
        if not isinstance(order, Lex):
            raise ShapeError("BlockSlice pieces live in lex orders")
        traced = _slice_bounds(order, piece.block, lower, upper)
        if traced == "empty":
            return None
        lo2, hi2 = traced
        inner = min_in_interval(order.second, piece.inner, lo2, hi2)
        if inner is None:
            return None
        return (piece.block, inner)
    raise ShapeError(f"unknown piece {piece!r}")


def piece_contains(order: OrderExpr, piece: Piece, x: Point) -> bool:
    if isinstance(piece, Singleton):
        return compare(order, piece.point, x) == 0
    if isinstance(piece, FiniteSet):
        return any(compare(order, p, x) == 0 for p in piece.points)
    if isinstance(piece, NaturalGrid):
        if not isinstance(order, Rationals):
            raise ShapeError("NaturalGrid pieces live in the rational line")
        assert isinstance(x, Fraction)
        d = x - piece.start
        return d >= 0 and d.denominator == 1
    if isinstance(piece, BlockSlice):
        if not isinstance(order, Lex):
            raise ShapeError("BlockSlice pieces live in lex orders")
        if not isinstance(x, tuple):
            raise ShapeError(f"expected a pair, got {x!r}")
        if compare(order.first, x[0], piece.block) != 0:
            return False
        return piece_contains(order.second, piece.inner, x[1])
    raise ShapeError(f"unknown piece {piece!r}")


# ---------------------------------------------------------------------------
# staged presentations

@dataclass
class SigmaPresentation:
    """Total stage -> piece map whose union is the payoff set.

    member_index, when available, is the exact least stage whose piece holds
    the point; verification uses it to classify survivors.
    """

    describe: str
    piece_at_fn: Callable[[int], Piece]
    member_index_fn: Optional[Callable[[Point], Optional[int]]] = None

    def piece_at(self, n: int) -> Piece:
        if n < 0:
            raise PreconditionError(f"stage {n} is negative")
        return self.piece_at_fn(n)

    def member_index(self, x: Point) -> Optional[int]:
        if self.member_index_fn is None:
            return None
        return self.member_index_fn(x)


def presentation_from_points(
    order: OrderExpr, points: List[Point], describe: str
) -> SigmaPresentation:
    pts = [normalize_point(order, p) for p in points]
    index: dict = {}
    for i, p in enumerate(pts):
        index.setdefault(p, i)

    def piece(n: int) -> Piece:
        return Singleton(pts[n]) if n < len(pts) else EMPTY_PIECE

    return SigmaPresentation(describe, piece, lambda x: index.get(x))


def enumerated_rationals_presentation(count: int) -> SigmaPresentation:
    def piece(n: int) -> Piece:
        return Singleton(rational_enum(n)) if n < count else EMPTY_PIECE

    def member(x: Point) -> Optional[int]:
        if not isinstance(x, Fraction):
            return None
        i = rational_index(x)
        return i if i < count else None

    return SigmaPresentation(f"enumerated(e,{count})", piece, member)


def single_piece_presentation(
    order: OrderExpr, piece: Piece, describe: str
) -> SigmaPresentation:
    def at(n: int) -> Piece:
        return piece if n == 0 else EMPTY_PIECE

    return SigmaPresentation(
        describe, at, lambda x: 0 if piece_contains(order, piece, x) else None
    )


def block_singleton_presentation(order: Lex, block: Ordinal) -> SigmaPresentation:
    """One lex block, presented as singletons of the fixed rational enumeration."""

    def piece(n: int) -> Piece:
        return Singleton((block, rational_enum(n)))

    def member(x: Point) -> Optional[int]:
        if not isinstance(x, tuple) or ordinal_cmp(x[0], block) != 0:
            return None
        assert isinstance(x[1], Fraction)
        return rational_index(x[1])

    return SigmaPresentation(
        f"fullblock({ordinal_text(block)})", piece, member
    )


# ---------------------------------------------------------------------------
# chains (strictly decreasing point sequences)

@dataclass
class Chain:
    describe: str
    length: Optional[int]  # None for an omega-indexed chain
    point_at: Callable[[int], Point]
    first_index_below: Optional[Callable[[Point], Optional[int]]] = None
    inf_value: Optional[Point] = None  # required for omega chains

    def index_of(self, order: OrderExpr, x: Point) -> Optional[int]:
        """Exact membership index, derived from monotonicity."""
        if self.length is not None:
            for i in range(self.length):
                if compare(order, self.point_at(i), x) == 0:
                    return i
            return None
        below = self.require_first_below()(x)
        if below is None or below == 0:
            return None
        j = below - 1
        return j if compare(order, self.point_at(j), x) == 0 else None

    def require_first_below(self) -> Callable[[Point], Optional[int]]:
        if self.first_index_below is None:
            raise CapabilityError(
                f"chain {self.describe} has no first-index-below capability"
            )
        return self.first_index_below


def validate_chain(order: OrderExpr, chain: Chain, prefix: int = 64) -> None:
    """Reject non-decreasing chains, naming the violating pair.

    Finite chains are checked in full; omega chains on the first ``prefix``
    adjacent pairs.
    """
    pairs = chain.length - 1 if chain.length is not None else prefix
    for i in range(pairs):
        a, b = chain.point_at(i), chain.point_at(i + 1)
        if compare(order, b, a) >= 0:
            raise ChainValidationError(i, a, b)


def chain_from_points(order: OrderExpr, points: List[Point], describe: str) -> Chain:
    pts = [normalize_point(order, p) for p in points]
    if not pts:
        raise PreconditionError("a chain needs at least one point")

    def first_below(a: Point) -> Optional[int]:
        for i, p in enumerate(pts):
            if compare(order, p, a) < 0:
                return i
        return None

    chain = Chain(describe, len(pts), lambda i: pts[i], first_below, None)
    validate_chain(order, chain)
    return chain


def harmonic_chain() -> Chain:
    """1, 1/2, 1/3, ... with exact capabilities; infimum 0, not attained."""

    def at(n: int) -> Point:
        return Fraction(1, n + 1)

    def first_below(a: Point) -> Optional[int]:
        assert isinstance(a, Fraction)
        if a <= 0:
            return None
        return math.floor(1 / a)  # least n with 1/(n+1) < a

    return Chain("harmonic", None, at, first_below, Fraction(0))


# ---------------------------------------------------------------------------
# block families

PayoffModel = Union[SigmaPresentation, "BlockFamily"]


@dataclass
class BlockFamily:
    """Reverse-ordered blocks below an ordinal bound, with exact capabilities.

    block_index must name the unique block holding a point (None when the
    point is outside the union); block_strategy may be None, in which case the
    strategy layer plays the default sub-strategy for the block's payoff model.
    """

    order: OrderExpr
    gamma: Ordinal
    describe: str
    block_payoff: Callable[[Ordinal], PayoffModel]
    least_below: Callable[[Point], Optional[Tuple[Ordinal, Point]]]
    separator: Callable[[Ordinal, Point, Optional[Point]], Optional[Point]]
    block_probes: Callable[[Ordinal, int], List[Point]]
    block_contains: Callable[[Ordinal, Point], bool]
    block_index: Callable[[Point], Optional[Ordinal]]
    block_strategy: Optional[Callable[[Ordinal], object]] = None


def make_full_lex_blocks(order: OrderExpr) -> BlockFamily:
    """The family of full blocks {a} x Q of a lex order over reversed ordinals.

    Every block is one copy of the rationals; later indices sit lower.  The
    least block with an element below a point is always the point's own block
    (witnessed one step down inside it), and a separating move below a bound
    exists whenever the current point's block index reaches the bound.
    """
    if not (
        isinstance(order, Lex)
        and isinstance(order.first, Reversed)
        and isinstance(order.second, Rationals)
    ):
        raise UnsupportedOrderError(
            "full blocks require lex(rev(ord(d)),Q), got " + order_to_text(order)
        )
    delta = order.first.inner.bound
    if delta.is_zero():
        raise UnsupportedOrderError("full blocks require a positive block bound")

    def payoff(alpha: Ordinal) -> SigmaPresentation:
        return block_singleton_presentation(order, alpha)

    def least_below(a: Point):
        assert isinstance(a, tuple) and isinstance(a[1], Fraction)
        return (a[0], (a[0], a[1] - 1))

    def separator(bound: Ordinal, lower: Point, upper: Optional[Point]):
        if bound.is_zero():
            return deterministic_inside(order, lower, upper)
        assert isinstance(lower, tuple) and isinstance(lower[1], Fraction)
        if ordinal_cmp(lower[0], bound) < 0:
            return None  # everything below the bound's blocks sits below lower
        if upper is not None:
            assert isinstance(upper, tuple)
            if ordinal_cmp(upper[0], lower[0]) == 0:
                assert isinstance(upper[1], Fraction)
                return (lower[0], between(Rationals(), lower[1], upper[1]))
        return (lower[0], lower[1] + 1)

    def probes(alpha: Ordinal, budget: int) -> List[Point]:
        return [(alpha, rational_enum(k)) for k in range(budget)]

    def contains(alpha: Ordinal, x: Point) -> bool:
        return isinstance(x, tuple) and ordinal_cmp(x[0], alpha) == 0

    def index_of(x: Point) -> Optional[Ordinal]:
        return x[0] if isinstance(x, tuple) else None

    return BlockFamily(
        order=order,
        gamma=delta,
        describe="fullblocks",
        block_payoff=payoff,
        least_below=least_below,
        separator=separator,
        block_probes=probes,
        block_contains=contains,
        block_index=index_of,
    )


def chain_singleton_family(order: OrderExpr, chain: Chain) -> BlockFamily:
    """Singleton blocks from a strictly decreasing chain.

    Finite chains derive all capabilities by scan; omega chains must supply
    first_index_below and an infimum value at construction (capability gaps
    surface here, not mid-game).
    """
    validate_chain(order, chain)
    if chain.length is None:
        chain.require_first_below()
        if chain.inf_value is None:
            raise CapabilityError(
                f"omega chain {chain.describe} has no infimum capability"
            )
        gamma = OMEGA
    else:
        gamma = Ordinal.from_int(chain.length)

    def payoff(alpha: Ordinal) -> SigmaPresentation:
        i = alpha.as_int()
        pt = chain.point_at(i)
        return single_piece_presentation(
            order, Singleton(pt), f"chainpoint({i})"
        )

    def least_below(a: Point):
        if chain.length is not None:
            idx = None
            for i in range(chain.length):
                if compare(order, chain.point_at(i), a) < 0:
                    idx = i
                    break
        else:
            idx = chain.require_first_below()(a)
        if idx is None:
            return None
        return (Ordinal.from_int(idx), chain.point_at(idx))

    def separator(bound: Ordinal, lower: Point, upper: Optional[Point]):
        if bound.is_zero():
            return deterministic_inside(order, lower, upper)
        if bound.is_finite():
            b = chain.point_at(bound.as_int() - 1)
        else:
            # the whole family: bound below every chain element
            if chain.length is not None:
                b = chain.point_at(chain.length - 1)
            else:
                b = chain.inf_value
        if compare(order, b, lower) <= 0:
            return None
        if upper is not None and compare(order, b, upper) >= 0:
            return deterministic_inside(order, lower, upper)
        return b

    def probes(alpha: Ordinal, budget: int) -> List[Point]:
        return [chain.point_at(alpha.as_int())]

    def contains(alpha: Ordinal, x: Point) -> bool:
        return compare(order, chain.point_at(alpha.as_int()), x) == 0

    def index_of(x: Point) -> Optional[Ordinal]:
        i = chain.index_of(order, x)
        return None if i is None else Ordinal.from_int(i)

    return BlockFamily(
        order=order,
        gamma=gamma,
        describe=f"singletonchain({chain.describe})",
        block_payoff=payoff,
        least_below=least_below,
        separator=separator,
        block_probes=probes,
        block_contains=contains,
        block_index=index_of,
    )


def stacked_chain_family(count: Optional[int] = None) -> BlockFamily:
    """Blocks of decreasing chains over Q whose boundaries accumulate at 0.

    Block a occupies (t_{a+1}, t_a] with t_j = -1 + 1/(j+1); each block is a
    conversely well ordered chain accumulating at its lower boundary.  The
    boundary points are exactly where the separator query fails, so a player
    walking them forces repeated descent; the family's sub-strategies are
    themselves chain families, exercising nested delegation.
    """
    order = Rationals()

    def t(j: int) -> Fraction:
        return Fraction(-j, j + 1)

    def block_chain(alpha: int) -> Chain:
        floor_v = t(alpha + 1)
        width = t(alpha) - floor_v

        def at(k: int) -> Point:
            return floor_v + width / (k + 1)

        def first_below(a: Point) -> Optional[int]:
            assert isinstance(a, Fraction)
            if a <= floor_v:
                return None
            r = width / (a - floor_v)
            return math.floor(r)  # least k with floor + width/(k+1) < a

        return Chain(f"stackedchain({alpha})", None, at, first_below, floor_v)

    def payoff(alpha: Ordinal) -> BlockFamily:
        return chain_singleton_family(order, block_chain(alpha.as_int()))

    def least_below(a: Point):
        assert isinstance(a, Fraction)
        if a + 1 <= 0:
            return None
        r = 1 / (a + 1)
        j_star = math.floor(r)  # least j with t_j < a
        alpha = max(j_star - 1, 0)
        if count is not None and alpha >= count:
            return None
        chain = block_chain(alpha)
        k = chain.require_first_below()(a)
        assert k is not None
        return (Ordinal.from_int(alpha), chain.point_at(k))

    def separator(bound: Ordinal, lower: Point, upper: Optional[Point]):
        if bound.is_zero():
            return deterministic_inside(order, lower, upper)
        if bound.is_finite():
            b: Point = t(bound.as_int())
        elif count is not None:
            b = t(count)
        else:
            b = Fraction(-1)
        if compare(order, b, lower) <= 0:
            return None
        if upper is not None and compare(order, b, upper) >= 0:
            return deterministic_inside(order, lower, upper)
        return b

    def probes(alpha: Ordinal, budget: int) -> List[Point]:
        chain = block_chain(alpha.as_int())
        return [chain.point_at(k) for k in range(budget)]

    def contains(alpha: Ordinal, x: Point) -> bool:
        return block_chain(alpha.as_int()).index_of(order, x) is not None

    def index_of(x: Point) -> Optional[Ordinal]:
        # block a covers (t_{a+1}, t_a], so the candidate block is forced
        assert isinstance(x, Fraction)
        if x + 1 <= 0 or x > 0:
            return None
        j_star = math.floor(1 / (x + 1))  # least j with t_j < x
        if j_star < 1:
            return None
        alpha = j_star - 1
        if count is not None and alpha >= count:
            return None
        if contains(Ordinal.from_int(alpha), x):
            return Ordinal.from_int(alpha)
        return None

    gamma = OMEGA if count is None else Ordinal.from_int(count)
    label = "w" if count is None else str(count)
    return BlockFamily(
        order=order,
        gamma=gamma,
        describe=f"stackedchains({label})",
        block_payoff=payoff,
        least_below=least_below,
        separator=separator,
        block_probes=probes,
        block_contains=contains,
        block_index=index_of,
    )


# ---------------------------------------------------------------------------
# oracles

@dataclass
class SetOracle:
    """Membership plus a deterministic probe generator emitting only members."""

    describe: str
    contains: Callable[[Point], bool]
    probe_fn: Callable[[ProbeBounds], List[Point]]


def gen_probes(oracle: SetOracle, bounds: ProbeBounds) -> List[Point]:
    seen = set()
    out: List[Point] = []
    for p in oracle.probe_fn(bounds):
        if p in seen:
            continue
        seen.add(p)
        out.append(p)
    return out


def oracle_all(order: OrderExpr) -> SetOracle:
    """The whole carrier (payoff for the universal strategy)."""

    def probes(bounds: ProbeBounds) -> List[Point]:
        if isinstance(order, Rationals):
            return list(probe_rationals(bounds))
        if (
            isinstance(order, Lex)
            and isinstance(order.first, Reversed)
            and isinstance(order.second, Rationals)
        ):
            delta = order.first.inner.bound
            grid = probe_rationals(bounds)
            out: List[Point] = []
            for alpha in bounds.block_indices:
                if ordinal_cmp(alpha, delta) >= 0:
                    continue
                out.extend((alpha, q) for q in grid)
            return out
        raise UnsupportedOrderError(
            "grid probes support Q and lex(rev(ord(d)),Q) carriers"
        )

    return SetOracle("all", lambda x: True, probes)


def oracle_finite(order: OrderExpr, points: List[Point], describe: str = "finite") -> SetOracle:
    pts = [normalize_point(order, p) for p in points]

    def probes(bounds: ProbeBounds) -> List[Point]:
        return [p for p in pts if _denominator_ok(order, p, bounds.max_denominator)]

    return SetOracle(describe, lambda x: any(compare(order, p, x) == 0 for p in pts), probes)


def oracle_enumerated(count: int) -> SetOracle:
    def contains(x: Point) -> bool:
        return isinstance(x, Fraction) and rational_index(x) < count

    def probes(bounds: ProbeBounds) -> List[Point]:
        return [
            rational_enum(k)
            for k in range(count)
            if rational_enum(k).denominator <= bounds.max_denominator
        ]

    return SetOracle(f"enumerated(e,{count})", contains, probes)


def oracle_chain(order: OrderExpr, chain: Chain) -> SetOracle:
    def contains(x: Point) -> bool:
        return chain.index_of(order, x) is not None

    def probes(bounds: ProbeBounds) -> List[Point]:
        n = bounds.per_block
        if chain.length is not None:
            n = min(n, chain.length)
        return [
            chain.point_at(i)
            for i in range(n)
            if _denominator_ok(order, chain.point_at(i), bounds.max_denominator)
        ]

    return SetOracle(f"chain({chain.describe})", contains, probes)


# ---------------------------------------------------------------------------
# payoff DSL
#
#   finite{p1,p2,...}        explicit point list
#   enumerated(e,N)          first N rationals of the fixed enumeration
#   fullblocks               every block of a lex order (the whole carrier)
#   singletonchain(...)      'harmonic' or an explicit decreasing point list
#   stackedchains(w|N)       stacked chain blocks over Q

def split_top(text: str, sep: str = ",") -> List[str]:
    """Split at top-level separators, respecting (), {} nesting."""
    parts: List[str] = []
    depth = 0
    cur: List[str] = []
    for ch in text:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
            if depth < 0:
                raise PreconditionError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise PreconditionError(f"unbalanced brackets in {text!r}")
    parts.append("".join(cur).strip())
    return parts


def _payoff_head(text: str) -> Tuple[str, Optional[str]]:
    text = text.strip()
    for open_ch, close_ch in (("(", ")"), ("{", "}")):
        i = text.find(open_ch)
        if i >= 0 and text.endswith(close_ch):
            return text[:i].strip(), text[i + 1 : -1].strip()
    return text, None


def parse_chain(order: OrderExpr, body: str) -> Chain:
    if body == "harmonic":
        if not isinstance(order, Rationals):
            raise UnsupportedOrderError("the harmonic chain lives in Q")
        return harmonic_chain()
    points = [parse_point(order, part) for part in split_top(body)]
    return chain_from_points(order, points, body)


def parse_presentation(order: OrderExpr, text: str) -> SigmaPresentation:
    head, body = _payoff_head(text)
    if head == "finite":
        if body is None:
            raise PreconditionError("finite{...} needs a point list")
        points = [parse_point(order, part) for part in split_top(body)] if body else []
        return presentation_from_points(order, points, f"finite{{{body}}}")
    if head == "enumerated":
        if body is None:
            raise PreconditionError("enumerated(e,N) needs arguments")
        args = split_top(body)
        if len(args) != 2 or args[0] != "e":
            raise PreconditionError(f"expected enumerated(e,N), got {text!r}")
        if not isinstance(order, Rationals):
            raise UnsupportedOrderError("the fixed enumeration lives in Q")
        return enumerated_rationals_presentation(int(args[1]))
    if head == "singletonchain":
        if body is None:
            raise PreconditionError("singletonchain(...) needs a chain")
        chain = parse_chain(order, body)
        validate_chain(order, chain)
        if chain.length is not None:
            pts = [chain.point_at(i) for i in range(chain.length)]
            return presentation_from_points(
                order, pts, f"singletonchain({body})"
            )

        def piece(n: int) -> Piece:
            return Singleton(chain.point_at(n))

        return SigmaPresentation(
            f"singletonchain({body})",
            piece,
            lambda x: chain.index_of(order, x),
        )
    raise PreconditionError(f"not a staged payoff description: {text!r}")


def parse_family(order: OrderExpr, text: str) -> BlockFamily:
    head, body = _payoff_head(text)
    if head == "fullblocks":
        return make_full_lex_blocks(order)
    if head == "singletonchain":
        if body is None:
            raise PreconditionError("singletonchain(...) needs a chain")
        return chain_singleton_family(order, parse_chain(order, body))
    if head == "stackedchains":
        if not isinstance(order, Rationals):
            raise UnsupportedOrderError("stacked chains live in Q")
        if body is None:
            raise PreconditionError("stackedchains(w|N) needs a bound")
        return stacked_chain_family(None if body == "w" else int(body))
    raise PreconditionError(f"not a block family description: {text!r}")


def resolve_payoff_model(order: OrderExpr, text: str) -> PayoffModel:
    head, _ = _payoff_head(text)
    if head in ("fullblocks", "stackedchains"):
        return parse_family(order, text)
    if head == "singletonchain":
        return parse_family(order, text)
    return parse_presentation(order, text)


def oracle_for_payoff(order: OrderExpr, text: str) -> SetOracle:
    head, body = _payoff_head(text)
    if head == "fullblocks":
        return oracle_all(order)
    if head == "enumerated":
        args = split_top(body or "")
        return oracle_enumerated(int(args[1]))
    if head == "finite":
        points = [parse_point(order, part) for part in split_top(body)] if body else []
        return oracle_finite(order, points, text)
    if head == "singletonchain":
        return oracle_chain(order, parse_chain(order, body or ""))
    if head == "stackedchains":
        if not isinstance(order, Rationals):
            raise UnsupportedOrderError("stacked chains live in Q")
        count = None if body == "w" else int(body or "")

        def boundary(j: int) -> Fraction:
            return Fraction(-j, j + 1)

        def element(alpha: int, k: int) -> Fraction:
            low = boundary(alpha + 1)
            return low + (boundary(alpha) - low) / (k + 1)

        def contains(x: Point) -> bool:
            # independent route: x sits in block a iff x - t_{a+1} divides the
            # block width an integral number of times
            if not isinstance(x, Fraction) or x + 1 <= 0 or x > 0:
                return False
            j_star = math.floor(1 / (x + 1))
            if j_star < 1:
                return False
            alpha = j_star - 1
            if count is not None and alpha >= count:
                return False
            low = boundary(alpha + 1)
            ratio = (boundary(alpha) - low) / (x - low)
            return ratio.denominator == 1 and ratio >= 1

        def probes(bounds: ProbeBounds) -> List[Point]:
            out: List[Point] = []
            for alpha_ord in bounds.block_indices:
                if not alpha_ord.is_finite():
                    continue
                alpha = alpha_ord.as_int()
                if count is not None and alpha >= count:
                    continue
                out.extend(
                    element(alpha, k)
                    for k in range(bounds.per_block)
                    if element(alpha, k).denominator <= bounds.max_denominator
                )
            return out

        return SetOracle(text, contains, probes)
    raise PreconditionError(f"no oracle for payoff description {text!r}")
