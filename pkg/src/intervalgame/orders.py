"""Order expressions and their points.

An order expression is one of:

* ``Rationals`` -- the rational line, written ``Q``;
* ``WellOrder(bound)`` -- ordinals strictly below ``bound``, written ``ord(<cnf>)``;
* ``Reversed(inner)`` -- a well order turned upside down, written ``rev(...)``;
* ``Lex(first, second)`` -- lexicographic product, written ``lex(a,b)``.

Points are plain value trees congruent to the expression: ``Fraction`` leaves
for Rationals, ``Ordinal`` leaves for (possibly reversed) well orders, and
2-tuples for lex pairs.  Reversal is transparent at the value level; it only
flips comparisons.

Games are hosted only on dense unbounded expressions: ``Q`` itself, or
``lex(rev(ord(d)), E)`` with ``d > 0`` and ``E`` dense unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .ordinals import (
    MalformedOrdinalError,
    Ordinal,
    ZERO,
    ordinal_cmp,
    ordinal_from_json,
    ordinal_text,
    ordinal_to_json,
)


class OrderSyntaxError(ValueError):
    """Parse failure; carries the character position."""

    def __init__(self, message: str, pos: int) -> None:
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class ShapeError(TypeError):
    """Point value does not match the order expression; names the subtree."""

    def __init__(self, message: str, path: Tuple[str, ...] = ()) -> None:
        where = "/".join(path) if path else "root"
        super().__init__(f"{message} (subtree: {where})")
        self.path = path


class UnsupportedOrderError(ValueError):
    """Operation requires a dense unbounded order."""


class PreconditionError(ValueError):
    """Caller violated an argument precondition (e.g. inverted interval)."""


@dataclass(frozen=True)
class Rationals:
    pass


@dataclass(frozen=True)
class WellOrder:
    bound: Ordinal


@dataclass(frozen=True)
class Reversed:
    inner: WellOrder

    def __post_init__(self) -> None:
        if not isinstance(self.inner, WellOrder):
            raise ShapeError("rev(...) applies only to ord(...)")


@dataclass(frozen=True)
class Lex:
    first: "OrderExpr"
    second: "OrderExpr"


OrderExpr = Union[Rationals, WellOrder, Reversed, Lex]
Point = Union[Fraction, Ordinal, Tuple["Point", "Point"]]

RATIONALS = Rationals()


def is_dense_unbounded(order: OrderExpr) -> bool:
    if isinstance(order, Rationals):
        return True
    if isinstance(order, Lex):
        first = order.first
        return (
            isinstance(first, Reversed)
            and not first.inner.bound.is_zero()
            and is_dense_unbounded(order.second)
        )
    return False


# ---------------------------------------------------------------------------
# point shape and comparison


def normalize_point(order: OrderExpr, value: object, _path: Tuple[str, ...] = ()) -> Point:
    """Coerce a convenient value (ints allowed at leaves) to a valid point.

    Raises ShapeError when the value tree does not match the order, including
    ordinal leaves at or above a WellOrder bound.
    """
    if isinstance(order, Rationals):
        if isinstance(value, bool):
            raise ShapeError(f"expected a rational, got {value!r}", _path)
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, Fraction):
            return value
        raise ShapeError(f"expected a rational, got {value!r}", _path)
    if isinstance(order, WellOrder):
        if isinstance(value, bool):
            raise ShapeError(f"expected an ordinal, got {value!r}", _path)
        if isinstance(value, int):
            value = Ordinal.from_int(value)
        if not isinstance(value, Ordinal):
            raise ShapeError(f"expected an ordinal, got {value!r}", _path)
        if ordinal_cmp(value, order.bound) >= 0:
            raise ShapeError(
                f"ordinal {value} is not below the bound {order.bound}", _path
            )
        return value
    if isinstance(order, Reversed):
        return normalize_point(order.inner, value, _path)
    if isinstance(order, Lex):
        if not isinstance(value, (tuple, list)) or len(value) != 2:
            raise ShapeError(f"expected a pair, got {value!r}", _path)
        return (
            normalize_point(order.first, value[0], _path + ("fst",)),
            normalize_point(order.second, value[1], _path + ("snd",)),
        )
    raise ShapeError(f"unknown order expression {order!r}", _path)


def validate_point(order: OrderExpr, value: object) -> Point:
    return normalize_point(order, value)


def compare(order: OrderExpr, x: Point, y: Point, _path: Tuple[str, ...] = ()) -> int:
    """Three-way comparison of two points under the order. Negative is less."""
    if isinstance(order, Rationals):
        if not isinstance(x, Fraction) or not isinstance(y, Fraction):
            raise ShapeError(f"expected rationals, got {x!r} / {y!r}", _path)
        return (x > y) - (x < y)
    if isinstance(order, WellOrder):
        if not isinstance(x, Ordinal) or not isinstance(y, Ordinal):
            raise ShapeError(f"expected ordinals, got {x!r} / {y!r}", _path)
        return ordinal_cmp(x, y)
    if isinstance(order, Reversed):
        return -compare(order.inner, x, y, _path)
    if isinstance(order, Lex):
        if not isinstance(x, tuple) or not isinstance(y, tuple):
            raise ShapeError(f"expected pairs, got {x!r} / {y!r}", _path)
        c = compare(order.first, x[0], y[0], _path + ("fst",))
        if c != 0:
            return c
        return compare(order.second, x[1], y[1], _path + ("snd",))
    raise ShapeError(f"unknown order expression {order!r}", _path)


def in_open_interval(
    order: OrderExpr, x: Point, lower: Optional[Point], upper: Optional[Point]
) -> bool:
    """Strictly between the bounds; None stands for the missing infinity."""
    if lower is not None and compare(order, lower, x) >= 0:
        return False
    if upper is not None and compare(order, x, upper) >= 0:
        return False
    return True


def between(order: OrderExpr, a: Point, b: Point) -> Point:
    """A deterministic point strictly inside (a, b); requires a < b.

    Rationals take the mediant of the reduced forms.  Lex points in the same
    block recurse on the second coordinate; in different blocks the result is
    (block of a, successor of a's second coordinate), which always lies below
    b because the second component of every dense unbounded lex order is
    unbounded above.
    """
    if compare(order, a, b) >= 0:
        raise PreconditionError(f"between requires a < b, got {a!r} !< {b!r}")
    if isinstance(order, Rationals):
        assert isinstance(a, Fraction) and isinstance(b, Fraction)
        return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)
    if isinstance(order, Lex) and is_dense_unbounded(order):
        assert isinstance(a, tuple) and isinstance(b, tuple)
        if compare(order.first, a[0], b[0]) == 0:
            return (a[0], between(order.second, a[1], b[1]))
        return (a[0], point_above(order.second, a[1]))
    raise UnsupportedOrderError(f"between is defined on dense orders, not {order_to_text(order)}")


def point_above(order: OrderExpr, a: Point) -> Point:
    """Deterministic strict successor witness: +1 in the final rational coordinate."""
    if isinstance(order, Rationals):
        assert isinstance(a, Fraction)
        return a + 1
    if isinstance(order, Lex) and is_dense_unbounded(order):
        assert isinstance(a, tuple)
        return (a[0], point_above(order.second, a[1]))
    raise UnsupportedOrderError(
        f"point_above is defined on dense unbounded orders, not {order_to_text(order)}"
    )


def point_below(order: OrderExpr, a: Point) -> Point:
    """Deterministic strict predecessor witness: -1 in the final rational coordinate."""
    if isinstance(order, Rationals):
        assert isinstance(a, Fraction)
        return a - 1
    if isinstance(order, Lex) and is_dense_unbounded(order):
        assert isinstance(a, tuple)
        return (a[0], point_below(order.second, a[1]))
    raise UnsupportedOrderError(
        f"point_below is defined on dense unbounded orders, not {order_to_text(order)}"
    )


# ---------------------------------------------------------------------------
# parsing

_PUNCT = "()^*+,/-{};=[]"


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME | INT | PUNCT | END
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    toks: List[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            toks.append(_Token("NAME", text[i:j], i))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Token("INT", text[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            toks.append(_Token("PUNCT", ch, i))
            i += 1
            continue
        raise OrderSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(_Token("END", "", n))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def next(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_punct(self, ch: str) -> _Token:
        tok = self.next()
        if tok.kind != "PUNCT" or tok.text != ch:
            raise OrderSyntaxError(f"expected {ch!r}, got {tok.text!r}", tok.pos)
        return tok

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "END":
            raise OrderSyntaxError(f"trailing input {tok.text!r}", tok.pos)

    def expect_int(self) -> Tuple[int, int]:
        tok = self.next()
        if tok.kind != "INT":
            raise OrderSyntaxError(f"expected an integer, got {tok.text!r}", tok.pos)
        return int(tok.text), tok.pos

    # ---- order grammar

    def parse_order(self) -> OrderExpr:
        tok = self.next()
        if tok.kind != "NAME":
            raise OrderSyntaxError(f"expected an order expression, got {tok.text!r}", tok.pos)
        if tok.text == "Q":
            return RATIONALS
        if tok.text == "ord":
            self.expect_punct("(")
            o = self.parse_cnf()
            self.expect_punct(")")
            return WellOrder(o)
        if tok.text == "rev":
            self.expect_punct("(")
            inner = self.parse_order()
            self.expect_punct(")")
            if not isinstance(inner, WellOrder):
                raise OrderSyntaxError("rev(...) applies only to ord(...)", tok.pos)
            return Reversed(inner)
        if tok.text == "lex":
            self.expect_punct("(")
            first = self.parse_order()
            self.expect_punct(",")
            second = self.parse_order()
            self.expect_punct(")")
            return Lex(first, second)
        raise OrderSyntaxError(f"unknown order name {tok.text!r}", tok.pos)

    # ---- CNF grammar: term ('+' term)*, term := 'w'['^'atom]['*'int] | int

    def parse_cnf(self) -> Ordinal:
        start = self.peek().pos
        terms: List[Tuple[Ordinal, int]] = []
        saw_zero_literal = False
        while True:
            tok = self.peek()
            if tok.kind == "NAME" and tok.text == "w":
                self.next()
                exp = Ordinal.from_int(1)
                if self.peek().kind == "PUNCT" and self.peek().text == "^":
                    self.next()
                    exp = self.parse_cnf_atom()
                coeff = 1
                if self.peek().kind == "PUNCT" and self.peek().text == "*":
                    self.next()
                    coeff, cpos = self.expect_int()
                    if coeff < 1:
                        raise OrderSyntaxError("coefficient must be positive", cpos)
                terms.append((exp, coeff))
            elif tok.kind == "INT":
                value, vpos = self.expect_int()
                if value == 0:
                    if terms:
                        raise OrderSyntaxError("zero term in a sum", vpos)
                    saw_zero_literal = True
                else:
                    terms.append((ZERO, value))
            else:
                raise OrderSyntaxError(f"expected a CNF term, got {tok.text!r}", tok.pos)
            nxt = self.peek()
            if nxt.kind == "PUNCT" and nxt.text == "+":
                if saw_zero_literal:
                    raise OrderSyntaxError("zero term in a sum", nxt.pos)
                self.next()
                continue
            break
        try:
            return Ordinal(tuple(terms))
        except MalformedOrdinalError as exc:
            raise OrderSyntaxError(str(exc), start) from None

    def parse_cnf_atom(self) -> Ordinal:
        tok = self.peek()
        if tok.kind == "INT":
            value, _ = self.expect_int()
            return Ordinal.from_int(value)
        if tok.kind == "NAME" and tok.text == "w":
            self.next()
            exp = Ordinal.from_int(1)
            if self.peek().kind == "PUNCT" and self.peek().text == "^":
                self.next()
                exp = self.parse_cnf_atom()
            return Ordinal(((exp, 1),))
        if tok.kind == "PUNCT" and tok.text == "(":
            self.next()
            o = self.parse_cnf()
            self.expect_punct(")")
            return o
        raise OrderSyntaxError(f"expected an exponent, got {tok.text!r}", tok.pos)

    # ---- point grammar, directed by the order shape

    def parse_point(self, order: OrderExpr) -> Point:
        if isinstance(order, Rationals):
            return self.parse_rational()
        if isinstance(order, WellOrder):
            tok = self.peek()
            o = self.parse_cnf()
            if ordinal_cmp(o, order.bound) >= 0:
                raise OrderSyntaxError(
                    f"ordinal {o} is not below the bound {order.bound}", tok.pos
                )
            return o
        if isinstance(order, Reversed):
            return self.parse_point(order.inner)
        if isinstance(order, Lex):
            self.expect_punct("(")
            fst = self.parse_point(order.first)
            self.expect_punct(",")
            snd = self.parse_point(order.second)
            self.expect_punct(")")
            return (fst, snd)
        raise OrderSyntaxError(f"unknown order expression {order!r}", self.peek().pos)

    def parse_rational(self) -> Fraction:
        sign = 1
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == "-":
            self.next()
            sign = -1
        num, _ = self.expect_int()
        if self.peek().kind == "PUNCT" and self.peek().text == "/":
            self.next()
            den, dpos = self.expect_int()
            if den == 0:
                raise OrderSyntaxError("zero denominator", dpos)
            return Fraction(sign * num, den)
        return Fraction(sign * num)


def parse_order(text: str) -> OrderExpr:
    p = _Parser(text)
    order = p.parse_order()
    p.expect_end()
    return order


def parse_point(order: OrderExpr, text: str) -> Point:
    p = _Parser(text)
    pt = p.parse_point(order)
    p.expect_end()
    return pt


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    o = p.parse_cnf()
    p.expect_end()
    return o


# ---------------------------------------------------------------------------
# printing

def order_to_text(order: OrderExpr) -> str:
    if isinstance(order, Rationals):
        return "Q"
    if isinstance(order, WellOrder):
        return f"ord({ordinal_text(order.bound)})"
    if isinstance(order, Reversed):
        return f"rev({order_to_text(order.inner)})"
    if isinstance(order, Lex):
        return f"lex({order_to_text(order.first)},{order_to_text(order.second)})"
    raise ShapeError(f"unknown order expression {order!r}")


def point_to_text(order: OrderExpr, p: Point) -> str:
    if isinstance(order, Rationals):
        assert isinstance(p, Fraction)
        if p.denominator == 1:
            return str(p.numerator)
        return f"{p.numerator}/{p.denominator}"
    if isinstance(order, WellOrder):
        assert isinstance(p, Ordinal)
        return ordinal_text(p)
    if isinstance(order, Reversed):
        return point_to_text(order.inner, p)
    if isinstance(order, Lex):
        assert isinstance(p, tuple)
        return f"({point_to_text(order.first, p[0])},{point_to_text(order.second, p[1])})"
    raise ShapeError(f"unknown order expression {order!r}")


# ---------------------------------------------------------------------------
# JSON encoding: rationals as num/den digit strings, ordinals as nested cnf
# arrays, pairs as fst/snd objects; reversal is transparent.

def point_to_json(order: OrderExpr, p: Point) -> object:
    if isinstance(order, Rationals):
        assert isinstance(p, Fraction)
        return {"num": str(p.numerator), "den": str(p.denominator)}
    if isinstance(order, WellOrder):
        assert isinstance(p, Ordinal)
        return ordinal_to_json(p)
    if isinstance(order, Reversed):
        return point_to_json(order.inner, p)
    if isinstance(order, Lex):
        assert isinstance(p, tuple)
        return {
            "fst": point_to_json(order.first, p[0]),
            "snd": point_to_json(order.second, p[1]),
        }
    raise ShapeError(f"unknown order expression {order!r}")


def point_from_json(order: OrderExpr, obj: object, _path: Tuple[str, ...] = ()) -> Point:
    if isinstance(order, Rationals):
        if not (isinstance(obj, dict) and set(obj) == {"num", "den"}):
            raise ShapeError(f"expected a rational encoding, got {obj!r}", _path)
        try:
            num, den = int(obj["num"]), int(obj["den"])
        except (TypeError, ValueError):
            raise ShapeError(f"non-integer rational encoding {obj!r}", _path) from None
        if den <= 0:
            raise ShapeError(f"denominator must be positive in {obj!r}", _path)
        return Fraction(num, den)
    if isinstance(order, WellOrder):
        try:
            o = ordinal_from_json(obj)
        except MalformedOrdinalError as exc:
            raise ShapeError(str(exc), _path) from None
        if ordinal_cmp(o, order.bound) >= 0:
            raise ShapeError(f"ordinal {o} is not below the bound {order.bound}", _path)
        return o
    if isinstance(order, Reversed):
        return point_from_json(order.inner, obj, _path)
    if isinstance(order, Lex):
        if not (isinstance(obj, dict) and set(obj) == {"fst", "snd"}):
            raise ShapeError(f"expected a pair encoding, got {obj!r}", _path)
        return (
            point_from_json(order.first, obj["fst"], _path + ("fst",)),
            point_from_json(order.second, obj["snd"], _path + ("snd",)),
        )
    raise ShapeError(f"unknown order expression {order!r}", _path)
