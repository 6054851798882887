"""Ordinals below epsilon_0 in Cantor normal form.

A value is a finite sum ``w^e1*c1 + ... + w^ek*ck`` with strictly decreasing
ordinal exponents and positive integer coefficients; the empty sum is 0.
Instances are immutable, hashable, and totally ordered by the usual ordinal
order (lexicographic on the term sequence, a proper prefix being smaller).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, List, Tuple


class MalformedOrdinalError(ValueError):
    """Term sequence violates Cantor normal form."""


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: Tuple[Tuple["Ordinal", int], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for entry in self.terms:
            if not (isinstance(entry, tuple) and len(entry) == 2):
                raise MalformedOrdinalError(f"bad term {entry!r}")
            exp, coeff = entry
            if not isinstance(exp, Ordinal):
                raise MalformedOrdinalError(f"exponent {exp!r} is not an Ordinal")
            if not isinstance(coeff, int) or isinstance(coeff, bool) or coeff < 1:
                raise MalformedOrdinalError(
                    f"coefficient {coeff!r} is not a positive integer"
                )
            if prev is not None and ordinal_cmp(exp, prev) >= 0:
                raise MalformedOrdinalError(
                    f"exponents must strictly decrease, got {exp} after {prev}"
                )
            prev = exp

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        """True for natural numbers (zero or a single w^0 term)."""
        if not self.terms:
            return True
        return len(self.terms) == 1 and self.terms[0][0].is_zero()

    def as_int(self) -> int:
        if not self.terms:
            return 0
        if not self.is_finite():
            raise MalformedOrdinalError(f"{self} is not a natural number")
        return self.terms[0][1]

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise MalformedOrdinalError(f"{n!r} is not a natural number")
        if n == 0:
            return cls()
        return cls(((cls(), n),))

    def __lt__(self, other: "Ordinal") -> bool:
        return ordinal_cmp(self, other) < 0

    def __str__(self) -> str:
        return ordinal_text(self)

    def __repr__(self) -> str:
        return f"Ordinal<{ordinal_text(self)}>"


def ordinal_cmp(a: Ordinal, b: Ordinal) -> int:
    """Three-way comparison: negative, zero, or positive.

    Term sequences compare lexicographically on (exponent, coefficient); a
    proper prefix denotes the smaller ordinal.
    """
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = ordinal_cmp(ea, eb)
        if c != 0:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) == len(b.terms):
        return 0
    return -1 if len(a.terms) < len(b.terms) else 1


ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal(((ONE, 1),))


def omega_power(exp: Ordinal, coeff: int = 1) -> Ordinal:
    return Ordinal(((exp, coeff),))


def _atomic(e: Ordinal) -> bool:
    # prints without parentheses after '^'
    if e.is_finite():
        return True
    return len(e.terms) == 1 and e.terms[0][1] == 1 and _atomic(e.terms[0][0])


def ordinal_text(o: Ordinal) -> str:
    """Canonical literal, e.g. ``0``, ``w*2+3``, ``w^2``, ``w^(w+1)*4``."""
    if not o.terms:
        return "0"
    parts: List[str] = []
    for exp, coeff in o.terms:
        if exp.is_zero():
            parts.append(str(coeff))
            continue
        if exp == ONE:
            base = "w"
        elif _atomic(exp):
            base = f"w^{ordinal_text(exp)}"
        else:
            base = f"w^({ordinal_text(exp)})"
        parts.append(base if coeff == 1 else f"{base}*{coeff}")
    return "+".join(parts)


def ordinal_to_json(o: Ordinal) -> dict:
    return {"cnf": [[ordinal_to_json(exp), coeff] for exp, coeff in o.terms]}


def ordinal_from_json(obj: object) -> Ordinal:
    if not isinstance(obj, dict) or set(obj) != {"cnf"} or not isinstance(obj["cnf"], list):
        raise MalformedOrdinalError(f"bad ordinal encoding {obj!r}")
    terms = []
    for entry in obj["cnf"]:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise MalformedOrdinalError(f"bad ordinal term encoding {entry!r}")
        exp, coeff = entry
        terms.append((ordinal_from_json(exp), coeff))
    return Ordinal(tuple(terms))


def small_ordinals_below(bound: Ordinal, limit: int, coeff_cap: int = 3) -> List[Ordinal]:
    """Deterministic ascending sample of ordinals strictly below ``bound``.

    Spans sums of w^3..w^0 terms with coefficients up to ``coeff_cap``; used
    for probe spreads and adversarial first-move menus.
    """
    out: List[Ordinal] = []
    for value in _digit_vectors(coeff_cap):
        o = _from_digits(value)
        if ordinal_cmp(o, bound) < 0:
            out.append(o)
            if len(out) >= limit:
                break
    return out


def _digit_vectors(cap: int) -> Iterator[Tuple[int, int, int, int]]:
    # ascending ordinal order == lexicographic on (c3, c2, c1, c0)
    for c3 in range(cap + 1):
        for c2 in range(cap + 1):
            for c1 in range(cap + 1):
                for c0 in range(cap + 1):
                    yield (c3, c2, c1, c0)


def _from_digits(digits: Tuple[int, int, int, int]) -> Ordinal:
    exps = (Ordinal.from_int(3), Ordinal.from_int(2), ONE, ZERO)
    terms = tuple((e, c) for e, c in zip(exps, digits) if c > 0)
    return Ordinal(terms)
