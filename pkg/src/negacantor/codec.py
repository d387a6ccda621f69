"""Nega-(d_n) digit strings and their bridge to positive Cantor series.

A nega representation eps_1 eps_2 ... of x satisfies

    x = sum (1 + eps_n) (-1)^(n+1) / (d_1 ... d_n)

and the digit involution delta_n = eps_n at odd n, d_n - 1 - eps_n at even n
turns it into the positive Cantor digits of the same x.  All work here goes
through that bridge.

Canonical tails are anchored to absolute positions: ``LOWHIGH`` continues with
0 at odd positions and d_n - 1 at even positions (positive image 0, 0, ...),
``HIGHLOW`` with d_n - 1 at odd and 0 at even positions (positive image
d_n - 1, d_n - 1, ...).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .params import BaseSequence


class Tail(enum.Enum):
    TRUNC = "trunc"
    LOWHIGH = "lowhigh"
    HIGHLOW = "highlow"


class PTail(enum.Enum):
    TRUNC = "trunc"
    ZERO = "zero"
    MAX = "max"


_TO_POSITIVE = {Tail.TRUNC: PTail.TRUNC, Tail.LOWHIGH: PTail.ZERO, Tail.HIGHLOW: PTail.MAX}
_TO_NEGA = {v: k for k, v in _TO_POSITIVE.items()}


class EndpointError(ValueError):
    """0 and 1 have a single representation."""


@dataclass(frozen=True)
class NegaDigits:
    digits: tuple[int, ...]
    tail: Tail = Tail.TRUNC

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(e) for e in self.digits))
        object.__setattr__(self, "tail", Tail(self.tail))

    @property
    def exact(self) -> bool:
        return self.tail is not Tail.TRUNC

    def __len__(self):
        return len(self.digits)

    def to_json(self) -> dict:
        return {"digits": list(self.digits), "tail": self.tail.value}

    @classmethod
    def from_json(cls, doc: dict) -> NegaDigits:
        return cls(tuple(doc["digits"]), Tail(doc.get("tail", "trunc")))

    def __str__(self):
        return ",".join(map(str, self.digits)) + ":" + self.tail.value

    @classmethod
    def parse(cls, text: str) -> NegaDigits:
        """Parse ``"1,0,2:lowhigh"``; the tail defaults to ``trunc``."""
        body, _, tail = text.strip().partition(":")
        digits = tuple(int(t) for t in body.replace(" ", "").split(",") if t)
        return cls(digits, Tail(tail or "trunc"))


@dataclass(frozen=True)
class PositiveDigits:
    """Positive Cantor digits read from position ``offset + 1`` onwards.

    ``offset`` is non-zero only for shifted strings, whose value is taken
    against the shifted schedule d_{offset+1}, d_{offset+2}, ...
    """

    digits: tuple[int, ...]
    tail: PTail = PTail.TRUNC
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(e) for e in self.digits))
        object.__setattr__(self, "tail", PTail(self.tail))

    @property
    def exact(self) -> bool:
        return self.tail is not PTail.TRUNC

    def __len__(self):
        return len(self.digits)


def _check_digits(base: BaseSequence, digits, offset: int = 0) -> None:
    for k, e in enumerate(digits, start=offset + 1):
        d = base.d(k)
        if not 0 <= e < d:
            raise ValueError(f"digit {e} at position {k} outside alphabet 0..{d - 1}")


def _flip(base: BaseSequence, digits, offset: int = 0) -> tuple[int, ...]:
    return tuple(e if n % 2 else base.d(n) - 1 - e for n, e in enumerate(digits, start=offset + 1))


def to_positive(base: BaseSequence, x: NegaDigits) -> PositiveDigits:
    _check_digits(base, x.digits)
    return PositiveDigits(_flip(base, x.digits), _TO_POSITIVE[x.tail])


def from_positive(base: BaseSequence, y: PositiveDigits) -> NegaDigits:
    if y.offset:
        raise ValueError("only unshifted digit strings have a nega form")
    _check_digits(base, y.digits)
    return NegaDigits(_flip(base, y.digits), _TO_NEGA[y.tail])


def positive_value(base: BaseSequence, y: PositiveDigits) -> tuple[Fraction, Fraction]:
    """(lower end, width) of the set denoted by ``y``; width is 0 when exact."""
    num, den = 0, 1
    for n, e in enumerate(y.digits, start=y.offset + 1):
        d = base.d(n)
        num, den = num * d + e, den * d
    lo = Fraction(num, den)
    if y.tail is PTail.ZERO:
        return lo, Fraction(0)
    if y.tail is PTail.MAX:
        return lo + Fraction(1, den), Fraction(0)
    return lo, Fraction(1, den)


def iter_positive_digits(base: BaseSequence, x: Fraction) -> Iterator[int | PTail]:
    """Greedy positive Cantor digits of ``x``.

    Yields digits; if the remainder becomes exactly 0 or 1 the canonical tail
    tag is yielded last and the generator stops.
    """
    r = Fraction(x)
    if not 0 <= r <= 1:
        raise ValueError(f"x={x} outside [0, 1]")
    n = 0
    while True:
        if r == 0:
            yield PTail.ZERO
            return
        if r == 1:
            yield PTail.MAX
            return
        n += 1
        t = r * base.d(n)
        digit = t.numerator // t.denominator
        r = t - digit
        yield digit


def encode(base: BaseSequence, x, depth: int) -> NegaDigits:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    digits: list[int] = []
    tail = PTail.TRUNC
    for item in iter_positive_digits(base, Fraction(x)):
        if isinstance(item, PTail):
            tail = item
            break
        if len(digits) == depth:
            break
        digits.append(item)
    return from_positive(base, PositiveDigits(tuple(digits), tail))


def decode(base: BaseSequence, x: NegaDigits) -> tuple[Fraction, Fraction]:
    lo, width = positive_value(base, to_positive(base, x))
    return lo, lo + width


def normalize(base: BaseSequence, x: NegaDigits) -> NegaDigits:
    """Drop trailing prefix digits that merely repeat the canonical tail."""
    if not x.exact:
        return x
    y = to_positive(base, x)
    digits = list(y.digits)
    fill_max = y.tail is PTail.MAX
    while digits and digits[-1] == (base.d(len(digits)) - 1 if fill_max else 0):
        digits.pop()
    return from_positive(base, PositiveDigits(tuple(digits), y.tail))


def dual_representation(base: BaseSequence, x: NegaDigits) -> NegaDigits:
    """The other nega representation of a nega-(d_n)-rational number.

    Inputs whose prefix ends in a digit that just continues the tail are
    normalized first, so ``dual(dual(x)) == normalize(x)``.
    """
    if not x.exact:
        raise ValueError("a truncated digit string does not denote a single number")
    y = to_positive(base, normalize(base, x))
    if not y.digits:
        raise EndpointError("endpoint: 0 and 1 have no second representation")
    digits = list(y.digits)
    if y.tail is PTail.ZERO:
        digits[-1] -= 1
        tail = PTail.MAX
    else:
        digits[-1] += 1
        tail = PTail.ZERO
    return from_positive(base, PositiveDigits(tuple(digits), tail))


def shift(base: BaseSequence, y: PositiveDigits, k: int) -> PositiveDigits:
    """Digit shift applied k times: drop the first k digits."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > len(y.digits) and not y.exact:
        raise ValueError(f"cannot shift {k} digits out of a truncated string of length {len(y)}")
    return PositiveDigits(y.digits[k:], y.tail, y.offset + k)


def cylinder_interval(base: BaseSequence, prefix) -> tuple[Fraction, Fraction]:
    """Closed interval of all x whose nega digits start with ``prefix``."""
    prefix = tuple(prefix)
    lo, _ = decode(base, NegaDigits(prefix, Tail.LOWHIGH))
    return lo, lo + Fraction(1, base.radix_product(len(prefix)))
