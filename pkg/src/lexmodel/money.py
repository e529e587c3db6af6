"""Fixed-point money and rate arithmetic.

Amounts are held as integer micro-units (1 UAH = 1,000,000 micros) and rates
as integer ten-thousandths.  Every figure the models work with is a
two-decimal amount multiplied by a rate of at most four decimals, so the
products land exactly on the micro grid and no binary floating point is ever
involved.  Rounding happens in two places only: display (half-up to two
decimals or whole percent) and :func:`mul_rate` when an operand falls outside
that exactness envelope.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

MICROS_PER_UNIT = 1_000_000
RATE_SCALE = 10_000

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

_MONEY_RE = re.compile(r"-?\d+(\.\d{1,6})?")
_RATE_RE = re.compile(r"-?\d+(\.\d{1,4})?")


class MoneyParseError(ValueError):
    """Raised when a decimal string cannot be turned into Money or Rate."""

    def __init__(self, token: str, reason: str) -> None:
        super().__init__(f"{reason}: {token!r}")
        self.token = token
        self.reason = reason


class MoneyOverflowError(ArithmeticError):
    """Raised when a result leaves the signed 64-bit micro range."""


def _checked(micros: int) -> int:
    if not INT64_MIN <= micros <= INT64_MAX:
        raise MoneyOverflowError(f"{micros} micros is outside the signed 64-bit range")
    return micros


def _round_half_up(numerator: int, denominator: int) -> int:
    """Integer quotient rounded half away from zero."""
    q, r = divmod(abs(numerator), denominator)
    if 2 * r >= denominator:
        q += 1
    return -q if (numerator < 0) != (denominator < 0) else q


@dataclass(frozen=True, order=True)
class Money:
    """An exact amount of currency in micro-units."""

    micros: int

    def __post_init__(self) -> None:
        if isinstance(self.micros, bool) or not isinstance(self.micros, int):
            raise TypeError(f"Money micros must be int, got {type(self.micros).__name__}")
        _checked(self.micros)

    @classmethod
    def parse(cls, text: str) -> Money:
        return parse_money(text)

    @classmethod
    def whole(cls, units: int) -> Money:
        return cls(_checked(units * MICROS_PER_UNIT))

    @property
    def is_zero(self) -> bool:
        return self.micros == 0

    def decimals(self) -> int:
        """Number of significant fractional digits (0..6)."""
        frac = abs(self.micros) % MICROS_PER_UNIT
        if frac == 0:
            return 0
        digits = 6
        while frac % 10 == 0:
            frac //= 10
            digits -= 1
        return digits

    def to_fraction(self) -> Fraction:
        return Fraction(self.micros, MICROS_PER_UNIT)

    def __add__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(_checked(self.micros + other.micros))

    def __sub__(self, other: Money) -> Money:
        if not isinstance(other, Money):
            return NotImplemented
        return Money(_checked(self.micros - other.micros))

    def __neg__(self) -> Money:
        return Money(_checked(-self.micros))

    def __abs__(self) -> Money:
        return Money(_checked(abs(self.micros)))

    def __str__(self) -> str:
        return format_money_full(self)


@dataclass(frozen=True, order=True)
class Rate:
    """An exact rate with at most four fractional digits (stored per 10^-4)."""

    units: int

    def __post_init__(self) -> None:
        if isinstance(self.units, bool) or not isinstance(self.units, int):
            raise TypeError(f"Rate units must be int, got {type(self.units).__name__}")

    @classmethod
    def parse(cls, text: str) -> Rate:
        return parse_rate(text)

    @classmethod
    def one(cls) -> Rate:
        return cls(RATE_SCALE)

    def to_fraction(self) -> Fraction:
        return Fraction(self.units, RATE_SCALE)

    def __add__(self, other: Rate) -> Rate:
        if not isinstance(other, Rate):
            return NotImplemented
        return Rate(self.units + other.units)

    def __sub__(self, other: Rate) -> Rate:
        if not isinstance(other, Rate):
            return NotImplemented
        return Rate(self.units - other.units)

    def __str__(self) -> str:
        sign = "-" if self.units < 0 else ""
        whole, frac = divmod(abs(self.units), RATE_SCALE)
        if frac == 0:
            return f"{sign}{whole}"
        return f"{sign}{whole}.{frac:04d}".rstrip("0")


def _parse_fixed(text: str, pattern: re.Pattern[str], places: int, what: str) -> int:
    if not isinstance(text, str):
        raise MoneyParseError(repr(text), f"{what} must be given as a decimal string")
    token = text.strip()
    if not pattern.fullmatch(token):
        if re.fullmatch(r"-?\d+\.\d+", token):
            raise MoneyParseError(token, f"more than {places} fractional digits in {what}")
        raise MoneyParseError(token, f"malformed {what}")
    negative = token.startswith("-")
    body = token.lstrip("-")
    whole, _, frac = body.partition(".")
    value = int(whole) * 10**places + int(frac.ljust(places, "0") or "0")
    return -value if negative else value


def parse_money(text: str) -> Money:
    """Parse ``-?\\d+(\\.\\d{1,6})?`` into an exact :class:`Money`.

    >>> parse_money("1257313.71").micros
    1257313710000
    """
    micros = _parse_fixed(text, _MONEY_RE, 6, "amount")
    if not INT64_MIN <= micros <= INT64_MAX:
        raise MoneyParseError(text.strip(), "amount overflows the 64-bit micro range")
    return Money(micros)


def parse_rate(text: str) -> Rate:
    """Parse a decimal rate with at most four fractional digits."""
    return Rate(_parse_fixed(text, _RATE_RE, 4, "rate"))


def mul_rate(m: Money, r: Rate) -> Money:
    """Multiply an amount by a rate.

    Exact whenever the amount has at most two decimals (the rate always has at
    most four).  Otherwise the product is rounded half-up onto the micro grid;
    this is the only place arithmetic rounds.
    """
    return Money(_checked(_round_half_up(m.micros * r.units, RATE_SCALE)))


def approx_eq(a: Money, b: Money, tol: Money) -> bool:
    """True iff ``|a - b| < tol`` (strict)."""
    if tol.micros < 0:
        raise ValueError("tolerance must be non-negative")
    return abs(a.micros - b.micros) < tol.micros


def format_money_full(m: Money) -> str:
    """Render at full micro precision, e.g. ``226316.467800``."""
    sign = "-" if m.micros < 0 else ""
    whole, frac = divmod(abs(m.micros), MICROS_PER_UNIT)
    return f"{sign}{whole}.{frac:06d}"


def format_fraction_2dp(value: Fraction) -> str:
    """Half-up (away from zero) rendering of an exact rational to 2 decimals."""
    cents = _round_half_up(value.numerator * 100, value.denominator)
    sign = "-" if cents < 0 else ""
    whole, frac = divmod(abs(cents), 100)
    return f"{sign}{whole}.{frac:02d}"


def format_money_2dp(m: Money) -> str:
    """Half-up rendering with exactly two decimals and a '.' separator."""
    return format_fraction_2dp(m.to_fraction())


def format_percent_0dp(numerator: int, denominator: int) -> str:
    """``100*numerator/denominator`` rounded half-up to a whole percent."""
    if denominator < 1:
        raise ValueError("denominator must be positive")
    if not 0 <= numerator <= denominator:
        raise ValueError("numerator must lie in [0, denominator]")
    return f"{_round_half_up(100 * numerator, denominator)}%"
