"""Human-level numerals bridging basis words, text grammar, and exact values.

Digit strings are stored least-significant first: ``digits[i]`` is the
digit at site ``i + 1`` and ``frac[i]`` the digit at site ``-(i + 1)``.
Text renders most-significant first (``364`` means digits ``(4, 6, 3)``),
with digits ``0-9a-z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .fock_core import FockArithError

NAT = "nat"
INT = "int"
RAT = "rat"
FLAVORS = (NAT, INT, RAT)

_DIGIT_CHARS = "0123456789abcdefghijklmnopqrstuvwxyz"


class InvalidDigit(FockArithError):
    pass


class NonCanonical(FockArithError):
    pass


class NegativeZero(FockArithError):
    pass


class NotKAdic(FockArithError):
    """The fraction's denominator has prime factors foreign to the base."""


class NonContiguousSites(FockArithError):
    pass


class DomainError(FockArithError):
    """The requested operation has no result for these operands."""


@dataclass(frozen=True)
class Numeral:
    """A base-k number: type tag, sign, and digit strings."""

    flavor: str
    base: int
    digits: tuple[int, ...]
    sign: int = 1
    frac: tuple[int, ...] = ()

    def __post_init__(self):
        if self.base < 2:
            raise InvalidDigit(f"base must be >= 2, got {self.base}")
        if self.flavor not in FLAVORS:
            raise FockArithError(f"unknown flavor {self.flavor!r}")
        if not self.digits:
            raise NonCanonical("empty digit string")
        for d in self.digits + self.frac:
            if not 0 <= d < self.base:
                raise InvalidDigit(f"digit {d} out of range for base {self.base}")
        if self.flavor == NAT and (self.sign != 1 or self.frac):
            raise FockArithError("naturals carry no sign or fraction")
        if self.flavor == INT and self.frac:
            raise FockArithError("integers carry no fraction")
        if self.flavor == RAT and not self.frac:
            raise NonCanonical("rationals need at least one fraction digit")

    def is_canonical(self) -> bool:
        if len(self.digits) > 1 and self.digits[-1] == 0:
            return False
        if len(self.frac) > 1 and self.frac[-1] == 0:
            return False
        if self.sign < 0 and self.is_zero():
            return False
        return True

    def require_canonical(self) -> "Numeral":
        if len(self.digits) > 1 and self.digits[-1] == 0:
            raise NonCanonical(f"leading zero in {self.digits}")
        if len(self.frac) > 1 and self.frac[-1] == 0:
            raise NonCanonical(f"trailing zero in fraction {self.frac}")
        if self.sign < 0 and self.is_zero():
            raise NegativeZero("zero must carry the + sign")
        return self

    def is_zero(self) -> bool:
        return not any(self.digits) and not any(self.frac)

    def value(self) -> Fraction:
        k = self.base
        total = Fraction(0)
        for i, d in enumerate(self.digits):
            total += d * Fraction(k) ** i
        for i, d in enumerate(self.frac):
            total += Fraction(d, k ** (i + 1))
        return total * self.sign

    def value_pair(self) -> tuple[int, int]:
        """Exact value as (numerator, exponent): value = numerator / k**exponent."""
        k = self.base
        num = 0
        for d in reversed(self.digits):
            num = num * k + d
        exp = len(self.frac) if self.flavor == RAT else 0
        for d in self.frac:
            num = num * k + d
        return (self.sign * num, exp)

    def text(self) -> str:
        body = "".join(_DIGIT_CHARS[d] for d in reversed(self.digits))
        if self.flavor == RAT:
            body += "." + "".join(_DIGIT_CHARS[d] for d in self.frac)
        if self.flavor == NAT:
            return body
        return ("+" if self.sign > 0 else "-") + body


def _parse_digit(ch: str, base: int) -> int:
    d = _DIGIT_CHARS.find(ch.lower())
    if d < 0 or d >= base:
        raise InvalidDigit(f"character {ch!r} is not a base-{base} digit")
    return d


def parse_numeral(text: str, base: int, flavor: str) -> Numeral:
    """Parse the CLI grammar: ``<digits>``, ``[+|-]<digits>``, ``[+|-]<digits>.<digits>``."""
    raw = text.strip()
    sign = 1
    if flavor in (INT, RAT) and raw[:1] in "+-":
        sign = -1 if raw[0] == "-" else 1
        raw = raw[1:]
    if not raw:
        raise NonCanonical("empty numeral")
    if flavor == RAT:
        if "." not in raw:
            raise NonCanonical("rational numerals need a point: <digits>.<digits>")
        int_part, frac_part = raw.split(".", 1)
        if not int_part or not frac_part:
            raise NonCanonical("both sides of the point need at least one digit")
        digits = tuple(_parse_digit(c, base) for c in reversed(int_part))
        frac = tuple(_parse_digit(c, base) for c in frac_part)
        return Numeral(RAT, base, digits, sign, frac).require_canonical()
    if "." in raw:
        raise NonCanonical(f"unexpected point in {flavor} numeral")
    digits = tuple(_parse_digit(c, base) for c in reversed(raw))
    return Numeral(flavor, base, digits, sign).require_canonical()


def numeral_from_int(n: int, base: int, flavor: str) -> Numeral:
    if flavor == NAT and n < 0:
        raise DomainError(f"naturals cannot be negative: {n}")
    sign = -1 if n < 0 else 1
    mag = abs(n)
    digits = []
    while True:
        digits.append(mag % base)
        mag //= base
        if not mag:
            break
    if flavor == RAT:
        return Numeral(RAT, base, tuple(digits), sign, (0,))
    if flavor == NAT:
        return Numeral(NAT, base, tuple(digits))
    return Numeral(INT, base, tuple(digits), sign)


def numeral_from_fraction(value: Fraction, base: int, flavor: str = RAT) -> Numeral:
    """Exact conversion; raises NotKAdic when no finite base-k expansion exists."""
    if flavor != RAT:
        if value.denominator != 1:
            raise NotKAdic(f"{value} is not an integer")
        return numeral_from_int(value.numerator, base, flavor)
    sign = -1 if value < 0 else 1
    mag = abs(value)
    den = mag.denominator
    exp = 0
    while den > 1:
        g = gcd(den, base)
        if g == 1:
            raise NotKAdic(f"{value} has no finite base-{base} expansion")
        while den % g == 0:
            den //= g
            exp += 1
    # find the least e with mag * k**e integral
    e = 0
    scaled = mag
    while scaled.denominator != 1:
        scaled *= base
        e += 1
    e = max(e, 1)
    num = int(abs(value) * base ** e)
    frac_rev = []
    for _ in range(e):
        frac_rev.append(num % base)
        num //= base
    frac = tuple(reversed(frac_rev))
    # strip trailing zeros but keep at least one fraction digit
    while len(frac) > 1 and frac[-1] == 0:
        frac = frac[:-1]
    int_digits = []
    while True:
        int_digits.append(num % base)
        num //= base
        if not num:
            break
    return Numeral(RAT, base, tuple(int_digits), sign, frac).require_canonical()


def format_raw_digits(site_to_digit: dict[int, int]) -> str:
    """Most-significant-first rendering of a bare digit layout (may include
    leading zeros); used by traces for intermediate, non-canonical words."""
    if not site_to_digit:
        return ""
    hi = max(site_to_digit)
    lo = min(site_to_digit)
    return "".join(_DIGIT_CHARS[site_to_digit.get(s, 0)] for s in range(hi, lo - 1, -1))
