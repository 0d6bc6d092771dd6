"""Fock-space basis words and sparse state vectors with exact amplitudes.

A mode is a particle slot labelled (register, site, symbol).  Symbols are
plain ints: digit values 0..k-1, plus three sentinels for the sign and
radix-point symbols.  Words keep their modes in canonical order (registers
ascending, sites descending within a register) and hold at most one
particle per (register, site).

Registers model distinguishable tensor factors.  Fermionic sign tracking
is therefore per register: permutation parity counts inversions between
modes of the same register only, and operators acting on different
registers commute under both statistics.  Each register also holds at most
one sign symbol; a creation that would add a second one annihilates the
term (such words lie outside the modelled space and its intermediate
extensions, exactly like doubly occupied sites).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

SIGN_PLUS = -1
SIGN_MINUS = -2
POINT = -3

BOSON = "boson"
FERMION = "fermion"
STATISTICS = (BOSON, FERMION)

_SYMBOL_TEXT = {SIGN_PLUS: "+", SIGN_MINUS: "-", POINT: "."}


class FockArithError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateSite(FockArithError):
    """Two modes share the same (register, site) slot."""


def is_digit(symbol: int) -> bool:
    return symbol >= 0


def symbol_text(symbol: int) -> str:
    return _SYMBOL_TEXT.get(symbol, str(symbol))


def symbol_from_text(text: str) -> int:
    for sym, rendered in _SYMBOL_TEXT.items():
        if text == rendered:
            return sym
    return int(text)


class Mode(NamedTuple):
    register: int
    site: int
    symbol: int


class BasisWord(NamedTuple):
    """One Fock basis state: ordered modes plus a fermion phase of +-1."""

    modes: tuple[Mode, ...]
    phase: int = 1


VACUUM = BasisWord((), 1)


def _order_key(mode: Mode) -> tuple[int, int]:
    return (mode.register, -mode.site)


def canonicalize(modes: Iterable[Mode], stats: str) -> tuple[BasisWord, int]:
    """Sort modes into canonical order and return (word, permutation phase).

    The phase is the parity of the sorting permutation restricted to
    same-register pairs (-1 powers for fermions, always +1 for bosons).
    Idempotent on sorted input.
    """
    seq = list(modes)
    seen = set()
    for m in seq:
        slot = (m.register, m.site)
        if slot in seen:
            raise DuplicateSite(f"two modes at register={m.register} site={m.site}")
        seen.add(slot)
    inversions = 0
    if stats == FERMION:
        for i in range(len(seq)):
            for j in range(i + 1, len(seq)):
                if seq[i].register == seq[j].register and _order_key(seq[i]) > _order_key(seq[j]):
                    inversions += 1
    ordered = tuple(sorted(seq, key=_order_key))
    phase = -1 if inversions % 2 else 1
    return BasisWord(ordered, 1), phase


def create_on_word(word: BasisWord, mode: Mode, stats: str) -> tuple[BasisWord, int] | None:
    """Apply a single creation operator to a word.

    Returns (new word, sign) or None when the result leaves the modelled
    space: the slot is occupied, or the register would acquire a second
    sign symbol.  The sign is the per-register anticommutation parity of
    moving the new operator to its canonical slot.
    """
    modes = word.modes
    reg, site, sym = mode
    adds_sign = sym == SIGN_PLUS or sym == SIGN_MINUS
    pos = -1
    parity = 0
    for i, m in enumerate(modes):
        same_reg = m.register == reg
        if same_reg:
            if m.site == site:
                return None
            if adds_sign and (m.symbol == SIGN_PLUS or m.symbol == SIGN_MINUS):
                return None
        if pos < 0:
            if m.register > reg or (same_reg and m.site < site):
                pos = i
            elif same_reg:
                parity += 1
    if pos < 0:
        pos = len(modes)
    sign = -1 if (stats == FERMION and parity & 1) else 1
    return BasisWord(modes[:pos] + (mode,) + modes[pos:], 1), sign


def annihilate_on_word(word: BasisWord, mode: Mode, stats: str) -> tuple[BasisWord, int] | None:
    """Apply a single annihilation operator; None when the exact mode is absent."""
    modes = word.modes
    reg, site, sym = mode
    parity = 0
    for i, m in enumerate(modes):
        if m.register == reg:
            if m.site == site:
                if m.symbol != sym:
                    return None
                sign = -1 if (stats == FERMION and parity & 1) else 1
                return BasisWord(modes[:i] + modes[i + 1:], 1), sign
            parity += 1
    return None


class StateVector:
    """Finite sparse rational-linear combination of canonical basis words."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[BasisWord, Fraction] | None = None):
        self.terms: dict[BasisWord, Fraction] = {}
        if terms:
            for word, amp in terms.items():
                if amp:
                    self.terms[word] = Fraction(amp)

    @classmethod
    def from_word(cls, word: BasisWord, amplitude: Fraction | int = 1) -> "StateVector":
        sv = cls()
        amp = Fraction(amplitude) * word.phase
        if amp:
            sv.terms[BasisWord(word.modes, 1)] = amp
        return sv

    @classmethod
    def zero(cls) -> "StateVector":
        return cls()

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> Iterator[tuple[BasisWord, Fraction]]:
        return iter(self.terms.items())

    def add_term(self, word: BasisWord, amplitude: Fraction) -> None:
        current = self.terms.get(word)
        total = amplitude if current is None else current + amplitude
        if total:
            self.terms[word] = total
        elif current is not None:
            del self.terms[word]

    def __add__(self, other: "StateVector") -> "StateVector":
        out = StateVector(dict(self.terms))
        for word, amp in other.terms.items():
            out.add_term(word, amp)
        return out

    def __sub__(self, other: "StateVector") -> "StateVector":
        out = StateVector(dict(self.terms))
        for word, amp in other.terms.items():
            out.add_term(word, -amp)
        return out

    def scaled(self, factor: Fraction | int) -> "StateVector":
        factor = Fraction(factor)
        if not factor:
            return StateVector()
        return StateVector({w: a * factor for w, a in self.terms.items()})

    def single_word(self) -> tuple[BasisWord, Fraction]:
        """The (word, amplitude) of a one-term state; raises otherwise."""
        if len(self.terms) != 1:
            raise FockArithError(f"state has {len(self.terms)} terms, expected exactly 1")
        return next(iter(self.terms.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):  # pragma: no cover - states are not meant to be dict keys
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "StateVector(0)"
        bits = []
        for word, amp in sorted(self.terms.items()):
            modes = ",".join(
                f"{m.register}:{m.site}:{symbol_text(m.symbol)}" for m in word.modes
            )
            bits.append(f"{amp}*|{modes}>")
        return "StateVector(" + " + ".join(bits) + ")"


def apply_create(v: StateVector, mode: Mode, stats: str) -> StateVector:
    out = StateVector()
    for word, amp in v.terms.items():
        res = create_on_word(word, mode, stats)
        if res is not None:
            new_word, sign = res
            out.add_term(new_word, amp * sign)
    return out


def apply_annihilate(v: StateVector, mode: Mode, stats: str) -> StateVector:
    out = StateVector()
    for word, amp in v.terms.items():
        res = annihilate_on_word(word, mode, stats)
        if res is not None:
            new_word, sign = res
            out.add_term(new_word, amp * sign)
    return out


def inner_product(a: StateVector, b: StateVector) -> Fraction:
    """<a|b> over exact rationals; canonical words are orthonormal."""
    if len(b.terms) < len(a.terms):
        a, b = b, a
    total = Fraction(0)
    for word, amp in a.terms.items():
        other = b.terms.get(word)
        if other is not None:
            total += amp * other
    return total


def max_site_extent(word: BasisWord) -> int:
    """Largest |site| over the word's modes (at least 1 for the vacuum)."""
    extent = 1
    for m in word.modes:
        extent = max(extent, abs(m.site))
    return extent


def register_modes(word: BasisWord, register: int) -> tuple[Mode, ...]:
    return tuple(m for m in word.modes if m.register == register)


def merge_registers(words: Iterable[BasisWord]) -> BasisWord:
    """Combine single-register words (distinct registers) into one word."""
    modes: list[Mode] = []
    for w in words:
        modes.extend(w.modes)
    modes.sort(key=_order_key)
    return BasisWord(tuple(modes), 1)


def dump_state(v: StateVector) -> str:
    """Render a state in the line-based dump format (one mode per line)."""
    blocks = []
    for word, amp in sorted(v.terms.items()):
        lines = [f"amp={amp.numerator}/{amp.denominator}"]
        for m in word.modes:
            lines.append(f"reg={m.register} site={m.site} sym={symbol_text(m.symbol)}")
        lines.append(f"phase=+1" if word.phase >= 0 else "phase=-1")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_state(text: str) -> StateVector:
    sv = StateVector()
    for block in text.strip().split("\n\n"):
        amp = Fraction(1)
        modes: list[Mode] = []
        phase = 1
        for line in block.strip().splitlines():
            line = line.strip()
            if line.startswith("amp="):
                num, den = line[4:].split("/")
                amp = Fraction(int(num), int(den))
            elif line.startswith("phase="):
                phase = int(line[6:])
            elif line.startswith("reg="):
                fields = dict(part.split("=") for part in line.split())
                modes.append(Mode(int(fields["reg"]), int(fields["site"]),
                                  symbol_from_text(fields["sym"])))
        word, _ = canonicalize(modes, BOSON)
        sv.add_term(word, amp * phase)
    return sv
