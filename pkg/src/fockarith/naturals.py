"""Natural-number states and operators.

A natural is a word of digit modes at contiguous sites 1..L.  The
successor for site j adds k**(j-1): a padding stage extends short words
with interior zeros so site j-1 is occupied, then an increment stage
bumps the digit at site j, carrying upward (digit k-1 wraps to 0 and the
next site increments; a fresh leading 1 appears when the carry walks off
the top).  Addition iterates successor powers controlled by the first
register; multiplication interleaves addition with a times-k shift.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .fock_core import (
    BOSON,
    FERMION,
    BasisWord,
    Mode,
    StateVector,
    canonicalize,
    is_digit,
    merge_registers,
    register_modes,
)
from .numerals import (
    NAT,
    InvalidDigit,
    NonCanonical,
    NonContiguousSites,
    Numeral,
)
from .operator_algebra import (
    Annihilate,
    Create,
    DigitEq,
    Family,
    GtZero,
    IDENTITY,
    Occ,
    OperatorExpr,
    Power,
    Projector,
    ResourceTrace,
    Scale,
    SiteSum,
    Unocc,
    adjoint,
    apply,
    product,
    register_family,
    summed,
)
from .fock_core import FockArithError


class MalformedPair(FockArithError):
    pass


class MalformedTriple(FockArithError):
    pass


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def encode_natural(n: Numeral, register: int = 1) -> BasisWord:
    if n.flavor != NAT:
        raise FockArithError(f"expected a natural numeral, got {n.flavor}")
    n.require_canonical()
    modes = [Mode(register, i + 1, d) for i, d in enumerate(n.digits)]
    word, _ = canonicalize(modes, BOSON)
    return word


def decode_natural(word: BasisWord, base: int, register: int = 1) -> Numeral:
    modes = register_modes(word, register)
    if not modes:
        raise NonCanonical("no modes in register; the vacuum is not a numeral")
    by_site: dict[int, int] = {}
    for m in modes:
        if not is_digit(m.symbol):
            raise InvalidDigit(f"non-digit symbol at site {m.site}")
        by_site[m.site] = m.symbol
    length = len(by_site)
    if sorted(by_site) != list(range(1, length + 1)):
        raise NonContiguousSites(f"digit sites {sorted(by_site)} are not 1..L")
    digits = tuple(by_site[s] for s in range(1, length + 1))
    if length > 1 and digits[-1] == 0:
        raise NonCanonical(f"leading zero in {digits}")
    return Numeral(NAT, base, digits)


def raw_digits(word: BasisWord, register: int = 1) -> dict[int, int]:
    """Digit layout by site, tolerating non-canonical intermediate words."""
    return {m.site: m.symbol for m in register_modes(word, register)
            if is_digit(m.symbol)}


# ---------------------------------------------------------------------------
# Operator families
# ---------------------------------------------------------------------------

def _nat_inc(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    if j == 1:
        terms = [product([cr(h + 1, 1), an(h, 1)]) for h in range(k - 1)]
        terms.append(product([Family("nat_inc", 2, k, reg), cr(0, 1), an(k - 1, 1)]))
        return summed(terms)
    terms = [product([cr(h + 1, j), an(h, j)]) for h in range(1, k - 1)]
    terms.append(product([cr(1, j), an(0, j), Projector(Occ(reg, j + 1))]))
    terms.append(product([Family("nat_inc", j + 1, k, reg), cr(0, j), an(k - 1, j)]))
    terms.append(product([Projector(Unocc(reg, j + 1)), cr(1, j), Projector(Unocc(reg, j))]))
    return summed(terms)


def _nat_inc_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    if j == 1:
        terms = [product([cr(h, 1), an(h + 1, 1)]) for h in range(k - 1)]
        # digit-0 guard first so the upward recursion stops on finite words
        terms.append(product([cr(k - 1, 1), an(0, 1),
                              Family("nat_inc_adj", 2, k, reg),
                              Projector(DigitEq(reg, 1, 0))]))
        return summed(terms)
    terms = [product([cr(h, j), an(h + 1, j)]) for h in range(1, k - 1)]
    terms.append(product([Projector(Occ(reg, j + 1)), cr(0, j), an(1, j)]))
    terms.append(product([cr(k - 1, j), an(0, j),
                          Family("nat_inc_adj", j + 1, k, reg),
                          Projector(DigitEq(reg, j, 0))]))
    terms.append(product([Projector(Unocc(reg, j)), an(1, j), Projector(Unocc(reg, j + 1))]))
    return summed(terms)


def _pad_run(reg: int, top: int, bottom: int) -> list[OperatorExpr]:
    """Creations of the zero digit from site `bottom` up to `top`, listed
    highest first (the rightmost factor acts first)."""
    return [Create(Mode(reg, s, 0)) for s in range(top, bottom - 1, -1)]


def _nat_pad(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    if j <= 2:
        return IDENTITY
    terms: list[OperatorExpr] = [
        Projector(Occ(reg, j)),
        product([Projector(Unocc(reg, j)), Projector(GtZero(reg, j - 1))]),
    ]
    for ell in range(2, j - 1):
        terms.append(product(_pad_run(reg, j - 1, ell + 1)
                             + [Projector(Unocc(reg, ell + 1)), Projector(GtZero(reg, ell))]))
    terms.append(product(_pad_run(reg, j - 1, 2) + [Projector(Unocc(reg, 2))]))
    return summed(terms)


def _nat_pad_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    if j <= 2:
        return IDENTITY
    an = lambda s: Annihilate(Mode(reg, s, 0))
    # the forward pad terms never occupy site j, so their adjoints carry an
    # Unocc(j) guard; without it they would strip zeros out of longer words
    guard = Projector(Unocc(reg, j))

    def unpad_run(bottom: int, top: int) -> list[OperatorExpr]:
        return [an(s) for s in range(bottom, top + 1)]

    terms: list[OperatorExpr] = [
        product([Projector(GtZero(reg, j - 1)), Projector(Unocc(reg, j))]),
        Projector(Occ(reg, j)),
    ]
    for ell in range(2, j - 1):
        terms.append(product([Projector(GtZero(reg, ell)), Projector(Unocc(reg, ell + 1))]
                             + unpad_run(ell + 1, j - 1) + [guard]))
    terms.append(product([Projector(Unocc(reg, 2))] + unpad_run(2, j - 1) + [guard]))
    return summed(terms)


def _nat_pad_q(k: int, reg: int, m: int, stats: str) -> OperatorExpr:
    # bottom case keeps only the create branch; a stop branch here would
    # double-count states the enclosing level already passes through
    if m == 2:
        return product([Create(Mode(reg, 2, 0)), Projector(Unocc(reg, 2))])
    inner = summed([
        product([Projector(Unocc(reg, m)), Projector(GtZero(reg, m - 1))]),
        Family("nat_pad_q", m - 1, k, reg),
    ])
    return product([Create(Mode(reg, m, 0)), inner])


def _nat_pad_q_adj(k: int, reg: int, m: int, stats: str) -> OperatorExpr:
    if m == 2:
        return product([Projector(Unocc(reg, 2)), Annihilate(Mode(reg, 2, 0))])
    inner = summed([
        product([Projector(GtZero(reg, m - 1)), Projector(Unocc(reg, m))]),
        Family("nat_pad_q_adj", m - 1, k, reg),
    ])
    return product([inner, Annihilate(Mode(reg, m, 0))])


def _nat_shift_lvl(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    if j == 1:
        return summed([product([cr(h, 2), cr(0, 1), an(h, 1)]) for h in range(k)])
    move = summed([product([cr(h, j + 1), an(h, j)]) for h in range(k)])
    body = product([Family("nat_shift_lvl", j - 1, k, reg), move])
    if stats == FERMION:
        return Scale(Fraction(-1), body)
    return body


def _nat_shift_lvl_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    if j == 1:
        return summed([product([cr(h, 1), an(0, 1), an(h, 2)]) for h in range(k)])
    move = summed([product([cr(h, j), an(h, j + 1)]) for h in range(k)])
    body = product([move, Family("nat_shift_lvl_adj", j - 1, k, reg)])
    if stats == FERMION:
        return Scale(Fraction(-1), body)
    return body


def _nat_shift_sel(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    return product([Family("nat_shift_lvl", j, k, reg), Projector(Unocc(reg, j + 1))])


def _nat_shift_sel_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    # trailing guard: on gap-free words the level-j branch can only invert
    # words of length exactly j+1, so anything occupied above kills it
    return product([Projector(Unocc(reg, j + 1)), Family("nat_shift_lvl_adj", j, k, reg),
                    Projector(Unocc(reg, j + 2))])


register_family("nat_inc", _nat_inc, adjoint="nat_inc_adj")
register_family("nat_inc_adj", _nat_inc_adj)
register_family("nat_pad", _nat_pad, adjoint="nat_pad_adj")
register_family("nat_pad_adj", _nat_pad_adj)
register_family("nat_pad_q", _nat_pad_q, adjoint="nat_pad_q_adj")
register_family("nat_pad_q_adj", _nat_pad_q_adj)
register_family("nat_shift_lvl", _nat_shift_lvl, adjoint="nat_shift_lvl_adj")
register_family("nat_shift_lvl_adj", _nat_shift_lvl_adj)
register_family("nat_shift_sel", _nat_shift_sel, adjoint="nat_shift_sel_adj")
register_family("nat_shift_sel_adj", _nat_shift_sel_adj)


@lru_cache(maxsize=None)
def build_pad(j: int, k: int, register: int = 1, recursive: bool = False) -> OperatorExpr:
    """The zero-padding stage alone (identity for j <= 2)."""
    if not recursive or j <= 2:
        return Family("nat_pad", j, k, register)
    return summed([
        Projector(Occ(register, j)),
        product([Projector(Unocc(register, j)), Projector(GtZero(register, j - 1))]),
        # the trailing guard mirrors the explicit pad's range (site j stays
        # free), so the structural adjoint inherits the junk-killing check
        product([Family("nat_pad_q", j - 1, k, register), Projector(Unocc(register, j))]),
    ])


@lru_cache(maxsize=None)
def build_successor_natural(j: int, k: int, register: int = 1,
                            recursive_pad: bool = False) -> OperatorExpr:
    if j < 1:
        raise FockArithError(f"natural successor needs j >= 1, got {j}")
    return product([Family("nat_inc", j, k, register),
                    build_pad(j, k, register, recursive_pad)])


@lru_cache(maxsize=None)
def build_shift_times_k(k: int, register: int = 1) -> OperatorExpr:
    """The times-k shift: digits move up one site, a zero lands at site 1."""
    return SiteSum("nat_shift_sel", k, register, 1)


def apply_successor_adjoint(j: int, v: StateVector, k: int, stats: str,
                            register: int = 1,
                            trace: ResourceTrace | None = None) -> StateVector:
    return apply(adjoint(build_successor_natural(j, k, register)), v, stats, trace)


# ---------------------------------------------------------------------------
# Addition and multiplication
# ---------------------------------------------------------------------------

def _control_digits(word: BasisWord, register: int) -> tuple[int, ...]:
    layout = raw_digits(word, register)
    if not layout or sorted(layout) != list(range(1, len(layout) + 1)):
        raise MalformedPair(f"register {register} does not hold a numeral word")
    return tuple(layout[s] for s in range(1, len(layout) + 1))


def _add_registers(sv: StateVector, k: int, stats: str, src: int, dst: int,
                   trace: ResourceTrace | None, invert: bool) -> StateVector:
    """Add (or subtract, when invert) the src-register numeral into dst.

    The control digits are read classically per term; the arithmetic on the
    destination register runs entirely through successor operators.
    """
    out = StateVector()
    for word, amp in sv.terms.items():
        digits = _control_digits(word, src)
        factors = []
        for site in range(len(digits), 0, -1):
            d = digits[site - 1]
            if not d:
                continue
            step = build_successor_natural(site, k, dst)
            factors.append(Power(adjoint(step) if invert else step, d))
        if invert:
            factors.reverse()
        result = apply(product(factors), StateVector({word: amp}), stats, trace)
        for w, a in result.terms.items():
            out.add_term(w, a)
    return out


def add_natural(pair: StateVector, k: int, stats: str,
                trace: ResourceTrace | None = None) -> StateVector:
    """|s> x |t>  ->  |s> x |s + t| over registers (1, 2)."""
    _validate_pair(pair, k)
    return _add_registers(pair, k, stats, 1, 2, trace, invert=False)


def subtract_natural(pair: StateVector, k: int, stats: str,
                     trace: ResourceTrace | None = None) -> StateVector:
    """Adjoint of addition: |s> x |t| -> |s> x |t - s|, empty when t < s."""
    _validate_pair(pair, k)
    return _add_registers(pair, k, stats, 1, 2, trace, invert=True)


def _validate_pair(pair: StateVector, k: int) -> None:
    for word in pair.terms:
        for reg in (1, 2):
            try:
                decode_natural(word, k, reg)
            except FockArithError as exc:
                raise MalformedPair(f"register {reg}: {exc}") from exc


def _validate_triple(triple: StateVector, k: int) -> None:
    for word in triple.terms:
        for reg in (1, 2, 3):
            try:
                decode_natural(word, k, reg)
            except FockArithError as exc:
                raise MalformedTriple(f"register {reg}: {exc}") from exc


def multiply_natural(triple: StateVector, k: int, stats: str,
                     trace: ResourceTrace | None = None) -> StateVector:
    """|s, t, x>  ->  |s, t, x + s*t> over registers (1, 2, 3)."""
    _validate_triple(triple, k)
    shift = build_shift_times_k(k, 2)
    unshift = adjoint(shift)
    out = StateVector()
    for word, amp in triple.terms.items():
        digits = _control_digits(word, 1)
        state = StateVector({word: amp})
        for site, d in enumerate(digits, start=1):
            for _ in range(d):
                state = _add_registers(state, k, stats, 2, 3, trace, invert=False)
            if site < len(digits):
                state = apply(shift, state, stats, trace)
        state = apply(Power(unshift, len(digits) - 1), state, stats, trace)
        for w, a in state.terms.items():
            out.add_term(w, a)
    return out


def multiply_natural_adjoint(triple: StateVector, k: int, stats: str,
                             trace: ResourceTrace | None = None) -> StateVector:
    """Adjoint of multiplication: register 3 loses s*t (empty if x < s*t)."""
    shift = build_shift_times_k(k, 2)
    unshift = adjoint(shift)
    out = StateVector()
    for word, amp in triple.terms.items():
        digits = _control_digits(word, 1)
        state = apply(Power(shift, len(digits) - 1), StateVector({word: amp}), stats, trace)
        for site in range(len(digits), 0, -1):
            if site < len(digits):
                state = apply(unshift, state, stats, trace)
            for _ in range(digits[site - 1]):
                state = _add_registers(state, k, stats, 2, 3, trace, invert=True)
                if state.is_zero():
                    break
        for w, a in state.terms.items():
            out.add_term(w, a)
    return out


# ---------------------------------------------------------------------------
# Pair / triple helpers
# ---------------------------------------------------------------------------

def pair_word(s: Numeral, t: Numeral) -> BasisWord:
    return merge_registers([encode_natural(s, 1), encode_natural(t, 2)])


def triple_word(s: Numeral, t: Numeral, x: Numeral) -> BasisWord:
    return merge_registers([encode_natural(s, 1), encode_natural(t, 2),
                            encode_natural(x, 3)])
