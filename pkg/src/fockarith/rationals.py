"""Finite base-k rational states and operators.

A rational word spans sites -L_t..L_s+1: fraction digits below the radix
point mode at site 0, integer digits above it, the sign on top.  Site
indices keep their arithmetic meaning: the successor for j > 0 adds
k**(j-1) and reuses the signed-integer machinery (it never looks below
site 1); the successor for j < 0 adds k**j through a fraction-side
increment/pad pair.  Fraction carries clean up the trailing zeros they
would otherwise leave, so every successor maps canonical words to
canonical words.

The times-k shift exchanges the point with the top fraction digit and
slides the whole word up one site, deleting a leading integer zero and
appending a trailing fraction zero where the canonical form demands it.
It is realized as a word-level bijection node; a literal
exchange-and-cascade expression is kept alongside for cross-checking the
generic branch.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .fock_core import (
    BOSON,
    FERMION,
    POINT,
    SIGN_MINUS,
    SIGN_PLUS,
    BasisWord,
    FockArithError,
    Mode,
    StateVector,
    canonicalize,
    is_digit,
    merge_registers,
    register_modes,
)
from .integers import (
    SmallNegFlip,
    build_sign_flip,
    minus_nonzero,
    positive_successor,
    word_sign,
)
from .naturals import MalformedPair, MalformedTriple, raw_digits
from .numerals import (
    RAT,
    InvalidDigit,
    NegativeZero,
    NonCanonical,
    NonContiguousSites,
    NotKAdic,
    Numeral,
    numeral_from_fraction,
)
from .operator_algebra import (
    Annihilate,
    AnnihilateNoPhase,
    Create,
    CreateNoPhase,
    CustomOp,
    DigitEq,
    EvalContext,
    Family,
    GtZero,
    NonzeroDigitGeq,
    Occ,
    OperatorExpr,
    Power,
    Projector,
    ResourceTrace,
    SignMinusLenGeq,
    SignPlusAny,
    SiteSum,
    StateEq,
    Unocc,
    adjoint,
    apply,
    product,
    register_family,
    summed,
)


def successor_increment(j: int, k: int) -> Fraction:
    """The value added by the site-j successor; the site-0 slot is skipped."""
    if j == 0:
        raise FockArithError("site 0 holds the point; no successor there")
    return Fraction(k) ** (j - 1) if j > 0 else Fraction(1, k ** (-j))


def next_site(j: int) -> int:
    """Index map for the power law: k successor steps at j equal one at next_site(j)."""
    return 1 if j == -1 else j + 1


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def rat_zero_modes(register: int) -> tuple[Mode, ...]:
    return (Mode(register, 2, SIGN_PLUS), Mode(register, 1, 0),
            Mode(register, 0, POINT), Mode(register, -1, 0))


def encode_rational(n: Numeral, register: int = 1) -> BasisWord:
    if n.flavor != RAT:
        raise FockArithError(f"expected a rational numeral, got {n.flavor}")
    n.require_canonical()
    modes = [Mode(register, i + 1, d) for i, d in enumerate(n.digits)]
    modes.append(Mode(register, len(n.digits) + 1,
                      SIGN_PLUS if n.sign > 0 else SIGN_MINUS))
    modes.append(Mode(register, 0, POINT))
    modes.extend(Mode(register, -(i + 1), d) for i, d in enumerate(n.frac))
    word, _ = canonicalize(modes, BOSON)
    return word


def _split_rational(word: BasisWord, register: int):
    """(sign, int digits 1..Ls, frac digits 1..Lt) or None if not rational-shaped."""
    sign = None
    point = False
    ints: dict[int, int] = {}
    fracs: dict[int, int] = {}
    for m in register_modes(word, register):
        if m.symbol == POINT:
            if m.site != 0 or point:
                return None
            point = True
        elif m.symbol in (SIGN_PLUS, SIGN_MINUS):
            if sign is not None:
                return None
            sign = (1 if m.symbol == SIGN_PLUS else -1, m.site)
        elif is_digit(m.symbol):
            if m.site > 0:
                ints[m.site] = m.symbol
            elif m.site < 0:
                fracs[-m.site] = m.symbol
            else:
                return None
        else:
            return None
    if sign is None or not point or not ints or not fracs:
        return None
    if sorted(ints) != list(range(1, len(ints) + 1)):
        return None
    if sorted(fracs) != list(range(1, len(fracs) + 1)):
        return None
    if sign[1] != len(ints) + 1:
        return None
    return (sign[0],
            tuple(ints[s] for s in range(1, len(ints) + 1)),
            tuple(fracs[s] for s in range(1, len(fracs) + 1)))


def decode_rational(word: BasisWord, base: int, register: int = 1) -> Numeral:
    parts = _split_rational(word, register)
    if parts is None:
        raise NonCanonical("register does not hold a rational-shaped word")
    sign, digits, frac = parts
    if len(digits) > 1 and digits[-1] == 0:
        raise NonCanonical(f"leading zero in integer part {digits}")
    if len(frac) > 1 and frac[-1] == 0:
        raise NonCanonical(f"trailing zero in fraction part {frac}")
    if sign < 0 and not any(digits) and not any(frac):
        raise NegativeZero("zero must be the positive word")
    return Numeral(RAT, base, digits, sign, frac)


# ---------------------------------------------------------------------------
# Fraction-side increment and pad families
# ---------------------------------------------------------------------------

def _frac_inc(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    terms = [product([cr(h + 1, j), an(h, j)]) for h in range(k - 1)]
    if j == -1:
        terms.append(product([Family("int_inc", 1, k, reg), cr(0, -1), an(k - 1, -1)]))
        return summed(terms)
    # a carry at the deepest fraction site must not leave a trailing zero:
    # keep the recreated 0 only when a deeper digit exists, else strip it
    terms.append(product([Family("frac_inc", j + 1, k, reg), cr(0, j), an(k - 1, j),
                          Projector(Occ(reg, j - 1))]))
    terms.append(product([Family("frac_inc", j + 1, k, reg),
                          AnnihilateNoPhase(Mode(reg, j, k - 1)),
                          Projector(Unocc(reg, j - 1))]))
    return summed(terms)


def _frac_inc_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    terms = [product([cr(h, j), an(h + 1, j)]) for h in range(k - 1)]
    if j == -1:
        terms.append(product([cr(k - 1, -1), an(0, -1),
                              Family("int_inc_adj", 1, k, reg),
                              Projector(DigitEq(reg, -1, 0))]))
        return summed(terms)
    terms.append(product([Projector(Occ(reg, j - 1)), cr(k - 1, j), an(0, j),
                          Family("frac_inc_adj", j + 1, k, reg),
                          Projector(DigitEq(reg, j, 0))]))
    terms.append(product([Projector(Unocc(reg, j - 1)),
                          CreateNoPhase(Mode(reg, j, k - 1)),
                          Family("frac_inc_adj", j + 1, k, reg),
                          Projector(Unocc(reg, j))]))
    return summed(terms)


def _frac_pad(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    """Top level of the fraction pad: pass canonical words whose site j is
    already reachable, else open a zero run at j and climb."""
    if j >= -1:
        from .operator_algebra import IDENTITY
        return IDENTITY
    create = CreateNoPhase if stats == FERMION else Create
    terms = [
        Projector(GtZero(reg, j)),
        product([Projector(DigitEq(reg, j, 0)), Projector(Occ(reg, j - 1))]),
        product([Family("frac_pad_climb", j + 1, k, reg), create(Mode(reg, j, 0)),
                 Projector(Unocc(reg, j))]),
    ]
    return summed(terms)


def _frac_pad_climb(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    """Upward padding run; stops at the first nonzero digit (a zero stop
    would make the pad non-injective on zero-run words)."""
    if j >= -1:
        from .operator_algebra import IDENTITY
        return IDENTITY
    create = CreateNoPhase if stats == FERMION else Create
    return summed([
        Projector(GtZero(reg, j)),
        product([Family("frac_pad_climb", j + 1, k, reg), create(Mode(reg, j, 0)),
                 Projector(Unocc(reg, j))]),
    ])


def _frac_pad_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    if j >= -1:
        from .operator_algebra import IDENTITY
        return IDENTITY
    annihilate = AnnihilateNoPhase if stats == FERMION else Annihilate
    terms = [
        Projector(GtZero(reg, j)),
        product([Projector(Occ(reg, j - 1)), Projector(DigitEq(reg, j, 0))]),
        # the pad opened the run at the new deepest site, so its adjoint
        # only fires when nothing sits below j
        product([Projector(Unocc(reg, j)), annihilate(Mode(reg, j, 0)),
                 Family("frac_pad_climb_adj", j + 1, k, reg),
                 Projector(Unocc(reg, j - 1))]),
    ]
    return summed(terms)


def _frac_pad_climb_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    if j >= -1:
        from .operator_algebra import IDENTITY
        return IDENTITY
    annihilate = AnnihilateNoPhase if stats == FERMION else Annihilate
    return summed([
        Projector(GtZero(reg, j)),
        product([Projector(Unocc(reg, j)), annihilate(Mode(reg, j, 0)),
                 Family("frac_pad_climb_adj", j + 1, k, reg)]),
    ])


def _rat_move_chain(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    """Move site j one step up, then recurse downward while sites remain."""
    symbols = list(range(k)) + [SIGN_PLUS, SIGN_MINUS, POINT]
    move = summed([product([Create(Mode(reg, j + 1, sym)), Annihilate(Mode(reg, j, sym))])
                   for sym in symbols])
    return product([
        summed([
            product([Family("rat_move_chain", j - 1, k, reg), Projector(Occ(reg, j - 1))]),
            Projector(Unocc(reg, j - 1)),
        ]),
        move,
    ])


register_family("frac_inc", _frac_inc, adjoint="frac_inc_adj")
register_family("frac_inc_adj", _frac_inc_adj)
register_family("frac_pad", _frac_pad, adjoint="frac_pad_adj")
register_family("frac_pad_adj", _frac_pad_adj)
register_family("frac_pad_climb", _frac_pad_climb, adjoint="frac_pad_climb_adj")
register_family("frac_pad_climb_adj", _frac_pad_climb_adj)
register_family("rat_move_chain", _rat_move_chain)


@lru_cache(maxsize=None)
def fraction_successor(j: int, k: int, register: int = 1) -> OperatorExpr:
    """Positive-branch successor for a fraction site (adds k**j, j < 0)."""
    return product([Family("frac_inc", j, k, register),
                    Family("frac_pad", j, k, register),
                    Projector(SignPlusAny(register))])


def _rat_positive_successor(site: int, k: int, register: int) -> OperatorExpr:
    if site > 0:
        return positive_successor(site, k, register)
    return fraction_successor(site, k, register)


@lru_cache(maxsize=None)
def build_successor_rational(j: int, k: int, register: int = 1) -> OperatorExpr:
    """Bilateral successor on signed rational words (j != 0)."""
    if j == 0:
        raise FockArithError("site 0 holds the point; no successor there")
    plus_branch = _rat_positive_successor(j, k, register)
    flip_w = build_sign_flip(k, register)
    outcome = summed([
        product([minus_nonzero(register), flip_w]),
        Projector(StateEq(register, rat_zero_modes(register))),
    ])
    stay_negative = product([
        outcome,
        adjoint(plus_branch),
        flip_w,
        Projector(SignMinusLenGeq(register, 1)),
        Projector(NonzeroDigitGeq(register, j)),
    ])
    cross_zero = SmallNegFlip(
        j, k, register,
        lambda site: _rat_positive_successor(site, k, register),
        min_guard_site=j)
    return summed([plus_branch, stay_negative, cross_zero])


# ---------------------------------------------------------------------------
# The times-k shift
# ---------------------------------------------------------------------------

class RationalShift(CustomOp):
    """Basis bijection multiplying the value by k (or dividing, inverted).

    Exchanges the point with the top fraction digit and slides everything
    one site up; a leading integer zero is deleted and a trailing fraction
    zero appended exactly when the canonical form requires.  |+0.0> is the
    fixed point.  Output amplitude is +1 under both statistics (the
    fermion sign corrections are folded in).
    """

    def __init__(self, k: int, register: int, invert: bool = False):
        self.k = k
        self.register = register
        self.invert = invert

    def _emit(self, ctx: EvalContext, annihilations: int, creations: int) -> None:
        if ctx.trace is not None:
            for _ in range(annihilations):
                ctx.trace.record("annihilate", self.register, 0, "*", True)
            for _ in range(creations):
                ctx.trace.record("create", self.register, 0, "*", True)

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        parts = _split_rational(word, self.register)
        if parts is None:
            return []
        sign, ints, fracs = parts
        if not self.invert:
            head = fracs[0]
            new_fracs = fracs[1:] if len(fracs) > 1 else (0,)
            new_ints = (head,) if ints == (0,) else (head,) + ints
        else:
            head = ints[0]
            new_ints = ints[1:] if len(ints) > 1 else (0,)
            new_fracs = (head,) if fracs == (0,) else (head,) + fracs
        moved = len(ints) + len(fracs) + 2
        self._emit(ctx, moved, moved)
        modes = [Mode(self.register, i + 1, d) for i, d in enumerate(new_ints)]
        modes.append(Mode(self.register, len(new_ints) + 1,
                          SIGN_PLUS if sign > 0 else SIGN_MINUS))
        modes.append(Mode(self.register, 0, POINT))
        modes.extend(Mode(self.register, -(i + 1), d) for i, d in enumerate(new_fracs))
        others = [m for m in word.modes if m.register != self.register]
        new_word, _ = canonicalize(modes + others, BOSON)
        return [(new_word, Fraction(1))]

    def adjoint_expr(self) -> OperatorExpr:
        return RationalShift(self.k, self.register, not self.invert)


@lru_cache(maxsize=None)
def build_shift_rational(k: int, register: int = 1) -> OperatorExpr:
    return RationalShift(k, register)


@lru_cache(maxsize=None)
def build_shift_rational_literal(k: int, register: int = 1) -> OperatorExpr:
    """Literal exchange-and-cascade form of the shift, valid on words with a
    nonzero integer part and at least two fraction digits (the branches
    that delete or insert zeros are under-determined as written and live
    only in the word-level node)."""
    cr = lambda h, s: Create(Mode(register, s, h))
    an = lambda h, s: Annihilate(Mode(register, s, h))
    exchange = summed([
        product([cr(h, 0), an(POINT, 0), cr(POINT, -1), an(h, -1)])
        for h in range(k)
    ])
    return product([SiteSum("rat_shift_top", k, register, 1), exchange])


def _rat_shift_top(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    return product([Family("rat_move_chain", j, k, reg),
                    Projector(Occ(reg, j)), Projector(Unocc(reg, j + 1))])


register_family("rat_shift_top", _rat_shift_top)


# ---------------------------------------------------------------------------
# Addition and multiplication
# ---------------------------------------------------------------------------

def _rat_control(word: BasisWord, register: int):
    parts = _split_rational(word, register)
    if parts is None:
        raise MalformedPair(f"register {register} does not hold a rational word")
    sign, ints, fracs = parts
    sites = {i + 1: d for i, d in enumerate(ints)}
    sites.update({-(i + 1): d for i, d in enumerate(fracs)})
    return sign, sites


def _add_rat(sv: StateVector, k: int, stats: str, src: int, dst: int,
             trace: ResourceTrace | None, invert: bool) -> StateVector:
    out = StateVector()
    for word, amp in sv.terms.items():
        sign, sites = _rat_control(word, src)
        forward = (sign > 0) != invert
        factors = []
        for site in sorted(sites, reverse=True):
            d = sites[site]
            if not d:
                continue
            step = build_successor_rational(site, k, dst)
            factors.append(Power(step if forward else adjoint(step), d))
        if not forward:
            factors.reverse()
        result = apply(product(factors), StateVector({word: amp}), stats, trace)
        for w, a in result.terms.items():
            out.add_term(w, a)
    return out


def _validate_rat_registers(sv: StateVector, k: int, registers, exc) -> None:
    for word in sv.terms:
        for reg in registers:
            try:
                decode_rational(word, k, reg)
            except FockArithError as err:
                raise exc(f"register {reg}: {err}") from err


def add_rational(pair: StateVector, k: int, stats: str,
                 trace: ResourceTrace | None = None) -> StateVector:
    """|p> x |q> -> |p> x |q + p|; unitary on the pair space."""
    _validate_rat_registers(pair, k, (1, 2), MalformedPair)
    return _add_rat(pair, k, stats, 1, 2, trace, invert=False)


def subtract_rational(pair: StateVector, k: int, stats: str,
                      trace: ResourceTrace | None = None) -> StateVector:
    _validate_rat_registers(pair, k, (1, 2), MalformedPair)
    return _add_rat(pair, k, stats, 1, 2, trace, invert=True)


def multiply_rational(triple: StateVector, k: int, stats: str,
                      trace: ResourceTrace | None = None) -> StateVector:
    """|p, q, r> -> |p, q, r + p*q|; unitary on the triple space."""
    _validate_rat_registers(triple, k, (1, 2, 3), MalformedTriple)
    return _multiply_rat(triple, k, stats, trace, invert=False)


def multiply_rational_adjoint(triple: StateVector, k: int, stats: str,
                              trace: ResourceTrace | None = None) -> StateVector:
    _validate_rat_registers(triple, k, (1, 2, 3), MalformedTriple)
    return _multiply_rat(triple, k, stats, trace, invert=True)


def _multiply_rat(triple: StateVector, k: int, stats: str,
                  trace: ResourceTrace | None, invert: bool) -> StateVector:
    shift = build_shift_rational(k, 2)
    unshift = adjoint(shift)
    out = StateVector()
    for word, amp in triple.terms.items():
        sign, sites = _rat_control(word, 1)
        frac_len = -min(sites)
        int_len = max(sites)
        order = sorted(sites)
        state = StateVector({word: amp})
        if not invert:
            state = apply(Power(unshift, frac_len), state, stats, trace)
            for pos, site in enumerate(order):
                for _ in range(sites[site]):
                    state = _add_rat(state, k, stats, 2, 3, trace, invert=(sign < 0))
                if pos < len(order) - 1:
                    state = apply(shift, state, stats, trace)
            state = apply(Power(unshift, int_len - 1), state, stats, trace)
        else:
            state = apply(Power(shift, int_len - 1), state, stats, trace)
            for pos, site in enumerate(reversed(order)):
                if pos:
                    state = apply(unshift, state, stats, trace)
                for _ in range(sites[site]):
                    state = _add_rat(state, k, stats, 2, 3, trace, invert=(sign > 0))
            state = apply(Power(shift, frac_len), state, stats, trace)
        for w, a in state.terms.items():
            out.add_term(w, a)
    return out


# ---------------------------------------------------------------------------
# Division absence
# ---------------------------------------------------------------------------

def check_division_absence_rational(s: Numeral, x: Numeral, digit_bound: int,
                                    scan_digit_bound: int, k: int,
                                    stats: str = BOSON) -> dict:
    """Two routes to 'no t with multiply(s, t, 0) = (s, t, x)'.

    The arithmetic route solves s*t = x exactly and asks whether t has a
    finite base-k expansion within digit_bound digits.  The operator route
    scans every canonical word of at most scan_digit_bound digits through
    the multiply operator itself.
    """
    s_val, x_val = s.value(), x.value()
    arithmetic_witness = None
    if s_val != 0:
        t_val = x_val / s_val
        try:
            t_num = numeral_from_fraction(t_val, k, RAT)
            if len(t_num.digits) + len(t_num.frac) <= digit_bound:
                arithmetic_witness = t_num.text()
        except NotKAdic:
            arithmetic_witness = None
    zero = numeral_from_fraction(Fraction(0), k, RAT)
    target = encode_rational(x, 3).modes
    scan_witnesses = []
    scanned = 0
    for t_num in rational_span_numerals(k, scan_digit_bound):
        scanned += 1
        word = merge_registers([encode_rational(s, 1), encode_rational(t_num, 2),
                                encode_rational(zero, 3)])
        result = multiply_rational(StateVector.from_word(word), k, stats)
        res_word, amp = result.single_word()
        if tuple(m for m in res_word.modes if m.register == 3) == tuple(target) and amp == 1:
            scan_witnesses.append(t_num.text())
    return {"multiplier": s.text(), "target": x.text(),
            "arithmetic_witness": arithmetic_witness,
            "scan_digit_bound": scan_digit_bound, "scanned": scanned,
            "scan_witnesses": scan_witnesses}


def rational_span_numerals(k: int, total_digits: int):
    """All canonical rational numerals with len(int) + len(frac) <= bound."""
    from itertools import product as iproduct

    for ls in range(1, total_digits):
        for lt in range(1, total_digits - ls + 1):
            for digits in iproduct(range(k), repeat=ls):
                if ls > 1 and digits[-1] == 0:
                    continue
                for frac in iproduct(range(k), repeat=lt):
                    if lt > 1 and frac[-1] == 0:
                        continue
                    for sign in (1, -1):
                        if sign < 0 and not any(digits) and not any(frac):
                            continue
                        yield Numeral(RAT, k, digits, sign, frac)


# ---------------------------------------------------------------------------
# Pair / triple helpers
# ---------------------------------------------------------------------------

def pair_word_rat(p: Numeral, q: Numeral) -> BasisWord:
    return merge_registers([encode_rational(p, 1), encode_rational(q, 2)])


def triple_word_rat(p: Numeral, q: Numeral, r: Numeral) -> BasisWord:
    return merge_registers([encode_rational(p, 1), encode_rational(q, 2),
                            encode_rational(r, 3)])
