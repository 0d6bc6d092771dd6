"""Signed-number states and operators.

An integer word carries its digits at sites 1..L and one sign mode at site
L+1; zero is represented by the positive word only.  The successor for
site j splits into three branches: a natural-style increment on
nonnegative words (the padding stage consumes the sign, the increment
stage recreates it one site up when a carry or fresh leading digit needs
it), a magnitude-decrement on negative words that stay negative, and a
lazily instantiated flip branch for negative words that cross zero.
Addition iterates successor powers with sign-directed exponents and is
unitary; multiplication follows the natural-number recipe with the
sign-aware shift.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .fock_core import (
    BOSON,
    FERMION,
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
from .naturals import MalformedPair, MalformedTriple, raw_digits
from .numerals import (
    INT,
    InvalidDigit,
    NegativeZero,
    NonCanonical,
    NonContiguousSites,
    Numeral,
)
from .operator_algebra import (
    Annihilate,
    Create,
    CustomOp,
    DigitEq,
    EvalContext,
    Family,
    GtZero,
    NonzeroDigitGeq,
    NumOcc,
    Occ,
    OperatorExpr,
    Power,
    Projector,
    ResourceTrace,
    Scale,
    SignMinusLenGeq,
    SignPlusAny,
    SiteSum,
    StateEq,
    Unocc,
    _apply_node,
    adjoint,
    apply,
    product,
    register_family,
    summed,
)


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def encode_integer(n: Numeral, register: int = 1) -> BasisWord:
    if n.flavor != INT:
        raise FockArithError(f"expected an integer numeral, got {n.flavor}")
    n.require_canonical()
    modes = [Mode(register, i + 1, d) for i, d in enumerate(n.digits)]
    modes.append(Mode(register, len(n.digits) + 1,
                      SIGN_PLUS if n.sign > 0 else SIGN_MINUS))
    word, _ = canonicalize(modes, BOSON)
    return word


def decode_integer(word: BasisWord, base: int, register: int = 1) -> Numeral:
    modes = register_modes(word, register)
    by_site: dict[int, int] = {}
    sign_site = None
    sign = 0
    for m in modes:
        if is_digit(m.symbol):
            by_site[m.site] = m.symbol
        elif m.symbol in (SIGN_PLUS, SIGN_MINUS):
            if sign_site is not None:
                raise NonCanonical("two sign modes in one register")
            sign_site = m.site
            sign = 1 if m.symbol == SIGN_PLUS else -1
        else:
            raise InvalidDigit(f"unexpected symbol at site {m.site}")
    if sign_site is None:
        raise NonCanonical("no sign mode")
    length = len(by_site)
    if sorted(by_site) != list(range(1, length + 1)):
        raise NonContiguousSites(f"digit sites {sorted(by_site)} are not 1..L")
    if sign_site != length + 1:
        raise NonCanonical(f"sign at site {sign_site}, expected {length + 1}")
    digits = tuple(by_site[s] for s in range(1, length + 1))
    if length > 1 and digits[-1] == 0:
        raise NonCanonical(f"leading zero in {digits}")
    if sign < 0 and not any(digits):
        raise NegativeZero("zero must be the positive word")
    return Numeral(INT, base, digits, sign)


def word_sign(word: BasisWord, register: int = 1) -> tuple[int, int] | None:
    """(sign, site) of the register's sign mode, or None."""
    for m in register_modes(word, register):
        if m.symbol == SIGN_PLUS:
            return (1, m.site)
        if m.symbol == SIGN_MINUS:
            return (-1, m.site)
    return None


def zero_word_modes(register: int) -> tuple[Mode, ...]:
    return (Mode(register, 2, SIGN_PLUS), Mode(register, 1, 0))


# ---------------------------------------------------------------------------
# Operator families: increment (K), pad (Z) on nonnegative words
# ---------------------------------------------------------------------------

def _int_inc(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    plus = lambda s: Mode(reg, s, SIGN_PLUS)
    if j == 1:
        terms = [product([cr(h + 1, 1), an(h, 1)]) for h in range(k - 1)]
        terms.append(product([Family("int_inc", 2, k, reg), cr(0, 1), an(k - 1, 1)]))
        return summed(terms)
    terms = [product([cr(h + 1, j), an(h, j)]) for h in range(1, k - 1)]
    terms.append(product([cr(1, j), an(0, j), Projector(NumOcc(reg, j + 1))]))
    terms.append(product([Family("int_inc", j + 1, k, reg), cr(0, j), an(k - 1, j)]))
    terms.append(product([Create(plus(j + 1)), cr(1, j), Projector(Unocc(reg, j))]))
    # carry walked into the sign: replace it by the new leading 1 and move
    # the sign up (the padded branch above never sees a sign at site j)
    terms.append(product([Create(plus(j + 1)), cr(1, j), Annihilate(plus(j))]))
    return summed(terms)


def _int_inc_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    cr = lambda h, s: Create(Mode(reg, s, h))
    an = lambda h, s: Annihilate(Mode(reg, s, h))
    plus = lambda s: Mode(reg, s, SIGN_PLUS)
    if j == 1:
        terms = [product([cr(h, 1), an(h + 1, 1)]) for h in range(k - 1)]
        terms.append(product([cr(k - 1, 1), an(0, 1),
                              Family("int_inc_adj", 2, k, reg),
                              Projector(DigitEq(reg, 1, 0))]))
        return summed(terms)
    terms = [product([cr(h, j), an(h + 1, j)]) for h in range(1, k - 1)]
    terms.append(product([Projector(NumOcc(reg, j + 1)), cr(0, j), an(1, j)]))
    terms.append(product([cr(k - 1, j), an(0, j),
                          Family("int_inc_adj", j + 1, k, reg),
                          Projector(DigitEq(reg, j, 0))]))
    terms.append(product([Projector(Unocc(reg, j)), an(1, j), Annihilate(plus(j + 1))]))
    terms.append(product([Create(plus(j)), an(1, j), Annihilate(plus(j + 1))]))
    return summed(terms)


def _int_pad(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    plus = lambda s: Mode(reg, s, SIGN_PLUS)
    if j == 1:
        return Projector(SignPlusAny(reg))
    if j == 2:
        return summed([
            product([Projector(NumOcc(reg, 2)), Projector(SignPlusAny(reg))]),
            Annihilate(plus(2)),
        ])
    terms: list[OperatorExpr] = [
        product([Projector(Unocc(reg, j)), Annihilate(plus(j)), Projector(GtZero(reg, j - 1))]),
        product([Projector(NumOcc(reg, j)), Projector(SignPlusAny(reg))]),
    ]
    for ell in range(2, j - 1):
        run = [Create(Mode(reg, s, 0)) for s in range(j - 1, ell, -1)]
        terms.append(product(run + [Annihilate(plus(ell + 1)), Projector(GtZero(reg, ell))]))
    run = [Create(Mode(reg, s, 0)) for s in range(j - 1, 1, -1)]
    terms.append(product(run + [Annihilate(plus(2))]))
    return summed(terms)


def _int_pad_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    plus = lambda s: Mode(reg, s, SIGN_PLUS)
    if j == 1:
        return Projector(SignPlusAny(reg))
    if j == 2:
        return summed([
            product([Projector(NumOcc(reg, 2)), Projector(SignPlusAny(reg))]),
            Create(plus(2)),
        ])
    guard = Projector(Unocc(reg, j))  # pad branches never occupy site j
    terms: list[OperatorExpr] = [
        product([Projector(GtZero(reg, j - 1)), Create(plus(j)), Projector(Unocc(reg, j))]),
        product([Projector(SignPlusAny(reg)), Projector(NumOcc(reg, j))]),
    ]
    for ell in range(2, j - 1):
        run = [Annihilate(Mode(reg, s, 0)) for s in range(ell + 1, j)]
        terms.append(product([Projector(GtZero(reg, ell)), Create(plus(ell + 1))]
                             + run + [guard]))
    run = [Annihilate(Mode(reg, s, 0)) for s in range(2, j)]
    terms.append(product([Create(plus(2))] + run + [guard]))
    return summed(terms)


def _sign_swap(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    plus = Mode(reg, j, SIGN_PLUS)
    minus = Mode(reg, j, SIGN_MINUS)
    return summed([
        product([Create(plus), Annihilate(minus)]),
        product([Create(minus), Annihilate(plus)]),
    ])


def _int_shift_sel(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    sign_move = summed([
        product([Create(Mode(reg, j + 2, sym)), Annihilate(Mode(reg, j + 1, sym))])
        for sym in (SIGN_PLUS, SIGN_MINUS)
    ])
    body = product([Family("nat_shift_lvl", j, k, reg), sign_move])
    if stats == FERMION:
        # the digit cascade below a riding sign nets one extra minus sign
        return Scale(Fraction(-1), body)
    return body


def _int_shift_sel_adj(k: int, reg: int, j: int, stats: str) -> OperatorExpr:
    sign_move = summed([
        product([Create(Mode(reg, j + 1, sym)), Annihilate(Mode(reg, j + 2, sym))])
        for sym in (SIGN_PLUS, SIGN_MINUS)
    ])
    body = product([sign_move, Family("nat_shift_lvl_adj", j, k, reg)])
    if stats == FERMION:
        return Scale(Fraction(-1), body)
    return body


register_family("int_inc", _int_inc, adjoint="int_inc_adj")
register_family("int_inc_adj", _int_inc_adj)
register_family("int_pad", _int_pad, adjoint="int_pad_adj")
register_family("int_pad_adj", _int_pad_adj)
register_family("sign_swap", _sign_swap, adjoint="sign_swap")
register_family("int_shift_sel", _int_shift_sel, adjoint="int_shift_sel_adj")
register_family("int_shift_sel_adj", _int_shift_sel_adj)


@lru_cache(maxsize=None)
def build_sign_flip(k: int, register: int = 1) -> OperatorExpr:
    return SiteSum("sign_swap", k, register, 2)


@lru_cache(maxsize=None)
def positive_successor(j: int, k: int, register: int = 1) -> OperatorExpr:
    """Successor restricted to nonnegative words (inert on negatives)."""
    return product([Family("int_inc", j, k, register),
                    Family("int_pad", j, k, register)])


@lru_cache(maxsize=None)
def minus_nonzero(register: int) -> OperatorExpr:
    """Projector onto strictly negative words (minus sign, some nonzero digit)."""
    return product([Projector(SignMinusLenGeq(register, 1)),
                    Projector(NonzeroDigitGeq(register, None))])


# ---------------------------------------------------------------------------
# The zero-crossing branch, instantiated lazily per input word
# ---------------------------------------------------------------------------

class SmallNegFlip(CustomOp):
    """Successor branch taking a small negative word across zero.

    For an input -p with 0 < p < increment(j), the output is
    +(increment - p), reached by flipping the sign, walking the word down
    to +zero with adjoint successor powers keyed by its own digits,
    applying the site-j successor once, and walking back down.  Only one
    term of the defining sum fires per basis word, so the sum is
    instantiated on demand.
    """

    def __init__(self, j: int, k: int, register: int,
                 pos_successor_at, min_guard_site: int):
        self.j = j
        self.k = k
        self.register = register
        self.pos_successor_at = pos_successor_at
        self.min_guard_site = min_guard_site

    def _guards(self, word: BasisWord, want_sign: int) -> bool:
        info = word_sign(word, self.register)
        if info is None or info[0] != want_sign:
            return False
        layout = raw_digits(word, self.register)
        if not any(layout.values()):
            return False
        return all(d == 0 for s, d in layout.items() if s >= self.min_guard_site)

    def _descend(self, sv: StateVector, layout: dict[int, int],
                 ctx: EvalContext, invert: bool) -> StateVector:
        for site in sorted(layout):
            d = layout[site]
            if not d:
                continue
            step = self.pos_successor_at(site)
            sv = _apply_node(Power(adjoint(step) if invert else step, d), sv, ctx)
            if sv.is_zero():
                break
        return sv

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        if not self._guards(word, -1):
            return []
        flip = build_sign_flip(self.k, self.register)
        sv = _apply_node(flip, StateVector.from_word(word), ctx)
        layout = raw_digits(word, self.register)
        sv = self._descend(sv, layout, ctx, invert=True)
        sv = _apply_node(self.pos_successor_at(self.j), sv, ctx)
        sv = self._descend(sv, layout, ctx, invert=True)
        return list(sv.terms.items())

    def adjoint_expr(self) -> OperatorExpr:
        return _SmallNegFlipAdj(self)


class _SmallNegFlipAdj(CustomOp):
    def __init__(self, forward: SmallNegFlip):
        self.forward = forward

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        fwd = self.forward
        if not fwd._guards(word, +1):
            return []
        layout = raw_digits(word, fwd.register)
        sv = StateVector.from_word(word)
        sv = fwd._descend(sv, layout, ctx, invert=True)
        sv = _apply_node(fwd.pos_successor_at(fwd.j), sv, ctx)
        sv = fwd._descend(sv, layout, ctx, invert=True)
        sv = _apply_node(build_sign_flip(fwd.k, fwd.register), sv, ctx)
        return list(sv.terms.items())

    def adjoint_expr(self) -> OperatorExpr:
        return self.forward


@lru_cache(maxsize=None)
def build_successor_integer(j: int, k: int, register: int = 1) -> OperatorExpr:
    """The full bilateral successor adding k**(j-1) on signed words."""
    if j < 1:
        raise FockArithError(f"integer successor needs j >= 1, got {j}")
    plus_branch = positive_successor(j, k, register)
    flip_w = build_sign_flip(k, register)
    outcome = summed([
        product([minus_nonzero(register), flip_w]),
        Projector(StateEq(register, zero_word_modes(register))),
    ])
    stay_negative = product([
        outcome,
        adjoint(plus_branch),
        flip_w,
        Projector(SignMinusLenGeq(register, j)),
    ])
    cross_zero = SmallNegFlip(j, k, register,
                              lambda site: positive_successor(site, k, register),
                              min_guard_site=j)
    return summed([plus_branch, stay_negative, cross_zero])


@lru_cache(maxsize=None)
def build_shift_integer(k: int, register: int = 1) -> OperatorExpr:
    """Times-k shift on signed words: the sign steps up, then the digits."""
    return SiteSum("int_shift_sel", k, register, 1)


# ---------------------------------------------------------------------------
# Addition, multiplication
# ---------------------------------------------------------------------------

def _signed_control(word: BasisWord, register: int) -> tuple[int, tuple[int, ...]]:
    info = word_sign(word, register)
    layout = raw_digits(word, register)
    if info is None or not layout or sorted(layout) != list(range(1, len(layout) + 1)):
        raise MalformedPair(f"register {register} does not hold a signed numeral word")
    return info[0], tuple(layout[s] for s in range(1, len(layout) + 1))


def _add_signed(sv: StateVector, k: int, stats: str, src: int, dst: int,
                trace: ResourceTrace | None, invert: bool,
                successor_for) -> StateVector:
    out = StateVector()
    for word, amp in sv.terms.items():
        sign, digits = _signed_control(word, src)
        forward = (sign > 0) != invert
        factors = []
        for site in range(len(digits), 0, -1):
            d = digits[site - 1]
            if not d:
                continue
            step = successor_for(site, dst)
            factors.append(Power(step if forward else adjoint(step), d))
        if not forward:
            factors.reverse()
        result = apply(product(factors), StateVector({word: amp}), stats, trace)
        for w, a in result.terms.items():
            out.add_term(w, a)
    return out


def _validate_signed_registers(sv: StateVector, k: int, registers, exc) -> None:
    for word in sv.terms:
        for reg in registers:
            try:
                decode_integer(word, k, reg)
            except FockArithError as err:
                raise exc(f"register {reg}: {err}") from err


def add_integer(pair: StateVector, k: int, stats: str,
                trace: ResourceTrace | None = None) -> StateVector:
    """|s> x |t> -> |s> x |t + s|; unitary on the pair space."""
    _validate_signed_registers(pair, k, (1, 2), MalformedPair)
    return _add_signed(pair, k, stats, 1, 2, trace, invert=False,
                       successor_for=lambda site, dst: build_successor_integer(site, k, dst))


def subtract_integer(pair: StateVector, k: int, stats: str,
                     trace: ResourceTrace | None = None) -> StateVector:
    """Inverse of add_integer: |s> x |t> -> |s> x |t - s|."""
    _validate_signed_registers(pair, k, (1, 2), MalformedPair)
    return _add_signed(pair, k, stats, 1, 2, trace, invert=True,
                       successor_for=lambda site, dst: build_successor_integer(site, k, dst))


def multiply_integer(triple: StateVector, k: int, stats: str,
                     trace: ResourceTrace | None = None) -> StateVector:
    """|s, t, x> -> |s, t, x + s*t|; unitary on the triple space."""
    _validate_signed_registers(triple, k, (1, 2, 3), MalformedTriple)
    return _multiply_signed(triple, k, stats, trace, invert=False)


def multiply_integer_adjoint(triple: StateVector, k: int, stats: str,
                             trace: ResourceTrace | None = None) -> StateVector:
    _validate_signed_registers(triple, k, (1, 2, 3), MalformedTriple)
    return _multiply_signed(triple, k, stats, trace, invert=True)


def _multiply_signed(triple: StateVector, k: int, stats: str,
                     trace: ResourceTrace | None, invert: bool) -> StateVector:
    shift = build_shift_integer(k, 2)
    unshift = adjoint(shift)
    succ = lambda site, dst: build_successor_integer(site, k, dst)
    out = StateVector()
    for word, amp in triple.terms.items():
        sign, digits = _signed_control(word, 1)
        state = StateVector({word: amp})
        if not invert:
            for site, d in enumerate(digits, start=1):
                for _ in range(d):
                    state = _add_signed(state, k, stats, 2, 3, trace,
                                        invert=(sign < 0), successor_for=succ)
                if site < len(digits):
                    state = apply(shift, state, stats, trace)
            state = apply(Power(unshift, len(digits) - 1), state, stats, trace)
        else:
            state = apply(Power(shift, len(digits) - 1), state, stats, trace)
            for site in range(len(digits), 0, -1):
                if site < len(digits):
                    state = apply(unshift, state, stats, trace)
                for _ in range(digits[site - 1]):
                    state = _add_signed(state, k, stats, 2, 3, trace,
                                        invert=(sign > 0), successor_for=succ)
        for w, a in state.terms.items():
            out.add_term(w, a)
    return out


# ---------------------------------------------------------------------------
# Division absence
# ---------------------------------------------------------------------------

def check_division_absence(s: int, x: int, bound: int, k: int,
                           stats: str = BOSON) -> dict:
    """Scan |t| <= bound for multiply(s, t, 0) == (s, t, x); report the witness.

    A unitary multiply does not yield division: for most (s, x) no basis
    word t satisfies the equation, which this bounded scan certifies.
    """
    from .numerals import numeral_from_int

    s_num = numeral_from_int(s, k, INT)
    x_num = numeral_from_int(x, k, INT)
    zero = numeral_from_int(0, k, INT)
    target_reg3 = encode_integer(x_num, 3).modes
    witnesses = []
    scanned = 0
    for t in range(-bound, bound + 1):
        if t == 0 and x != 0 and s != 0:
            pass
        try:
            t_num = numeral_from_int(t, k, INT)
        except FockArithError:
            continue
        scanned += 1
        word = merge_registers([encode_integer(s_num, 1), encode_integer(t_num, 2),
                                encode_integer(zero, 3)])
        result = multiply_integer(StateVector.from_word(word), k, stats)
        res_word, amp = result.single_word()
        if tuple(m for m in res_word.modes if m.register == 3) == tuple(target_reg3) and amp == 1:
            witnesses.append(t)
    return {"dividend": x, "divisor": s, "bound": bound,
            "scanned": scanned, "witnesses": witnesses}


# ---------------------------------------------------------------------------
# Pair / triple helpers
# ---------------------------------------------------------------------------

def pair_word_int(s: Numeral, t: Numeral) -> BasisWord:
    return merge_registers([encode_integer(s, 1), encode_integer(t, 2)])


def triple_word_int(s: Numeral, t: Numeral, x: Numeral) -> BasisWord:
    return merge_registers([encode_integer(s, 1), encode_integer(t, 2),
                            encode_integer(x, 3)])
