"""Signed words: successor branches, unitary addition, shift, multiplication."""

import random

import pytest

from fockarith.fock_core import BOSON, FERMION, StateVector, inner_product
from fockarith.integers import (
    add_integer,
    build_shift_integer,
    build_sign_flip,
    build_successor_integer,
    check_division_absence,
    decode_integer,
    encode_integer,
    multiply_integer,
    multiply_integer_adjoint,
    pair_word_int,
    subtract_integer,
    triple_word_int,
    word_sign,
)
from fockarith.numerals import (
    INT,
    NegativeZero,
    NonCanonical,
    Numeral,
    numeral_from_int,
    parse_numeral,
)
from fockarith.operator_algebra import Power, adjoint, apply, equal_on_span
from fockarith.verification import integer_numerals, integer_span

STATS = (BOSON, FERMION)


def num(text, k=10):
    return parse_numeral(text, k, INT)


def state(text, k=10):
    return StateVector.from_word(encode_integer(num(text, k)))


def decoded(sv, k=10, register=1):
    word, amp = sv.single_word()
    assert amp == 1
    return decode_integer(word, k, register).text()


# --- encoding ---------------------------------------------------------------

def test_encode_plus_zero_layout():
    from fockarith.fock_core import SIGN_PLUS
    word = encode_integer(num("+0"))
    assert word.modes[0].symbol == SIGN_PLUS and word.modes[0].site == 2
    assert word.modes[1].site == 1 and word.modes[1].symbol == 0


def test_encode_sign_site_tracks_length():
    word = encode_integer(num("-364"))
    sign = word_sign(word)
    assert sign == (-1, 4)


def test_decode_rejects_negative_zero():
    from fockarith.fock_core import BasisWord, Mode, SIGN_MINUS
    with pytest.raises(NegativeZero):
        decode_integer(BasisWord((Mode(1, 2, SIGN_MINUS), Mode(1, 1, 0)), 1), 10)


def test_roundtrip():
    for k in (2, 3, 10):
        for n in integer_numerals(k, 3):
            assert decode_integer(encode_integer(n), k) == n


# --- sign flip ---------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_sign_flip_swaps_and_squares_to_identity(stats):
    w = build_sign_flip(10)
    out = apply(w, state("+5"), stats)
    assert decoded(out) == "-5"
    assert apply(w, out, stats) == state("+5")
    for text in ("+5", "-17", "+364"):
        sv = state(text)
        assert apply(w, apply(w, sv, stats), stats) == sv


def test_sign_flip_makes_negative_zero_intermediate():
    w = build_sign_flip(10)
    out = apply(w, state("+0"), BOSON)
    word, amp = out.single_word()
    assert amp == 1
    assert word_sign(word) == (-1, 2)
    with pytest.raises(NegativeZero):
        decode_integer(word, 10)


# --- successor ---------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_successor_desk_checks(stats):
    cases = [("-1", 1, "+0"), ("-5", 2, "+5"), ("+9", 1, "+10"),
             ("+0", 1, "+1"), ("+99", 1, "+100"), ("-20", 1, "-19"),
             ("-10", 1, "-9"), ("-1", 3, "+99"), ("+5", 4, "+1005")]
    for start, j, expect in cases:
        out = apply(build_successor_integer(j, 10), state(start), stats)
        assert decoded(out) == expect, (start, j, stats)


def test_bilateral_shift_on_spans():
    for k in (2, 3):
        span = integer_span(k, 3)
        for j in (1, 2, 3):
            succ = build_successor_integer(j, k)
            succ_adj = adjoint(succ)
            images = set()
            for w in span:
                sv = StateVector.from_word(w)
                out = apply(succ, sv, FERMION)
                word, amp = out.single_word()
                assert amp == 1
                assert word not in images
                images.add(word)
                assert apply(succ_adj, out, FERMION) == sv
                back = apply(succ_adj, sv, FERMION)
                assert apply(succ, back, FERMION) == sv
                assert inner_product(sv, out) == 0


def test_power_law():
    for k in (2, 3):
        span = integer_span(k, 3)
        for j in (1, 2):
            assert equal_on_span(Power(build_successor_integer(j, k), k),
                                 build_successor_integer(j + 1, k), span, FERMION)


def test_every_element_is_a_successor():
    k = 3
    for w in integer_span(k, 2):
        sv = StateVector.from_word(w)
        for j in (1, 2):
            succ = build_successor_integer(j, k)
            y = apply(adjoint(succ), sv, FERMION)
            assert apply(succ, y, FERMION) == sv


def test_signed_encoding_identity():
    # a signed word is rebuilt from +0 by signed successor powers
    k = 3
    for n in integer_numerals(k, 3):
        state_v = StateVector.from_word(encode_integer(numeral_from_int(0, k, INT)))
        for site in range(1, len(n.digits) + 1):
            step = build_successor_integer(site, k)
            if n.sign < 0:
                step = adjoint(step)
            state_v = apply(Power(step, n.digits[site - 1]), state_v, FERMION)
        assert state_v == StateVector.from_word(encode_integer(n))


# --- addition ----------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_add_desk_checks(stats):
    cases = [("+0", "+7", "+7"), ("-364", "+364", "+0"), ("+9", "-5", "+4"),
             ("-7", "-8", "-15"), ("+99", "+1", "+100")]
    for s, t, expect in cases:
        pair = StateVector.from_word(pair_word_int(num(s), num(t)))
        out = add_integer(pair, 10, stats)
        assert decoded(out, register=2) == expect
        assert decoded(out, register=1) == num(s).text()
        assert subtract_integer(out, 10, stats) == pair


def test_add_unitary_on_random_pairs():
    rng = random.Random(7)
    for _ in range(200):
        a = numeral_from_int(rng.randint(-999, 999), 10, INT)
        b = numeral_from_int(rng.randint(-999, 999), 10, INT)
        pair = StateVector.from_word(pair_word_int(a, b))
        assert subtract_integer(add_integer(pair, 10, FERMION), 10, FERMION) == pair
        assert add_integer(subtract_integer(pair, 10, FERMION), 10, FERMION) == pair


# --- shift --------------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_shift_desk_checks(stats):
    u = build_shift_integer(10)
    for start, expect in (("+13", "+130"), ("-1", "-10"), ("+364", "+3640")):
        out = apply(u, state(start), stats)
        assert decoded(out) == expect
        assert apply(adjoint(u), out, stats) == state(start)


def test_shift_isometry_on_span():
    u = build_shift_integer(3)
    ud = adjoint(u)
    for w in integer_span(3, 3):
        sv = StateVector.from_word(w)
        assert apply(ud, apply(u, sv, FERMION), FERMION) == sv


# --- multiplication ------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_multiply_sign_rules(stats):
    cases = [("+1", "+7", "+0", 7), ("-2", "+3", "+0", -6), ("-2", "-3", "-1", 5),
             ("+12", "+34", "+7", 415), ("-12", "+34", "+500", 92)]
    for s, t, x, expect in cases:
        tri = StateVector.from_word(triple_word_int(num(s), num(t), num(x)))
        out = multiply_integer(tri, 10, stats)
        word, amp = out.single_word()
        assert amp == 1
        assert decode_integer(word, 10, 3).value() == expect
        assert decode_integer(word, 10, 1) == num(s)
        assert decode_integer(word, 10, 2) == num(t)
        assert multiply_integer_adjoint(out, 10, stats) == tri


def test_multiply_unitary_random():
    rng = random.Random(19)
    for _ in range(40):
        vals = [rng.randint(-30, 30) for _ in range(3)]
        tri = StateVector.from_word(triple_word_int(
            *(numeral_from_int(v, 10, INT) for v in vals)))
        out = multiply_integer(tri, 10, FERMION)
        assert decode_integer(out.single_word()[0], 10, 3).value() == \
            vals[2] + vals[0] * vals[1]
        assert multiply_integer_adjoint(out, 10, FERMION) == tri


# --- subtraction identity and division absence ---------------------------------

def test_subtraction_identity_desk_check():
    # 10000 - 10 = 9990, once through the adjoint and once through powers
    from fockarith.integers import positive_successor
    zero = state("+0")
    via_adjoint = apply(adjoint(positive_successor(2, 10)),
                        apply(positive_successor(5, 10), zero, BOSON), BOSON)
    assert decoded(via_adjoint) == "+9990"
    via_powers = zero
    for j in (2, 3, 4):
        via_powers = apply(Power(positive_successor(j, 10), 9), via_powers, BOSON)
    assert via_powers == via_adjoint


def test_division_absence_reports():
    assert check_division_absence(2, 1, 50, 10)["witnesses"] == []
    assert check_division_absence(3, 6, 50, 10)["witnesses"] == [2]
    assert check_division_absence(0, 1, 20, 10)["witnesses"] == []
