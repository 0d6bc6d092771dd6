"""Finite base-k rationals: point-crossing successors, shift, arithmetic."""

import random
from fractions import Fraction

import pytest

from fockarith.fock_core import BOSON, FERMION, StateVector, inner_product
from fockarith.numerals import (
    RAT,
    NegativeZero,
    NonCanonical,
    NotKAdic,
    Numeral,
    numeral_from_fraction,
    parse_numeral,
)
from fockarith.operator_algebra import Power, adjoint, apply, equal_on_span
from fockarith.rationals import (
    add_rational,
    build_shift_rational,
    build_shift_rational_literal,
    build_successor_rational,
    check_division_absence_rational,
    decode_rational,
    encode_rational,
    multiply_rational,
    multiply_rational_adjoint,
    next_site,
    pair_word_rat,
    subtract_rational,
    successor_increment,
    triple_word_rat,
)
from fockarith.verification import rational_numerals, rational_span

STATS = (BOSON, FERMION)


def num(text, k=10):
    return parse_numeral(text, k, RAT)


def state(text, k=10):
    return StateVector.from_word(encode_rational(num(text, k)))


def decoded(sv, k=10, register=1):
    word, amp = sv.single_word()
    assert amp == 1
    return decode_rational(word, k, register).text()


# --- encoding -----------------------------------------------------------------

def test_zero_word_layout():
    from fockarith.fock_core import POINT, SIGN_PLUS
    word = encode_rational(num("+0.0"))
    sites = {(m.site, m.symbol) for m in word.modes}
    assert sites == {(2, SIGN_PLUS), (1, 0), (0, POINT), (-1, 0)}


def test_worked_numeral_layout():
    word = encode_rational(num("+63.04"))
    assert {m.site for m in word.modes} == {3, 2, 1, 0, -1, -2}


def test_not_k_adic():
    with pytest.raises(NotKAdic):
        numeral_from_fraction(Fraction(1, 3), 10, RAT)
    n = numeral_from_fraction(Fraction(1, 8), 10, RAT)
    assert n.text() == "+0.125"
    assert numeral_from_fraction(Fraction(1, 2), 2, RAT).text() == "+0.1"


def test_value_pairs():
    assert num("+63.04").value_pair() == (6304, 2)
    assert num("-0.25").value_pair() == (-25, 2)


def test_decode_rejects_violations():
    from fockarith.fock_core import BasisWord, Mode, POINT, SIGN_MINUS, SIGN_PLUS
    with pytest.raises(NegativeZero):
        decode_rational(BasisWord((Mode(1, 2, SIGN_MINUS), Mode(1, 1, 0),
                                   Mode(1, 0, POINT), Mode(1, -1, 0)), 1), 10)
    with pytest.raises(NonCanonical):
        decode_rational(BasisWord((Mode(1, 2, SIGN_PLUS), Mode(1, 1, 5),
                                   Mode(1, 0, POINT), Mode(1, -1, 1),
                                   Mode(1, -2, 0)), 1), 10)


def test_roundtrip():
    for k in (2, 3, 10):
        for n in rational_numerals(k, 2, 2):
            assert decode_rational(encode_rational(n), k) == n


# --- successors ------------------------------------------------------------------

def test_increment_values_and_index_map():
    assert successor_increment(3, 10) == 100
    assert successor_increment(-2, 10) == Fraction(1, 100)
    assert next_site(-1) == 1 and next_site(-2) == -1 and next_site(2) == 3


@pytest.mark.parametrize("stats", STATS)
def test_successor_desk_checks(stats):
    cases = [("+63.04", -7, "+63.0400001"), ("+0.0", -1, "+0.1"),
             ("-0.3", -1, "-0.2"), ("+0.9", -1, "+1.0"), ("-0.1", -1, "+0.0"),
             ("-2.5", 1, "-1.5"), ("-0.5", 1, "+0.5"), ("-1.0", 1, "+0.0"),
             ("+0.19", -2, "+0.2"), ("+0.199", -3, "+0.2"), ("-10.0", 2, "+0.0")]
    for start, j, expect in cases:
        out = apply(build_successor_rational(j, 10), state(start), stats)
        assert decoded(out) == expect, (start, j, stats)
        back = apply(adjoint(build_successor_rational(j, 10)), out, stats)
        assert back == state(start)


def test_successor_oracle_random():
    rng = random.Random(31)
    for _ in range(40):
        k = rng.choice((2, 10))
        n = rng.choice(list(rational_numerals(k, 2, 2)))
        j = rng.choice((-2, -1, 1, 2))
        out = apply(build_successor_rational(j, k),
                    StateVector.from_word(encode_rational(n)), FERMION)
        word, amp = out.single_word()
        assert amp == 1
        assert decode_rational(word, k).value() == n.value() + successor_increment(j, k)


def test_bilateral_shift_properties_on_span():
    for k in (2, 3):
        span = rational_span(k, 2, 2)
        for j in (-2, -1, 1, 2):
            succ = build_successor_rational(j, k)
            succ_adj = adjoint(succ)
            for w in span:
                sv = StateVector.from_word(w)
                out = apply(succ, sv, FERMION)
                assert out.single_word()[1] == 1
                assert apply(succ_adj, out, FERMION) == sv
                back = apply(succ_adj, sv, FERMION)
                assert apply(succ, back, FERMION) == sv
                assert inner_product(sv, out) == 0


def test_power_law_with_point_skip():
    for k in (2, 3):
        span = rational_span(k, 2, 2)
        for j in (-3, -2, -1, 1, 2):
            assert equal_on_span(Power(build_successor_rational(j, k), k),
                                 build_successor_rational(next_site(j), k),
                                 span, FERMION), (k, j)


def test_fraction_encoding_from_zero():
    k = 10
    for text in ("+0.3", "+0.25", "+0.072", "+0.0001"):
        n = num(text)
        sv = state("+0.0")
        for i, d in enumerate(n.frac):
            sv = apply(Power(build_successor_rational(-(i + 1), k), d), sv, FERMION)
        assert sv == state(text)


def test_power_subtraction_identities():
    # same-sign: adjoint at j composed with successor at j+n equals the
    # (k-1)-power ladder; the cross-sign version skips the point slot
    k = 10
    span = rational_span(k, 1, 2)[:40]
    lhs = apply(build_successor_rational(-2, k),
                apply(adjoint(build_successor_rational(-3, k)),
                      state("+0.5"), BOSON), BOSON)
    from fockarith.operator_algebra import product as op_product
    same_sign = op_product([adjoint(build_successor_rational(-3, k)),
                            build_successor_rational(-2, k)])
    ladder = Power(build_successor_rational(-3, k), k - 1)
    assert equal_on_span(same_sign, ladder, span, FERMION)
    cross = op_product([adjoint(build_successor_rational(-1, k)),
                        build_successor_rational(2, k)])
    ladder2 = op_product([Power(build_successor_rational(1, k), k - 1),
                          Power(build_successor_rational(-1, k), k - 1)])
    assert equal_on_span(cross, ladder2, span, FERMION)


# --- shift ------------------------------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_shift_desk_checks(stats):
    cases = [("+6.25", "+62.5"), ("+0.5", "+5.0"), ("+3.0", "+30.0"),
             ("+0.0", "+0.0"), ("-0.05", "-0.5"), ("-12.3", "-123.0")]
    u = build_shift_rational(10)
    for start, expect in cases:
        out = apply(u, state(start), stats)
        assert decoded(out) == expect
        assert apply(adjoint(u), out, stats) == state(start)


def test_shift_bilateral_and_diagonal_free_off_zero():
    for k in (2, 3):
        u = build_shift_rational(k)
        for w in rational_span(k, 2, 2):
            sv = StateVector.from_word(w)
            out = apply(u, sv, FERMION)
            assert out.single_word()[1] == 1
            assert apply(adjoint(u), out, FERMION) == sv
            n = decode_rational(w, k)
            assert inner_product(sv, out) == (1 if n.is_zero() else 0)


def test_literal_cascade_matches_word_node_on_generic_words():
    # words with nonzero integer part and two or more fraction digits take
    # no cleanup branch, so the literal exchange-and-cascade form applies
    lit = build_shift_rational_literal(10)
    sem = build_shift_rational(10)
    for text in ("+6.25", "-12.34", "+3.14", "+99.99", "+1.234"):
        a = apply(lit, state(text), BOSON)
        b = apply(sem, state(text), BOSON)
        assert a == b, text


# --- addition, multiplication -------------------------------------------------

@pytest.mark.parametrize("stats", STATS)
def test_add_desk_checks(stats):
    cases = [("+0.0", "+7.5", "+7.5"), ("+0.5", "+0.5", "+1.0"),
             ("-2.25", "+1.0", "-1.25"), ("+0.05", "+0.05", "+0.1")]
    for p, q, expect in cases:
        pair = StateVector.from_word(pair_word_rat(num(p), num(q)))
        out = add_rational(pair, 10, stats)
        assert decoded(out, register=2) == expect
        assert subtract_rational(out, 10, stats) == pair


def test_add_unitary_random():
    rng = random.Random(41)
    pool = list(rational_numerals(10, 2, 2))
    for _ in range(60):
        a, b = rng.choice(pool), rng.choice(pool)
        pair = StateVector.from_word(pair_word_rat(a, b))
        out = add_rational(pair, 10, FERMION)
        assert decode_rational(out.single_word()[0], 10, 2).value() == \
            a.value() + b.value()
        assert subtract_rational(out, 10, FERMION) == pair
        assert add_rational(subtract_rational(pair, 10, FERMION), 10, FERMION) == pair


@pytest.mark.parametrize("stats", STATS)
def test_multiply_desk_checks(stats):
    cases = [("+1.0", "+7.5", "+0.0", "+7.5"), ("+0.5", "+0.5", "+0.0", "+0.25"),
             ("-1.5", "+2.0", "+1.0", "-2.0"), ("+0.0", "+3.7", "+1.5", "+1.5")]
    for p, q, r, expect in cases:
        tri = StateVector.from_word(triple_word_rat(num(p), num(q), num(r)))
        out = multiply_rational(tri, 10, stats)
        word, amp = out.single_word()
        assert amp == 1
        assert decode_rational(word, 10, 3).text() == expect
        assert decode_rational(word, 10, 1) == num(p)
        assert decode_rational(word, 10, 2) == num(q)
        assert multiply_rational_adjoint(out, 10, stats) == tri


def test_multiply_oracle_random():
    rng = random.Random(43)
    pool = list(rational_numerals(10, 2, 1))
    for _ in range(20):
        p, q, r = (rng.choice(pool) for _ in range(3))
        tri = StateVector.from_word(triple_word_rat(p, q, r))
        out = multiply_rational(tri, 10, FERMION)
        assert decode_rational(out.single_word()[0], 10, 3).value() == \
            r.value() + p.value() * q.value()
        assert multiply_rational_adjoint(out, 10, FERMION) == tri


def test_division_absence_one_third():
    rep = check_division_absence_rational(num("+3.0"), num("+1.0"),
                                          digit_bound=6, scan_digit_bound=2, k=10)
    assert rep["arithmetic_witness"] is None
    assert rep["scan_witnesses"] == []
    # sanity: a representable quotient is found by both routes
    rep2 = check_division_absence_rational(num("+2.0"), num("+1.0"),
                                           digit_bound=6, scan_digit_bound=2, k=10)
    assert rep2["arithmetic_witness"] == "+0.5"
    assert rep2["scan_witnesses"] == ["+0.5"]
