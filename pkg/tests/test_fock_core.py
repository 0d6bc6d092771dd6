"""Basis words, canonical ordering, and primitive operator application."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fockarith.fock_core import (
    BOSON,
    FERMION,
    VACUUM,
    BasisWord,
    DuplicateSite,
    Mode,
    StateVector,
    apply_annihilate,
    apply_create,
    canonicalize,
    dump_state,
    inner_product,
    parse_state,
)


def word(*triples):
    modes = tuple(Mode(r, s, d) for r, s, d in triples)
    return BasisWord(modes, 1)


def test_canonicalize_sorts_and_flips_sign_for_one_transposition():
    w, phase = canonicalize([Mode(1, 1, 4), Mode(1, 2, 6)], FERMION)
    assert w == word((1, 2, 6), (1, 1, 4))
    assert phase == -1


def test_canonicalize_identity_on_sorted_input():
    sorted_modes = [Mode(1, 3, 1), Mode(1, 2, 0), Mode(1, 1, 5)]
    w, phase = canonicalize(sorted_modes, FERMION)
    assert w.modes == tuple(sorted_modes)
    assert phase == 1
    again, phase2 = canonicalize(w.modes, FERMION)
    assert again == w and phase2 == 1


def test_canonicalize_three_mode_reversal():
    modes = [Mode(1, 1, 2), Mode(1, 2, 1), Mode(1, 3, 0)]
    _, phase = canonicalize(modes, FERMION)
    assert phase == (-1) ** 3


def test_canonicalize_boson_never_flips():
    _, phase = canonicalize([Mode(1, 1, 2), Mode(1, 2, 1), Mode(1, 3, 0)], BOSON)
    assert phase == 1


def test_duplicate_site_rejected():
    with pytest.raises(DuplicateSite):
        canonicalize([Mode(1, 1, 0), Mode(1, 1, 1)], BOSON)


def _brute_force_parity(modes):
    """Inversion count restricted to same-register pairs."""
    inv = 0
    for i in range(len(modes)):
        for j in range(i + 1, len(modes)):
            a, b = modes[i], modes[j]
            if a.register == b.register and (a.register, -a.site) > (b.register, -b.site):
                inv += 1
    return -1 if inv % 2 else 1


@given(st.permutations(list(range(6))))
@settings(max_examples=120, deadline=None)
def test_permutation_parity_matches_inversion_oracle(perm):
    base = [Mode(1, s + 1, s % 3) for s in range(6)]
    shuffled = [base[i] for i in perm]
    _, phase = canonicalize(shuffled, FERMION)
    assert phase == _brute_force_parity(shuffled)


def test_create_on_vacuum():
    sv = apply_create(StateVector.from_word(VACUUM), Mode(1, 1, 0), BOSON)
    assert sv == StateVector.from_word(word((1, 1, 0)))


def test_create_on_occupied_site_annihilates():
    sv = StateVector.from_word(word((1, 1, 1)))
    assert apply_create(sv, Mode(1, 1, 1), BOSON).is_zero()
    assert apply_create(sv, Mode(1, 1, 1), FERMION).is_zero()


def test_fermion_create_above_existing_mode_has_plus_phase():
    sv = apply_create(StateVector.from_word(word((1, 1, 4))), Mode(1, 2, 3), FERMION)
    w, amp = sv.single_word()
    assert w == word((1, 2, 3), (1, 1, 4))
    assert amp == 1


def test_fermion_create_below_existing_mode_flips():
    sv = apply_create(StateVector.from_word(word((1, 2, 3))), Mode(1, 1, 4), FERMION)
    _, amp = sv.single_word()
    assert amp == -1


def test_second_sign_symbol_is_dropped():
    from fockarith.fock_core import SIGN_MINUS, SIGN_PLUS
    sv = StateVector.from_word(word((1, 2, SIGN_PLUS), (1, 1, 0)))
    assert apply_create(sv, Mode(1, 3, SIGN_MINUS), BOSON).is_zero()


def test_annihilate_absent_mode_is_zero():
    sv = StateVector.from_word(word((1, 1, 4)))
    assert apply_annihilate(sv, Mode(1, 2, 4), BOSON).is_zero()
    assert apply_annihilate(sv, Mode(1, 1, 5), BOSON).is_zero()


def test_annihilate_then_create_roundtrip_sign():
    sv = StateVector.from_word(word((1, 3, 1), (1, 2, 0), (1, 1, 5)))
    removed = apply_annihilate(sv, Mode(1, 2, 0), FERMION)
    _, amp = removed.single_word()
    assert amp == -1  # one mode above site 2 in the register
    back = apply_create(removed, Mode(1, 2, 0), FERMION)
    assert back == sv


def test_create_annihilate_identity_off_mode():
    sv = StateVector.from_word(word((1, 2, 1)))
    out = apply_annihilate(apply_create(sv, Mode(1, 1, 0), FERMION),
                           Mode(1, 1, 0), FERMION)
    assert out == sv


def test_fermion_nilpotency_via_double_create():
    sv = StateVector.from_word(VACUUM)
    once = apply_create(sv, Mode(1, 1, 1), FERMION)
    assert apply_create(once, Mode(1, 1, 1), FERMION).is_zero()


def test_cross_register_operations_commute_for_fermions():
    sv = StateVector.from_word(word((1, 1, 1)))
    a_then_b = apply_create(apply_create(sv, Mode(2, 1, 0), FERMION),
                            Mode(2, 2, 1), FERMION)
    b_then_a = apply_create(apply_create(sv, Mode(2, 2, 1), FERMION),
                            Mode(2, 1, 0), FERMION)
    # creations on register 2 never pick up phases from register 1 content
    assert a_then_b.single_word()[1] * b_then_a.single_word()[1] == -1


def test_inner_product_orthonormal():
    a = StateVector.from_word(word((1, 1, 0)))
    b = StateVector.from_word(word((1, 1, 1)))
    assert inner_product(a, a) == 1
    assert inner_product(a, b) == 0


def test_inner_product_bilinear_expansion():
    w1 = StateVector.from_word(word((1, 1, 0)))
    w2 = StateVector.from_word(word((1, 1, 1)))
    left = w1.scaled(2) - w2
    right = w1 + w2
    assert inner_product(left, right) == 1


@given(st.fractions(), st.fractions())
@settings(max_examples=60, deadline=None)
def test_statevector_linear_combination(c1, c2):
    w1, w2 = word((1, 1, 0)), word((1, 1, 1))
    sv = StateVector.from_word(w1, c1) + StateVector.from_word(w2, c2)
    assert inner_product(StateVector.from_word(w1), sv) == c1
    assert inner_product(StateVector.from_word(w2), sv) == c2


def test_no_zero_amplitudes_stored():
    sv = StateVector.from_word(word((1, 1, 0)))
    out = sv - sv
    assert out.is_zero() and not out.terms


def test_dump_parse_roundtrip():
    sv = StateVector.from_word(word((1, 2, 6), (1, 1, 4)), Fraction(3, 7))
    sv = sv + StateVector.from_word(word((2, 1, 0)), Fraction(-1, 2))
    assert parse_state(dump_state(sv)) == sv
