"""Embeddings, conjugation naturality, overlap, and scaling fits."""

import pytest

from fockarith.fock_core import BOSON, FERMION, FockArithError, StateVector
from fockarith import integers, naturals, rationals
from fockarith.numerals import INT, NAT, RAT, numeral_from_int, parse_numeral
from fockarith.operator_algebra import Power, ResourceTrace, adjoint, apply
from fockarith.physical_map import (
    EmptyResult,
    InsufficientSamples,
    PhysicalEmbedding,
    UnmappedSite,
    fit_scaling,
    implementation_overlap,
    map_operator,
    map_state,
    map_word,
    measure_addition,
    measure_multiplication,
    measure_successor,
    planted_exponential,
    unmap_word,
)
from fockarith.verification import integer_span, natural_span, rational_span


def shift_embedding(k=10, offset=100):
    return PhysicalEmbedding.site_shift(offset, k)


def test_identity_embedding_is_identity_on_words():
    emb = PhysicalEmbedding({s: s for s in range(-6, 10)}, {h: h for h in range(10)})
    w = naturals.encode_natural(parse_numeral("364", 10, NAT))
    assert map_word(emb, w) == w


def test_embedding_validation():
    with pytest.raises(FockArithError):
        PhysicalEmbedding({1: 5, 2: 5}, {0: 0})
    with pytest.raises(FockArithError):
        PhysicalEmbedding({1: 2, 2: 1}, {0: 0})
    with pytest.raises(FockArithError):
        PhysicalEmbedding({1: 1}, {0: 1, 1: 1})


def test_unmapped_site_error():
    emb = PhysicalEmbedding({1: 101, 2: 102}, {h: h for h in range(10)})
    w = naturals.encode_natural(parse_numeral("364", 10, NAT))
    with pytest.raises(UnmappedSite):
        map_word(emb, w)


def test_roundtrip_mapping():
    emb = shift_embedding()
    for text in ("0", "9", "364"):
        w = naturals.encode_natural(parse_numeral(text, 10, NAT))
        assert unmap_word(emb, map_word(emb, w)) == w


def test_conjugation_naturality_successors():
    emb = shift_embedding()
    k = 10
    for w in natural_span(k, 2)[:12]:
        for j in (1, 2, 4):
            op = naturals.build_successor_natural(j, k)
            lhs = map_state(emb, apply(op, StateVector.from_word(w), FERMION))
            rhs = apply(map_operator(emb, op),
                        StateVector.from_word(map_word(emb, w)), FERMION)
            assert lhs == rhs
    for w in integer_span(k, 2)[:12]:
        for j in (1, 2):
            op = integers.build_successor_integer(j, k)
            lhs = map_state(emb, apply(op, StateVector.from_word(w), FERMION))
            rhs = apply(map_operator(emb, op),
                        StateVector.from_word(map_word(emb, w)), FERMION)
            assert lhs == rhs
    for w in rational_span(k, 1, 1)[:12]:
        for j in (-2, -1, 1):
            op = rationals.build_successor_rational(j, k)
            lhs = map_state(emb, apply(op, StateVector.from_word(w), FERMION))
            rhs = apply(map_operator(emb, op),
                        StateVector.from_word(map_word(emb, w)), FERMION)
            assert lhs == rhs


def test_conjugation_naturality_adjoints_and_shift():
    emb = shift_embedding()
    k = 10
    u = naturals.build_shift_times_k(k)
    for text in ("5", "42", "364"):
        w = naturals.encode_natural(parse_numeral(text, k, NAT))
        lhs = map_state(emb, apply(u, StateVector.from_word(w), FERMION))
        rhs = apply(map_operator(emb, u),
                    StateVector.from_word(map_word(emb, w)), FERMION)
        assert lhs == rhs
        vd = adjoint(naturals.build_successor_natural(1, k))
        lhs = map_state(emb, apply(vd, StateVector.from_word(w), FERMION))
        rhs = apply(map_operator(emb, vd),
                    StateVector.from_word(map_word(emb, w)), FERMION)
        assert lhs == rhs


def test_digit_relabeling_naturality():
    k = 10
    emb = PhysicalEmbedding({s: s for s in range(-6, 10)},
                            {h: (h + 3) % k for h in range(k)})
    for text in ("0", "7", "29", "90"):
        w = naturals.encode_natural(parse_numeral(text, k, NAT))
        for j in (1, 2):
            op = naturals.build_successor_natural(j, k)
            lhs = map_state(emb, apply(op, StateVector.from_word(w), BOSON))
            rhs = apply(map_operator(emb, op),
                        StateVector.from_word(map_word(emb, w)), BOSON)
            assert lhs == rhs


def test_overlap_is_one_for_defined_operations():
    k = 10
    v1 = naturals.build_successor_natural(1, k)
    zero = naturals.encode_natural(parse_numeral("0", k, NAT))
    one = naturals.encode_natural(parse_numeral("1", k, NAT))
    assert implementation_overlap(v1, zero, one) == 1
    pair = naturals.pair_word(parse_numeral("12", k, NAT), parse_numeral("7", k, NAT))
    # addition orchestration checked through its own result
    out = naturals.add_natural(StateVector.from_word(pair), k, BOSON)
    expected = naturals.pair_word(parse_numeral("12", k, NAT), parse_numeral("19", k, NAT))
    assert out == StateVector.from_word(expected)


def test_overlap_empty_result_on_domain_boundary():
    k = 10
    vdag2 = adjoint(naturals.build_successor_natural(2, k))
    five = naturals.encode_natural(parse_numeral("5", k, NAT))
    with pytest.raises(EmptyResult):
        implementation_overlap(vdag2, five, five)


def test_fit_scaling_classifies_polynomial_and_exponential():
    poly = [(L, 3 * L ** 2 + L) for L in (4, 8, 12, 16, 24, 32)]
    rep = fit_scaling(poly, "poly2")
    assert rep.verdict == "POLY" and 1.6 < rep.slope < 2.4
    rep = fit_scaling(planted_exponential((4, 8, 12, 16, 24, 32)), "exp")
    assert rep.verdict == "EXP"
    with pytest.raises(InsufficientSamples):
        fit_scaling([(1, 1), (2, 2)], "few")


def test_resource_counts_monotone_in_carry_chain():
    k = 10
    counts = []
    succ = naturals.build_successor_natural(1, k)
    for length in (1, 2, 3, 4, 5):
        # all-nines words force carries through every site
        from fockarith.numerals import Numeral
        word = naturals.encode_natural(Numeral(NAT, k, tuple([9] * length)))
        trace = ResourceTrace()
        apply(succ, StateVector.from_word(word), BOSON, trace)
        counts.append(trace.total())
    assert counts == sorted(counts)


def test_power_application_cost_bound():
    # k applications of the site-j successor cost no more than k times one
    # application of the next-site successor plus its padding overhead
    k = 3
    from fockarith.numerals import Numeral
    word = naturals.encode_natural(Numeral(NAT, k, (2, 2, 2)))
    tr_pow = ResourceTrace()
    apply(Power(naturals.build_successor_natural(1, k), k),
          StateVector.from_word(word), BOSON, tr_pow)
    tr_one = ResourceTrace()
    apply(naturals.build_successor_natural(1, k),
          StateVector.from_word(word), BOSON, tr_one)
    assert tr_pow.total() <= k * tr_one.total() + 12 * k


def test_trace_report_lines_format():
    k = 10
    master = ResourceTrace()
    measure_successor(k, [2, 3], stats=BOSON, master=master)
    lines = master.report_lines()
    assert lines
    for line in lines:
        assert line.startswith("op=successor L=")
        assert "creates=" in line and "annihilates=" in line and "projectors=" in line
