"""Independent oracle, span enumeration, and the executable axiom suites.

The oracle works on (numerator, exponent) pairs with plain big-integer
arithmetic and never touches the operator machinery, so every comparison
between a decoded operator result and an oracle value is a genuine
two-route check.  The exponent-vector utilities turn the multiplication
proof's collected successor powers into numbers that can be rebuilt
through the operators and compared against digit convolution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Iterable, NamedTuple

from .fock_core import (
    BOSON,
    FERMION,
    BasisWord,
    FockArithError,
    StateVector,
    inner_product,
    merge_registers,
)
from . import integers, naturals, rationals
from .numerals import INT, NAT, RAT, Numeral, numeral_from_fraction, numeral_from_int
from .operator_algebra import (
    FAMILY_REGISTRY,
    Power,
    Projector,
    SignMinusLenGeq,
    SignMinusLenLt,
    StateEq,
    adjoint,
    apply,
    equal_on_span,
    product,
    summed,
)


# ---------------------------------------------------------------------------
# Oracle
# ---------------------------------------------------------------------------

class OracleValue(NamedTuple):
    """Exact number num / base**exp with big-integer components."""

    base: int
    num: int
    exp: int

    def normalized(self) -> "OracleValue":
        num, exp = self.num, self.exp
        if num == 0:
            return OracleValue(self.base, 0, 0)
        while exp > 0 and num % self.base == 0:
            num //= self.base
            exp -= 1
        return OracleValue(self.base, num, exp)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.base ** self.exp)


def oracle(op: str, a: OracleValue, b: OracleValue) -> OracleValue:
    if a.base != b.base:
        raise FockArithError(f"base mismatch {a.base} != {b.base}")
    k = a.base
    if op in ("add", "sub"):
        exp = max(a.exp, b.exp)
        na = a.num * k ** (exp - a.exp)
        nb = b.num * k ** (exp - b.exp)
        return OracleValue(k, na + nb if op == "add" else na - nb, exp).normalized()
    if op == "mul":
        return OracleValue(k, a.num * b.num, a.exp + b.exp).normalized()
    raise FockArithError(f"unknown oracle op {op!r}")


def numeral_to_oracle(n: Numeral) -> OracleValue:
    num, exp = n.value_pair()
    return OracleValue(n.base, num, exp).normalized()


def oracle_to_numeral(v: OracleValue, flavor: str) -> Numeral:
    if flavor == RAT:
        return numeral_from_fraction(v.as_fraction(), v.base, RAT)
    value = v.normalized()
    if value.exp != 0:
        raise FockArithError(f"{value} is not an integer")
    return numeral_from_int(value.num, v.base, flavor)


# ---------------------------------------------------------------------------
# Exponent vectors (the multiplication proof's bookkeeping)
# ---------------------------------------------------------------------------

def convolution_exponents(s: Numeral, t: Numeral) -> dict[int, int]:
    """Brute-force digit convolution: exponent at site m is the sum of
    s(a)t(b) over a + b = m + 1."""
    out: dict[int, int] = {}
    for a, da in enumerate(s.digits, start=1):
        for b, db in enumerate(t.digits, start=1):
            if da * db:
                out[a + b - 1] = out.get(a + b - 1, 0) + da * db
    return out


def exponent_vectors(s: Numeral, t: Numeral) -> dict[int, int]:
    """Collected successor powers for the product s*t, from the closed-form
    range formulas; boundary rows of adjacent ranges must agree."""
    if len(t.digits) < len(s.digits):
        s, t = t, s
    sd, td = s.digits, t.digits
    ls, lt = len(sd), len(td)

    def F(ell: int) -> int:
        return sum(sd[ell - h - 1] * td[h] for h in range(ell))

    def G(m: int) -> int:
        return sum(sd[ls - h - 1] * td[m + h - ls]
                   for h in range(ls) if 0 <= m + h - ls < lt)

    def E(n: int) -> int:
        return sum(sd[ls - h - 1] * td[lt - n + h - 1] for h in range(n + 1))

    assert F(ls) == G(ls), "low/middle boundary mismatch"
    if ls >= 2:
        assert G(lt) == E(ls - 1), "middle/high boundary mismatch"
    vec: dict[int, int] = {}
    for ell in range(1, ls + 1):
        vec[ell] = F(ell)
    for m in range(ls, lt + 1):
        vec[m] = G(m)
    for n in range(ls - 1):
        vec[lt + ls - 1 - n] = E(n)
    return {site: e for site, e in vec.items() if e}


def reconstruct_from_exponents(vec: dict[int, int], k: int,
                               stats: str = BOSON) -> Numeral:
    """Rebuild the number by applying the collected successor powers to the
    zero word; exponents above k-1 are fine because of the power law."""
    state = StateVector.from_word(naturals.encode_natural(numeral_from_int(0, k, NAT)))
    for site in sorted(vec):
        state = apply(Power(naturals.build_successor_natural(site, k), vec[site]),
                      state, stats)
    word, amp = state.single_word()
    if amp != 1:
        raise FockArithError(f"reconstruction amplitude {amp}")
    return naturals.decode_natural(word, k)


def check_distributive_step(s: Numeral, t: Numeral, j: int,
                            stats: str = BOSON) -> bool:
    """(s + k**(j-1)) * t == s*t + k**(j-1)*t, three ways: collected
    exponent vectors, their operator reconstructions, and the full
    multiply applied after a first-register successor."""
    k = s.base
    if not 1 <= j <= len(s.digits):
        raise FockArithError(f"j={j} outside 1..{len(s.digits)}")
    lhs_vec = dict(exponent_vectors(s, t))
    for r, d in enumerate(t.digits, start=1):
        if d:
            site = r + j - 1
            lhs_vec[site] = lhs_vec.get(site, 0) + d
    s_next = oracle_to_numeral(
        oracle("add", numeral_to_oracle(s),
               OracleValue(k, k ** (j - 1), 0)), NAT)
    rhs_vec = exponent_vectors(s_next, t)
    no_carry = s.digits[j - 1] + 1 < k and t.value() != 0
    if no_carry and lhs_vec != rhs_vec:
        return False
    expected = oracle_to_numeral(
        oracle("mul", numeral_to_oracle(s_next), numeral_to_oracle(t)), NAT)
    if reconstruct_from_exponents(lhs_vec, k, stats) != expected:
        return False
    if reconstruct_from_exponents(rhs_vec, k, stats) != expected:
        return False
    zero = numeral_from_int(0, k, NAT)
    triple = StateVector.from_word(naturals.triple_word(s, t, zero))
    bumped = apply(naturals.build_successor_natural(j, k, register=1), triple, stats)
    result = naturals.multiply_natural(bumped, k, stats)
    target = StateVector.from_word(naturals.triple_word(s_next, t, expected))
    return result == target


# ---------------------------------------------------------------------------
# The k-th-power decomposition of the signed successor
# ---------------------------------------------------------------------------

def check_appendixB_decomposition(j: int, k: int, span: Iterable[BasisWord],
                                  stats: str = BOSON, register: int = 1) -> bool:
    """Evaluate the four-part expansion of the k-th power of the signed
    successor and confirm it matches both the power and the next-site
    successor, word by word."""
    iplus = integers.positive_successor(j, k, register)
    w_flip = integers.build_sign_flip(k, register)
    flip_small = integers.SmallNegFlip(
        j, k, register, lambda site: integers.positive_successor(site, k, register),
        min_guard_site=j)
    p_zero = Projector(StateEq(register, integers.zero_word_modes(register)))
    p_neg_geq = Projector(SignMinusLenGeq(register, j))
    p_neg_lt = Projector(SignMinusLenLt(register, j))
    neg_step = product([w_flip, adjoint(iplus), w_flip])

    t1 = Power(iplus, k)
    t2_terms = []
    for ell in range(1, k):
        middle = summed([
            product([iplus, p_zero, w_flip]),
            product([flip_small, p_neg_lt]),
        ])
        t2_terms.append(product([
            Power(iplus, ell - 1), middle, Power(neg_step, k - ell), p_neg_geq,
        ]))
    t3 = product([
        summed([product([p_zero, w_flip]), integers.minus_nonzero(register)]),
        Power(neg_step, k), p_neg_geq,
    ])
    t4 = product([Power(iplus, k - 1), flip_small, p_neg_lt])
    decomposition = summed([t1] + t2_terms + [t3, t4])

    full = integers.build_successor_integer(j, k, register)
    span = list(span)
    if not equal_on_span(decomposition, Power(full, k), span, stats):
        return False
    return bool(equal_on_span(decomposition,
                              integers.build_successor_integer(j + 1, k, register),
                              span, stats))


# ---------------------------------------------------------------------------
# Span enumeration
# ---------------------------------------------------------------------------

def natural_numerals(k: int, max_len: int):
    for length in range(1, max_len + 1):
        for digits in iproduct(range(k), repeat=length):
            if length > 1 and digits[-1] == 0:
                continue
            yield Numeral(NAT, k, digits)


def integer_numerals(k: int, max_len: int):
    for n in natural_numerals(k, max_len):
        yield Numeral(INT, k, n.digits, 1)
        if any(n.digits):
            yield Numeral(INT, k, n.digits, -1)


def rational_numerals(k: int, max_int: int, max_frac: int):
    for n in rationals.rational_span_numerals(k, max_int + max_frac):
        if len(n.digits) <= max_int and len(n.frac) <= max_frac:
            yield n


def natural_span(k: int, max_len: int) -> list[BasisWord]:
    return [naturals.encode_natural(n) for n in natural_numerals(k, max_len)]


def integer_span(k: int, max_len: int) -> list[BasisWord]:
    return [integers.encode_integer(n) for n in integer_numerals(k, max_len)]


def rational_span(k: int, max_int: int, max_frac: int) -> list[BasisWord]:
    return [rationals.encode_rational(n) for n in rational_numerals(k, max_int, max_frac)]


def random_numeral(rng: random.Random, k: int, flavor: str, max_len: int,
                   max_frac: int = 3) -> Numeral:
    length = rng.randint(1, max_len)
    digits = [rng.randrange(k) for _ in range(length)]
    if length > 1:
        digits[-1] = rng.randrange(1, k)
    sign = 1 if flavor == NAT else rng.choice((1, -1))
    if flavor == RAT:
        frac_len = rng.randint(1, max_frac)
        frac = [rng.randrange(k) for _ in range(frac_len)]
        if frac_len > 1:
            frac[-1] = rng.randrange(1, k)
        if sign < 0 and not any(digits) and not any(frac):
            sign = 1
        return Numeral(RAT, k, tuple(digits), sign, tuple(frac))
    if sign < 0 and not any(digits):
        sign = 1
    return Numeral(flavor, k, tuple(digits), sign)


# ---------------------------------------------------------------------------
# Flavor plumbing shared by the suite and the CLI
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlavorOps:
    flavor: str
    encode: Callable
    decode: Callable
    successor: Callable
    add: Callable
    subtract: Callable
    multiply: Callable
    pair_word: Callable
    triple_word: Callable


def flavor_ops(flavor: str) -> FlavorOps:
    if flavor == NAT:
        return FlavorOps(NAT, naturals.encode_natural, naturals.decode_natural,
                         naturals.build_successor_natural, naturals.add_natural,
                         naturals.subtract_natural, naturals.multiply_natural,
                         naturals.pair_word, naturals.triple_word)
    if flavor == INT:
        return FlavorOps(INT, integers.encode_integer, integers.decode_integer,
                         integers.build_successor_integer, integers.add_integer,
                         integers.subtract_integer, integers.multiply_integer,
                         integers.pair_word_int, integers.triple_word_int)
    if flavor == RAT:
        return FlavorOps(RAT, rationals.encode_rational, rationals.decode_rational,
                         rationals.build_successor_rational, rationals.add_rational,
                         rationals.subtract_rational, rationals.multiply_rational,
                         rationals.pair_word_rat, rationals.triple_word_rat)
    raise FockArithError(f"unknown flavor {flavor!r}")


# ---------------------------------------------------------------------------
# Axiom suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuiteConfig:
    k: int = 2
    stats: str = BOSON
    flavor: str = NAT
    max_len: int = 3
    seed: int = 0
    samples: int = 60


@dataclass
class CheckResult:
    check_id: str
    flavor: str
    k: int
    stats: str
    passed: bool
    witness: str = "-"

    def line(self) -> str:
        stats = "b" if self.stats == BOSON else "f"
        result = "pass" if self.passed else "fail"
        return (f"check={self.check_id} flavor={self.flavor} k={self.k} "
                f"stats={stats} result={result} witness={self.witness}")


@dataclass
class SuiteReport:
    results: list[CheckResult] = field(default_factory=list)

    def record(self, cfg: SuiteConfig, check_id: str, passed: bool,
               witness: str = "-") -> None:
        self.results.append(CheckResult(check_id, cfg.flavor, cfg.k, cfg.stats,
                                        passed, witness if not passed else "-"))

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = [r.line() for r in self.results]
        passed = sum(r.passed for r in self.results)
        out.append(f"summary checks={len(self.results)} passed={passed} "
                   f"failed={len(self.results) - passed}")
        return out


def _suite_numerals(cfg: SuiteConfig) -> list[Numeral]:
    if cfg.k <= 3:
        if cfg.flavor == NAT:
            return list(natural_numerals(cfg.k, cfg.max_len))
        if cfg.flavor == INT:
            return list(integer_numerals(cfg.k, cfg.max_len))
        return list(rational_numerals(cfg.k, cfg.max_len, min(cfg.max_len, 2)))
    rng = random.Random(cfg.seed)
    uniq = {}
    while len(uniq) < cfg.samples:
        n = random_numeral(rng, cfg.k, cfg.flavor, cfg.max_len)
        uniq[(n.sign, n.digits, n.frac)] = n
    return list(uniq.values())


def _sites_for(cfg: SuiteConfig) -> list[int]:
    sites = list(range(1, min(cfg.max_len, 3) + 1))
    if cfg.flavor == RAT:
        sites = [-s for s in sites[:2]] + sites
    return sites


def run_axiom_suite(cfg: SuiteConfig) -> SuiteReport:
    """Execute the flavor's algebraic checks and report pass/fail lines."""
    ops = flavor_ops(cfg.flavor)
    numerals = _suite_numerals(cfg)
    span = [ops.encode(n) for n in numerals]
    k, stats = cfg.k, cfg.stats
    rng = random.Random(cfg.seed + 1)
    report = SuiteReport()

    def fmt(n: Numeral) -> str:
        return n.text()

    # --- successor shift properties ---------------------------------------
    for j in _sites_for(cfg):
        succ = ops.successor(j, k)
        succ_adj = adjoint(succ)
        ok, witness = True, "-"
        images = set()
        for n, word in zip(numerals, span):
            sv = StateVector.from_word(word)
            out = apply(succ, sv, stats)
            try:
                res_word, amp = out.single_word()
            except FockArithError:
                ok, witness = False, fmt(n)
                break
            if amp != 1 or inner_product(sv, out) != 0:
                ok, witness = False, fmt(n)
                break
            try:
                ops.decode(res_word, k)
            except FockArithError:
                ok, witness = False, fmt(n)
                break
            if res_word in images:
                ok, witness = False, fmt(n)
                break
            images.add(res_word)
            if apply(succ_adj, out, stats) != sv:
                ok, witness = False, fmt(n)
                break
            if cfg.flavor in (INT, RAT):
                back = apply(succ_adj, sv, stats)
                if apply(succ, back, stats) != sv:
                    ok, witness = False, fmt(n)
                    break
            else:
                back = apply(succ_adj, sv, stats)
                once = apply(succ, back, stats)
                twice = apply(succ, apply(succ_adj, once, stats), stats)
                if once != twice:
                    ok, witness = False, fmt(n)
                    break
        report.record(cfg, f"shift_s{j}", ok, witness)

    # --- power law ---------------------------------------------------------
    for j in _sites_for(cfg):
        nxt = rationals.next_site(j) if cfg.flavor == RAT else j + 1
        res = equal_on_span(Power(ops.successor(j, k), k), ops.successor(nxt, k),
                            span, stats)
        report.record(cfg, f"power_law_s{j}", bool(res),
                      "-" if res else str(res.witness))

    # --- non-successor floor (naturals only) -------------------------------
    if cfg.flavor == NAT:
        zero_sv = StateVector.from_word(ops.encode(numeral_from_int(0, k, NAT)))
        ok, witness = True, "-"
        for n, word in zip(numerals, span):
            out = apply(ops.successor(1, k), StateVector.from_word(word), stats)
            if inner_product(zero_sv, out) != 0:
                ok, witness = False, fmt(n)
                break
        report.record(cfg, "zero_not_successor", ok, witness)
        for j in (2, 3):
            ok, witness = True, "-"
            for n, word in zip(numerals, span):
                if n.value() < k ** (j - 1):
                    res = apply(adjoint(ops.successor(j, k)),
                                StateVector.from_word(word), stats)
                    if not res.is_zero():
                        ok, witness = False, fmt(n)
                        break
            report.record(cfg, f"small_values_not_s{j}_successors", ok, witness)

    # --- encoding identity --------------------------------------------------
    ok, witness = True, "-"
    for n, word in zip(numerals, span):
        if cfg.flavor == RAT:
            sites = {i + 1: d for i, d in enumerate(n.digits)}
            sites.update({-(i + 1): d for i, d in enumerate(n.frac)})
            zero = numeral_from_fraction(Fraction(0), k, RAT)
        else:
            sites = {i + 1: d for i, d in enumerate(n.digits)}
            zero = numeral_from_int(0, k, cfg.flavor)
        state = StateVector.from_word(ops.encode(zero))
        for site in sorted(sites):
            d = sites[site]
            if not d:
                continue
            step = ops.successor(site, k)
            if n.sign < 0:
                step = adjoint(step)
            state = apply(Power(step, d), state, stats)
        if state != StateVector.from_word(word):
            ok, witness = False, fmt(n)
            break
    report.record(cfg, "built_from_zero_by_successors", ok, witness)

    # --- arithmetic vs oracle ----------------------------------------------
    pairs = [(rng.choice(numerals), rng.choice(numerals))
             for _ in range(min(cfg.samples, len(numerals) ** 2))]
    ok, witness = True, "-"
    for a, b in pairs:
        pair = StateVector.from_word(ops.pair_word(a, b))
        out = ops.add(pair, k, stats)
        word, amp = out.single_word()
        expected = oracle_to_numeral(
            oracle("add", numeral_to_oracle(a), numeral_to_oracle(b)), cfg.flavor)
        if amp != 1 or ops.decode(word, k, 2) != expected:
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
        if ops.decode(word, k, 1) != a:
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
        if ops.subtract(out, k, stats) != pair:
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
    report.record(cfg, "add_matches_oracle", ok, witness)

    ok, witness = True, "-"
    for a, b in pairs[: max(8, len(pairs) // 3)]:
        x = rng.choice(numerals)
        triple = StateVector.from_word(ops.triple_word(a, b, x))
        out = ops.multiply(triple, k, stats)
        word, amp = out.single_word()
        expected = oracle_to_numeral(
            oracle("add", numeral_to_oracle(x),
                   oracle("mul", numeral_to_oracle(a), numeral_to_oracle(b))),
            cfg.flavor)
        if amp != 1 or ops.decode(word, k, 3) != expected:
            ok, witness = False, f"{fmt(a)},{fmt(b)},{fmt(x)}"
            break
    report.record(cfg, "multiply_matches_oracle", ok, witness)

    # --- commutativity / associativity / distributivity via oracle ---------
    ok, witness = True, "-"
    for a, b in pairs[:20]:
        va, vb = numeral_to_oracle(a), numeral_to_oracle(b)
        if oracle("add", va, vb) != oracle("add", vb, va):
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
        if oracle("mul", va, vb) != oracle("mul", vb, va):
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
        backward = StateVector.from_word(ops.pair_word(b, a))
        out_b = ops.add(backward, k, stats)
        forward = StateVector.from_word(ops.pair_word(a, b))
        out_f = ops.add(forward, k, stats)
        if ops.decode(out_f.single_word()[0], k, 2) != ops.decode(
                out_b.single_word()[0], k, 2):
            ok, witness = False, f"{fmt(a)},{fmt(b)}"
            break
    report.record(cfg, "commutativity", ok, witness)

    # --- successor/plus compatibility ---------------------------------------
    ok, witness = True, "-"
    check_sites = _sites_for(cfg)[:2]
    for a, b in pairs[:12]:
        for j in check_sites:
            pair = StateVector.from_word(ops.pair_word(a, b))
            succ2 = ops.successor(j, k, 2)
            route1 = ops.add(apply(succ2, pair, stats), k, stats)
            route2 = apply(succ2, ops.add(pair, k, stats), stats)
            if route1 != route2:
                ok, witness = False, f"{fmt(a)},{fmt(b)},s{j}"
                break
        if not ok:
            break
    report.record(cfg, "successor_commutes_with_add", ok, witness)

    # --- identity elements ---------------------------------------------------
    if cfg.flavor == RAT:
        zero = numeral_from_fraction(Fraction(0), k, RAT)
        one = numeral_from_fraction(Fraction(1), k, RAT)
    else:
        zero = numeral_from_int(0, k, cfg.flavor)
        one = numeral_from_int(1, k, cfg.flavor)
    ok, witness = True, "-"
    for n in numerals[: min(len(numerals), 20)]:
        pair = StateVector.from_word(ops.pair_word(zero, n))
        if ops.add(pair, k, stats) != pair:
            ok, witness = False, fmt(n)
            break
        triple = StateVector.from_word(ops.triple_word(one, n, zero))
        out = ops.multiply(triple, k, stats)
        if ops.decode(out.single_word()[0], k, 3) != n:
            ok, witness = False, fmt(n)
            break
    report.record(cfg, "identity_elements", ok, witness)

    # --- multiplication successor axioms ------------------------------------
    ok, witness = True, "-"
    for a, b in pairs[:8]:
        for j in check_sites[:1] if cfg.flavor == RAT else check_sites:
            va, vb = numeral_to_oracle(a), numeral_to_oracle(b)
            step = OracleValue(k, k ** (j - 1), 0) if j > 0 else \
                OracleValue(k, 1, -j)
            lhs = oracle("mul", va, oracle("add", vb, step))
            rhs = oracle("add", oracle("mul", va, vb), oracle("mul", va, step))
            if lhs != rhs:
                ok, witness = False, f"{fmt(a)},{fmt(b)},s{j}"
                break
            succ2 = ops.successor(j, k, register=2)
            triple = StateVector.from_word(ops.triple_word(a, b, zero))
            route1 = ops.multiply(apply(succ2, triple, stats), k, stats)
            expected = oracle_to_numeral(lhs, cfg.flavor)
            if ops.decode(route1.single_word()[0], k, 3) != expected:
                ok, witness = False, f"{fmt(a)},{fmt(b)},s{j}"
                break
        if not ok:
            break
    report.record(cfg, "multiply_successor_axiom", ok, witness)

    # --- discreteness only at the unit step (naturals) ----------------------
    if cfg.flavor == NAT and k >= 2:
        ok = True
        between = numeral_from_int(1, k, NAT)
        lower = numeral_from_int(0, k, NAT)
        upper_2 = numeral_from_int(k, k, NAT)
        ok = lower.value() < between.value() < upper_2.value()
        report.record(cfg, "discreteness_fails_above_unit", ok,
                      "-" if ok else "1")

    # --- flavor extras -------------------------------------------------------
    if cfg.flavor == INT:
        _integer_extras(cfg, ops, numerals, span, report, rng)
    if cfg.flavor == RAT:
        _rational_extras(cfg, ops, numerals, span, report)
    return report


def _integer_extras(cfg, ops, numerals, span, report, rng) -> None:
    k, stats = cfg.k, cfg.stats
    # every element is a successor
    ok, witness = True, "-"
    for n, word in zip(numerals, span):
        for j in (1, 2):
            succ = ops.successor(j, k)
            y = apply(adjoint(succ), StateVector.from_word(word), stats)
            if apply(succ, y, stats) != StateVector.from_word(word):
                ok, witness = False, n.text()
                break
        if not ok:
            break
    report.record(cfg, "every_element_is_successor", ok, witness)

    # additive inverse through subtraction
    ok, witness = True, "-"
    zero = numeral_from_int(0, k, INT)
    for n in numerals[:20]:
        pair = StateVector.from_word(ops.pair_word(n, zero))
        negated = ops.subtract(pair, k, stats)
        word, amp = negated.single_word()
        inv = ops.decode(word, k, 2)
        total = oracle("add", numeral_to_oracle(n), numeral_to_oracle(inv))
        if amp != 1 or total.num != 0:
            ok, witness = False, n.text()
            break
    report.record(cfg, "additive_inverse", ok, witness)

    # subtraction identity via successive powers (two routes)
    ok = True
    j, n_steps = 1, 2
    lhs = product([adjoint(integers.positive_successor(j, k)),
                   integers.positive_successor(j + n_steps, k)])
    rhs = product([Power(integers.positive_successor(jj, k), k - 1)
                   for jj in range(j + n_steps - 1, j - 1, -1)])
    plus_span = [w for n, w in zip(numerals, span) if n.sign > 0]
    res = equal_on_span(lhs, rhs, plus_span, stats)
    report.record(cfg, "power_subtraction_identity", bool(res),
                  "-" if res else str(res.witness))

    rep = integers.check_division_absence(2, 1, 15, k, stats)
    report.record(cfg, "division_absent_2_1", not rep["witnesses"],
                  "-" if not rep["witnesses"] else str(rep["witnesses"][0]))


def _rational_extras(cfg, ops, numerals, span, report) -> None:
    k, stats = cfg.k, cfg.stats
    # fraction strings build from zero through negative-site successors
    ok, witness = True, "-"
    zero = numeral_from_fraction(Fraction(0), k, RAT)
    for n in numerals:
        if any(n.digits) or n.sign < 0:
            continue
        state = StateVector.from_word(ops.encode(zero))
        for i, d in enumerate(n.frac):
            state = apply(Power(ops.successor(-(i + 1), k), d), state, stats)
        if state != StateVector.from_word(ops.encode(n)):
            ok, witness = False, n.text()
            break
    report.record(cfg, "fractions_built_from_zero", ok, witness)

    # times-k shift is a bijection fixing only the zero word
    shift = rationals.build_shift_rational(k)
    ok, witness = True, "-"
    for n, word in zip(numerals, span):
        sv = StateVector.from_word(word)
        out = apply(shift, sv, stats)
        word2, amp = out.single_word()
        if amp != 1 or apply(adjoint(shift), out, stats) != sv:
            ok, witness = False, n.text()
            break
        expected_overlap = 1 if n.is_zero() else 0
        if inner_product(sv, out) != expected_overlap:
            ok, witness = False, n.text()
            break
    report.record(cfg, "times_k_shift_bijection", ok, witness)

    # same-sign and sign-crossing subtraction identities
    for j, n_steps, check_id in ((-2, 1, "power_subtraction_frac"),
                                 (-1, 2, "power_subtraction_cross")):
        sites = []
        site = j
        for _ in range(n_steps):
            sites.append(site)
            site = rationals.next_site(site)
        lhs = product([adjoint(ops.successor(j, k)), ops.successor(site, k)])
        rhs = product([Power(ops.successor(jj, k), k - 1) for jj in reversed(sites)])
        res = equal_on_span(lhs, rhs, span, stats)
        report.record(cfg, check_id, bool(res), "-" if res else str(res.witness))
