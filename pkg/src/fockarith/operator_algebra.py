"""Compositional operator expressions and their linear evaluator.

Expressions are immutable trees over creation/annihilation primitives,
projectors, sums, products (rightmost factor acts first), powers,
adjoints, and named recursive families.  Families resolve lazily through a
registry, so recursively defined operators unfold only as far as a given
state requires; a per-application depth budget turns a runaway family into
a RecursionOverflow instead of a hang.

Evaluation is exactly linear over StateVector terms and reports primitive
counts through an optional ResourceTrace side channel.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

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
    annihilate_on_word,
    create_on_word,
    is_digit,
    max_site_extent,
    symbol_text,
)

sys.setrecursionlimit(20000)


class UnboundFamily(FockArithError):
    pass


class UnboundAdjointFamily(FockArithError):
    pass


class RecursionOverflow(FockArithError):
    """A family kept expanding past the budget a finite state can justify."""


# ---------------------------------------------------------------------------
# Resource tracing
# ---------------------------------------------------------------------------

class ResourceTrace:
    """Counts of primitive events incurred by operator applications.

    Counts are additive over Sum/Product evaluation.  When ``log_events``
    is set, every primitive event is also kept as a formatted line.
    """

    __slots__ = ("creates", "annihilates", "projector_evals",
                 "family_expansions", "per_op", "events")

    def __init__(self, log_events: bool = False):
        self.creates = 0
        self.annihilates = 0
        self.projector_evals = 0
        self.family_expansions = 0
        self.per_op: dict[tuple[str, int], dict[str, int]] = {}
        self.events: list[str] | None = [] if log_events else None

    def total(self) -> int:
        return self.creates + self.annihilates + self.projector_evals

    def record(self, kind: str, register: int, site: int, sym: str, survived: bool) -> None:
        if kind == "create":
            self.creates += 1
        elif kind == "annihilate":
            self.annihilates += 1
        else:
            self.projector_evals += 1
        if self.events is not None:
            self.events.append(
                f"event={kind} reg={register} site={site} sym={sym} "
                f"survived={1 if survived else 0}"
            )

    def checkpoint(self) -> tuple[int, int, int]:
        return (self.creates, self.annihilates, self.projector_evals)

    def absorb(self, other: "ResourceTrace") -> None:
        self.creates += other.creates
        self.annihilates += other.annihilates
        self.projector_evals += other.projector_evals
        self.family_expansions += other.family_expansions
        for key, counts in other.per_op.items():
            entry = self.per_op.setdefault(key, {
                "creates": 0, "annihilates": 0, "projectors": 0})
            for field_name, value in counts.items():
                entry[field_name] += value
        if self.events is not None and other.events:
            self.events.extend(other.events)

    def commit(self, op_name: str, length: int, start: tuple[int, int, int]) -> None:
        entry = self.per_op.setdefault((op_name, length), {
            "creates": 0, "annihilates": 0, "projectors": 0})
        entry["creates"] += self.creates - start[0]
        entry["annihilates"] += self.annihilates - start[1]
        entry["projectors"] += self.projector_evals - start[2]

    def report_lines(self) -> list[str]:
        lines = []
        for (name, length), counts in sorted(self.per_op.items()):
            lines.append(
                f"op={name} L={length} creates={counts['creates']} "
                f"annihilates={counts['annihilates']} projectors={counts['projectors']}"
            )
        return lines


# ---------------------------------------------------------------------------
# Projector specifications
# ---------------------------------------------------------------------------

def _site_symbol(word: BasisWord, register: int, site: int) -> int | None:
    # words are canonical (registers ascending, sites descending), so the
    # scan can stop as soon as it passes the requested slot
    for m in word.modes:
        if m.register == register:
            if m.site == site:
                return m.symbol
            if m.site < site:
                return None
        elif m.register > register:
            return None
    return None


@dataclass(frozen=True)
class ProjectorSpec:
    register: int

    def matches(self, word: BasisWord) -> bool:
        raise NotImplementedError

    def describe(self) -> tuple[int, int, str]:
        """(register, site, sym) triple used in trace lines."""
        return (self.register, getattr(self, "site", 0), "-")


@dataclass(frozen=True)
class Occ(ProjectorSpec):
    site: int

    def matches(self, word: BasisWord) -> bool:
        return _site_symbol(word, self.register, self.site) is not None


@dataclass(frozen=True)
class Unocc(ProjectorSpec):
    site: int

    def matches(self, word: BasisWord) -> bool:
        return _site_symbol(word, self.register, self.site) is None


@dataclass(frozen=True)
class DigitEq(ProjectorSpec):
    site: int
    value: int

    def matches(self, word: BasisWord) -> bool:
        return _site_symbol(word, self.register, self.site) == self.value


@dataclass(frozen=True)
class GtZero(ProjectorSpec):
    """Site holds a digit other than the zero digit."""

    site: int
    zero: int = 0

    def matches(self, word: BasisWord) -> bool:
        sym = _site_symbol(word, self.register, self.site)
        return sym is not None and is_digit(sym) and sym != self.zero


@dataclass(frozen=True)
class NumOcc(ProjectorSpec):
    """Site occupied by a digit symbol (not a sign, not the point)."""

    site: int

    def matches(self, word: BasisWord) -> bool:
        sym = _site_symbol(word, self.register, self.site)
        return sym is not None and is_digit(sym)


@dataclass(frozen=True)
class SignAt(ProjectorSpec):
    site: int
    sign_symbol: int

    def matches(self, word: BasisWord) -> bool:
        return _site_symbol(word, self.register, self.site) == self.sign_symbol


@dataclass(frozen=True)
class SignPlusAny(ProjectorSpec):
    def matches(self, word: BasisWord) -> bool:
        return any(m.register == self.register and m.symbol == SIGN_PLUS
                   for m in word.modes)


@dataclass(frozen=True)
class SignMinusLenGeq(ProjectorSpec):
    """Minus sign sitting at site >= min_len + 1 (digit length >= min_len)."""

    min_len: int

    def matches(self, word: BasisWord) -> bool:
        return any(m.register == self.register and m.symbol == SIGN_MINUS
                   and m.site >= self.min_len + 1 for m in word.modes)


@dataclass(frozen=True)
class SignMinusLenLt(ProjectorSpec):
    """Minus sign sitting at a site in [2, bound] (digit length < bound)."""

    bound: int

    def matches(self, word: BasisWord) -> bool:
        return any(m.register == self.register and m.symbol == SIGN_MINUS
                   and 2 <= m.site <= self.bound for m in word.modes)


@dataclass(frozen=True)
class StateEq(ProjectorSpec):
    """Projector onto one specific word of this register."""

    modes: tuple[Mode, ...]

    def matches(self, word: BasisWord) -> bool:
        mine = tuple(m for m in word.modes if m.register == self.register)
        return mine == self.modes


@dataclass(frozen=True)
class NonzeroDigitGeq(ProjectorSpec):
    """Some occupied digit site >= min_site carries a nonzero digit.

    min_site None means 'anywhere'.
    """

    min_site: int | None
    zero: int = 0

    def matches(self, word: BasisWord) -> bool:
        for m in word.modes:
            if m.register != self.register or not is_digit(m.symbol):
                continue
            if self.min_site is not None and m.site < self.min_site:
                continue
            if m.symbol != self.zero:
                return True
        return False


@dataclass(frozen=True)
class AllZeroDigitsGeq(ProjectorSpec):
    """Every occupied digit site >= min_site carries the zero digit."""

    min_site: int
    zero: int = 0

    def matches(self, word: BasisWord) -> bool:
        for m in word.modes:
            if (m.register == self.register and is_digit(m.symbol)
                    and m.site >= self.min_site and m.symbol != self.zero):
                return False
        return True


def eval_projector(spec: ProjectorSpec, word: BasisWord) -> int:
    return 1 if spec.matches(word) else 0


# ---------------------------------------------------------------------------
# Expression nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Create:
    mode: Mode


@dataclass(frozen=True)
class Annihilate:
    mode: Mode


@dataclass(frozen=True)
class CreateNoPhase:
    """Creation with the fermionic insertion parity compensated away.

    Realizes the diagonal sign-correction factors attached to lone
    creations in the fermion variants of the padding operators, so the
    composite operator moves basis words with amplitude exactly +1.
    """

    mode: Mode


@dataclass(frozen=True)
class AnnihilateNoPhase:
    mode: Mode


@dataclass(frozen=True)
class Projector:
    spec: ProjectorSpec


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Zero:
    pass


IDENTITY = Identity()
ZERO = Zero()


@dataclass(frozen=True)
class Scale:
    coefficient: Fraction
    expr: "OperatorExpr"


@dataclass(frozen=True)
class Sum:
    terms: tuple["OperatorExpr", ...]


@dataclass(frozen=True)
class Product:
    """Composition; the rightmost factor is applied first."""

    factors: tuple["OperatorExpr", ...]


@dataclass(frozen=True)
class Power:
    base: "OperatorExpr"
    exponent: int


@dataclass(frozen=True)
class Adjoint:
    expr: "OperatorExpr"


@dataclass(frozen=True)
class Family:
    """Reference to a registered (possibly recursive) operator family."""

    name: str
    index: int
    k: int
    register: int


@dataclass(frozen=True)
class SiteSum:
    """Lazy sum of Family(name, j) for j from lo up to the state's extent."""

    name: str
    k: int
    register: int
    lo: int
    margin: int = 2


class CustomOp:
    """Base for operators with word-level semantics (lazily instantiated sums
    and the rational shift).  Subclasses provide eval_word and adjoint_expr."""

    def eval_word(self, word: BasisWord, ctx: "EvalContext") -> list[tuple[BasisWord, Fraction]]:
        raise NotImplementedError

    def adjoint_expr(self) -> "OperatorExpr":
        raise NotImplementedError


OperatorExpr = object  # tree over the node classes above


def summed(terms: Sequence[OperatorExpr]) -> OperatorExpr:
    terms = tuple(t for t in terms if not isinstance(t, Zero))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Sum(terms)


def product(factors: Sequence[OperatorExpr]) -> OperatorExpr:
    factors = tuple(f for f in factors if not isinstance(f, Identity))
    if any(isinstance(f, Zero) for f in factors):
        return ZERO
    if not factors:
        return IDENTITY
    if len(factors) == 1:
        return factors[0]
    return Product(factors)


# ---------------------------------------------------------------------------
# Family registry
# ---------------------------------------------------------------------------

# name -> builder(k, register, index, stats) -> OperatorExpr
FAMILY_REGISTRY: dict[str, Callable[[int, int, int, str], OperatorExpr]] = {}
ADJOINT_NAME: dict[str, str] = {}
_EXPANSION_CACHE: dict[tuple, OperatorExpr] = {}


def register_family(name: str, builder: Callable[[int, int, int, str], OperatorExpr],
                    adjoint: str | None = None) -> None:
    FAMILY_REGISTRY[name] = builder
    _EXPANSION_CACHE.clear()
    if adjoint is not None:
        ADJOINT_NAME[name] = adjoint
        ADJOINT_NAME.setdefault(adjoint, name)


def expand_family(name: str, k: int, register: int, index: int, stats: str) -> OperatorExpr:
    key = (name, k, register, index, stats)
    cached = _EXPANSION_CACHE.get(key)
    if cached is not None:
        return cached
    builder = FAMILY_REGISTRY.get(name)
    if builder is None:
        raise UnboundFamily(f"no builder registered for family {name!r}")
    expr = builder(k, register, index, stats)
    _EXPANSION_CACHE[key] = expr
    return expr


# ---------------------------------------------------------------------------
# Adjoints
# ---------------------------------------------------------------------------

def adjoint(expr: OperatorExpr) -> OperatorExpr:
    """Structural adjoint: Create <-> Annihilate, projectors fixed, products
    reversed, families mapped to their registered adjoint families."""
    if isinstance(expr, Create):
        return Annihilate(expr.mode)
    if isinstance(expr, Annihilate):
        return Create(expr.mode)
    if isinstance(expr, CreateNoPhase):
        return AnnihilateNoPhase(expr.mode)
    if isinstance(expr, AnnihilateNoPhase):
        return CreateNoPhase(expr.mode)
    if isinstance(expr, (Projector, Identity, Zero)):
        return expr
    if isinstance(expr, Scale):
        return Scale(expr.coefficient, adjoint(expr.expr))
    if isinstance(expr, Sum):
        return Sum(tuple(adjoint(t) for t in expr.terms))
    if isinstance(expr, Product):
        return Product(tuple(adjoint(f) for f in reversed(expr.factors)))
    if isinstance(expr, Power):
        return Power(adjoint(expr.base), expr.exponent)
    if isinstance(expr, Adjoint):
        return expr.expr
    if isinstance(expr, Family):
        adj = ADJOINT_NAME.get(expr.name)
        if adj is None:
            raise UnboundAdjointFamily(f"family {expr.name!r} has no adjoint family")
        return Family(adj, expr.index, expr.k, expr.register)
    if isinstance(expr, SiteSum):
        adj = ADJOINT_NAME.get(expr.name)
        if adj is None:
            raise UnboundAdjointFamily(f"family {expr.name!r} has no adjoint family")
        return SiteSum(adj, expr.k, expr.register, expr.lo, expr.margin)
    if isinstance(expr, CustomOp):
        return expr.adjoint_expr()
    raise FockArithError(f"cannot take adjoint of {expr!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

_ENV_MAXSITE = "FOCKARITH_MAXSITE"


class EvalContext:
    __slots__ = ("stats", "trace", "depth", "soft_limit", "limit_override")

    def __init__(self, stats: str, trace: ResourceTrace | None = None,
                 recursion_limit: int | None = None):
        if stats not in (BOSON, FERMION):
            raise FockArithError(f"unknown statistics {stats!r}")
        self.stats = stats
        self.trace = trace
        self.depth = 0
        env = os.environ.get(_ENV_MAXSITE)
        self.limit_override = recursion_limit if recursion_limit is not None else (
            int(env) if env else None)
        # budget checks are deferred until the depth passes this watermark;
        # legitimate recursions raise it to their state-derived budget once
        self.soft_limit = self.limit_override if self.limit_override is not None else 48

    def family_budget(self, sv: StateVector, index: int) -> int:
        if self.limit_override is not None:
            return self.limit_override
        extent = 1
        for word in sv.terms:
            extent = max(extent, max_site_extent(word))
        return extent + abs(index) + 32


_EMPTY = StateVector()


def _h_identity(expr, sv, ctx):
    return sv


def _h_zero(expr, sv, ctx):
    return _EMPTY


def _h_create(expr, sv, ctx, compensate=False):
    out = None
    stats = ctx.stats
    mode = expr.mode
    trace = ctx.trace
    for word, amp in sv.terms.items():
        res = create_on_word(word, mode, stats)
        if trace is not None:
            trace.record("create", mode.register, mode.site,
                         symbol_text(mode.symbol), res is not None)
        if res is not None:
            new_word, sign = res
            if out is None:
                out = StateVector()
            out.add_term(new_word, amp if (compensate or sign == 1) else -amp)
    return out if out is not None else _EMPTY


def _h_create_nophase(expr, sv, ctx):
    return _h_create(expr, sv, ctx, compensate=True)


def _h_annihilate(expr, sv, ctx, compensate=False):
    out = None
    stats = ctx.stats
    mode = expr.mode
    trace = ctx.trace
    for word, amp in sv.terms.items():
        res = annihilate_on_word(word, mode, stats)
        if trace is not None:
            trace.record("annihilate", mode.register, mode.site,
                         symbol_text(mode.symbol), res is not None)
        if res is not None:
            new_word, sign = res
            if out is None:
                out = StateVector()
            out.add_term(new_word, amp if (compensate or sign == 1) else -amp)
    return out if out is not None else _EMPTY


def _h_annihilate_nophase(expr, sv, ctx):
    return _h_annihilate(expr, sv, ctx, compensate=True)


def _h_projector(expr, sv, ctx):
    spec = expr.spec
    trace = ctx.trace
    out = None
    for word, amp in sv.terms.items():
        keep = spec.matches(word)
        if trace is not None:
            reg, site, sym = spec.describe()
            trace.record("projector", reg, site, sym, keep)
        if keep:
            if out is None:
                out = StateVector()
            out.add_term(word, amp)
    return out if out is not None else _EMPTY


def _h_product(expr, sv, ctx):
    current = sv
    for factor in reversed(expr.factors):
        current = _apply_node(factor, current, ctx)
        if not current.terms:
            return _EMPTY
    return current


def _h_sum(expr, sv, ctx):
    out = StateVector()
    for term in expr.terms:
        partial = _apply_node(term, sv, ctx)
        if partial.terms:
            for word, amp in partial.terms.items():
                out.add_term(word, amp)
    return out


def _h_scale(expr, sv, ctx):
    return _apply_node(expr.expr, sv, ctx).scaled(expr.coefficient)


def _h_power(expr, sv, ctx):
    current = sv
    for _ in range(expr.exponent):
        current = _apply_node(expr.base, current, ctx)
        if not current.terms:
            return _EMPTY
    return current


def _h_adjoint(expr, sv, ctx):
    return _apply_node(adjoint(expr.expr), sv, ctx)


def _h_family(expr, sv, ctx):
    ctx.depth += 1
    if ctx.trace is not None:
        ctx.trace.family_expansions += 1
    try:
        if ctx.depth > ctx.soft_limit:
            budget = ctx.family_budget(sv, expr.index)
            if ctx.depth > budget:
                raise RecursionOverflow(
                    f"family {expr.name!r} exceeded depth {budget} at index {expr.index}")
            ctx.soft_limit = budget
        body = expand_family(expr.name, expr.k, expr.register, expr.index, ctx.stats)
        return _apply_node(body, sv, ctx)
    finally:
        ctx.depth -= 1


def _h_sitesum(expr, sv, ctx):
    out = StateVector()
    for word, amp in sv.terms.items():
        hi = max_site_extent(word) + expr.margin
        single = StateVector({word: amp})
        for j in range(expr.lo, hi + 1):
            partial = _apply_node(
                Family(expr.name, j, expr.k, expr.register), single, ctx)
            for w, a in partial.terms.items():
                out.add_term(w, a)
    return out


def _h_custom(expr, sv, ctx):
    out = StateVector()
    for word, amp in sv.terms.items():
        for w, a in expr.eval_word(word, ctx):
            out.add_term(w, amp * a)
    return out


_HANDLERS = {
    Identity: _h_identity,
    Zero: _h_zero,
    Create: _h_create,
    CreateNoPhase: _h_create_nophase,
    Annihilate: _h_annihilate,
    AnnihilateNoPhase: _h_annihilate_nophase,
    Projector: _h_projector,
    Product: _h_product,
    Sum: _h_sum,
    Scale: _h_scale,
    Power: _h_power,
    Adjoint: _h_adjoint,
    Family: _h_family,
    SiteSum: _h_sitesum,
}


def _apply_node(expr: OperatorExpr, sv: StateVector, ctx: EvalContext) -> StateVector:
    if not sv.terms:
        return _EMPTY
    handler = _HANDLERS.get(type(expr))
    if handler is None:
        if isinstance(expr, CustomOp):
            return _h_custom(expr, sv, ctx)
        raise FockArithError(f"cannot evaluate {expr!r}")
    return handler(expr, sv, ctx)


def apply(expr: OperatorExpr, v: StateVector, stats: str,
          trace: ResourceTrace | None = None,
          recursion_limit: int | None = None) -> StateVector:
    """Apply an operator expression linearly to a state."""
    ctx = EvalContext(stats, trace, recursion_limit)
    return _apply_node(expr, v, ctx)


def apply_word(expr: OperatorExpr, word: BasisWord, stats: str,
               trace: ResourceTrace | None = None) -> StateVector:
    return apply(expr, StateVector.from_word(word), stats, trace)


# ---------------------------------------------------------------------------
# Span comparison
# ---------------------------------------------------------------------------

@dataclass
class EqualityResult:
    equal: bool
    witness: BasisWord | None = None
    left_image: StateVector | None = None
    right_image: StateVector | None = None

    def __bool__(self) -> bool:
        return self.equal


def equal_on_span(e1: OperatorExpr, e2: OperatorExpr, span: Iterable[BasisWord],
                  stats: str) -> EqualityResult:
    """Exact state-wise equality of two operators over a finite span; on
    failure reports the first witness word together with both images."""
    for word in span:
        sv = StateVector.from_word(word)
        left = apply(e1, sv, stats)
        right = apply(e2, sv, stats)
        if left != right:
            return EqualityResult(False, word, left, right)
    return EqualityResult(True)
