"""Abstract-to-physical relabeling, overlap checks, and resource scaling.

An embedding renames sites through a strictly increasing injection and
symbols through a kind-preserving injection (digits to digits, sign and
point fixed), the component-wise case of a state-space isometry.  Mapped
operators are rewritten primitive by primitive; recursive families are
rewritten lazily as they unfold, and the word-level nodes conjugate
through the embedding.

Resource accounting rides on the evaluator's trace: the measurement
harness drives operators over growing word lengths and a log-log fit
classifies the growth as polynomial or exponential.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fock_core import (
    BOSON,
    POINT,
    SIGN_MINUS,
    SIGN_PLUS,
    BasisWord,
    FockArithError,
    Mode,
    StateVector,
    canonicalize,
    inner_product,
    is_digit,
)
from . import naturals
from .numerals import NAT, Numeral, numeral_from_int
from .operator_algebra import (
    ADJOINT_NAME,
    Adjoint,
    Annihilate,
    AnnihilateNoPhase,
    AllZeroDigitsGeq,
    Create,
    CreateNoPhase,
    CustomOp,
    DigitEq,
    EvalContext,
    Family,
    GtZero,
    Identity,
    NonzeroDigitGeq,
    NumOcc,
    Occ,
    OperatorExpr,
    Power,
    Product,
    Projector,
    ProjectorSpec,
    ResourceTrace,
    Scale,
    SignAt,
    SignMinusLenGeq,
    SignMinusLenLt,
    SignPlusAny,
    SiteSum,
    StateEq,
    Sum,
    Unocc,
    UnboundAdjointFamily,
    Zero,
    _apply_node,
    apply,
    expand_family,
)

__all__ = [
    "PhysicalEmbedding", "ResourceTrace", "UnmappedSite", "UnmappedSymbol",
    "EmptyResult", "InsufficientSamples", "map_word", "unmap_word",
    "map_state", "unmap_state", "map_operator", "implementation_overlap",
    "fit_scaling", "ScalingReport", "measure_successor", "measure_addition",
    "measure_multiplication", "planted_exponential", "resource_report_lines",
]


class UnmappedSite(FockArithError):
    pass


class UnmappedSymbol(FockArithError):
    pass


class EmptyResult(FockArithError):
    """The operator annihilated the word; no overlap is defined."""


class InsufficientSamples(FockArithError):
    pass


@dataclass(frozen=True)
class SignMinusSiteGeq(ProjectorSpec):
    """Minus sign at or above a raw site threshold (mapped-coordinate form)."""

    site: int

    def matches(self, word: BasisWord) -> bool:
        return any(m.register == self.register and m.symbol == SIGN_MINUS
                   and m.site >= self.site for m in word.modes)


@dataclass(frozen=True)
class SignMinusSiteRange(ProjectorSpec):
    lo: int
    hi: int

    def matches(self, word: BasisWord) -> bool:
        return any(m.register == self.register and m.symbol == SIGN_MINUS
                   and self.lo <= m.site <= self.hi for m in word.modes)


class PhysicalEmbedding:
    """Injective relabeling of sites and symbols.

    The site map must be strictly increasing on its domain (canonical mode
    order, and with it every length-structured projector, survives the
    relabeling).  The symbol map must keep digits digits and fix the sign
    and point symbols.
    """

    def __init__(self, site_map: dict[int, int], symbol_map: dict[int, int]):
        sites = sorted(site_map)
        for a, b in zip(sites, sites[1:]):
            if site_map[a] >= site_map[b]:
                raise FockArithError("site map must be strictly increasing")
        if len(set(site_map.values())) != len(site_map):
            raise FockArithError("site map must be injective")
        if len(set(symbol_map.values())) != len(symbol_map):
            raise FockArithError("symbol map must be injective")
        for sym, image in symbol_map.items():
            if is_digit(sym) != is_digit(image):
                raise FockArithError("symbol map must preserve digit-ness")
            if sym in (SIGN_PLUS, SIGN_MINUS, POINT) and image != sym:
                raise FockArithError("sign and point symbols are fixed")
        self.site_map = dict(site_map)
        self.symbol_map = dict(symbol_map)
        self.site_inv = {v: k for k, v in site_map.items()}
        self.symbol_inv = {v: k for k, v in symbol_map.items()}

    def site(self, s: int) -> int:
        try:
            return self.site_map[s]
        except KeyError:
            raise UnmappedSite(f"site {s} outside the embedding domain") from None

    def symbol(self, sym: int) -> int:
        if sym in (SIGN_PLUS, SIGN_MINUS, POINT):
            return sym
        try:
            return self.symbol_map[sym]
        except KeyError:
            raise UnmappedSymbol(f"symbol {sym} outside the embedding domain") from None

    def site_back(self, s: int) -> int:
        try:
            return self.site_inv[s]
        except KeyError:
            raise UnmappedSite(f"site {s} outside the embedding image") from None

    def symbol_back(self, sym: int) -> int:
        if sym in (SIGN_PLUS, SIGN_MINUS, POINT):
            return sym
        try:
            return self.symbol_inv[sym]
        except KeyError:
            raise UnmappedSymbol(f"symbol {sym} outside the embedding image") from None

    @classmethod
    def site_shift(cls, offset: int, k: int, lo: int = -8, hi: int = 12) -> "PhysicalEmbedding":
        return cls({s: s + offset for s in range(lo, hi + 1)},
                   {h: h for h in range(k)})


def map_word(emb: PhysicalEmbedding, word: BasisWord) -> BasisWord:
    modes = [Mode(m.register, emb.site(m.site), emb.symbol(m.symbol))
             for m in word.modes]
    mapped, _ = canonicalize(modes, BOSON)
    return mapped


def unmap_word(emb: PhysicalEmbedding, word: BasisWord) -> BasisWord:
    modes = [Mode(m.register, emb.site_back(m.site), emb.symbol_back(m.symbol))
             for m in word.modes]
    mapped, _ = canonicalize(modes, BOSON)
    return mapped


def map_state(emb: PhysicalEmbedding, v: StateVector) -> StateVector:
    out = StateVector()
    for word, amp in v.terms.items():
        out.add_term(map_word(emb, word), amp)
    return out


def unmap_state(emb: PhysicalEmbedding, v: StateVector) -> StateVector:
    out = StateVector()
    for word, amp in v.terms.items():
        out.add_term(unmap_word(emb, word), amp)
    return out


def _map_spec(emb: PhysicalEmbedding, spec: ProjectorSpec) -> ProjectorSpec:
    if isinstance(spec, Occ):
        return Occ(spec.register, emb.site(spec.site))
    if isinstance(spec, Unocc):
        return Unocc(spec.register, emb.site(spec.site))
    if isinstance(spec, DigitEq):
        return DigitEq(spec.register, emb.site(spec.site), emb.symbol(spec.value))
    if isinstance(spec, GtZero):
        return GtZero(spec.register, emb.site(spec.site), emb.symbol(spec.zero))
    if isinstance(spec, NumOcc):
        return NumOcc(spec.register, emb.site(spec.site))
    if isinstance(spec, SignAt):
        return SignAt(spec.register, emb.site(spec.site), spec.sign_symbol)
    if isinstance(spec, SignPlusAny):
        return spec
    if isinstance(spec, SignMinusLenGeq):
        return SignMinusSiteGeq(spec.register, emb.site(spec.min_len + 1))
    if isinstance(spec, SignMinusLenLt):
        return SignMinusSiteRange(spec.register, emb.site(2), emb.site(spec.bound))
    if isinstance(spec, SignMinusSiteGeq):
        return SignMinusSiteGeq(spec.register, emb.site(spec.site))
    if isinstance(spec, SignMinusSiteRange):
        return SignMinusSiteRange(spec.register, emb.site(spec.lo), emb.site(spec.hi))
    if isinstance(spec, StateEq):
        modes = tuple(sorted(
            (Mode(m.register, emb.site(m.site), emb.symbol(m.symbol))
             for m in spec.modes), key=lambda m: (m.register, -m.site)))
        return StateEq(spec.register, modes)
    if isinstance(spec, NonzeroDigitGeq):
        min_site = None if spec.min_site is None else emb.site(spec.min_site)
        return NonzeroDigitGeq(spec.register, min_site, emb.symbol(spec.zero))
    if isinstance(spec, AllZeroDigitsGeq):
        return AllZeroDigitsGeq(spec.register, emb.site(spec.min_site),
                                emb.symbol(spec.zero))
    raise FockArithError(f"cannot map projector {spec!r}")


class MappedFamily(CustomOp):
    """A family reference evaluated in embedded coordinates: each lazy
    expansion is rewritten through the embedding before it acts."""

    def __init__(self, emb: PhysicalEmbedding, name: str, index: int,
                 k: int, register: int):
        self.emb = emb
        self.name = name
        self.index = index
        self.k = k
        self.register = register

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        sv = StateVector.from_word(word)
        ctx.depth += 1
        try:
            if ctx.depth > ctx.soft_limit:
                budget = ctx.family_budget(sv, self.index) + 16
                if ctx.depth > budget:
                    from .operator_algebra import RecursionOverflow
                    raise RecursionOverflow(
                        f"mapped family {self.name!r} exceeded depth {budget}")
                ctx.soft_limit = budget
            body = expand_family(self.name, self.k, self.register, self.index, ctx.stats)
            return list(_apply_node(map_operator(self.emb, body), sv, ctx).terms.items())
        finally:
            ctx.depth -= 1

    def adjoint_expr(self) -> OperatorExpr:
        adj = ADJOINT_NAME.get(self.name)
        if adj is None:
            raise UnboundAdjointFamily(f"family {self.name!r} has no adjoint family")
        return MappedFamily(self.emb, adj, self.index, self.k, self.register)


class MappedSiteSum(CustomOp):
    def __init__(self, emb: PhysicalEmbedding, inner: SiteSum):
        self.emb = emb
        self.inner = inner

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        abstract_extent = 1
        for m in word.modes:
            abstract_extent = max(abstract_extent, abs(self.emb.site_back(m.site)))
        out = StateVector()
        sv = StateVector.from_word(word)
        for j in range(self.inner.lo, abstract_extent + self.inner.margin + 1):
            node = MappedFamily(self.emb, self.inner.name, j,
                                self.inner.k, self.inner.register)
            partial = _apply_node(node, sv, ctx)
            for w, a in partial.terms.items():
                out.add_term(w, a)
        return list(out.terms.items())

    def adjoint_expr(self) -> OperatorExpr:
        adj = ADJOINT_NAME.get(self.inner.name)
        if adj is None:
            raise UnboundAdjointFamily(f"family {self.inner.name!r} has no adjoint family")
        return MappedSiteSum(self.emb, SiteSum(adj, self.inner.k, self.inner.register,
                                               self.inner.lo, self.inner.margin))


class MappedWordOp(CustomOp):
    """Conjugation wrapper for word-level nodes: unmap, act, map back."""

    def __init__(self, emb: PhysicalEmbedding, inner: CustomOp):
        self.emb = emb
        self.inner = inner

    def eval_word(self, word: BasisWord, ctx: EvalContext):
        abstract = unmap_word(self.emb, word)
        return [(map_word(self.emb, w), a)
                for w, a in self.inner.eval_word(abstract, ctx)]

    def adjoint_expr(self) -> OperatorExpr:
        return MappedWordOp(self.emb, self.inner.adjoint_expr())


def map_operator(emb: PhysicalEmbedding, expr: OperatorExpr) -> OperatorExpr:
    """Rewrite an operator into embedded coordinates, primitive by primitive."""
    if isinstance(expr, Create):
        return Create(Mode(expr.mode.register, emb.site(expr.mode.site),
                           emb.symbol(expr.mode.symbol)))
    if isinstance(expr, Annihilate):
        return Annihilate(Mode(expr.mode.register, emb.site(expr.mode.site),
                               emb.symbol(expr.mode.symbol)))
    if isinstance(expr, CreateNoPhase):
        return CreateNoPhase(Mode(expr.mode.register, emb.site(expr.mode.site),
                                  emb.symbol(expr.mode.symbol)))
    if isinstance(expr, AnnihilateNoPhase):
        return AnnihilateNoPhase(Mode(expr.mode.register, emb.site(expr.mode.site),
                                      emb.symbol(expr.mode.symbol)))
    if isinstance(expr, Projector):
        return Projector(_map_spec(emb, expr.spec))
    if isinstance(expr, (Identity, Zero)):
        return expr
    if isinstance(expr, Scale):
        return Scale(expr.coefficient, map_operator(emb, expr.expr))
    if isinstance(expr, Sum):
        return Sum(tuple(map_operator(emb, t) for t in expr.terms))
    if isinstance(expr, Product):
        return Product(tuple(map_operator(emb, f) for f in expr.factors))
    if isinstance(expr, Power):
        return Power(map_operator(emb, expr.base), expr.exponent)
    if isinstance(expr, Adjoint):
        return Adjoint(map_operator(emb, expr.expr))
    if isinstance(expr, Family):
        return MappedFamily(emb, expr.name, expr.index, expr.k, expr.register)
    if isinstance(expr, SiteSum):
        return MappedSiteSum(emb, expr)
    if isinstance(expr, MappedFamily) or isinstance(expr, MappedSiteSum):
        raise FockArithError("operator is already embedded")
    if isinstance(expr, CustomOp):
        return MappedWordOp(emb, expr)
    raise FockArithError(f"cannot map {expr!r}")


# ---------------------------------------------------------------------------
# Overlap
# ---------------------------------------------------------------------------

def implementation_overlap(op: OperatorExpr, word: BasisWord,
                           expected: BasisWord, stats: str = BOSON) -> Fraction:
    """|<expected | op word>|^2 / ||op word||^2; exactly 1 when the operator
    lands on the predicted word."""
    result = apply(op, StateVector.from_word(word), stats)
    if result.is_zero():
        raise EmptyResult("operator annihilated the input word")
    overlap = inner_product(StateVector.from_word(expected), result)
    norm = inner_product(result, result)
    return overlap * overlap / norm


# ---------------------------------------------------------------------------
# Resource measurement and scaling fits
# ---------------------------------------------------------------------------

@dataclass
class ScalingReport:
    op_name: str
    slope: float
    verdict: str
    loglog_r2: float
    semilog_r2: float
    samples: list[tuple[int, int]]

    def lines(self) -> list[str]:
        out = [f"op={self.op_name} L={L} count={c}" for L, c in self.samples]
        out.append(f"slope={self.slope:.3f} verdict={self.verdict}")
        return out


def _r_squared(x: np.ndarray, y: np.ndarray, coeffs: np.ndarray) -> float:
    pred = np.polyval(coeffs, x)
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0
    return 1.0 - ss_res / ss_tot


def fit_scaling(samples: Sequence[tuple[int, int]], op_name: str = "op",
                poly_cap: float = 3.5) -> ScalingReport:
    """Least-squares slope of log(count) vs log(L); EXP when a straight
    line in L explains log(count) better with positive slope."""
    if len(samples) < 6:
        raise InsufficientSamples(f"need >= 6 samples, got {len(samples)}")
    lengths = np.array([float(L) for L, _ in samples])
    counts = np.array([float(max(c, 1)) for _, c in samples])
    if np.any(np.diff(lengths) <= 0):
        raise FockArithError("lengths must be strictly increasing")
    log_l = np.log(lengths)
    log_c = np.log(counts)
    loglog = np.polyfit(log_l, log_c, 1)
    semilog = np.polyfit(lengths, log_c, 1)
    loglog_r2 = _r_squared(log_l, log_c, loglog)
    semilog_r2 = _r_squared(lengths, log_c, semilog)
    slope = float(loglog[0])
    if semilog[0] > 0 and semilog_r2 > loglog_r2:
        verdict = "EXP"
    elif slope <= poly_cap:
        verdict = "POLY"
    else:
        verdict = "EXP"
    return ScalingReport(op_name, slope, verdict, loglog_r2, semilog_r2,
                         [(int(L), int(c)) for L, c in samples])


def _worst_case_numeral(k: int, length: int) -> Numeral:
    return Numeral(NAT, k, tuple([k - 1] * length))


def measure_successor(k: int, lengths: Iterable[int], j: int = 1,
                      stats: str = BOSON,
                      master: ResourceTrace | None = None) -> list[tuple[int, int]]:
    """Primitive counts for one successor application on the all-(k-1)
    word of each length (the full carry chain)."""
    points = []
    succ = naturals.build_successor_natural(j, k)
    for L in lengths:
        word = naturals.encode_natural(_worst_case_numeral(k, L))
        trace = ResourceTrace()
        apply(succ, StateVector.from_word(word), stats, trace)
        trace.commit("successor", L, (0, 0, 0))
        points.append((L, trace.total()))
        if master is not None:
            master.absorb(trace)
    return points


def measure_addition(k: int, lengths: Iterable[int], stats: str = BOSON,
                     master: ResourceTrace | None = None) -> list[tuple[int, int]]:
    points = []
    for L in lengths:
        s = _worst_case_numeral(k, L)
        t = _worst_case_numeral(k, L)
        pair = StateVector.from_word(naturals.pair_word(s, t))
        trace = ResourceTrace()
        naturals.add_natural(pair, k, stats, trace)
        trace.commit("add", L, (0, 0, 0))
        points.append((L, trace.total()))
        if master is not None:
            master.absorb(trace)
    return points


def measure_multiplication(k: int, lengths: Iterable[int], stats: str = BOSON,
                           master: ResourceTrace | None = None) -> list[tuple[int, int]]:
    points = []
    zero = numeral_from_int(0, k, NAT)
    for L in lengths:
        s = _worst_case_numeral(k, L)
        t = _worst_case_numeral(k, L)
        triple = StateVector.from_word(naturals.triple_word(s, t, zero))
        trace = ResourceTrace()
        naturals.multiply_natural(triple, k, stats, trace)
        trace.commit("multiply", L, (0, 0, 0))
        points.append((L, trace.total()))
        if master is not None:
            master.absorb(trace)
    return points


def planted_exponential(lengths: Iterable[int]) -> list[tuple[int, int]]:
    return [(L, 2 ** L) for L in lengths]


def resource_report_lines(trace: ResourceTrace, fits: Iterable[ScalingReport]) -> list[str]:
    lines = trace.report_lines()
    for fit in fits:
        lines.extend(fit.lines())
    return lines
