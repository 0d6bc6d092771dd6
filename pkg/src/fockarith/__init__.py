"""Arithmetic on Fock-space number states with exact verification."""

from .fock_core import (
    BOSON,
    FERMION,
    POINT,
    SIGN_MINUS,
    SIGN_PLUS,
    BasisWord,
    DuplicateSite,
    FockArithError,
    Mode,
    StateVector,
    canonicalize,
    apply_annihilate,
    apply_create,
    dump_state,
    inner_product,
    parse_state,
)
from .numerals import (
    INT,
    NAT,
    RAT,
    DomainError,
    InvalidDigit,
    NegativeZero,
    NonCanonical,
    NonContiguousSites,
    NotKAdic,
    Numeral,
    numeral_from_fraction,
    numeral_from_int,
    parse_numeral,
)
from .operator_algebra import (
    Adjoint,
    Annihilate,
    Create,
    Family,
    Identity,
    Power,
    Product,
    Projector,
    RecursionOverflow,
    ResourceTrace,
    Scale,
    SiteSum,
    Sum,
    UnboundAdjointFamily,
    UnboundFamily,
    Zero,
    adjoint,
    apply,
    equal_on_span,
    eval_projector,
)

__version__ = "0.1.0"
