"""Primitive, 2-primitive and k-normal elements of finite field extensions."""

from .errors import (
    CapExceeded,
    FieldMismatch,
    MixedClassification,
    NotADivisor,
    NotPrime,
    PreconditionViolated,
    PrimNormalError,
    ZeroElement,
)
from .ffield import ExtensionField, FieldElement, PrimePower, build_field, field_for
from .fqpoly import FqPolynomial
from .intarith import IntFactorization, factorize

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "ExtensionField",
    "FieldElement",
    "FieldMismatch",
    "FqPolynomial",
    "IntFactorization",
    "MixedClassification",
    "NotADivisor",
    "NotPrime",
    "PreconditionViolated",
    "PrimNormalError",
    "PrimePower",
    "ZeroElement",
    "build_field",
    "factorize",
    "field_for",
]
