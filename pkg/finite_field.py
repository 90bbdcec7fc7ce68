#!/usr/bin/env python3
"""
Finite Field Module
Arithmetic in GF(2) and GF(2^N) under a chosen primitive polynomial,
including positive and negative Frobenius powers.

Elements are galois FieldArray scalars. The canonical representation is the
polynomial-basis bit-vector, exposed as the unsigned integer sum(bit_i * 2^i).
"""

from functools import lru_cache
from typing import Optional

import galois
import numpy as np

from log_config import get_logger

logger = get_logger(__name__)

# r(x) = 1 + x^2 + x^3 + x^4 + x^8
EXAMPLE_POLY = 0b100011101
DEFAULT_DEGREE = 8

# Order of x is computed explicitly up to this degree, larger fields rely on galois
PRIMITIVITY_CHECK_MAX_DEGREE = 16


class FieldConfigError(ValueError):
    """Raised when a field cannot be built from the requested polynomial"""


class FieldMismatchError(ValueError):
    """Raised when operands come from different fields"""


class FieldContext:
    """
    GF(2^N) defined by a primitive polynomial.

    The context is immutable after construction; the galois field class it
    wraps is shared by every element and matrix built from it.
    """

    q = 2

    def __init__(self, degree: int = DEFAULT_DEGREE, primitive_poly: Optional[int] = None):
        """
        Build and verify the field

        Args:
            degree: Extension degree N (at least 2)
            primitive_poly: Integer encoding of r(x), bit i = coefficient of x^i.
                Defaults to the lexicographically smallest primitive polynomial.

        Raises:
            FieldConfigError: If the polynomial is not of degree N, not irreducible
                or not primitive
        """
        if degree < 2:
            raise FieldConfigError(f"Extension degree must be at least 2, got {degree}")

        if primitive_poly is None:
            poly = galois.primitive_poly(2, degree)
        else:
            poly = galois.Poly.Int(int(primitive_poly))

        if poly.degree != degree:
            raise FieldConfigError(f"Polynomial {int(poly)} has degree {poly.degree}, expected {degree}")
        if int(poly) & 1 == 0:
            raise FieldConfigError(f"Polynomial {int(poly)} has zero constant coefficient")
        if not poly.is_irreducible():
            raise FieldConfigError(f"Polynomial {int(poly)} is reducible over GF(2)")

        self.N = degree
        self.primitive_poly = int(poly)
        self.GF = galois.GF(2 ** degree, irreducible_poly=poly)

        # The class of x
        self.alpha = self.GF(2)
        if degree <= PRIMITIVITY_CHECK_MAX_DEGREE:
            order = int(self.alpha.multiplicative_order())
            if order != 2 ** degree - 1:
                raise FieldConfigError(
                    f"Polynomial {self.primitive_poly} is not primitive: x has order {order}"
                )
        elif not poly.is_primitive():
            raise FieldConfigError(f"Polynomial {self.primitive_poly} is not primitive")

        logger.debug(f"FieldContext ready: GF(2^{degree}) mod {self.primitive_poly}")

    def __repr__(self) -> str:
        return f"FieldContext(N={self.N}, primitive_poly={self.primitive_poly})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldContext)
            and other.N == self.N
            and other.primitive_poly == self.primitive_poly
        )

    def __hash__(self) -> int:
        return hash((self.N, self.primitive_poly))

    @property
    def order(self) -> int:
        return 2 ** self.N

    def element(self, value: int):
        """Element from its integer encoding"""
        if not 0 <= int(value) < self.order:
            raise FieldConfigError(f"{value} is not an element of GF(2^{self.N})")
        return self.GF(int(value))

    def power(self, exponent: int):
        """alpha^exponent"""
        return self.alpha ** (exponent % (self.order - 1))

    def array(self, values):
        """Vector or matrix from nested integer lists"""
        return self.GF(np.array(values, dtype=np.int64))

    def zero(self):
        return self.GF(0)

    def one(self):
        return self.GF(1)

    def random(self, shape=(), rng: Optional[np.random.Generator] = None, nonzero: bool = False):
        """Uniformly random elements"""
        return self.GF.Random(shape, low=1 if nonzero else 0, seed=rng)

    def owns(self, value) -> bool:
        return type(value) is self.GF

    def to_bits(self, values) -> galois.FieldArray:
        """
        Expand elements into polynomial-basis coordinates over GF(2)

        Args:
            values: Element, vector or matrix over this field

        Returns:
            GF(2) array of shape values.shape + (N,), entry i = coefficient of x^i
        """
        ints = np.array(values, dtype=np.int64)
        bits = (ints[..., np.newaxis] >> np.arange(self.N, dtype=np.int64)) & 1
        return galois.GF2(bits)

    def from_bits(self, bits):
        """Inverse of to_bits over the last axis"""
        weights = np.left_shift(np.int64(1), np.arange(self.N, dtype=np.int64))
        return self.GF(np.array(bits, dtype=np.int64) @ weights)

    def to_dict(self) -> dict:
        return {"N": self.N, "primitive_poly": self.primitive_poly}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldContext":
        return get_context(int(data["N"]), int(data["primitive_poly"]))


def get_context(degree: int = DEFAULT_DEGREE, primitive_poly: Optional[int] = None) -> FieldContext:
    """
    Shared FieldContext per (N, polynomial)

    Args:
        degree: Extension degree N
        primitive_poly: Integer encoding of r(x); None selects the default

    Returns:
        FieldContext: Cached context instance
    """
    if degree < 2:
        raise FieldConfigError(f"Extension degree must be at least 2, got {degree}")
    if primitive_poly is None:
        primitive_poly = EXAMPLE_POLY if degree == DEFAULT_DEGREE else int(galois.primitive_poly(2, degree))
    return _cached_context(int(degree), int(primitive_poly))


@lru_cache(maxsize=None)
def _cached_context(degree: int, primitive_poly: int) -> FieldContext:
    return FieldContext(degree, primitive_poly)


def _same_field(a, b):
    if type(a) is not type(b):
        raise FieldMismatchError(f"Operands belong to different fields: {type(a).name} vs {type(b).name}")


def ff_add(a, b):
    """a + b (coefficient-wise XOR)"""
    _same_field(a, b)
    return a + b


def ff_mul(a, b):
    """a * b reduced modulo the field polynomial"""
    _same_field(a, b)
    return a * b


def ff_inv(a):
    """Multiplicative inverse; raises ZeroDivisionError on zero"""
    if np.count_nonzero(a) != np.size(a):
        raise ZeroDivisionError("Zero has no multiplicative inverse")
    return a ** -1


def frobenius(a, i: int):
    """
    i-th Frobenius power a^(2^(i mod N))

    Works on scalars and arrays alike; negative i is allowed.
    """
    degree = type(a).degree
    return a ** (2 ** (i % degree))
