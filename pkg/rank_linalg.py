#!/usr/bin/env python3
"""
Rank Linear Algebra Module
Matrix and vector algebra over GF(2^N) and GF(2): the usual rank over the
extension field, the column rank over the base field, kernels, exact linear
solves and random matrix generation.

ExtMatrix and BaseMatrix are galois FieldArray matrices over GF(2^N) and GF(2).
"""

from typing import Optional, Tuple

import galois
import numpy as np

from finite_field import FieldContext, frobenius
from log_config import get_logger

logger = get_logger(__name__)

ExtMatrix = galois.FieldArray
BaseMatrix = galois.FieldArray


class RankError(ValueError):
    """Raised when a requested rank cannot be realized"""


def _degree(M) -> int:
    return type(M).degree


def _to_bits(M) -> galois.FieldArray:
    """Polynomial-basis coordinates of every entry, last axis of length N"""
    degree = _degree(M)
    ints = np.array(M, dtype=np.int64)
    return galois.GF2((ints[..., np.newaxis] >> np.arange(degree, dtype=np.int64)) & 1)


def hstack(*blocks) -> galois.FieldArray:
    """Horizontal concatenation keeping the field class of the first block"""
    field = type(blocks[0])
    return field(np.hstack([np.array(b, dtype=np.int64) for b in blocks]))


def vstack(*blocks) -> galois.FieldArray:
    """Vertical concatenation keeping the field class of the first block"""
    field = type(blocks[0])
    return field(np.vstack([np.array(b, dtype=np.int64) for b in blocks]))


def lift(B: BaseMatrix, ctx: FieldContext) -> ExtMatrix:
    """Embed a GF(2) matrix into GF(2^N)"""
    return ctx.GF(np.array(B, dtype=np.int64))


def rank_ext(M: ExtMatrix) -> int:
    """Row rank over the field M lives in"""
    if M.size == 0:
        return 0
    return int(np.linalg.matrix_rank(M))


def base_expansion(M: ExtMatrix) -> BaseMatrix:
    """
    Expand M column-wise over GF(2)

    Entry (i, j) becomes bits i*N .. i*N+N-1 of column j.

    Args:
        M: rows x cols matrix over GF(2^N)

    Returns:
        (N*rows) x cols matrix over GF(2)
    """
    if M.ndim == 1:
        M = M.reshape(1, -1)
    rows, cols = M.shape
    degree = _degree(M)
    bits = np.array(_to_bits(M), dtype=np.int64)           # rows x cols x N
    stacked = np.transpose(bits, (0, 2, 1)).reshape(rows * degree, cols)
    return galois.GF2(stacked)


def column_rank_base(M: ExtMatrix) -> int:
    """Maximal number of columns of M linearly independent over GF(2)"""
    if M.size == 0:
        return 0
    return rank_ext(base_expansion(M))


def rank_norm(v) -> int:
    """Rank norm of a vector: column rank over GF(2) of the 1 x n matrix"""
    return column_rank_base(v.reshape(1, -1))


def rank_distance(x, y) -> int:
    """Rank distance rank_norm(x - y)"""
    return rank_norm(x - y)


def right_kernel_ext(M: ExtMatrix) -> ExtMatrix:
    """
    Basis of {u : M u^T = 0}

    Returns:
        Matrix whose rows form the basis; it has zero rows iff M has full column rank
    """
    field = type(M)
    if M.shape[0] == 0:
        return field.Identity(M.shape[1])
    return M.null_space()


def solve_linear(A, b) -> Optional[galois.FieldArray]:
    """
    Solve A x = b for a possibly non-square A

    Free variables are set to zero.

    Args:
        A: m x c matrix
        b: length-m vector over the same field

    Returns:
        A solution x of length c, or None if the system is inconsistent
    """
    field = type(A)
    cols = A.shape[1]
    augmented = hstack(A, field(np.array(b, dtype=np.int64)).reshape(-1, 1))
    reduced = augmented.row_reduce()
    values = np.array(reduced, dtype=np.int64)

    x = field.Zeros(cols)
    for r in range(values.shape[0]):
        nonzero = np.flatnonzero(values[r])
        if nonzero.size == 0:
            continue
        pivot = int(nonzero[0])
        if pivot == cols:
            return None
        x[pivot] = reduced[r, cols]
    return x


def random_invertible_base(size: int, rng: np.random.Generator) -> Tuple[BaseMatrix, BaseMatrix]:
    """
    Random invertible GF(2) matrix by rejection sampling

    Returns:
        Tuple of (P, P^-1)
    """
    if size < 1:
        raise RankError(f"Matrix order must be positive, got {size}")
    tries = 0
    while True:
        tries += 1
        P = galois.GF2.Random((size, size), seed=rng)
        if rank_ext(P) == size:
            logger.debug(f"Invertible {size}x{size} base matrix after {tries} tries")
            return P, np.linalg.inv(P)


def random_nonsingular_ext(k: int, rng: np.random.Generator, ctx: FieldContext) -> ExtMatrix:
    """Random nonsingular k x k matrix over GF(2^N)"""
    if k < 1:
        raise RankError(f"Matrix order must be positive, got {k}")
    while True:
        S = ctx.random((k, k), rng)
        if rank_ext(S) == k:
            return S


def random_full_rank_ext(rows: int, cols: int, rng: np.random.Generator, ctx: FieldContext) -> ExtMatrix:
    """Random rows x cols matrix over GF(2^N) of rank min(rows, cols)"""
    target = min(rows, cols)
    while True:
        M = ctx.random((rows, cols), rng)
        if rank_ext(M) == target:
            return M


def random_full_rank_base(rows: int, cols: int, rng: np.random.Generator) -> BaseMatrix:
    """Random rows x cols GF(2) matrix of rank min(rows, cols)"""
    target = min(rows, cols)
    while True:
        B = galois.GF2.Random((rows, cols), seed=rng)
        if rank_ext(B) == target:
            return B


def random_rank_vector(n: int, rng: np.random.Generator, ctx: FieldContext):
    """Random length-n vector over GF(2^N) with rank norm n (requires n <= N)"""
    if not 0 <= n <= ctx.N:
        raise RankError(f"Rank norm {n} is impossible in GF(2^{ctx.N})")
    while True:
        v = ctx.random(n, rng)
        if rank_norm(v) == n:
            return v


def random_vector_of_rank(n: int, r: int, rng: np.random.Generator, ctx: FieldContext):
    """
    Random length-n vector with rank norm exactly r

    Built as e = x Y with x a 1 x r vector of rank norm r and Y an r x n GF(2)
    matrix of rank r.

    Raises:
        RankError: If r is outside [0, min(n, N)]
    """
    if not 0 <= r <= min(n, ctx.N):
        raise RankError(f"Error rank {r} out of range for length {n} over GF(2^{ctx.N})")
    if r == 0:
        return ctx.GF.Zeros(n)

    x = random_rank_vector(r, rng, ctx)
    Y = random_full_rank_base(r, n, rng)
    e = x @ lift(Y, ctx)
    assert rank_norm(e) == r, "error vector lost rank"
    return e


def frobenius_matrix(M: ExtMatrix, i: int) -> ExtMatrix:
    """Entrywise i-th Frobenius power"""
    return frobenius(M, i)


def moore_matrix(v, rows: int, start: int = 0) -> ExtMatrix:
    """
    Matrix whose row r is the (start + r)-th Frobenius power of v

    Args:
        v: Length-n vector
        rows: Number of rows
        start: Frobenius exponent of the first row (may be negative)
    """
    field = type(v)
    M = field.Zeros((rows, v.size))
    for r in range(rows):
        M[r, :] = frobenius(v, start + r)
    return M
