#!/usr/bin/env python3
"""
Gabidulin Code Module
MRD codes in the rank metric: Moore generator and parity-check matrices,
encoding, and syndrome decoding of rank errors up to t = floor((n-k)/2).
"""

from typing import Optional, Tuple

import galois
import numpy as np

from finite_field import FieldContext, frobenius
from log_config import get_logger
from rank_linalg import (
    lift,
    moore_matrix,
    random_rank_vector,
    rank_norm,
    right_kernel_ext,
    solve_linear,
)

logger = get_logger(__name__)


class GabidulinError(ValueError):
    """Raised on invalid code parameters or a failed dual construction"""


class DecodingFailure(Exception):
    """Raised when no codeword lies within rank distance t of the received word"""


def singleton_bound_holds(n: int, k: int, d: int, N: int) -> bool:
    """Rank-metric Singleton-style bound Nk <= Nn - (d-1) max(N, n)"""
    return N * k <= N * n - (d - 1) * max(N, n)


class GabidulinCode:
    """
    (n, k, d = n-k+1) Gabidulin code over GF(2^N) defined by a vector g

    G_k row i is the i-th Frobenius power of g; H row j is the j-th Frobenius
    power of the dual vector h, j = 0 .. n-k-1.
    """

    def __init__(self, ctx: FieldContext, n: int, k: int, g):
        """
        Args:
            ctx: Field the code lives in
            n: Code length (n <= N)
            k: Dimension (1 <= k < n)
            g: Length-n vector with rank norm n

        Raises:
            GabidulinError: On dimension violations or a dependent g
        """
        if not 1 <= k < n <= ctx.N:
            raise GabidulinError(f"Need 1 <= k < n <= N, got n={n}, k={k}, N={ctx.N}")
        if not ctx.owns(g) or g.shape != (n,):
            raise GabidulinError(f"g must be a length-{n} vector over GF(2^{ctx.N})")
        if rank_norm(g) != n:
            raise GabidulinError("g is not linearly independent over GF(2)")

        self.ctx = ctx
        self.n = n
        self.k = k
        self.d = n - k + 1
        self.t = (n - k) // 2
        self.g = g
        self.G_k = moore_matrix(g, k)
        self.h = dual_vector(self)
        self.H = moore_matrix(self.h, n - k)

    def __repr__(self) -> str:
        return f"GabidulinCode(n={self.n}, k={self.k}, t={self.t}, {self.ctx!r})"

    @property
    def is_mrd(self) -> bool:
        return singleton_bound_holds(self.n, self.k, self.d, self.ctx.N)

    def to_dict(self) -> dict:
        return {
            **self.ctx.to_dict(),
            "n": self.n,
            "k": self.k,
            "g": np.array(self.g, dtype=np.int64).tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GabidulinCode":
        ctx = FieldContext.from_dict(data)
        return cls(ctx, int(data["n"]), int(data["k"]), ctx.array(data["g"]))


def make_code(ctx: FieldContext, n: int, k: int, g=None,
              rng: Optional[np.random.Generator] = None) -> GabidulinCode:
    """
    Build a Gabidulin code, sampling g when it is not supplied

    Args:
        ctx: Field context
        n: Code length
        k: Dimension
        g: Optional length-n vector of rank norm n
        rng: Generator used when g is sampled

    Returns:
        GabidulinCode: The code with derived G_k and H
    """
    if g is None:
        if not 1 <= k < n <= ctx.N:
            raise GabidulinError(f"Need 1 <= k < n <= N, got n={n}, k={k}, N={ctx.N}")
        g = random_rank_vector(n, rng if rng is not None else np.random.default_rng(), ctx)
    elif not ctx.owns(g):
        g = ctx.array(g)
    return GabidulinCode(ctx, n, k, g)


def dual_vector(code: GabidulinCode):
    """
    Vector h whose Moore matrix H satisfies G_k H^T = 0

    h spans the one-dimensional kernel of the (n-1) x n Moore matrix with rows
    sigma^j(sigma^-(n-k-1)(g)), j = 0 .. n-2.

    Raises:
        GabidulinError: If the kernel is not one-dimensional or h fails its checks
    """
    n, k = code.n, code.k
    A = moore_matrix(code.g, n - 1, start=-(n - k - 1))
    kernel = right_kernel_ext(A)
    if kernel.shape[0] != 1:
        raise GabidulinError(f"Dual construction failed: kernel dimension {kernel.shape[0]}")

    h = kernel[0]
    H = moore_matrix(h, n - k)
    if np.count_nonzero(code.G_k @ H.T) != 0:
        raise GabidulinError("Dual construction failed: G_k H^T != 0")
    if rank_norm(h) != n:
        raise GabidulinError("Dual construction failed: h is dependent over GF(2)")
    return h


def _check_word(code: GabidulinCode, word, length: int, what: str):
    if not code.ctx.owns(word):
        word = code.ctx.array(word)
    if word.shape != (length,):
        raise GabidulinError(f"{what} must have length {length}, got shape {word.shape}")
    return word


def encode(code: GabidulinCode, m):
    """Codeword m G_k"""
    m = _check_word(code, m, code.k, "Message")
    return m @ code.G_k


def syndromes(code: GabidulinCode, y):
    """Syndrome vector s_j = sum_i y_i h_i^[j], j = 0 .. n-k-1"""
    y = _check_word(code, y, code.n, "Received word")
    return y @ code.H.T


def _root_space(coeffs, ctx: FieldContext):
    """
    GF(2)-basis of the roots of the linearized polynomial sum_i coeffs[i] x^[i]

    The map is GF(2)-linear, so its roots are the kernel of its N x N matrix
    on the polynomial basis 1, x, ..., x^(N-1).
    """
    basis = ctx.GF(np.left_shift(np.int64(1), np.arange(ctx.N, dtype=np.int64)))
    images = ctx.GF.Zeros(ctx.N)
    for i in range(coeffs.size):
        images = images + coeffs[i] * frobenius(basis, i)
    # row c holds the coordinates of the image of x^c
    image_bits = ctx.to_bits(images)
    kernel = image_bits.T.null_space()
    return ctx.from_bits(kernel)


def _error_of_rank(code: GabidulinCode, s, m: int):
    """
    Try to explain syndrome s by an error of rank m

    Returns:
        The error vector, or None if rank m does not fit
    """
    ctx = code.ctx
    GF = ctx.GF
    count = s.size

    # Key equation: sum_{i=0}^{m} lam_i sigma^i(s_{j-i}) = 0, j = m .. count-1, lam_m = 1
    A = GF.Zeros((count - m, m))
    b = GF.Zeros(count - m)
    for row, j in enumerate(range(m, count)):
        for i in range(m):
            A[row, i] = frobenius(s[j - i], i)
        b[row] = frobenius(s[j - m], m)
    lam = solve_linear(A, b)
    if lam is None:
        return None

    coeffs = GF(np.append(np.array(lam, dtype=np.int64), 1))
    E = _root_space(coeffs, ctx)
    if E.size != m:
        return None

    # s_j = sum_p E_p z_p^[j]  <=>  s_j^[-j] = sum_p E_p^[-j] z_p
    moore = GF.Zeros((count, m))
    rhs = GF.Zeros(count)
    for j in range(count):
        moore[j, :] = frobenius(E, -j)
        rhs[j] = frobenius(s[j], -j)
    z = solve_linear(moore, rhs)
    if z is None:
        return None

    # z_p = sum_i Y[p, i] h_i over GF(2)
    h_bits = ctx.to_bits(code.h).T
    z_bits = ctx.to_bits(z)
    Y = galois.GF2.Zeros((m, code.n))
    for p in range(m):
        row = solve_linear(h_bits, z_bits[p])
        if row is None:
            return None
        Y[p, :] = row

    e = E.reshape(1, -1) @ lift(Y, ctx)
    e = e.reshape(-1)
    if not np.array_equal(syndromes(code, e), s) or rank_norm(e) > code.t:
        return None
    return e


def decode(code: GabidulinCode, y) -> Tuple[galois.FieldArray, galois.FieldArray]:
    """
    Decode a received word

    Args:
        code: The Gabidulin code
        y: Length-n received word

    Returns:
        Tuple (m, e) with y = m G_k + e and rank_norm(e) <= t

    Raises:
        DecodingFailure: If no codeword lies within rank distance t
    """
    y = _check_word(code, y, code.n, "Received word")
    s = syndromes(code, y)

    if np.count_nonzero(s) == 0:
        e = code.ctx.GF.Zeros(code.n)
    else:
        e = None
        for m in range(code.t, 0, -1):
            e = _error_of_rank(code, s, m)
            if e is not None:
                logger.debug(f"Decoded error of rank {rank_norm(e)} at trial rank {m}")
                break
        if e is None:
            raise DecodingFailure(f"No codeword within rank distance {code.t}")

    message = solve_linear(code.G_k.T, y - e)
    if message is None:
        raise DecodingFailure("Corrected word is not a codeword")
    return message, e
