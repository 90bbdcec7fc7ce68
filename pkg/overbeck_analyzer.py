#!/usr/bin/env python3
"""
Overbeck Analyzer Module
Structural-attack machinery against GPT keys: the extended public key, the T
mapping, the rank of Y_ext, the kernel distinguisher and work-factor estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Union

import galois
import numpy as np
from pydantic import BaseModel

from gpt_params import GptParams
from log_config import get_logger
from rank_linalg import (
    frobenius_matrix,
    lift,
    moore_matrix,
    rank_ext,
    right_kernel_ext,
    vstack,
)

if TYPE_CHECKING:
    from gpt_cryptosystem import GptPrivateKey, GptPublicKey

logger = get_logger(__name__)

# Attack work below 2^60 candidate vectors is considered feasible
SECURITY_THRESHOLD_BITS = 60


class AnalysisError(ValueError):
    """Raised when an analysis input is degenerate"""


class SecurityReport(BaseModel):
    """
    Outcome of auditing one key

    kernel_dim is the right-kernel dimension of the extended public key. It is
    measured when a private key is audited (kernel_dim_measured = True); for a
    bare X there is no public key and it holds the prediction a_effective + 1,
    with kernel_dim_measured = False.
    """

    rk_y_ext: int
    a_effective: int
    # measured, or predicted as a_effective + 1; see kernel_dim_measured
    kernel_dim: int
    kernel_dim_measured: bool
    work_factor_log2: float
    search_space_log2: int
    secure: bool
    u: int
    rank_x: int
    params: GptParams
    seed: Optional[int] = None


@dataclass(frozen=True, eq=False)
class DistinguisherResult:
    """Right kernel of the extended public key"""

    kernel_basis: galois.FieldArray
    u: int
    N: int

    @property
    def kernel_dim(self) -> int:
        return int(self.kernel_basis.shape[0])

    @property
    def attack_feasible(self) -> bool:
        return self.kernel_dim == 1

    @property
    def search_space_log2(self) -> int:
        """log2 of the number of candidate y-vectors left to the attacker"""
        return (self.kernel_dim - 1) * self.N


def t_map(X):
    """
    T(X) = sigma(X without its last row) - (X without its first row)

    Raises:
        AnalysisError: If X has fewer than two rows
    """
    if X.ndim != 2 or X.shape[0] < 2:
        raise AnalysisError(f"T needs at least two rows, got shape {X.shape}")
    return frobenius_matrix(X[:-1], 1) - X[1:]


def extend_matrix(M, u: int):
    """Vertical stack of sigma^i(M), i = 0 .. u"""
    if u < 0:
        raise AnalysisError(f"u must be non-negative, got {u}")
    return vstack(*[frobenius_matrix(M, i) for i in range(u + 1)])


def y_ext(Y, u: int):
    """Vertical stack of sigma^i(Y), i = 0 .. u-1"""
    if u < 1:
        raise AnalysisError(f"Y_ext needs u >= 1, got {u}")
    return vstack(*[frobenius_matrix(Y, i) for i in range(u)])


def y_ext_rank(X, u: int) -> int:
    """Rank over GF(2^N) of Y_ext built from T(X)"""
    return rank_ext(y_ext(t_map(X), u))


def estimate_work_factor_log2(a: int, N: int, n: int, t1: int) -> float:
    """log2 of q^(aN) (n + t1)^3 with q = 2"""
    return a * N + 3 * math.log2(n + t1)


def distinguisher_attack(pub: GptPublicKey, u: Optional[int] = None) -> DistinguisherResult:
    """
    Run the kernel distinguisher on public data only

    Args:
        pub: Public key
        u: Number of extra Frobenius images (defaults to n - k - 1)

    Returns:
        DistinguisherResult: Kernel basis of the extended public key
    """
    params = pub.params
    u = params.u if u is None else u
    extended = extend_matrix(pub.G_pub, u)
    kernel = right_kernel_ext(extended)
    result = DistinguisherResult(kernel_basis=kernel, u=u, N=params.N)

    if result.attack_feasible:
        logger.info(f"✗ Distinguisher succeeded: kernel dimension 1 (u={u})")
    else:
        logger.info(
            f"✓ Distinguisher blocked: kernel dimension {result.kernel_dim}, "
            f"2^{result.search_space_log2} candidates"
        )
    return result


def security_report(source: Union[GptPrivateKey, galois.FieldArray], params: GptParams,
                    u: Optional[int] = None, seed: Optional[int] = None) -> SecurityReport:
    """
    Audit a distortion matrix or a full private key

    With a private key the kernel dimension is measured on the recomputed public
    key; with a bare X it is predicted as a_effective + 1.

    Args:
        source: GptPrivateKey (with X retained) or the k x t1 matrix X
        params: Parameter set the key was generated with
        u: Override for the number of Frobenius images
        seed: Seed echoed into the report

    Raises:
        AnalysisError: On a scrubbed key, k < 2, or a shape mismatch
    """
    X = getattr(source, "X", source)
    if X is None:
        raise AnalysisError("Private key was scrubbed; X is required for the Y_ext audit")
    if params.k < 2:
        raise AnalysisError(f"Analysis needs k >= 2, got k={params.k}")
    if X.shape != (params.k, params.t1):
        raise AnalysisError(f"X has shape {X.shape}, expected {(params.k, params.t1)}")
    if type(X).degree != params.N:
        raise AnalysisError(f"X lives in GF(2^{type(X).degree}), params say N={params.N}")

    u = params.u if u is None else u
    rk = y_ext_rank(X, u)
    a_effective = params.t1 - rk

    if hasattr(source, "public_key"):
        kernel_dim = distinguisher_attack(source.public_key(), u=u).kernel_dim
        measured = True
    else:
        kernel_dim = a_effective + 1
        measured = False

    report = SecurityReport(
        rk_y_ext=rk,
        a_effective=a_effective,
        kernel_dim=kernel_dim,
        kernel_dim_measured=measured,
        work_factor_log2=estimate_work_factor_log2(a_effective, params.N, params.n, params.t1),
        search_space_log2=a_effective * params.N,
        secure=a_effective * params.N >= SECURITY_THRESHOLD_BITS,
        u=u,
        rank_x=rank_ext(X),
        params=params,
        seed=seed,
    )
    logger.info(
        f"Security report: rk(Y_ext)={rk}, a={a_effective}, "
        f"work factor 2^{report.work_factor_log2:.2f}, secure={report.secure}"
    )
    return report


def verify_break(priv: GptPrivateKey, u_vec) -> bool:
    """
    Check a kernel vector against the private key

    P u^T splits into (y, h); the vector breaks the key iff y = 0 and
    G_{n-1} h^T = 0 for the (n-1) x n Moore matrix of g.

    Raises:
        ValueError: If u_vec is the zero vector
    """
    if np.count_nonzero(u_vec) == 0:
        raise ValueError("Kernel vector must be nonzero")

    t1 = priv.params.t1
    w = lift(priv.P, priv.ctx) @ u_vec
    y, h = w[:t1], w[t1:]
    if np.count_nonzero(y) != 0 or np.count_nonzero(h) == 0:
        return False
    G_n1 = moore_matrix(priv.code.g, priv.code.n - 1)
    return np.count_nonzero(G_n1 @ h) == 0
