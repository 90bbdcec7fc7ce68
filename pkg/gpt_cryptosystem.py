#!/usr/bin/env python3
"""
GPT Cryptosystem Module
Key generation with Smart-approach distortion matrices, encryption and
decryption for the rank-code GPT public-key cryptosystem.

G_pub = S [X | G_k] P with S a row scrambler over GF(2^N), X a k x t1
distortion matrix and P a column scrambler over GF(2).
"""

import dataclasses
import os
from dataclasses import dataclass
from typing import List, Optional, Tuple

import galois
import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel

from finite_field import FieldContext, get_context
from gabidulin_code import DecodingFailure, GabidulinCode, decode, make_code
from gpt_params import GptParams, XMode
from log_config import get_logger
from overbeck_analyzer import t_map, y_ext_rank
from rank_linalg import (
    column_rank_base,
    hstack,
    lift,
    moore_matrix,
    random_full_rank_base,
    random_full_rank_ext,
    random_invertible_base,
    random_nonsingular_ext,
    random_rank_vector,
    random_vector_of_rank,
    rank_ext,
    rank_norm,
    vstack,
)

logger = get_logger(__name__)

load_dotenv()

DEFAULT_MAX_TRIES = 100


class XConstructionError(ValueError):
    """Raised when a distortion matrix cannot meet its rank targets"""


class KeyGenerationError(RuntimeError):
    """Raised when key generation exhausts its resampling budget"""


class ErrorBudgetError(ValueError):
    """Raised when an encryption asks for more error rank than the key allows"""


def _ints(values) -> list:
    return np.array(values, dtype=np.int64).tolist()


class SmartXRecord(BaseModel):
    """How a distortion matrix was built, as plain integers"""

    mode: XMode
    # smart_simple
    m_vec: Optional[List[int]] = None
    s_vectors: Optional[List[List[int]]] = None
    # smart_general: Frobenius seeds, non-Frobenius columns (k x (t1-a)), a x (t1-a) mixing
    seeds: Optional[List[int]] = None
    non_frobenius: Optional[List[List[int]]] = None
    combination: Optional[List[List[int]]] = None
    # kshevetskiy: X = left_factor @ right_factor
    left_factor: Optional[List[List[int]]] = None
    right_factor: Optional[List[List[int]]] = None


@dataclass(frozen=True, eq=False)
class GptPublicKey:
    """Public generator matrix and its parameter block"""

    params: GptParams
    ctx: FieldContext
    G_pub: galois.FieldArray

    @property
    def t2_max(self) -> int:
        return self.params.t2_max


@dataclass(frozen=True, eq=False)
class GptPrivateKey:
    """Private matrices; X and its record stay until scrubbed"""

    params: GptParams
    ctx: FieldContext
    code: GabidulinCode
    S: galois.FieldArray
    S_inv: galois.FieldArray
    P: galois.FieldArray
    P_inv: galois.FieldArray
    X: Optional[galois.FieldArray] = None
    record: Optional[SmartXRecord] = None

    @property
    def rank_x(self) -> Optional[int]:
        """t_X = rank of X over GF(2^N)"""
        return None if self.X is None else rank_ext(self.X)

    def public_key(self) -> GptPublicKey:
        """Recompute G_pub = S [X | G_k] P"""
        if self.X is None:
            raise ValueError("X was scrubbed; the public key cannot be recomputed")
        G_pub = self.S @ hstack(self.X, self.code.G_k) @ lift(self.P, self.ctx)
        return GptPublicKey(params=self.params, ctx=self.ctx, G_pub=G_pub)


def scrub(priv: GptPrivateKey) -> GptPrivateKey:
    """Copy of the key without X and its construction record"""
    return dataclasses.replace(priv, X=None, record=None)


def _require_rows(k: int):
    if k < 2:
        raise XConstructionError(f"Distortion constructions need k >= 2, got k={k}")


def build_x_simple(ctx: FieldContext, k: int, t1: int, a: int,
                   rng: Optional[np.random.Generator] = None,
                   m=None, s_vectors=None) -> Tuple[galois.FieldArray, SmartXRecord]:
    """
    Simple Smart construction: row 0 is m, row i is sigma^i(m) + s_i

    Args:
        ctx: Field context
        k: Rows of X
        t1: Columns of X
        a: Designed rank deficiency
        rng: Generator for the random parts
        m: Optional length-t1 vector of rank norm t1
        s_vectors: Optional (k-1) x t1 GF(2) rows s_1 .. s_{k-1}

    Returns:
        Tuple of (X, record)

    Raises:
        XConstructionError: If the rank targets cannot be met
    """
    _require_rows(k)
    target = t1 - a
    if not 0 <= a <= t1:
        raise XConstructionError(f"Need 0 <= a <= t1, got a={a}, t1={t1}")
    if t1 > ctx.N:
        raise XConstructionError(f"m cannot have rank norm {t1} in GF(2^{ctx.N})")
    if k - 1 < target:
        raise XConstructionError(f"{k - 1} s-vectors cannot reach GF(2) rank {target}")

    if m is None:
        m = random_rank_vector(t1, rng, ctx)
    elif not ctx.owns(m):
        m = ctx.array(m)
    if m.shape != (t1,) or rank_norm(m) != t1:
        raise XConstructionError(f"m must be a length-{t1} vector of rank norm {t1}")

    if s_vectors is None:
        if target == 0:
            S = galois.GF2.Zeros((k - 1, t1))
        else:
            S = random_full_rank_base(k - 1, target, rng) @ random_full_rank_base(target, t1, rng)
    else:
        S = galois.GF2(np.array(s_vectors, dtype=np.int64))
    if S.shape != (k - 1, t1):
        raise XConstructionError(f"s-vectors must form a {(k - 1, t1)} matrix, got {S.shape}")

    stacked = vstack(galois.GF2.Zeros((1, t1)), S)
    if rank_ext(stacked) != target:
        raise XConstructionError(f"s-vectors have GF(2) rank {rank_ext(stacked)}, expected {target}")

    X = moore_matrix(m, k) + lift(stacked, ctx)
    if column_rank_base(X) != t1:
        raise XConstructionError("X lost column rank over GF(2)")

    record = SmartXRecord(mode=XMode.SMART_SIMPLE, m_vec=_ints(m), s_vectors=_ints(S))
    return X, record


def build_x_general(ctx: FieldContext, k: int, t1: int, a: int,
                    rng: Optional[np.random.Generator] = None,
                    seeds=None, non_frobenius=None, combination=None,
                    max_tries: int = DEFAULT_MAX_TRIES) -> Tuple[galois.FieldArray, SmartXRecord]:
    """
    General Smart construction: a Frobenius-type columns plus t1-a others

    Column j < a is (w_j, w_j^[1], ..., w_j^[k-1])^T plus the GF(2) combination
    combination[j] of the non-Frobenius columns; the last t1-a columns are the
    non-Frobenius columns themselves.

    Args:
        ctx: Field context
        k: Rows of X
        t1: Columns of X
        a: Number of Frobenius-type columns
        rng: Generator for the random parts
        seeds: Optional length-a vector of Frobenius seeds
        non_frobenius: Optional k x (t1-a) matrix of non-Frobenius columns
        combination: Optional a x (t1-a) GF(2) mixing matrix
        max_tries: Resampling bound when parts are random

    Returns:
        Tuple of (X, record)

    Raises:
        XConstructionError: If the rank targets are not met
    """
    _require_rows(k)
    target = t1 - a
    if not 0 <= a <= t1:
        raise XConstructionError(f"Need 0 <= a <= t1, got a={a}, t1={t1}")
    if k - 1 < target:
        raise XConstructionError(f"T(X) has {k - 1} rows and cannot reach rank {target}")

    explicit = seeds is not None and (target == 0 or non_frobenius is not None) and combination is not None
    for attempt in range(1, max_tries + 1):
        w = ctx.random(a, rng) if seeds is None else (seeds if ctx.owns(seeds) else ctx.array(seeds))
        frobenius_part = moore_matrix(w, k)

        if target == 0:
            C = ctx.GF.Zeros((k, 0))
            mix = galois.GF2.Zeros((a, 0))
            X = frobenius_part
        else:
            if non_frobenius is None:
                C = ctx.random((k, target), rng)
            else:
                C = non_frobenius if ctx.owns(non_frobenius) else ctx.array(non_frobenius)
            if combination is None:
                mix = galois.GF2.Random((a, target), seed=rng)
            else:
                mix = galois.GF2(np.array(combination, dtype=np.int64))
            X = hstack(frobenius_part + C @ lift(mix.T, ctx), C)

        if X.shape != (k, t1):
            raise XConstructionError(f"X has shape {X.shape}, expected {(k, t1)}")
        if column_rank_base(X) == t1 and rank_ext(t_map(X)) == target:
            logger.debug(f"General Smart X built after {attempt} tries")
            record = SmartXRecord(
                mode=XMode.SMART_GENERAL,
                seeds=_ints(w),
                non_frobenius=_ints(C),
                combination=_ints(mix),
            )
            return X, record
        if explicit:
            break

    raise XConstructionError(f"General Smart X missed its rank targets (t1={t1}, a={a})")


def build_x_kshevetskiy(ctx: FieldContext, k: int, t1: int, a: int, n: int,
                        rng: Optional[np.random.Generator] = None,
                        max_tries: int = DEFAULT_MAX_TRIES) -> Tuple[galois.FieldArray, SmartXRecord]:
    """
    Low-rank X with column rank t1 and rank r_X = floor((t1-a)/(n-k))

    Raises:
        XConstructionError: If t1 <= n-k, r_X is outside [1, k], or the targets are missed
    """
    redundancy = n - k
    if redundancy < 1 or t1 <= redundancy:
        raise XConstructionError(f"Need t1 > n-k, got t1={t1}, n-k={redundancy}")
    r_x = (t1 - a) // redundancy
    if not 1 <= r_x <= k:
        raise XConstructionError(f"r_X={r_x} must lie in [1, k={k}]")
    if t1 > r_x * ctx.N:
        raise XConstructionError(f"Rank-{r_x} X cannot have column rank {t1} over GF(2^{ctx.N})")

    for attempt in range(1, max_tries + 1):
        left = random_full_rank_ext(k, r_x, rng, ctx)
        right = ctx.random((r_x, t1), rng)
        X = left @ right
        if rank_ext(X) == r_x and column_rank_base(X) == t1:
            logger.debug(f"Kshevetskiy X built after {attempt} tries (r_X={r_x})")
            record = SmartXRecord(
                mode=XMode.KSHEVETSKIY,
                left_factor=_ints(left),
                right_factor=_ints(right),
            )
            return X, record

    raise XConstructionError(f"Kshevetskiy X missed its rank targets (t1={t1}, r_X={r_x})")


def build_x_random_naive(ctx: FieldContext, k: int, t1: int,
                         rng: Optional[np.random.Generator] = None) -> galois.FieldArray:
    """Random X of column rank t1 with no rank-deficiency design"""
    if t1 > k * ctx.N:
        raise XConstructionError(f"A {k} x {t1} matrix cannot have column rank {t1} over GF(2^{ctx.N})")
    while True:
        X = ctx.random((k, t1), rng)
        if column_rank_base(X) == t1:
            return X


def build_x(params: GptParams, ctx: FieldContext,
            rng: Optional[np.random.Generator] = None) -> Tuple[galois.FieldArray, SmartXRecord]:
    """Dispatch on params.x_mode"""
    k, t1, a = params.k, params.t1, params.a
    if params.x_mode is XMode.SMART_SIMPLE:
        return build_x_simple(ctx, k, t1, a, rng)
    if params.x_mode is XMode.SMART_GENERAL:
        return build_x_general(ctx, k, t1, a, rng)
    if params.x_mode is XMode.KSHEVETSKIY:
        return build_x_kshevetskiy(ctx, k, t1, a, params.n, rng)
    return build_x_random_naive(ctx, k, t1, rng), SmartXRecord(mode=XMode.RANDOM_NAIVE)


def _invariant_violation(params: GptParams, X) -> Optional[str]:
    """Describe the first broken key invariant, or None"""
    if column_rank_base(X) != params.t1:
        return "column rank of X over GF(2) is below t1"

    target = params.t1 - params.a
    if params.x_mode.is_smart or params.x_mode is XMode.KSHEVETSKIY:
        rk = y_ext_rank(X, params.u)
        if params.x_mode.is_smart and rk != target:
            return f"rank(Y_ext) = {rk}, expected {target}"
        if rk > target:
            return f"rank(Y_ext) = {rk} exceeds {target}"
    return None


def keygen(params: GptParams, rng: Optional[np.random.Generator] = None,
           ctx: Optional[FieldContext] = None) -> Tuple[GptPublicKey, GptPrivateKey]:
    """
    Generate a GPT key pair

    Resamples every component until column_rank_base(X) = t1, the Y_ext rank
    target holds, G_pub has rank k and a trial message decrypts. [X | G_k] is
    not required to reach column rank n + t1 over GF(2): for the Smart modes
    it is capped at N + t1 - a, below n + t1 whenever n + a > N.

    Args:
        params: Validated parameter set
        rng: Generator; a fresh entropy-seeded one is used when omitted
        ctx: Field context (defaults to the one named by params)

    Returns:
        Tuple of (public key, private key)

    Raises:
        KeyGenerationError: If the invariants fail on every attempt
    """
    rng = rng if rng is not None else np.random.default_rng()
    ctx = ctx if ctx is not None else get_context(params.N, params.primitive_poly)
    max_tries = int(os.getenv('GPT_KEYGEN_MAX_TRIES', str(DEFAULT_MAX_TRIES)))
    n, k, t1 = params.n, params.k, params.t1

    logger.info(
        f"Generating GPT key: N={params.N}, n={n}, k={k}, t1={t1}, a={params.a}, "
        f"mode={params.x_mode.value}"
    )

    for attempt in range(1, max_tries + 1):
        code = make_code(ctx, n, k, rng=rng)
        S = random_nonsingular_ext(k, rng, ctx)
        P, P_inv = random_invertible_base(n + t1, rng)
        try:
            X, record = build_x(params, ctx, rng)
        except XConstructionError as e:
            logger.debug(f"Attempt {attempt}: {e}")
            continue

        violation = _invariant_violation(params, X)
        if violation:
            logger.debug(f"Attempt {attempt}: {violation}")
            continue

        priv = GptPrivateKey(
            params=params, ctx=ctx, code=code,
            S=S, S_inv=np.linalg.inv(S), P=P, P_inv=P_inv,
            X=X, record=record,
        )
        pub = priv.public_key()
        if rank_ext(pub.G_pub) != k:
            logger.debug(f"Attempt {attempt}: public key lost rank")
            continue
        if not _decrypts(pub, priv, rng):
            logger.debug(f"Attempt {attempt}: trial message did not decrypt")
            continue

        logger.info(f"✓ Key generated after {attempt} attempt(s): {params.public_key_bits}-bit public key")
        return pub, priv

    logger.error(f"✗ Key generation failed after {max_tries} attempts")
    raise KeyGenerationError(f"No key satisfied the rank invariants in {max_tries} attempts")


def encrypt(pub: GptPublicKey, m, rng: Optional[np.random.Generator] = None,
            t2: Optional[int] = None) -> galois.FieldArray:
    """
    c = m G_pub + e with rank_norm(e) = t2

    Args:
        pub: Public key
        m: Length-k plaintext vector
        rng: Generator for the error vector
        t2: Error rank, defaults to the key's t2_max

    Raises:
        ErrorBudgetError: If t2 exceeds the key's budget
        ValueError: If m has the wrong length
    """
    params = pub.params
    t2 = pub.t2_max if t2 is None else t2
    if not 0 <= t2 <= pub.t2_max:
        raise ErrorBudgetError(f"t2={t2} outside [0, {pub.t2_max}]")
    if not pub.ctx.owns(m):
        m = pub.ctx.array(m)
    if m.shape != (params.k,):
        raise ValueError(f"Plaintext must have length {params.k}, got shape {m.shape}")

    rng = rng if rng is not None else np.random.default_rng()
    e = random_vector_of_rank(params.n + params.t1, t2, rng, pub.ctx)
    return m @ pub.G_pub + e


def decrypt(priv: GptPrivateKey, c) -> galois.FieldArray:
    """
    Recover m from c = m G_pub + e

    Unscrambles with P^-1, keeps the last n coordinates, decodes to m S and
    multiplies by S^-1.

    Raises:
        DecodingFailure: If the error rank exceeded floor((n-k)/2)
        ValueError: If c has the wrong length
    """
    params = priv.params
    if not priv.ctx.owns(c):
        c = priv.ctx.array(c)
    if c.shape != (params.n + params.t1,):
        raise ValueError(f"Ciphertext must have length {params.n + params.t1}, got shape {c.shape}")

    unscrambled = c @ lift(priv.P_inv, priv.ctx)
    mS, _ = decode(priv.code, unscrambled[params.t1:])
    return mS @ priv.S_inv


def _decrypts(pub: GptPublicKey, priv: GptPrivateKey, rng: np.random.Generator) -> bool:
    """Encrypt one random message at full error budget and check it comes back"""
    m = pub.ctx.random(pub.params.k, rng)
    try:
        return np.array_equal(decrypt(priv, encrypt(pub, m, rng)), m)
    except DecodingFailure:
        return False
