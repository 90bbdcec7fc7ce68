#!/usr/bin/env python3
"""
Tests for distortion matrix builders, key generation, encryption and decryption
"""

import numpy as np
import pydantic
import pytest

import gpt_cryptosystem
from finite_field import get_context
from gpt_cryptosystem import (
    ErrorBudgetError,
    KeyGenerationError,
    XConstructionError,
    build_x_general,
    build_x_kshevetskiy,
    build_x_random_naive,
    build_x_simple,
    decrypt,
    encrypt,
    keygen,
    scrub,
)
from gpt_params import GptParams, XMode
from overbeck_analyzer import t_map, y_ext, y_ext_rank
from rank_linalg import column_rank_base, frobenius_matrix, hstack, moore_matrix, rank_ext
from worked_examples import (
    EXAMPLE1_M,
    EXAMPLE1_S,
    EXAMPLE1_X,
    EXAMPLE2_COMBINATION,
    EXAMPLE2_X,
    golden_matrix,
)


def test_params_derived_values(example_params):
    assert example_params.t2_max == 2
    assert example_params.t == 2
    assert example_params.u == 3
    assert example_params.d == 5
    assert example_params.public_key_bits == 384
    assert example_params.rate == pytest.approx(1 / 3)


@pytest.mark.parametrize("overrides", [
    {"k": 8},
    {"k": 9},
    {"a": 1},
    {"a": 5},
    {"n": 7, "k": 6},
    {"t2_max": 3},
    {"t1": 9},
    {"x_mode": "kshevetskiy"},
])
def test_params_rejected(overrides):
    with pytest.raises(pydantic.ValidationError):
        GptParams(**overrides)


def test_kshevetskiy_params_accepted():
    params = GptParams(t1=6, x_mode=XMode.KSHEVETSKIY)
    assert params.r_x == 1


def test_simple_builder_reproduces_first_example(ctx):
    m = ctx.array([int(ctx.power(e)) for e in EXAMPLE1_M])
    X, record = build_x_simple(ctx, 4, 4, 2, m=m, s_vectors=EXAMPLE1_S)
    assert np.array_equal(X, golden_matrix(ctx, EXAMPLE1_X))
    assert record.mode is XMode.SMART_SIMPLE
    assert record.s_vectors == [list(s) for s in EXAMPLE1_S]


def test_simple_builder_gives_binary_frobenius_fixed_y(ctx):
    for seed in range(10):
        X, _ = build_x_simple(ctx, 4, 4, 2, np.random.default_rng(seed))
        Y = t_map(X)
        assert int(np.max(np.array(Y, dtype=np.int64))) <= 1
        assert np.array_equal(frobenius_matrix(Y, 1), Y)
        assert column_rank_base(X) == 4
        assert rank_ext(y_ext(Y, 3)) == 2


def test_simple_builder_rejects_bad_inputs(ctx, rng):
    with pytest.raises(XConstructionError):
        build_x_simple(ctx, 4, 9, 2, rng)
    with pytest.raises(XConstructionError):
        build_x_simple(ctx, 4, 4, 2, rng, s_vectors=[[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(XConstructionError):
        build_x_simple(ctx, 4, 4, 2, rng, m=ctx.array([1, 1, 2, 4]))


def test_general_builder_reproduces_second_example(ctx):
    seeds = ctx.array([int(ctx.power(3)), int(ctx.power(5))])
    columns = golden_matrix(ctx, [((6,), (2,)), ((12,), (5,)), ((12,), (5,)), ((12,), (2,))])
    X, record = build_x_general(ctx, 4, 4, 2, seeds=seeds, non_frobenius=columns,
                                combination=EXAMPLE2_COMBINATION)
    assert np.array_equal(X, golden_matrix(ctx, EXAMPLE2_X))
    assert record.combination == [[1, 0], [0, 1]]


def test_frobenius_columns_vanish_under_t(ctx, rng):
    w = ctx.random(2, rng)
    assert np.count_nonzero(t_map(moore_matrix(w, 4))) == 0


def test_general_builder_random(ctx):
    for seed in range(10):
        X, _ = build_x_general(ctx, 4, 4, 2, np.random.default_rng(seed))
        assert column_rank_base(X) == 4
        assert rank_ext(t_map(X)) == 2
        assert y_ext_rank(X, 3) == 2


def test_general_builder_without_non_frobenius_part(ctx, rng):
    X, _ = build_x_general(ctx, 4, 3, 3, rng)
    assert np.count_nonzero(t_map(X)) == 0


def test_kshevetskiy_builder(ctx, rng):
    X, record = build_x_kshevetskiy(ctx, 4, 6, 2, 8, rng)
    assert rank_ext(X) == 1
    assert column_rank_base(X) == 6
    assert y_ext_rank(X, 3) <= 4
    assert record.mode is XMode.KSHEVETSKIY
    with pytest.raises(XConstructionError):
        build_x_kshevetskiy(ctx, 4, 4, 2, 8, rng)


def test_naive_builder(ctx, rng):
    X = build_x_random_naive(ctx, 4, 4, rng)
    assert column_rank_base(X) == 4


@pytest.mark.parametrize("mode", list(XMode))
def test_keygen_invariants(mode):
    params = GptParams(t1=6 if mode is XMode.KSHEVETSKIY else 4, x_mode=mode)
    pub, priv = keygen(params, np.random.default_rng(3))
    assert pub.G_pub.shape == (params.k, params.n + params.t1)
    assert rank_ext(pub.G_pub) == params.k
    assert column_rank_base(priv.X) == params.t1
    assert priv.record.mode is mode
    if mode.is_smart:
        assert y_ext_rank(priv.X, params.u) == params.t1 - params.a


@pytest.mark.parametrize("mode", [XMode.SMART_SIMPLE, XMode.SMART_GENERAL])
def test_smart_keygen_at_full_length(mode):
    # n = N: [X | G_k] cannot reach column rank n + t1 over GF(2)
    params = GptParams(x_mode=mode)
    cap = params.N + params.t1 - params.a
    for seed in range(10):
        pub, priv = keygen(params, np.random.default_rng(seed))
        assert column_rank_base(hstack(priv.X, priv.code.G_k)) <= cap < params.n + params.t1
        m = pub.ctx.random(params.k, np.random.default_rng(seed))
        assert np.array_equal(decrypt(priv, encrypt(pub, m, np.random.default_rng(seed))), m)


def test_keygen_is_deterministic(example_params):
    pub1, _ = keygen(example_params, np.random.default_rng(99))
    pub2, _ = keygen(example_params, np.random.default_rng(99))
    assert np.array_equal(pub1.G_pub, pub2.G_pub)


def test_keygen_gives_up(example_params, monkeypatch):
    def failing(*args, **kwargs):
        raise XConstructionError("no luck")

    monkeypatch.setenv("GPT_KEYGEN_MAX_TRIES", "3")
    monkeypatch.setattr(gpt_cryptosystem, "build_x", failing)
    with pytest.raises(KeyGenerationError):
        keygen(example_params, np.random.default_rng(0))


def test_round_trip_thousand_messages(smart_keys):
    pub, priv = smart_keys
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        m = pub.ctx.random(pub.params.k, rng)
        assert np.array_equal(decrypt(priv, encrypt(pub, m, rng, t2=2)), m)


def test_round_trip_every_mode():
    for mode in XMode:
        params = GptParams(t1=6 if mode is XMode.KSHEVETSKIY else 4, x_mode=mode)
        pub, priv = keygen(params, np.random.default_rng(5))
        rng = np.random.default_rng(6)
        for t2 in range(params.t2_max + 1):
            m = pub.ctx.random(params.k, rng)
            assert np.array_equal(decrypt(priv, encrypt(pub, m, rng, t2=t2)), m)


def test_encrypt_without_error_is_codeword(smart_keys, rng):
    pub, _ = smart_keys
    m = pub.ctx.random(4, rng)
    assert np.array_equal(encrypt(pub, m, rng, t2=0), m @ pub.G_pub)


def test_encrypt_rejects_bad_input(smart_keys, rng):
    pub, _ = smart_keys
    with pytest.raises(ErrorBudgetError):
        encrypt(pub, pub.ctx.random(4, rng), rng, t2=3)
    with pytest.raises(ValueError):
        encrypt(pub, pub.ctx.random(5, rng), rng)


def test_scrub_keeps_decryption(smart_keys, rng):
    pub, priv = smart_keys
    scrubbed = scrub(priv)
    assert scrubbed.X is None and scrubbed.record is None
    assert priv.X is not None
    m = pub.ctx.random(4, rng)
    assert np.array_equal(decrypt(scrubbed, encrypt(pub, m, rng)), m)
    with pytest.raises(ValueError):
        scrubbed.public_key()


def test_public_key_recomputed_from_private(smart_keys):
    pub, priv = smart_keys
    assert np.array_equal(priv.public_key().G_pub, pub.G_pub)
    assert priv.rank_x <= pub.params.t1


def test_larger_field_round_trip():
    params = GptParams(N=12, n=10, k=4, t1=5, a=2)
    pub, priv = keygen(params, np.random.default_rng(12), ctx=get_context(12))
    rng = np.random.default_rng(13)
    m = pub.ctx.random(4, rng)
    assert np.array_equal(decrypt(priv, encrypt(pub, m, rng)), m)


def test_simple_builder_full_deficiency_is_moore(ctx, rng):
    X, record = build_x_simple(ctx, 4, 4, 4, rng)
    m = ctx.array(record.m_vec)
    assert np.array_equal(X, moore_matrix(m, 4))
    assert np.count_nonzero(t_map(X)) == 0


def test_encryption_is_randomized(smart_keys, rng):
    pub, _ = smart_keys
    m = pub.ctx.random(4, rng)
    assert not np.array_equal(encrypt(pub, m, rng), encrypt(pub, m, rng))
