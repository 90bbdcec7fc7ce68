#!/usr/bin/env python3
"""
Tests for the T mapping, Y_ext, the kernel distinguisher and security reports
"""

import math

import numpy as np
import pytest

from finite_field import get_context
from gpt_cryptosystem import build_x_simple, keygen, scrub
from gpt_params import GptParams, XMode
from overbeck_analyzer import (
    SECURITY_THRESHOLD_BITS,
    AnalysisError,
    distinguisher_attack,
    estimate_work_factor_log2,
    extend_matrix,
    security_report,
    t_map,
    verify_break,
    y_ext,
)
from worked_examples import EXAMPLE1_M, EXAMPLE1_S, EXAMPLE1_Y
from rank_linalg import column_rank_base, random_full_rank_base, lift, rank_ext


@pytest.fixture
def example1_x(ctx):
    m = ctx.array([int(ctx.power(e)) for e in EXAMPLE1_M])
    X, _ = build_x_simple(ctx, 4, 4, 2, m=m, s_vectors=EXAMPLE1_S)
    return X


def test_t_map_on_first_example(ctx, example1_x):
    Y = t_map(example1_x)
    assert np.array_equal(Y, ctx.array(EXAMPLE1_Y))
    assert rank_ext(Y) == 2


def test_t_map_is_linear(ctx, rng):
    A = ctx.random((4, 3), rng)
    B = ctx.random((4, 3), rng)
    assert np.array_equal(t_map(A + B), t_map(A) + t_map(B))


def test_t_map_needs_two_rows(ctx, rng):
    with pytest.raises(AnalysisError):
        t_map(ctx.random((1, 4), rng))


def test_extend_matrix(ctx, rng):
    M = ctx.random((2, 5), rng)
    assert np.array_equal(extend_matrix(M, 0), M)
    assert extend_matrix(M, 3).shape == (8, 5)

    binary = ctx.array([[1, 0, 1], [0, 1, 1]])
    stacked = extend_matrix(binary, 2)
    assert np.array_equal(stacked[2:4], binary)
    assert np.array_equal(stacked[4:6], binary)

    with pytest.raises(AnalysisError):
        extend_matrix(M, -1)
    with pytest.raises(AnalysisError):
        y_ext(M, 0)


def test_base_rank_of_y_ext_matches_y(ctx):
    """GF(2) column rank of Y_ext equals that of Y; the GF(2^N) rank never exceeds it"""
    rng = np.random.default_rng(200)
    params = GptParams()
    for _ in range(200):
        s = int(rng.integers(1, params.t1 + 1))
        Y = ctx.random((params.k - 1, s), rng) @ lift(random_full_rank_base(s, params.t1, rng), ctx)
        Y_ext = y_ext(Y, params.u)
        assert column_rank_base(Y_ext) == column_rank_base(Y)
        assert rank_ext(Y_ext) <= column_rank_base(Y)


def test_work_factor():
    assert estimate_work_factor_log2(2, 8, 8, 4) == pytest.approx(26.75, abs=0.01)
    assert estimate_work_factor_log2(2, 32, 32, 8) == pytest.approx(64 + 3 * math.log2(40))


def test_report_for_first_example(example1_x, example_params):
    report = security_report(example1_x, example_params, seed=42)
    assert report.rk_y_ext == 2
    assert report.a_effective == 2
    assert report.work_factor_log2 == pytest.approx(26.75, abs=0.01)
    assert report.secure is False
    assert report.kernel_dim == 3
    assert report.kernel_dim_measured is False
    assert report.u == 3
    assert report.seed == 42


def test_report_large_field_is_secure():
    params = GptParams(N=32, n=32, k=16, t1=8, a=2)
    ctx = get_context(32)
    X, _ = build_x_simple(ctx, params.k, params.t1, params.a, np.random.default_rng(32))
    report = security_report(X, params)
    assert report.a_effective * params.N == 64
    assert report.search_space_log2 == 64 >= SECURITY_THRESHOLD_BITS
    assert report.secure is True


def test_report_rejects_bad_input(ctx, rng, example_params, smart_keys):
    with pytest.raises(AnalysisError):
        security_report(ctx.random((4, 3), rng), example_params)
    with pytest.raises(AnalysisError):
        security_report(scrub(smart_keys[1]), example_params)
    with pytest.raises(AnalysisError):
        security_report(get_context(4).random((4, 4), rng), example_params)


def test_report_measures_kernel_on_private_key(smart_keys):
    _, priv = smart_keys
    report = security_report(priv, priv.params)
    assert report.kernel_dim_measured is True
    assert report.kernel_dim == distinguisher_attack(priv.public_key()).kernel_dim
    assert report.rk_y_ext == 2
    assert report.kernel_dim >= report.a_effective + 1
    assert report.rank_x == priv.rank_x


def test_kernel_vectors_annihilate_extended_key(smart_keys):
    pub, _ = smart_keys
    result = distinguisher_attack(pub)
    extended = extend_matrix(pub.G_pub, pub.params.u)
    assert np.count_nonzero(extended @ result.kernel_basis.T) == 0


def test_distinguisher_separates_naive_and_smart_keys():
    naive_dims, smart_dims = set(), set()
    for seed in range(50):
        pub, priv = keygen(GptParams(x_mode=XMode.RANDOM_NAIVE), np.random.default_rng(seed))
        result = distinguisher_attack(pub)
        assert result.kernel_dim == 1
        assert result.attack_feasible
        assert verify_break(priv, result.kernel_basis[0])
        report = security_report(priv, priv.params)
        assert report.rk_y_ext == priv.params.t1
        assert report.a_effective == 0
        assert report.kernel_dim == 1
        assert report.secure is False
        naive_dims.add(result.kernel_dim)

    for mode in (XMode.SMART_SIMPLE, XMode.SMART_GENERAL):
        for seed in range(50):
            pub, _ = keygen(GptParams(x_mode=mode), np.random.default_rng(1000 + seed))
            result = distinguisher_attack(pub)
            assert result.kernel_dim >= 3
            assert not result.attack_feasible
            assert result.search_space_log2 >= 16
            smart_dims.add(result.kernel_dim)

    assert naive_dims.isdisjoint(smart_dims)


def test_kshevetskiy_keys_resist_distinguisher():
    params = GptParams(t1=6, x_mode=XMode.KSHEVETSKIY)
    for seed in range(10):
        pub, priv = keygen(params, np.random.default_rng(seed))
        assert distinguisher_attack(pub).kernel_dim >= params.a + 1
        assert security_report(priv, params).rk_y_ext <= params.t1 - params.a


def test_verify_break_rejects_zero(smart_keys):
    pub, priv = smart_keys
    with pytest.raises(ValueError):
        verify_break(priv, pub.ctx.GF.Zeros(pub.params.n + pub.params.t1))


def test_simple_key_y_ext_blocks_are_identical(smart_keys):
    _, priv = smart_keys
    Y = t_map(priv.X)
    rows = Y.shape[0]
    stacked = y_ext(Y, priv.params.u)
    for block in range(priv.params.u):
        assert np.array_equal(stacked[block * rows:(block + 1) * rows], Y)


def test_random_kernel_combinations_do_not_break_smart_keys(smart_keys):
    pub, priv = smart_keys
    basis = distinguisher_attack(pub).kernel_basis
    rng = np.random.default_rng(77)
    hits = 0
    for _ in range(20):
        u_vec = pub.ctx.random(basis.shape[0], rng, nonzero=True) @ basis
        if np.count_nonzero(u_vec) and verify_break(priv, u_vec):
            hits += 1
    assert hits == 0
