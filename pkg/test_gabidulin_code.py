#!/usr/bin/env python3
"""
Tests for Gabidulin codes: duality, MRD distance and the syndrome decoder
"""

import itertools

import numpy as np
import pytest

from gabidulin_code import (
    DecodingFailure,
    GabidulinCode,
    GabidulinError,
    decode,
    encode,
    make_code,
    singleton_bound_holds,
    syndromes,
)
from rank_linalg import base_expansion, lift, random_vector_of_rank, rank_norm, right_kernel_ext


@pytest.mark.parametrize("n,k", [(8, 4), (8, 2), (7, 3), (5, 1)])
def test_dual_vector_annihilates_generator(ctx, rng, n, k):
    code = make_code(ctx, n, k, rng=rng)
    assert np.count_nonzero(code.G_k @ code.H.T) == 0
    assert rank_norm(code.h) == n
    assert code.d == n - k + 1
    assert code.t == (n - k) // 2


def test_codewords_have_zero_syndrome(ctx, rng):
    code = make_code(ctx, 8, 4, rng=rng)
    c = encode(code, ctx.random(4, rng))
    assert np.count_nonzero(syndromes(code, c)) == 0


def test_decode_corrects_up_to_t(ctx, rng):
    code = make_code(ctx, 8, 4, rng=rng)
    for trial in range(100):
        m = ctx.random(4, rng)
        e = random_vector_of_rank(8, trial % (code.t + 1), rng, ctx)
        message, error = decode(code, encode(code, m) + e)
        assert np.array_equal(message, m)
        assert np.array_equal(error, e)


def test_decode_corrects_errors_of_rank_t(ctx):
    rng = np.random.default_rng(500)
    code = make_code(ctx, 8, 4, rng=rng)
    for _ in range(500):
        m = ctx.random(4, rng)
        e = random_vector_of_rank(8, code.t, rng, ctx)
        message, error = decode(code, encode(code, m) + e)
        assert np.array_equal(message, m)
        assert np.array_equal(error, e)


def _minimum_weight_codeword(code):
    """Codeword vanishing on the first k-1 coordinates, so of rank n-k+1"""
    m = right_kernel_ext(code.G_k[:, :code.k - 1].T)[0]
    return m, encode(code, m)


def _split_by_rank(ctx, w, r):
    """w = w_a + w_b with rank_norm(w_a) = r and rank_norm(w_b) = rank_norm(w) - r"""
    reduced = base_expansion(w).row_reduce()
    basis = reduced[:rank_norm(w)]
    pivots = [int(np.flatnonzero(np.array(row, dtype=np.int64))[0]) for row in basis]
    beta = w[pivots]
    lifted = lift(basis, ctx)
    return beta[:r] @ lifted[:r], beta[r:] @ lifted[r:]


def test_error_past_radius_lands_on_another_codeword(ctx):
    rng = np.random.default_rng(33)
    code = make_code(ctx, 8, 4, rng=rng)
    m_w, w = _minimum_weight_codeword(code)
    assert rank_norm(w) == code.d == 2 * code.t + 1

    near, far = _split_by_rank(ctx, w, code.t + 1)
    assert rank_norm(near) == code.t + 1
    assert rank_norm(far) == code.t
    assert np.array_equal(near + far, w)

    for _ in range(20):
        m = ctx.random(4, rng)
        message, error = decode(code, encode(code, m) + near)
        assert not np.array_equal(message, m)
        assert np.array_equal(message, m + m_w)
        assert rank_norm(error) == code.t


def _all_messages(ctx, k):
    return ctx.array(list(itertools.product(range(ctx.order), repeat=k)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_minimum_rank_distance_is_exhaustively_n_minus_k_plus_1(ctx4, rng, k):
    code = make_code(ctx4, 4, k, rng=rng)
    codewords = _all_messages(ctx4, k) @ code.G_k
    assert codewords.shape == (16 ** k, 4)
    ranks = [rank_norm(c) for c in codewords[1:]]
    assert min(ranks) == 4 - k + 1 == code.d


def test_mrd_bound():
    assert singleton_bound_holds(4, 2, 3, 4)
    assert not singleton_bound_holds(4, 2, 4, 4)
    assert singleton_bound_holds(8, 4, 5, 8)


def test_code_is_mrd(ctx, rng):
    assert make_code(ctx, 8, 4, rng=rng).is_mrd
    assert make_code(ctx, 6, 3, rng=rng).is_mrd


def _rank_one_words(ctx, n):
    """Every vector of rank norm at most 1, as integer tuples"""
    words = set()
    for x in range(ctx.order):
        for y in itertools.product((0, 1), repeat=n):
            words.add(tuple(int(x) if bit else 0 for bit in y))
    return words


def test_decoder_matches_exhaustive_nearest_codeword(ctx4, rng):
    code = make_code(ctx4, 4, 2, rng=rng)
    messages = _all_messages(ctx4, 2)
    codewords = messages @ code.G_k
    near = _rank_one_words(ctx4, 4)

    failures = 0
    for trial in range(200):
        if trial % 2:
            y = ctx4.random(4, rng)
        else:
            y = codewords[int(rng.integers(256))] + random_vector_of_rank(4, 1, rng, ctx4)

        offsets = np.array(y - codewords, dtype=np.int64)
        matches = [i for i, row in enumerate(offsets) if tuple(row.tolist()) in near]
        assert len(matches) <= 1

        if matches:
            message, error = decode(code, y)
            assert np.array_equal(message, messages[matches[0]])
            assert rank_norm(error) <= 1
        else:
            failures += 1
            with pytest.raises(DecodingFailure):
                decode(code, y)
    assert failures < 200


def test_invalid_codes(ctx):
    dependent = ctx.array([1, 1, 2, 4])
    with pytest.raises(GabidulinError):
        GabidulinCode(ctx, 4, 2, dependent)
    with pytest.raises(GabidulinError):
        make_code(ctx, 4, 4)
    with pytest.raises(GabidulinError):
        make_code(ctx, 9, 4)


def test_wrong_word_length(ctx, rng):
    code = make_code(ctx, 8, 4, rng=rng)
    with pytest.raises(GabidulinError):
        decode(code, ctx.random(7, rng))
    with pytest.raises(GabidulinError):
        encode(code, ctx.random(5, rng))


def test_code_dict_round_trip(ctx, rng):
    code = make_code(ctx, 8, 4, rng=rng)
    restored = GabidulinCode.from_dict(code.to_dict())
    assert np.array_equal(restored.G_k, code.G_k)
    assert np.array_equal(restored.H, code.H)
