#!/usr/bin/env python3
"""
Worked Examples Module
Rebuilds the two published distortion-matrix examples over GF(2^8) from their
printed inputs and compares X, Y = T(X) and the ranks with golden values.
"""

from typing import List, Sequence

import galois
import numpy as np
from pydantic import BaseModel

from finite_field import EXAMPLE_POLY, FieldContext, get_context
from gpt_cryptosystem import build_x_general, build_x_simple
from gpt_params import GptParams
from log_config import get_logger
from overbeck_analyzer import estimate_work_factor_log2, t_map, y_ext
from rank_linalg import column_rank_base, rank_ext

logger = get_logger(__name__)

# Parameters shared by both examples
EXAMPLE_PARAMS = GptParams(N=8, n=8, k=4, t1=4, a=2, primitive_poly=EXAMPLE_POLY)

# Golden entries are sums of powers of alpha; 0 stands for alpha^0 = 1
EXAMPLE1_M = (3, 5, 6, 2)
EXAMPLE1_S = ((1, 1, 0, 0), (1, 1, 1, 1), (0, 0, 1, 1))
EXAMPLE1_X = (
    ((3,), (5,), (6,), (2,)),
    ((6, 0), (10, 0), (12,), (4,)),
    ((12, 0), (20, 0), (24, 0), (8, 0)),
    ((24,), (40,), (48, 0), (16, 0)),
)
EXAMPLE1_Y = ((1, 1, 0, 0), (0, 0, 1, 1), (1, 1, 0, 0))

EXAMPLE2_SEEDS = (3, 5)
EXAMPLE2_C3 = ((6,), (12,), (12,), (12,))
EXAMPLE2_C4 = ((2,), (5,), (5,), (2,))
EXAMPLE2_COMBINATION = ((1, 0), (0, 1))
EXAMPLE2_X = (
    ((3, 6), (5, 2), (6,), (2,)),
    ((6, 12), (10, 5), (12,), (5,)),
    ((12, 12), (20, 5), (12,), (5,)),
    ((24, 12), (40, 2), (12,), (2,)),
)
# Columns 1 and 3 as printed; columns 2 and 4 as T of the printed X
EXAMPLE2_Y = (
    ((), (4, 5), (), (4, 5)),
    ((24, 12), (10, 5), (24, 12), (10, 5)),
    ((24, 12), (10, 2), (24, 12), (10, 2)),
)


class ExampleCheck(BaseModel):
    """One golden comparison"""

    example: str
    check: str
    expected: str
    actual: str
    passed: bool


def _element(ctx: FieldContext, exponents: Sequence[int]):
    value = ctx.zero()
    for e in exponents:
        value = value + ctx.power(e)
    return value


def golden_matrix(ctx: FieldContext, entries) -> galois.FieldArray:
    """Matrix from nested tuples of alpha exponents"""
    return ctx.array([[int(_element(ctx, cell)) for cell in row] for row in entries])


def _matrix_check(example: str, check: str, expected, actual) -> ExampleCheck:
    return ExampleCheck(
        example=example,
        check=check,
        expected=str(np.array(expected, dtype=np.int64).tolist()),
        actual=str(np.array(actual, dtype=np.int64).tolist()),
        passed=expected.shape == actual.shape and np.array_equal(expected, actual),
    )


def _value_check(example: str, check: str, expected, actual) -> ExampleCheck:
    return ExampleCheck(
        example=example, check=check,
        expected=str(expected), actual=str(actual),
        passed=expected == actual,
    )


def example1(ctx: FieldContext) -> List[ExampleCheck]:
    """Simple construction from m and three s-vectors"""
    params = EXAMPLE_PARAMS
    m = ctx.array([int(ctx.power(e)) for e in EXAMPLE1_M])
    X, _ = build_x_simple(ctx, params.k, params.t1, params.a, m=m, s_vectors=EXAMPLE1_S)
    Y = t_map(X)
    target = params.t1 - params.a
    work_factor = round(estimate_work_factor_log2(params.a, params.N, params.n, params.t1), 2)

    return [
        _matrix_check("1", "X", golden_matrix(ctx, EXAMPLE1_X), X),
        _matrix_check("1", "Y = T(X)", ctx.array(EXAMPLE1_Y), Y),
        _value_check("1", "Y entries in GF(2)", True, bool(np.all(np.array(Y, dtype=np.int64) <= 1))),
        _value_check("1", "rank Y", target, rank_ext(Y)),
        _value_check("1", "rank Y_ext", target, rank_ext(y_ext(Y, params.u))),
        _value_check("1", "column rank of X over GF(2)", params.t1, column_rank_base(X)),
        _value_check("1", "log2 work factor", 26.75, work_factor),
    ]


def example2(ctx: FieldContext) -> List[ExampleCheck]:
    """General construction with two Frobenius-type columns"""
    params = EXAMPLE_PARAMS
    seeds = ctx.array([int(ctx.power(e)) for e in EXAMPLE2_SEEDS])
    columns = golden_matrix(ctx, [(c3, c4) for c3, c4 in zip(EXAMPLE2_C3, EXAMPLE2_C4)])
    X, _ = build_x_general(
        ctx, params.k, params.t1, params.a,
        seeds=seeds, non_frobenius=columns, combination=EXAMPLE2_COMBINATION,
    )
    Y = t_map(X)

    return [
        _matrix_check("2", "X", golden_matrix(ctx, EXAMPLE2_X), X),
        _matrix_check("2", "Y = T(X)", golden_matrix(ctx, EXAMPLE2_Y), Y),
        _value_check("2", "col 1 = col 3", True, bool(np.array_equal(Y[:, 0], Y[:, 2]))),
        _value_check("2", "col 2 = col 4", True, bool(np.array_equal(Y[:, 1], Y[:, 3]))),
        _value_check("2", "rank Y", params.t1 - params.a, rank_ext(Y)),
        _value_check("2", "rank Y_ext", params.t1 - params.a, rank_ext(y_ext(Y, params.u))),
        _value_check("2", "column rank of X over GF(2)", params.t1, column_rank_base(X)),
    ]


def run_worked_examples() -> List[ExampleCheck]:
    """
    Rebuild both examples and compare them with the golden values

    Returns:
        List[ExampleCheck]: Every comparison, passed or not
    """
    ctx = get_context(EXAMPLE_PARAMS.N, EXAMPLE_POLY)
    checks = example1(ctx) + example2(ctx)
    failed = [c for c in checks if not c.passed]
    if failed:
        logger.error(f"✗ {len(failed)} of {len(checks)} example checks failed")
    else:
        logger.info(f"✓ All {len(checks)} example checks passed")
    return checks
