#!/usr/bin/env python3
"""
Shared pytest fixtures
"""

import os

# Keep test runs from writing rotating log files into the working directory
os.environ.setdefault("LOG_TO_FILE", "false")

import numpy as np
import pytest

from finite_field import EXAMPLE_POLY, get_context
from gpt_cryptosystem import keygen
from gpt_params import GptParams, XMode


@pytest.fixture
def ctx():
    """GF(2^8) under 1 + x^2 + x^3 + x^4 + x^8"""
    return get_context(8, EXAMPLE_POLY)


@pytest.fixture
def ctx4():
    return get_context(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def example_params():
    """N = n = 8, k = 4, t1 = 4, a = 2"""
    return GptParams()


@pytest.fixture(scope="session")
def smart_keys():
    params = GptParams(x_mode=XMode.SMART_SIMPLE)
    return keygen(params, np.random.default_rng(7))

