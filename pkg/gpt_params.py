#!/usr/bin/env python3
"""
GPT Parameters Module
Validated parameter block shared by key generation, the analyzer and the CLI
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator


class XMode(str, Enum):
    """Distortion matrix construction"""
    SMART_SIMPLE = "smart_simple"
    SMART_GENERAL = "smart_general"
    KSHEVETSKIY = "kshevetskiy"
    RANDOM_NAIVE = "random_naive"

    @property
    def is_smart(self) -> bool:
        return self in (XMode.SMART_SIMPLE, XMode.SMART_GENERAL)


class GptParams(BaseModel):
    """
    GPT parameter set

    Defaults are the worked example: N = n = 8, k = 4, t1 = 4, a = 2.
    t2_max defaults to floor((n-k)/2).
    """

    model_config = ConfigDict(frozen=True)

    N: int = 8
    n: int = 8
    k: int = 4
    t1: int = 4
    a: int = 2
    t2_max: Optional[int] = None
    x_mode: XMode = XMode.SMART_SIMPLE
    primitive_poly: Optional[int] = None

    @model_validator(mode="before")
    @classmethod
    def _default_error_budget(cls, data):
        if isinstance(data, dict) and data.get("t2_max") is None:
            n = int(data.get("n", 8))
            k = int(data.get("k", 4))
            data = {**data, "t2_max": max((n - k) // 2, 0)}
        return data

    @model_validator(mode="after")
    def _check_invariants(self) -> "GptParams":
        N, n, k, t1, a = self.N, self.n, self.k, self.t1, self.a

        if N < 2:
            raise ValueError(f"N must be at least 2, got {N}")
        if not 1 <= k < n <= N:
            raise ValueError(f"Need 1 <= k < n <= N, got N={N}, n={n}, k={k}")
        if n - k < 2:
            raise ValueError(f"Need n - k >= 2 so the extended key has u >= 1 blocks, got n-k={n - k}")
        if t1 < 1:
            raise ValueError(f"t1 must be positive, got {t1}")
        if not 2 <= a <= t1:
            raise ValueError(f"Need 2 <= a <= t1, got a={a}, t1={t1}")
        if not 0 <= self.t2_max <= (n - k) // 2:
            raise ValueError(f"t2_max must lie in [0, {(n - k) // 2}], got {self.t2_max}")
        if t1 + n > k * N:
            raise ValueError(f"[X | G_k] cannot reach column rank t1+n={t1 + n} > kN={k * N}")

        if self.x_mode.is_smart:
            if t1 > N:
                raise ValueError(f"Smart constructions need t1 <= N, got t1={t1}, N={N}")
            if k - 1 < t1 - a:
                raise ValueError(f"Smart constructions need k-1 >= t1-a, got k={k}, t1-a={t1 - a}")
        elif self.x_mode is XMode.KSHEVETSKIY:
            if t1 <= n - k:
                raise ValueError(f"Kshevetskiy condition needs t1 > n-k, got t1={t1}, n-k={n - k}")
            r_x = (t1 - a) // (n - k)
            if not 1 <= r_x <= k:
                raise ValueError(f"Kshevetskiy condition needs 1 <= r_X <= k, got r_X={r_x}")
            if t1 > r_x * N:
                raise ValueError(f"A rank-{r_x} X cannot have column rank t1={t1} over GF(2^{N})")
        return self

    @property
    def d(self) -> int:
        return self.n - self.k + 1

    @property
    def t(self) -> int:
        """Correctable rank floor((n-k)/2)"""
        return (self.n - self.k) // 2

    @property
    def u(self) -> int:
        """Number of Frobenius images used by the structural attack"""
        return self.n - self.k - 1

    @property
    def r_x(self) -> int:
        return (self.t1 - self.a) // (self.n - self.k)

    @property
    def public_key_bits(self) -> int:
        """V = k (t1 + n) N"""
        return self.k * (self.t1 + self.n) * self.N

    @property
    def rate(self) -> float:
        """R = k / (t1 + n)"""
        return self.k / (self.t1 + self.n)
