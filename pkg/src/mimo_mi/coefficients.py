"""Exact rational coefficients of the closed-form ergodic mutual information.

For an m x n Rayleigh channel (m <= n after normalization) the expected
mutual information is

    E[I] = sum_{k=0}^{n+m-3} a_k t^k  +  e^t Ei(-t) sum_{k=0}^{n+m-2} b_k t^k

with t the inverse SNR.  This module computes the a_k, b_k and the
underlying c_ij in exact arbitrary-precision rational arithmetic; no
floating point enters here.  The intermediate factorial terms alternate
in sign and cancel heavily, which is why a fixed-width fast path is a
bad idea.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .special_functions import harmonic


@dataclass(frozen=True)
class ChannelDims:
    """Validated antenna pair, stored with m <= n.

    Arguments may come in either order: ln det(I_m + H H*/t) equals
    ln det(I_n + H* H/t), so an (n, m) channel has the same mutual
    information as an (m, n) one and we silently swap.
    """

    m: int
    n: int

    def __post_init__(self):
        m, n = self.m, self.n
        if m < 1 or n < 1:
            raise ValueError(f"antenna counts must be >= 1, got ({m}, {n})")
        if m > n:
            object.__setattr__(self, "m", n)
            object.__setattr__(self, "n", m)


def coeff_c(i: int, j: int, dims: ChannelDims) -> Fraction:
    """The common factor c_ij of the double sum.

    Out-of-support indices are allowed: any reciprocal factorial of a
    negative integer is taken as zero (the gamma-pole convention), so
    the result is 0 whenever j < 0, i-j < 0, m-1-j < 0 or m-i+j < 0.
    """
    m, n = dims.m, dims.n
    denoms = (j, i - j, n - m + 1 + j, n - m + 1 + i - j, m - 1 - j, m - i + j)
    if any(d < 0 for d in denoms):
        return Fraction(0)
    num = (
        math.factorial(n)
        * math.factorial(m)
        * (-1) ** i
        * (2 * n * j + j - n * i + n - m + 1)
    )
    den = 1
    for d in denoms:
        den *= math.factorial(d)
    return Fraction(num, den)


def coeff_a(k: int, dims: ChannelDims) -> Fraction:
    """Coefficient a_k of the polynomial part, 0 <= k <= n+m-3."""
    m, n = dims.m, dims.n
    if not 0 <= k <= n + m - 3:
        raise IndexError(f"a_k index {k} outside [0, {n + m - 3}] for dims ({m}, {n})")
    if k == 0:
        acc = Fraction(0)
        for j in range(m):
            for i in range(j, 2 * m - 1):
                c = coeff_c(i, j, dims)
                if c:
                    acc += math.factorial(i + n - m) * c * harmonic(i + n - m)
        return acc
    acc = Fraction(0)
    for j in range(m):
        for i in range(max(j, k - n + m + 1), 2 * m - 1):
            c = coeff_c(i, j, dims)
            if c:
                acc += (
                    math.factorial(i + n - m)
                    - math.factorial(k) * math.factorial(i + n - m - k)
                ) * c
    return Fraction((-1) ** k, k * math.factorial(k)) * acc


def coeff_b(k: int, dims: ChannelDims) -> Fraction:
    """Coefficient b_k of the e^t Ei(-t) part, 0 <= k <= n+m-2."""
    m, n = dims.m, dims.n
    if not 0 <= k <= n + m - 2:
        raise IndexError(f"b_k index {k} outside [0, {n + m - 2}] for dims ({m}, {n})")
    if k <= n - m:
        return Fraction(-((-1) ** k) * m, math.factorial(k))
    acc = Fraction(0)
    for j in range(m):
        for i in range(max(j, k - n + m), 2 * m - 1):
            c = coeff_c(i, j, dims)
            if c:
                acc += math.factorial(i + n - m) * c
    return Fraction(-((-1) ** k), math.factorial(k)) * acc


@dataclass(frozen=True)
class CoefficientTable:
    """Full exact coefficient set for one channel dimension pair.

    a has n+m-2 entries (empty when m = n = 1), b has n+m-1 entries;
    immutable after construction and safe to share across threads.
    """

    dims: ChannelDims
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def to_json(self) -> str:
        return json.dumps(
            {
                "m": self.dims.m,
                "n": self.dims.n,
                "a": [str(x) for x in self.a],
                "b": [str(x) for x in self.b],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "CoefficientTable":
        obj = json.loads(text)
        return cls(
            dims=ChannelDims(obj["m"], obj["n"]),
            a=tuple(Fraction(x) for x in obj["a"]),
            b=tuple(Fraction(x) for x in obj["b"]),
        )


def _cij_sum_check(dims: ChannelDims) -> None:
    """The t-free part of the log-cancellation identity:
    sum_{i=0}^{2m-2} sum_{j=0}^{i} (i+n-m)! c_ij must equal m exactly.
    A failure here means the coefficient code itself is wrong."""
    m, n = dims.m, dims.n
    total = Fraction(0)
    for i in range(2 * m - 1):
        for j in range(i + 1):
            total += math.factorial(i + n - m) * coeff_c(i, j, dims)
    if total != m:
        raise AssertionError(
            f"internal consistency failure for dims ({m}, {n}): "
            f"sum (i+n-m)! c_ij = {total}, expected {m}"
        )


@lru_cache(maxsize=None)
def build_table(dims: ChannelDims) -> CoefficientTable:
    """Compute the complete exact table for the given dimensions.

    Cached per dims; the cache only ever stores immutable values, so
    concurrent first calls at worst duplicate work.
    """
    m, n = dims.m, dims.n
    _cij_sum_check(dims)
    a = tuple(coeff_a(k, dims) for k in range(n + m - 2))
    b = tuple(coeff_b(k, dims) for k in range(n + m - 1))
    return CoefficientTable(dims=dims, a=a, b=b)
