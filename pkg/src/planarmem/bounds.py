"""Analytic success-probability and fidelity bounds.

Concatenated-code encoding: with per-gate error rate p, circuit volume v,
and pair count c, the level-wise error rate obeys p_{k+1} = c p_k^2, i.e.
p_k = (1/c)(cp)^(2^k); the probability of passing all r+1 stages is
prod_k (1 - p_k)^v, which for cp <= 1/e satisfies (1/v) ln p_s >= -p and
hence p_s >= e^{-pv}.

Storage: p_s >= 1 - N M k alpha^max(N,M) / (1 - alpha) with
alpha = 12 sqrt(p(1-p)); vacuous (alpha >= 1 or bound <= 0) results are
flagged, never clamped.

Two-basis fidelity composition: F_avg >= F_x + F_z - 1.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

__all__ = [
    "ConcatParams",
    "StorageParams",
    "BoundResult",
    "concat_error_rates",
    "concat_success_product",
    "concat_success_closed_form",
    "concat_fidelity_lower_bound",
    "storage_alpha",
    "storage_success_bound",
    "hofmann_bound",
]


@dataclass(frozen=True)
class ConcatParams:
    p: float
    v: float
    c: float | None = None
    r: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0) or self.v < 1 or self.r < 0:
            raise ValueError("need 0 <= p <= 1, v >= 1, r >= 0")
        if self.c is None:
            object.__setattr__(self, "c", self.v * (self.v - 1) / 2)
        if self.c < 1:
            raise ValueError("need c >= 1")


@dataclass(frozen=True)
class StorageParams:
    N: int
    M: int
    k: int
    p: float

    def __post_init__(self):
        if self.N < 1 or self.M < 1 or self.k < 0 or not (0.0 <= self.p <= 1.0):
            raise ValueError("need N,M >= 1, k >= 0, 0 <= p <= 1")


@dataclass(frozen=True)
class BoundResult:
    """value is None when the formula itself is undefined (alpha >= 1)."""

    value: float | None
    vacuous: bool


def concat_error_rates(params: ConcatParams) -> list:
    """p_0..p_r under the recurrence p_{k+1} = c p_k^2."""
    rates = [params.p]
    for _ in range(params.r):
        rates.append(params.c * rates[-1] ** 2)
    return rates


def concat_success_product(params: ConcatParams) -> float:
    """prod_{k=0}^{r} (1 - p_k)^v via the recurrence (log-accumulated)."""
    if params.c * params.p >= 1:
        warnings.warn("cp >= 1: concatenation does not converge", stacklevel=2)
    acc = 0.0
    for pk in concat_error_rates(params):
        if pk >= 1.0:
            return 0.0
        acc += params.v * math.log1p(-pk)
    return math.exp(acc)


def concat_success_closed_form(params: ConcatParams) -> float:
    """Same product with p_k written as (1/c)(cp)^(2^k)."""
    acc = 0.0
    beta = params.c * params.p
    for k in range(params.r + 1):
        pk = (beta ** (2**k)) / params.c
        if pk >= 1.0:
            return 0.0
        acc += params.v * math.log1p(-pk)
    return math.exp(acc)


def concat_fidelity_lower_bound(p: float, v: float) -> float:
    """F >= e^{-pv}."""
    if p < 0 or v < 0:
        raise ValueError("need p, v >= 0")
    return math.exp(-p * v)


def storage_alpha(p: float) -> float:
    return 12.0 * math.sqrt(p * (1.0 - p))


def storage_success_bound(params: StorageParams) -> BoundResult:
    alpha = storage_alpha(params.p)
    if alpha >= 1.0:
        return BoundResult(None, True)  # series diverges; formula undefined
    value = _storage_value(params, alpha)
    return BoundResult(value, value <= 0.0)


def _storage_value(params, alpha):
    return 1.0 - (
        params.N
        * params.M
        * params.k
        * alpha ** max(params.N, params.M)
        / (1.0 - alpha)
    )


def hofmann_bound(F_x: float, F_z: float) -> float:
    """Average-fidelity lower bound from the two-basis fidelities."""
    for F in (F_x, F_z):
        if not (0.0 <= F <= 1.0):
            raise ValueError("fidelities must lie in [0, 1]")
    return F_x + F_z - 1.0
