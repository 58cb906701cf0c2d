"""Analytic fidelity bounds."""

import math

import numpy as np
import pytest

from planarmem.bounds import (
    BoundResult,
    ConcatParams,
    StorageParams,
    concat_error_rates,
    concat_fidelity_lower_bound,
    concat_success_closed_form,
    concat_success_product,
    hofmann_bound,
    storage_alpha,
    storage_success_bound,
)


def test_concat_params_defaults_and_validation():
    params = ConcatParams(p=0.001, v=10, r=2)
    assert params.c == 45  # v*(v-1)/2
    with pytest.raises(ValueError):
        ConcatParams(p=1.5, v=10, r=0)
    with pytest.raises(ValueError):
        ConcatParams(p=0.1, v=0, r=0)
    with pytest.raises(ValueError):
        ConcatParams(p=0.1, v=10, c=0.5, r=0)
    with pytest.raises(ValueError):
        ConcatParams(p=0.1, v=10, r=-1)


def test_error_rate_recurrence():
    rates = concat_error_rates(ConcatParams(p=1e-3, v=10, c=10, r=2))
    assert rates == pytest.approx([1e-3, 1e-5, 1e-9])


def test_single_level_product_value():
    val = concat_success_product(ConcatParams(p=0.01, v=10, r=0))
    assert val == pytest.approx(0.99**10, abs=1e-12)
    assert f"{val:.6f}" == "0.904382"


def test_zero_error_rate_is_certain_success():
    for r in (0, 3, 10):
        assert concat_success_product(ConcatParams(p=0.0, v=7, r=r)) == 1.0
        assert concat_success_closed_form(ConcatParams(p=0.0, v=7, r=r)) == 1.0


def test_product_and_closed_form_agree_to_12_digits():
    for p in (1e-5, 1e-4, 1e-3, 0.01):
        for v in (2, 10, 100):
            for r in (0, 1, 5, 20):
                params = ConcatParams(p=p, v=v, r=r)
                if params.c * p >= 1:
                    continue
                a = concat_success_product(params)
                b = concat_success_closed_form(params)
                assert a == pytest.approx(b, rel=1e-12)


def test_product_monotone_in_p_and_r():
    v, c = 10, 20
    ps = np.linspace(1e-6, 0.01, 20)
    for r in (0, 2, 5):
        vals = [concat_success_product(ConcatParams(p=float(p), v=v, c=c, r=r)) for p in ps]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    for p in ps:
        vals = [
            concat_success_product(ConcatParams(p=float(p), v=v, c=c, r=r))
            for r in range(8)
        ]
        assert all(a >= b - 1e-15 for a, b in zip(vals, vals[1:]))


def test_divergent_regime_warns():
    with pytest.warns(UserWarning):
        concat_success_product(ConcatParams(p=0.5, v=4, c=3, r=2))


def test_fidelity_lower_bound_values():
    assert concat_fidelity_lower_bound(0.0, 50) == 1.0
    assert concat_fidelity_lower_bound(0.001, 100) == pytest.approx(
        math.exp(-0.1), abs=1e-12
    )
    assert f"{concat_fidelity_lower_bound(0.001, 100):.6f}" == "0.904837"


def test_storage_alpha_values():
    assert storage_alpha(0.0) == 0.0
    assert storage_alpha(1e-4) == pytest.approx(12 * math.sqrt(1e-4 * (1 - 1e-4)))
    assert storage_alpha(0.01) == pytest.approx(1.19399, abs=1e-5)


def test_storage_bound_paper_scale_value():
    res = storage_success_bound(StorageParams(7, 7, 100, 1e-4))
    assert not res.vacuous
    assert res.value == pytest.approx(0.99801, abs=1e-5)


def test_storage_bound_noiseless():
    res = storage_success_bound(StorageParams(5, 9, 50, 0.0))
    assert res.value == 1.0 and not res.vacuous


def test_storage_bound_vacuous_marker():
    res = storage_success_bound(StorageParams(7, 8, 100, 0.01))
    assert res.vacuous
    assert res.value is None
    # a value <= 0 with alpha < 1 is also flagged, never clamped
    res2 = storage_success_bound(StorageParams(30, 30, 10**7, 0.005))
    assert res2.vacuous


def test_storage_bound_improves_with_size():
    k, p = 100, 1e-4
    vals = [
        storage_success_bound(StorageParams(n, n, k, p)).value for n in (5, 7, 9, 11)
    ]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_hofmann_bound():
    assert hofmann_bound(1.0, 1.0) == 1.0
    assert hofmann_bound(0.95, 0.90) == pytest.approx(0.85)
    assert hofmann_bound(0.5, 0.4) == pytest.approx(-0.1)  # returned as-is
    with pytest.raises(ValueError):
        hofmann_bound(1.2, 0.5)
    # monotone in each argument
    assert hofmann_bound(0.9, 0.8) <= hofmann_bound(0.95, 0.8)
    assert hofmann_bound(0.9, 0.8) <= hofmann_bound(0.9, 0.85)


def test_product_against_derived_integral_bound():
    """The provable part of the concatenation chain: the exact product is
    bounded below by exp(-2 p v) whenever cp <= 1/e (the tail sum of level
    error rates is dominated by a geometric series with ratio cp)."""
    rng = np.random.default_rng(42)
    for _ in range(200):
        v = int(rng.integers(2, 200))
        c = float(rng.integers(1, 50))
        p = float(rng.uniform(0.0, 1.0)) / (math.e * c)
        params = ConcatParams(p=p, v=v, c=c, r=30)
        ps = concat_success_product(params)
        assert (1.0 / v) * math.log(ps) >= -2.0 * p
