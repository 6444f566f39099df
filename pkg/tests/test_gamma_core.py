import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from foxwright import DomainError, RangeError, UsageError
from foxwright.gamma_core import (
    GammaAccuracy,
    digamma,
    gamma_min_abscissa,
    gamma_ratio,
    log_gamma,
    log_gamma_diff,
)

mpmath.mp.dps = 40

positive = st.floats(min_value=1e-3, max_value=1e6, allow_nan=False, allow_infinity=False)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (2.0, 0.0),
    (0.5, 0.5 * math.log(math.pi)),
    (10.0, math.log(362880.0)),
])
def test_log_gamma_known_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(positive)
def test_log_gamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    # near the zeros at 1 and 2 only absolute accuracy is meaningful
    assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_log_gamma_array_diff_matches_mpmath(rng):
    x = rng.uniform(1e-3, 200, 500)
    y = rng.uniform(1e-3, 200, 500)
    got = log_gamma_diff(x, y)
    ref = np.array([float(mpmath.loggamma(a) - mpmath.loggamma(b)) for a, b in zip(x, y)])
    assert np.all(np.abs(got - ref) <= 1e-12 * np.maximum(1.0, np.abs(ref)))


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@pytest.mark.parametrize("x, y, expected", [(5, 3, 12.0), (0.5, 1.5, 2.0), (7.25, 7.25, 1.0)])
def test_gamma_ratio_values(x, y, expected):
    assert gamma_ratio(x, y) == pytest.approx(expected, rel=1e-14)


def test_gamma_ratio_overflow_is_range_error():
    with pytest.raises(RangeError):
        gamma_ratio(500.0, 1.0)
    # large but representable ratio still fine
    assert gamma_ratio(171.0, 1.0) == pytest.approx(float(mpmath.gamma(171)), rel=1e-12)


def test_gamma_ratio_recurrence():
    for x in np.geomspace(1e-3, 1e5, 400):
        assert rel(gamma_ratio(x + 1.0, x), x) <= 1e-12


@settings(max_examples=1000, deadline=None)
@given(st.floats(1e-6, 50), st.floats(1e-6, 50), st.floats(1e-6, 50))
def test_ratio_inequality(x, alpha, beta):
    # Γ(x+α)/Γ(x+α+β) <= Γ(x)/Γ(x+β): log-convexity of Γ
    assert gamma_ratio(x + alpha, x + alpha + beta) <= gamma_ratio(x, x + beta) + 1e-12


def test_log_gamma_convex(rng):
    h = 1e-3
    for x in rng.uniform(0.5, 100, 300):
        d2 = log_gamma(x + h) - 2 * log_gamma(x) + log_gamma(x - h)
        assert d2 / (h * h) >= -1e-6


@pytest.mark.parametrize("x, expected", [
    (1.0, -0.57721566490153286),
    (2.0, 0.42278433509846714),
])
def test_digamma_known(x, expected):
    assert digamma(x) == pytest.approx(expected, abs=1e-14)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-3, 1e5))
def test_digamma_matches_mpmath_and_recurrence(x):
    ref = float(mpmath.digamma(mpmath.mpf(x)))
    assert abs(digamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))
    assert abs(digamma(x + 1) - digamma(x) - 1.0 / x) <= 1e-11 * max(1.0, 1.0 / x)


def test_gamma_min_abscissa():
    xs = gamma_min_abscissa()
    assert xs == pytest.approx(1.461632144, abs=1e-6)
    ref = float(mpmath.findroot(mpmath.digamma, 1.46))
    assert abs(xs - ref) <= 1e-12
    assert abs(digamma(xs)) <= 1e-8
    assert math.exp(log_gamma(xs)) == pytest.approx(0.8856031944108887, rel=1e-12)
    assert gamma_min_abscissa() is xs or gamma_min_abscissa() == xs


@pytest.mark.parametrize("tol", [0.0, -1.0, 1e-6, 1.0])
def test_accuracy_contract_validation(tol):
    with pytest.raises(UsageError):
        GammaAccuracy(tol)
    assert GammaAccuracy().rel_tol == 1e-12
