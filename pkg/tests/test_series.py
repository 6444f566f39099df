import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from foxwright import (
    ConvergenceError,
    DomainError,
    FWParams,
    ParameterError,
    SeriesControl,
    Verdict,
    coefficient,
    convergence,
    eval_derivative,
    eval_fox_wright,
    eval_hypergeometric,
    eval_normalized,
    make_K_params,
)
from foxwright.series import (
    coefficient_window,
    differentiation_prefactor,
    eval_ratio,
)

from conftest import disc_points, random_params

mpmath.mp.dps = 30


def mp_fox_wright(params, z, terms=400):
    """Direct high-precision partial sum of pΨq."""
    z = mpmath.mpc(z)
    total = mpmath.mpf(0)
    for k in range(terms):
        t = mpmath.mpf(1) / mpmath.factorial(k)
        for a, A in params.upper:
            t *= mpmath.gamma(a + k * A)
        for b, B in params.lower:
            t /= mpmath.gamma(b + k * B)
        term = t * z**k
        total += term
        if k > 10 and abs(term) < mpmath.mpf(10) ** -25:
            break
    return complex(total)


# ---- construction and convergence class ---------------------------------------

@pytest.mark.parametrize("upper, lower", [
    ([(0.0, 1.0)], []),
    ([(1.0, -1.0)], []),
    ([(math.nan, 1.0)], []),
    ([(1.0, math.inf)], []),
    ([(1j, 1.0)], []),
])
def test_params_reject_nonpositive(upper, lower):
    with pytest.raises(ParameterError):
        FWParams(upper, lower)


def test_convergence_classes():
    c = convergence(FWParams([(1, 1)], [(1, 1)]))
    assert c.verdict is Verdict.ENTIRE and c.delta == 0
    c = convergence(FWParams([(1, 1)], []))
    assert c.verdict is Verdict.DISC and c.rho == 1.0 and c.boundary_converges is False
    assert c.mu == -0.5
    c = convergence(FWParams([(1, 2)], []))
    assert c.verdict is Verdict.DIVERGENT and c.delta == -2


def test_radius_matches_ratio_test():
    # Δ = -1 with unequal weights: ρ = A^-A B^B ...
    p = FWParams([(1.0, 2.0), (0.5, 0.5)], [(1.0, 1.5)])
    c = convergence(p)
    assert c.verdict is Verdict.DISC
    u = coefficient_window(p, 4001).log_values
    assert math.exp(u[-2] - u[-1]) == pytest.approx(c.rho, rel=1e-3)


# ---- coefficients -------------------------------------------------------------

def test_coefficient_examples():
    assert coefficient(FWParams([(3, 2)], [(1, 0.5)]), 0) == 1.0
    assert coefficient(FWParams([(2.5, 1)], [(2.5, 1)]), 2) == pytest.approx(0.5, rel=1e-14)
    assert coefficient(FWParams([(1, 1)], [(2, 1)]), 1) == pytest.approx(0.5, rel=1e-14)
    assert coefficient(make_K_params([2, 2]), 1) == pytest.approx(4 / 9, rel=1e-14)


def test_coefficient_consistency_with_raw_terms(rng):
    # U_k = T_k / T_0 where T_k is the k-th raw term of pΨq at z = 1
    for _ in range(10):
        p = random_params(rng, rng.integers(0, 3), rng.integers(0, 3))
        raw = []
        for k in range(51):
            t = mpmath.mpf(1) / mpmath.factorial(k)
            for a, A in p.upper:
                t *= mpmath.gamma(a + k * A)
            for b, B in p.lower:
                t /= mpmath.gamma(b + k * B)
            raw.append(t)
        for k in range(51):
            assert coefficient(p, k) == pytest.approx(float(raw[k] / raw[0]), rel=1e-10)


def test_window_matches_scalar_coefficients(rng):
    p = random_params(rng, 2, 2)
    w = coefficient_window(p, 30)
    assert w.length == 30 and w.log_values[0] == 0.0
    assert np.allclose(w.values, [coefficient(p, k) for k in range(30)], rtol=1e-13)


# ---- evaluation: examples -----------------------------------------------------

def test_eval_fox_wright_examples():
    assert eval_fox_wright(FWParams([(1, 1)], [(1, 1)]), 1.0) == pytest.approx(math.e, rel=1e-14)
    assert eval_fox_wright(FWParams([(1, 1)], []), 0.5) == pytest.approx(2.0, rel=1e-14)
    assert eval_fox_wright(FWParams([(2, 1)], [(1, 1)]), 0.0) == 1.0


def test_eval_normalized_examples():
    p = FWParams([(3.7, 1)], [(3.7, 1)])
    assert eval_normalized(p, 0.0) == 0
    assert eval_normalized(p, 0.5) == pytest.approx(0.5 * math.exp(0.5), rel=1e-14)
    q = FWParams([(1, 1)], [(2, 1)])
    assert eval_normalized(q, 0.5) == pytest.approx(math.expm1(0.5), rel=1e-14)


def test_eval_derivative_examples():
    p = random_params(np.random.default_rng(1), 2, 2)
    assert eval_derivative(p, 0.0, 1) == 1.0
    q = FWParams([(1, 1)], [(2, 1)])
    assert eval_derivative(q, 0.5, 1) == pytest.approx(math.exp(0.5), rel=1e-14)
    c = FWParams([(4, 1)], [(4, 1)])
    assert eval_derivative(c, 0.5, 2) == pytest.approx(2.5 * math.exp(0.5), rel=1e-14)


def test_hypergeometric_examples():
    assert eval_hypergeometric([1], [1], 0.7 + 0.2j) == pytest.approx(np.exp(0.7 + 0.2j), rel=1e-14)
    assert eval_hypergeometric([1, 1], [2], 0.5) == pytest.approx(-math.log(0.5) / 0.5, rel=1e-13)
    assert eval_hypergeometric([1], [], 0.25) == pytest.approx(4 / 3, rel=1e-14)


def test_hypergeometric_against_mpmath(rng):
    for _ in range(20):
        a = list(rng.uniform(0.2, 4, 2))
        b = list(rng.uniform(0.2, 4, 2))
        z = complex(disc_points(rng, 1, 3.0)[0])
        ref = complex(mpmath.hyper(a, b, z))
        assert eval_hypergeometric(a, b, z) == pytest.approx(ref, rel=1e-12)


def test_make_K_params_examples():
    assert eval_normalized(make_K_params([1]), 0.5) == pytest.approx(math.expm1(0.5), rel=1e-14)
    assert eval_normalized(make_K_params([]), 0.5) == pytest.approx(0.5 * math.exp(0.5), rel=1e-14)


def test_fox_wright_against_mpmath(rng):
    for _ in range(15):
        p = random_params(rng, 2, 2, min_delta=0.0)
        conv = convergence(p)
        rmax = 2.0 if conv.verdict is Verdict.ENTIRE else 0.8 * conv.rho
        z = complex(disc_points(rng, 1, rmax)[0])
        got = eval_fox_wright(p, z)
        assert got == pytest.approx(mp_fox_wright(p, z), rel=1e-11, abs=1e-14)


# ---- reductions ---------------------------------------------------------------

def test_reductions(rng):
    z = disc_points(rng, 100, 0.9)
    p = FWParams([(2.3, 0.7), (1.1, 1.4)], [(2.3, 0.7), (1.1, 1.4)])
    assert np.max(np.abs(eval_normalized(p, z) - z * np.exp(z))) <= 1e-12
    q = FWParams([(1, 1)], [(2, 1)])
    assert np.max(np.abs(eval_normalized(q, z) - np.expm1(z))) <= 1e-12
    r = FWParams([(1, 1)], [])
    assert np.max(np.abs(eval_fox_wright(r, z) - 1 / (1 - z))) <= 1e-12


def test_array_and_scalar_paths_agree(rng):
    p = random_params(rng, 2, 2)
    z = disc_points(rng, 40, 1.5)
    vec = eval_normalized(p, z)
    for zi, vi in zip(z, vec):
        assert eval_normalized(p, complex(zi)) == pytest.approx(vi, rel=1e-12, abs=1e-15)


# ---- domain and stopping ------------------------------------------------------

def test_domain_errors():
    with pytest.raises(DomainError):
        eval_normalized(FWParams([(1, 2)], []), 0.1)
    with pytest.raises(DomainError):
        eval_normalized(FWParams([(1, 1)], []), 1.0)
    with pytest.raises(DomainError):
        eval_normalized(FWParams([(1, 1)], []), np.array([0.1, 1.2]))


def test_non_convergence_error():
    # |z| close to ρ: the terms decay far too slowly for a tiny budget
    ctl = SeriesControl(tol=1e-14, max_terms=20, min_terms=8)
    with pytest.raises(ConvergenceError):
        eval_normalized(FWParams([(1, 1)], []), 0.99, ctl)


def test_small_z_ratio_no_cancellation():
    p = FWParams([(1, 1)], [(2, 1)])
    z = 1e-12
    assert eval_ratio(p, z) == pytest.approx(math.expm1(z) / z, rel=1e-15)


def test_truncation_stability(rng):
    base = SeriesControl(tol=1e-14, max_terms=5000)
    doubled = SeriesControl(tol=1e-14, max_terms=10000)
    for _ in range(10):
        p = random_params(rng, 2, 2)
        conv = convergence(p)
        rmax = 3.0 if conv.verdict is Verdict.ENTIRE else 0.9 * conv.rho
        for z in disc_points(rng, 5, rmax):
            a, b = eval_normalized(p, complex(z), base), eval_normalized(p, complex(z), doubled)
            assert abs(a - b) < 10 * base.tol * max(1.0, abs(a))


# ---- derivatives --------------------------------------------------------------

def test_differentiation_formula(rng):
    # d/dz [f(z)/z] = prefactor * (shifted f)(z)/z, checked against the direct series
    for _ in range(10):
        p = random_params(rng, 2, 2)
        conv = convergence(p)
        rmax = 1.5 if conv.verdict is Verdict.ENTIRE else 0.8 * conv.rho
        z = disc_points(rng, 20, rmax)
        lhs = eval_ratio(p, z, order=1)
        rhs = differentiation_prefactor(p) * eval_ratio(p.shifted(), z)
        assert np.all(np.abs(lhs - rhs) <= 1e-9 * np.abs(rhs))


def test_derivative_against_central_differences(rng):
    h = 1e-5
    for _ in range(8):
        p = random_params(rng, 1, 2)
        conv = convergence(p)
        rmax = 0.8 if conv.verdict is Verdict.ENTIRE else 0.8 * min(1.0, conv.rho)
        z = disc_points(rng, 10, rmax)
        d1 = eval_derivative(p, z, 1)
        fd1 = (eval_normalized(p, z + h) - eval_normalized(p, z - h)) / (2 * h)
        assert np.all(np.abs(d1 - fd1) <= 1e-6 * np.maximum(1.0, np.abs(d1)))
        d2 = eval_derivative(p, z, 2)
        fd2 = (eval_derivative(p, z + h, 1) - eval_derivative(p, z - h, 1)) / (2 * h)
        assert np.all(np.abs(d2 - fd2) <= 1e-6 * np.maximum(1.0, np.abs(d2)))


def test_derivative_order_validation():
    with pytest.raises(ParameterError):
        eval_derivative(FWParams([(1, 1)], [(2, 1)]), 0.1, 3)


# ---- properties ---------------------------------------------------------------

pair = st.tuples(st.floats(0.1, 8), st.floats(0.2, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(pair, min_size=1, max_size=2), st.floats(0.0, 0.6), st.floats(0, 2 * math.pi))
def test_upper_equal_lower_is_z_exp_z(pairs, r, theta):
    z = r * complex(math.cos(theta), math.sin(theta))
    p = FWParams(pairs, pairs)
    assert abs(eval_normalized(p, z) - z * np.exp(z)) <= 1e-13


@settings(max_examples=60, deadline=None)
@given(st.lists(pair, min_size=0, max_size=2), st.lists(pair, min_size=1, max_size=2), st.floats(0.05, 0.5))
def test_conjugate_symmetry(upper, lower, r):
    # real coefficients: f(conj z) = conj f(z)
    p = FWParams(upper, lower)
    conv = convergence(p)
    if conv.verdict is Verdict.DIVERGENT:
        return
    z = r * min(1.0, conv.radius) * (0.6 + 0.8j)
    a, b = eval_normalized(p, z), eval_normalized(p, z.conjugate())
    assert abs(a - b.conjugate()) <= 1e-13 * max(1.0, abs(a))


def test_params_helpers():
    p = FWParams([(1, 1), (2, 0.5)], [(3, 2)])
    assert p.replace("a2", 4.0).upper == ((1.0, 1.0), (4.0, 0.5))
    assert p.replace("B1", 1.0).lower == ((3.0, 1.0),)
    with pytest.raises(ParameterError):
        p.replace("b2", 1.0)
    assert p.augmented().upper[0] == (1.0, 1.0) and p.augmented().p == 3
    assert p.shifted().upper == ((2.0, 1.0), (2.5, 0.5))
