"""Fox-Wright parameters, convergence classification and series evaluation.

The Fox-Wright function is

    pΨq(z) = Σ_k  Π Γ(a_i + k A_i) / Π Γ(b_j + k B_j) · z^k / k!

and its normalized form is f(z) = Σ_k U_k z^(k+1) with U_0 = 1. Everything
is evaluated from ln U_k (see :func:`log_coefficients`), so no Γ value is
ever formed directly.

Evaluation of scalars follows the stopping rule literally: stop at the first
k ≥ min_terms for which |term| ≤ tol·max(1, |partial sum|) held at k-2, k-1
and k. For arrays the number of terms is fixed up front from the point of
largest modulus, using |term| ≤ tol at that point; this is never looser than
the per-point rule, so every point is summed at least as far as it would be
on its own.
"""

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError, RangeError
from .gamma_core import log_gamma, log_gamma_diff

MAX_ARITY = 16
DELTA_TOL = 1e-12
_LOG_MAX = 709.78


def _pairs(seq, side):
    out = []
    for idx, pair in enumerate(seq):
        try:
            x, w = (float(v) for v in pair)
        except (TypeError, ValueError):
            raise ParameterError(f"{side}[{idx}] must be a pair of reals, got {pair!r}") from None
        for label, v in (("parameter", x), ("weight", w)):
            if not math.isfinite(v) or v <= 0.0:
                raise ParameterError(
                    f"{side}[{idx}] {label} must be a finite positive real, got {v!r}"
                )
        out.append((x, w))
    if len(out) > MAX_ARITY:
        raise ParameterError(f"at most {MAX_ARITY} {side} pairs allowed, got {len(out)}")
    return tuple(out)


@dataclass(frozen=True)
class FWParams:
    """Upper pairs (a_i, A_i) and lower pairs (b_j, B_j), all positive reals."""

    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _pairs(self.upper, "upper"))
        object.__setattr__(self, "lower", _pairs(self.lower, "lower"))

    @property
    def p(self):
        return len(self.upper)

    @property
    def q(self):
        return len(self.lower)

    @property
    def a(self):
        return np.array([x for x, _ in self.upper])

    @property
    def A(self):
        return np.array([w for _, w in self.upper])

    @property
    def b(self):
        return np.array([x for x, _ in self.lower])

    @property
    def B(self):
        return np.array([w for _, w in self.lower])

    def shifted(self):
        """Parameters (a_i + A_i, A_i), (b_j + B_j, B_j)."""
        return FWParams(
            tuple((x + w, w) for x, w in self.upper),
            tuple((x + w, w) for x, w in self.lower),
        )

    def augmented(self):
        """Prepend the upper pair (1, 1)."""
        return FWParams(((1.0, 1.0),) + self.upper, self.lower)

    def replace(self, name, value):
        """Copy with one scalar changed; ``name`` is a1.., A1.., b1.. or B1.. (1-based)."""
        side = {"a": "upper", "A": "upper", "b": "lower", "B": "lower"}.get(name[:1])
        try:
            idx = int(name[1:]) - 1
        except ValueError:
            idx = -1
        pairs = list(getattr(self, side)) if side else []
        if side is None or not 0 <= idx < len(pairs):
            raise ParameterError(f"no parameter named {name!r} (p={self.p}, q={self.q})")
        x, w = pairs[idx]
        pairs[idx] = (value, w) if name[0].islower() else (x, value)
        return FWParams(**{"upper": self.upper, "lower": self.lower, side: tuple(pairs)})

    def __str__(self):
        fmt = lambda side: ", ".join(f"({x:g}, {w:g})" for x, w in side)
        return f"upper=[{fmt(self.upper)}] lower=[{fmt(self.lower)}]"


class Verdict(enum.Enum):
    ENTIRE = "Entire"
    DISC = "Disc"
    DIVERGENT = "Divergent"


@dataclass(frozen=True)
class ConvergenceClass:
    delta: float
    verdict: Verdict
    rho: float
    mu: float
    boundary_converges: bool | None = None

    @property
    def radius(self):
        """Radius of convergence: inf, rho, or 0."""
        if self.verdict is Verdict.ENTIRE:
            return math.inf
        if self.verdict is Verdict.DISC:
            return self.rho
        return 0.0


@dataclass(frozen=True)
class SeriesControl:
    tol: float = 1e-14
    max_terms: int = 10000
    min_terms: int = 8

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if not self.max_terms > self.min_terms >= 0:
            raise ParameterError("need max_terms > min_terms >= 0")


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class CoefficientWindow:
    """First ``length`` normalized coefficients, kept as ln U_k (all U_k > 0)."""

    log_values: np.ndarray

    @property
    def length(self):
        return len(self.log_values)

    @property
    def values(self):
        return np.exp(self.log_values)


def convergence(params):
    a, A, b, B = params.a, params.A, params.b, params.B
    delta = float(B.sum() - A.sum())
    rho = math.exp(float(-(A * np.log(A)).sum() + (B * np.log(B)).sum()))
    mu = float(b.sum() - a.sum() + (params.p - params.q) / 2.0)
    if abs(delta + 1.0) <= DELTA_TOL:
        return ConvergenceClass(delta, Verdict.DISC, rho, mu, mu > 0.5)
    if delta > -1.0:
        return ConvergenceClass(delta, Verdict.ENTIRE, rho, mu)
    return ConvergenceClass(delta, Verdict.DIVERGENT, rho, mu)


def _log_u(params, k):
    k = np.asarray(k, dtype=float)
    out = -log_gamma_diff(k + 1.0, 1.0)
    for x, w in params.upper:
        out = out + log_gamma_diff(x + k * w, x)
    for x, w in params.lower:
        out = out - log_gamma_diff(x + k * w, x)
    return np.asarray(out, dtype=float)


@functools.lru_cache(maxsize=64)
def _log_u_block(params, n):
    out = _log_u(params, np.arange(n))
    out.setflags(write=False)
    return out


def log_coefficients(params, n):
    """ln U_k for k = 0..n-1 as a read-only array."""
    size = 64
    while size < n:
        size *= 2
    return _log_u_block(params, size)[:n]


def coefficient_window(params, n):
    return CoefficientWindow(np.array(log_coefficients(params, n)))


def coefficient(params, k):
    """U_k, the coefficient of z^(k+1) in the normalized function."""
    if int(k) != k or k < 0:
        raise ParameterError(f"k must be a non-negative integer, got {k!r}")
    lu = float(_log_u(params, int(k)))
    if lu > _LOG_MAX:
        raise RangeError(f"U_{k} = exp({lu:.6g}) overflows double precision")
    return math.exp(lu)


# Term-wise forms. Each maps n -> ln c_j (j = 0..n-1) where the series is Σ c_j z^j.
def _ratio_logc(params, n):
    return log_coefficients(params, n)


def _deriv1_logc(params, n):
    return log_coefficients(params, n) + np.log1p(np.arange(n))


def _deriv2_logc(params, n):
    j = np.arange(n)
    return log_coefficients(params, n + 1)[1:] + np.log(j + 2.0) + np.log1p(j)


def _ratio_deriv_logc(params, n):
    return log_coefficients(params, n + 1)[1:] + np.log1p(np.arange(n))


def _check_domain(params, zmax):
    conv = convergence(params)
    if conv.verdict is Verdict.DIVERGENT:
        raise DomainError(f"series diverges for every z != 0 (Δ = {conv.delta:.6g} < -1)")
    if conv.verdict is Verdict.DISC and not zmax < conv.rho * (1.0 - 1e-9):
        raise DomainError(
            f"|z| = {zmax:.17g} is not strictly inside the disc of convergence (ρ = {conv.rho:.17g})"
        )


def _stop_index(mags, sums_abs, ctl):
    """First j >= max(min_terms, 2) with three consecutive small terms, or None."""
    small = mags <= ctl.tol * np.maximum(1.0, sums_abs)
    run = small[2:] & small[1:-1] & small[:-2]
    j = np.arange(2, len(mags))
    hits = np.nonzero(run & (j >= max(ctl.min_terms, 2)))[0]
    return int(hits[0]) + 2 if hits.size else None


def _sum_scalar(logc_fn, params, z, ctl, scale):
    r = abs(z)
    logr = math.log(r) if r > 0 else -math.inf
    theta = math.atan2(z.imag, z.real)
    n = min(128, ctl.max_terms)
    while True:
        logc = logc_fn(params, n)
        j = np.arange(n)
        with np.errstate(invalid="ignore"):
            expo = np.where(j == 0, 0.0, j * logr)
        logmag = logc + expo
        if np.any(logmag + math.log(scale) > _LOG_MAX):
            raise RangeError(f"series terms overflow at z = {z}")
        terms = scale * np.exp(logmag) * np.exp(1j * j * theta)
        sums = np.cumsum(terms)
        stop = _stop_index(np.abs(terms), np.abs(sums), ctl)
        if stop is not None:
            return complex(sums[stop])
        if n >= ctl.max_terms:
            raise ConvergenceError(f"stopping rule not met within {ctl.max_terms} terms at z = {z}")
        n = min(2 * n, ctl.max_terms)


def _sum_array(logc_fn, params, z, ctl):
    rmax = float(np.abs(z).max(initial=0.0))
    if rmax == 0.0:
        return np.full(z.shape, math.exp(float(logc_fn(params, 1)[0])), dtype=complex)
    logr = math.log(rmax)
    n = min(128, ctl.max_terms)
    while True:
        logc = logc_fn(params, n)
        logb = logc + np.arange(n) * logr
        if np.any(logb > _LOG_MAX):
            raise RangeError(f"series terms overflow at |z| = {rmax}")
        bound = np.exp(logb)
        stop = _stop_index(bound, np.zeros(n), ctl)
        if stop is not None:
            break
        if n >= ctl.max_terms:
            raise ConvergenceError(
                f"stopping rule not met within {ctl.max_terms} terms at |z| = {rmax}"
            )
        n = min(2 * n, ctl.max_terms)
    # Horner in w = z / rmax with coefficients c_j rmax^j, all of which are <= max term
    w = z / rmax
    acc = np.zeros(z.shape, dtype=complex)
    for c in bound[stop::-1]:
        acc = acc * w + c
    return acc


def _evaluate(logc_fn, params, z, ctl, scale=1.0):
    # the coefficients are real, so a real argument gets a real result
    real = np.isrealobj(z)
    z = np.asarray(z, dtype=complex)
    zmax = float(np.abs(z).max(initial=0.0))
    _check_domain(params, zmax)
    if z.ndim == 0:
        out = _sum_scalar(logc_fn, params, complex(z), ctl, scale)
        return out.real if real else out
    out = scale * _sum_array(logc_fn, params, z, ctl)
    return out.real if real else out


_FORMS = {0: _ratio_logc, 1: _ratio_deriv_logc}


def eval_ratio(params, z, ctl=DEFAULT_CONTROL, order=0):
    """f(z)/z = Σ U_k z^k summed directly, or its first derivative (order=1)."""
    if order not in _FORMS:
        raise ParameterError(f"order must be 0 or 1, got {order!r}")
    return _evaluate(_FORMS[order], params, z, ctl)


def eval_normalized(params, z, ctl=DEFAULT_CONTROL):
    """Normalized Fox-Wright function f(z) = Σ U_k z^(k+1)."""
    out = np.asarray(z) * eval_ratio(params, z, ctl)
    if out.ndim:
        return out
    return complex(out) if np.iscomplexobj(out) else float(out)


def eval_derivative(params, z, order=1, ctl=DEFAULT_CONTROL):
    """f'(z) or f''(z) of the normalized function, by term-wise differentiation."""
    if order == 1:
        return _evaluate(_deriv1_logc, params, z, ctl)
    if order == 2:
        return _evaluate(_deriv2_logc, params, z, ctl)
    raise ParameterError(f"order must be 1 or 2, got {order!r}")


def log_gamma_prefactor(params):
    """ln(Π Γ(a_i) / Π Γ(b_j)), the factor between pΨq and f(z)/z."""
    return sum(log_gamma(x) for x, _ in params.upper) - sum(log_gamma(x) for x, _ in params.lower)


def eval_fox_wright(params, z, ctl=DEFAULT_CONTROL):
    """The unnormalized series pΨq(z)."""
    lp = log_gamma_prefactor(params)
    if lp > _LOG_MAX:
        raise RangeError(f"Π Γ(a_i)/Π Γ(b_j) = exp({lp:.6g}) overflows double precision")
    return _evaluate(_ratio_logc, params, z, ctl, scale=math.exp(lp))


def differentiation_prefactor(params):
    """Π Γ(a_i + A_i)/Γ(a_i) · Π Γ(b_j)/Γ(b_j + B_j).

    With it, d/dz [f(z)/z] equals this factor times f̃(z)/z for the shifted
    parameters (a_i + A_i, A_i), (b_j + B_j, B_j).
    """
    lp = sum(log_gamma_diff(x + w, x) for x, w in params.upper)
    lp -= sum(log_gamma_diff(x + w, x) for x, w in params.lower)
    return math.exp(lp)


def hypergeometric_params(upper_a, lower_b):
    return FWParams([(x, 1.0) for x in upper_a], [(x, 1.0) for x in lower_b])


def eval_hypergeometric(upper_a, lower_b, z, ctl=DEFAULT_CONTROL):
    """pFq(a; b; z). With unit weights it is exactly Σ U_k z^k."""
    return eval_ratio(hypergeometric_params(upper_a, lower_b), z, ctl)


def make_K_params(a_list):
    """Parameters whose normalized function is Σ Π a_i/(a_i + k) · z^(k+1)/k!."""
    return FWParams([(x, 1.0) for x in a_list], [(x + 1.0, 1.0) for x in a_list])
