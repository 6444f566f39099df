"""Hypothesis checks for the univalence, starlikeness and convexity criteria.

Each criterion turns its hypotheses into named checks carrying a numeric
margin (positive means satisfied with room to spare). Sequence conditions
that are stated for all n are checked on a finite prefix only.

Γ-products are compared in log space. Margins are reported in linear space.
"""

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConstraintError, DomainError, UsageError
from .gamma_core import gamma_min_abscissa, log_gamma_diff
from .series import FWParams, Verdict, coefficient_window, convergence

TOL = 1e-12
E = math.exp(1.0)
TWO_OVER_SQRT5 = 2.0 / math.sqrt(5.0)
DEFAULT_PREFIX = 200


class Criterion(enum.Enum):
    T1_CASE1 = "T1_CASE1"
    T1_CASE2 = "T1_CASE2"
    T1_CASE3 = "T1_CASE3"
    T2 = "T2"
    T3 = "T3"
    H2 = "H2"
    T8_INEQ = "T8_INEQ"
    TT9_INEQ = "TT9_INEQ"
    TY8_INEQ = "TY8_INEQ"
    RRR1_INEQ = "RRR1_INEQ"

    @classmethod
    def parse(cls, name):
        try:
            return name if isinstance(name, cls) else cls(str(name).upper())
        except ValueError:
            known = ", ".join(c.value for c in cls)
            raise UsageError(f"unknown criterion {name!r} (known: {known})") from None


class Overall(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    CONDITIONAL_PASS = "ConditionalPass"


@dataclass(frozen=True)
class Check:
    name: str
    holds: bool
    margin: float
    equality: bool = False


@dataclass(frozen=True)
class CriterionReport:
    criterion_id: Criterion
    checks: tuple
    overall: Overall
    conclusion: str
    target: FWParams
    notes: tuple = ()

    @property
    def min_margin(self):
        """Smallest finite margin, ignoring equality constraints that hold (their margin is 0)."""
        finite = [c.margin for c in self.checks
                  if math.isfinite(c.margin) and not (c.equality and c.holds)]
        return min(finite) if finite else math.nan


@dataclass(frozen=True)
class SequenceVerdict:
    holds: bool
    first_violation: int | None
    checked_prefix: int
    chain: str | None = None


def _ge(name, lhs, rhs):
    m = float(lhs - rhs)
    return Check(name, m >= -TOL, m)


def _gt(name, lhs, rhs):
    m = float(lhs - rhs)
    return Check(name, m > TOL, m)


def _eq(name, lhs, rhs):
    m = 0.0 - abs(float(lhs - rhs))  # 0.0 - x keeps the exact case at +0
    return Check(name, m >= -TOL, m, equality=True)


def _require_square(params, crit):
    if params.p != params.q:
        raise UsageError(f"{crit.value} needs p = q, got p={params.p}, q={params.q}")


def _require_single_upper(params, crit):
    if params.p != 1 or params.q < 1:
        raise UsageError(f"{crit.value} needs one upper pair and q >= 1, got p={params.p}, q={params.q}")


def _log_gamma_product_ratio(params):
    """ln(Π Γ(b_j + B_j) / Π Γ(b_j))."""
    return sum(float(log_gamma_diff(b + B, b)) for b, B in params.lower)


def _gamma_condition(params, factor, label):
    # Π Γ(b_j + B_j) >= factor · Π Γ(b_j); decided in log space
    lr = _log_gamma_product_ratio(params)
    lf = math.log(factor)
    m = math.exp(lr) - factor if lr < 709.0 else math.inf
    return Check(label, lr - lf >= -TOL, m)


def _h2_checks(params):
    a, b = params.a, params.b
    weights = np.concatenate([params.A, params.B])
    checks = [_eq("common weight", float(np.max(np.abs(weights - weights[0]))), 0.0)]
    for i in range(params.p - 1):
        checks.append(_ge(f"a{i + 1} <= a{i + 2}", a[i + 1], a[i]))
        checks.append(_ge(f"b{i + 1} <= b{i + 2}", b[i + 1], b[i]))
    partial = np.cumsum(b - a)
    for k, s in enumerate(partial, start=1):
        checks.append(_ge(f"sum_(j<={k}) (b_j - a_j) >= 0", s, 0.0))
    return checks


def _inequality_check(crit, params, rho):
    holds, margin = coefficient_inequality(crit, params, rho)
    rhs = "(2/sqrt5)*prod G(a)/G(b)" if crit in (Criterion.TY8_INEQ, Criterion.RRR1_INEQ) else "prod G(a)/G(b)"
    return Check(f"prod[G(a+A)/G(b+B) - G(a+2A)/(rho G(b+2B))(1-e^rho)] <= {rhs}", holds, margin)


def _resolve_rho(params, rho):
    if rho is not None:
        if not (math.isfinite(rho) and rho > 0):
            raise UsageError(f"rho must be a finite positive real, got {rho!r}")
        return float(rho)
    conv = convergence(params)
    if conv.verdict is Verdict.DISC:
        return conv.rho
    raise UsageError("rho must be given explicitly unless the series has a finite radius (Δ = -1)")


_CONCLUSIONS = {
    Criterion.T1_CASE1: "close-to-convex w.r.t. -log(1-z), univalent in D",
    Criterion.T1_CASE2: "close-to-convex w.r.t. -log(1-z), univalent in D",
    Criterion.T1_CASE3: "close-to-convex w.r.t. -log(1-z), univalent in D",
    Criterion.T2: "starlike in D",
    Criterion.T3: "Re(f(z)/z) > 1/2 in D for the function with upper pair (1,1) prepended; "
    "its coefficients form a subordinating factor sequence for the convex class",
    Criterion.H2: "H-function kernel H^{p,0}_{p,p} is non-negative",
    Criterion.T8_INEQ: "convex in D_1/2 (with lower pair (2,1) prepended) and starlike in D_1/2",
    Criterion.TT9_INEQ: "convex in D_1/2 (with lower pair (2,1) prepended) and starlike in D_1/2",
    Criterion.TY8_INEQ: "starlike in D",
    Criterion.RRR1_INEQ: "starlike in D",
}


def check_theorem(crit, params, h_function_nonneg_asserted=False, rho=None):
    """Evaluate every hypothesis of ``crit`` for ``params``.

    ``rho`` is only used by T8_INEQ and TY8_INEQ. When omitted it defaults to
    the convergence radius, which exists only when Δ = -1.
    """
    crit = Criterion.parse(crit)
    xstar = gamma_min_abscissa()
    checks = []
    notes = []
    conditional = False
    target = params

    if crit in (Criterion.T1_CASE1, Criterion.T1_CASE2, Criterion.T3):
        _require_square(params, crit)
        for i, ((a, A), (b, B)) in enumerate(zip(params.upper, params.lower), start=1):
            if crit is Criterion.T3:
                checks.append(_gt(f"b{i} > a{i}", b, a))
                checks.append(_eq(f"B{i} = A{i}", B, A))
            else:
                checks.append(_ge(f"a{i} <= b{i}", b, a))
                if crit is Criterion.T1_CASE1:
                    checks.append(_eq(f"B{i} = A{i}", B, A))
                else:
                    checks.append(_ge(f"A{i} <= B{i}", B, A))
                    checks.append(_gt(f"b{i} > x*", b, xstar))
        if crit is Criterion.T3:
            target = params.augmented()

    elif crit in (Criterion.T1_CASE3, Criterion.T2):
        _require_single_upper(params, crit)
        (a, A), = params.upper
        checks.append(_eq("A1 = 1", A, 1.0))
        if crit is Criterion.T1_CASE3:
            checks.append(Check("a != x*", abs(a - xstar) > TOL, abs(a - xstar)))
            for j, (b, B) in enumerate(params.lower, start=1):
                checks.append(_gt(f"b{j} > x*", b, xstar))
                checks.append(_gt(f"b{j} > a", b, a))
                checks.append(_ge(f"B{j} >= 1", B, 1.0))
            checks.append(_gamma_condition(params, a, "prod G(b+B) >= a prod G(b)"))
        else:
            for j, (b, B) in enumerate(params.lower, start=1):
                checks.append(_ge(f"b{j} >= 2a", b, 2.0 * a))
                checks.append(_ge(f"B{j} >= 2", B, 2.0))
            checks.append(_ge("2a >= 2", 2.0 * a, 2.0))
            checks.append(_gamma_condition(params, 2.0 * a, "prod G(b+B) >= 2a prod G(b)"))
            for c in checks:
                if c.holds and abs(c.margin) <= TOL and c.name.startswith(("b", "2a")):
                    notes.append(f"equality in '{c.name}': only the strict form b_j >= 2a > 2 is known to suffice")

    elif crit is Criterion.H2:
        _require_square(params, crit)
        checks.extend(_h2_checks(params))

    elif crit in (Criterion.TT9_INEQ, Criterion.RRR1_INEQ):
        _require_square(params, crit)
        checks.extend(_h2_checks(params))
        checks.append(_inequality_check(crit, params, 1.0))

    else:  # T8_INEQ, TY8_INEQ
        _require_square(params, crit)
        rho = _resolve_rho(params, rho)
        checks.append(_eq("sum A = sum B", params.A.sum(), params.B.sum()))
        checks.append(_ge("min(a_i/A_i) >= 1", float(np.min(params.a / params.A)), 1.0))
        h2 = _h2_checks(params)
        if all(c.holds for c in h2):
            checks.append(Check("H-function non-negative (implied by H2)", True, min(c.margin for c in h2)))
        elif h_function_nonneg_asserted:
            checks.append(Check("H-function non-negative (asserted, not verified)", True, math.nan))
            conditional = True
        else:
            checks.append(Check("H-function non-negative (unverified; not asserted)", False, math.nan))
        checks.append(_inequality_check(crit, params, rho))
        notes.append(f"rho = {rho!r}")

    if crit in (Criterion.T8_INEQ, Criterion.TT9_INEQ):
        notes.append("convexity is stated for the function with lower pair (2,1) prepended "
                     "(see with_lower_two); the coefficient bound itself concerns the function as given")

    if not all(c.holds for c in checks):
        overall = Overall.FAIL
    elif conditional:
        overall = Overall.CONDITIONAL_PASS
    else:
        overall = Overall.PASS
    return CriterionReport(crit, tuple(checks), overall, _CONCLUSIONS[crit], target, tuple(notes))


def with_lower_two(params):
    """Prepend the lower pair (2, 1): the function named in the convexity claims."""
    return FWParams(params.upper, ((2.0, 1.0),) + params.lower)


def coefficient_inequality(crit, params, rho=None):
    """Product inequality of the T8/TT9/TY8/RRR1 family; returns (holds, RHS - LHS).

    TT9_INEQ and RRR1_INEQ always use rho = 1 (equal weights make the
    convergence constant 1). T8_INEQ and TY8_INEQ need rho from the caller.
    """
    crit = Criterion.parse(crit)
    if crit not in (Criterion.T8_INEQ, Criterion.TT9_INEQ, Criterion.TY8_INEQ, Criterion.RRR1_INEQ):
        raise UsageError(f"{crit.value} has no coefficient inequality")
    _require_square(params, crit)
    if crit in (Criterion.TT9_INEQ, Criterion.RRR1_INEQ):
        rho = 1.0
    elif rho is None or not (math.isfinite(rho) and rho > 0):
        raise UsageError(f"{crit.value} needs an explicit positive rho, got {rho!r}")
    growth = math.expm1(rho) / rho  # -(1 - e^rho)/rho > 0
    log_lhs = 0.0
    log_rhs = math.log(TWO_OVER_SQRT5) if crit in (Criterion.TY8_INEQ, Criterion.RRR1_INEQ) else 0.0
    for (a, A), (b, B) in zip(params.upper, params.lower):
        l1 = float(log_gamma_diff(a + A, b + B))
        l2 = float(log_gamma_diff(a + 2 * A, b + 2 * B))
        log_lhs += l1 + math.log1p(math.exp(l2 - l1) * growth)
        log_rhs += float(log_gamma_diff(a, b))
    margin = math.exp(log_rhs) * -math.expm1(log_lhs - log_rhs)
    return log_lhs - log_rhs <= TOL, margin


def luke_upper_bound(params, z):
    """ψ00 − (ψ01/ρ)(1 − e^(ρz)), an upper bound on pΨp(z) for real z."""
    if params.p != params.q:
        raise UsageError(f"needs p = q, got p={params.p}, q={params.q}")
    z = float(z)
    rho = convergence(params).rho
    psi00 = math.exp(sum(float(log_gamma_diff(a, b)) for (a, _), (b, _) in zip(params.upper, params.lower)))
    psi01 = math.exp(sum(float(log_gamma_diff(a + A, b + B))
                         for (a, A), (b, B) in zip(params.upper, params.lower)))
    return psi00 + psi01 * math.expm1(rho * z) / rho


class Threshold(enum.Enum):
    C2 = "C2"
    K1_CONST = "K1_CONST"
    FINAL_STARLIKE = "FINAL_STARLIKE"

    @classmethod
    def parse(cls, name):
        try:
            return name if isinstance(name, cls) else cls(str(name).upper())
        except ValueError:
            known = ", ".join(c.value for c in cls)
            raise UsageError(f"unknown threshold {name!r} (known: {known})") from None


def corollary_threshold(kind, a=None):
    """Parameter thresholds for the unit-weight, p = 1 case.

    C2: smallest b (A = 1, p = 1) above which the TT9 inequality holds.
    K1_CONST: largest a for which it holds with b = a + 1 (``a`` ignored).
    FINAL_STARLIKE: smallest b for which the RRR1 inequality holds.
    """
    kind = Threshold.parse(kind)
    if kind is Threshold.K1_CONST:
        return (2.0 - E + math.sqrt(E * E + 4.0 * E - 4.0)) / (2.0 * (E - 1.0))
    if a is None or not (math.isfinite(a) and a > 0):
        raise DomainError(f"a must be a finite positive real, got {a!r}")
    if kind is Threshold.C2:
        return (a - 1.0 + math.sqrt((a + 1.0) ** 2 + 4.0 * a * (E - 1.0) * (a + 1.0))) / 2.0
    s5 = math.sqrt(5.0)
    disc = (s5 * a - 2.0) ** 2 + 8.0 * a * s5 * (E * (a + 1.0) - a)
    return (-2.0 + s5 * a + math.sqrt(disc)) / 4.0


def lemma5_profile(a, b, A, grid):
    """H(z) = Γ(a+Az)/Γ(b+Az) − Γ(a+A+Az)/Γ(b+A+Az) on ``grid``.

    Returns (values, nonnegative, nonincreasing).
    """
    if not (a > 0 and A > 0):
        raise UsageError("a and A must be positive")
    if b < a:
        raise UsageError(f"needs b >= a, got a={a}, b={b}")
    z = np.asarray(grid, dtype=float)
    if z.ndim != 1 or z.size == 0 or np.any(z < 0) or np.any(np.diff(z) <= 0):
        raise UsageError("grid must be a non-empty, strictly increasing list of reals >= 0")
    x = a + A * z
    values = np.exp(log_gamma_diff(x, x + (b - a))) - np.exp(log_gamma_diff(x + A, x + A + (b - a)))
    slack = TOL * np.maximum(1.0, np.abs(values))
    nonneg = bool(np.all(values >= -slack))
    nonincr = bool(np.all(np.diff(values) <= slack[:-1]))
    return values, nonneg, nonincr


def _prefix(seq, prefix_len):
    seq = np.asarray(seq, dtype=float)
    n = min(int(prefix_len), seq.size)
    if prefix_len < 3 or n < 3:
        raise UsageError(f"need a prefix of at least 3 terms, got {n}")
    if abs(seq[0] - 1.0) > TOL:
        raise UsageError(f"sequence must start with 1, got {seq[0]!r}")
    return seq[:n], n


def _first_true(mask, offset):
    idx = np.nonzero(mask)[0]
    return int(idx[0]) + offset if idx.size else None


def ozaki_check(coeffs, prefix_len=DEFAULT_PREFIX):
    """Ozaki's monotone chains on n·A_n for f(z) = z + Σ A_n z^n.

    ``coeffs[0]`` is A_1 = 1. The verdict holds when either
    1 <= 2A_2 <= ... <= 2 or 1 >= 2A_2 >= ... >= 0 holds on the prefix.
    ``first_violation`` is the 1-based n at which the longer-lived chain broke.
    """
    A, n = _prefix(coeffs, prefix_len)
    c = np.arange(1, n + 1) * A
    step = np.diff(c)
    # violation at n = index + 2 for steps, index + 1 for bounds
    inc = [_first_true(step < -TOL, 2), _first_true(c > 2.0 + TOL, 1)]
    dec = [_first_true(step > TOL, 2), _first_true(c < -TOL, 1)]
    inc = min((v for v in inc if v is not None), default=None)
    dec = min((v for v in dec if v is not None), default=None)
    if dec is None:
        return SequenceVerdict(True, None, n, "decreasing")
    if inc is None:
        return SequenceVerdict(True, None, n, "increasing")
    return SequenceVerdict(False, max(inc, dec), n, None)


class SequenceKind(enum.Enum):
    LEMMA3 = "LEMMA3"
    LEMMA4 = "LEMMA4"


def sequence_checks(kind, seq, prefix_len=DEFAULT_PREFIX):
    """Monotonicity conditions behind the starlikeness and Re > 1/2 lemmas.

    LEMMA3: ``seq`` holds α_1 = 1, α_2, ...; both n·α_n and
    n·α_n − (n+1)·α_(n+1) must be non-increasing.
    LEMMA4: ``seq`` holds β_1 = 1, β_2, ...; it must be decreasing and convex.
    Indices in ``first_violation`` are 1-based positions n of the failing
    inequality. Negative entries count as violations as well.
    """
    kind = SequenceKind(kind.value if isinstance(kind, SequenceKind) else str(kind).upper())
    s, n = _prefix(seq, prefix_len)
    found = [_first_true(s < -TOL, 1)]
    if kind is SequenceKind.LEMMA3:
        c = np.arange(1, n + 1) * s
        d = -np.diff(c)
        found.append(_first_true(np.diff(c) > TOL, 1))
        found.append(_first_true(np.diff(d) > TOL, 1))
    else:
        found.append(_first_true(-np.diff(s) < -TOL, 1))
        found.append(_first_true(np.diff(s, 2) < -TOL, 1))
    first = min((v for v in found if v is not None), default=None)
    return SequenceVerdict(first is None, first, n)


def subordinating_sequence(params, n):
    """α_k (k = 1..n): coefficients of z^k in f(z)/z for the (1,1)-augmented function.

    If Re(f(z)/z) > 1/2 then Re(1 + 2 Σ α_k z^k) = Re(2 f(z)/z − 1) > 0.
    """
    return coefficient_window(params.augmented(), n + 1).values[1:]


class ExampleFamily(NamedTuple):
    params: FWParams
    rho1: float


def build_example_params(alpha, beta, gamma):
    """Two-pair family with a1 = b2 = A1 = 2 B2 = 1, and its constant rho_1.

    B1 = 1/(2 alpha) is paired with b1 = 1 + gamma/beta, following the
    displayed function. For accepted inputs sum A = sum B and min(a/A) >= 1.
    """
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    if not 0.0 < alpha <= 1.0:
        raise ConstraintError(f"alpha must lie in (0, 1], got {alpha}")
    if not 1.0 / alpha - 1.0 < beta:
        raise ConstraintError(f"1/alpha - 1 < beta violated ({1 / alpha - 1:.17g} >= {beta:.17g})")
    if not gamma + beta >= 0.5:
        raise ConstraintError(f"gamma + beta >= 1/2 violated ({gamma + beta:.17g})")
    gap = 1.0 / alpha - 1.0 - 1.0 / (alpha * beta)
    if abs(gap) > 1e-9:
        raise ConstraintError(f"1/alpha = 1 + 1/(alpha beta) violated (difference {gap:.3g})")
    A2 = 1.0 / (2.0 * alpha * beta)
    B1 = 1.0 / (2.0 * alpha)
    params = FWParams(
        [(1.0, 1.0), ((gamma + beta) / (alpha * beta), A2)],
        [(1.0 + gamma / beta, B1), (1.0, 0.5)],
    )
    rho1 = math.sqrt(0.5) * B1**B1 * A2**A2
    return ExampleFamily(params, rho1)
