"""Sampled verification of geometric properties on discs |z| < R.

A property is reduced to a real margin that must stay positive on the disc,
e.g. Re(z f'(z)/f(z)) for starlikeness. The margin is evaluated on a polar
grid and its minimum reported together with the point attaining it. A
negative minimum is a certificate of failure at that point. A positive one
is evidence only, since nothing is claimed off the grid.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .series import DEFAULT_CONTROL, eval_derivative, eval_ratio

PASS_TOL = 1e-9
SKIP_BELOW = 1e-13


class DegenerateInputError(UsageError):
    pass


@dataclass(frozen=True)
class DiscGrid:
    radii: tuple
    angles_per_radius: int = 256
    max_radius: float = 0.995

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size == 0 or np.any(r <= 0) or np.any(r >= 1):
            raise UsageError("grid radii must be a non-empty list of reals in (0, 1)")
        if np.any(np.diff(r) <= 0):
            raise UsageError("grid radii must be strictly increasing")
        if self.angles_per_radius < 8:
            raise UsageError("need at least 8 angles per radius")
        if not 0 < self.max_radius < 1:
            raise UsageError("max_radius must lie in (0, 1)")
        object.__setattr__(self, "radii", tuple(float(x) for x in r))

    @classmethod
    def geometric(cls, n_radii=64, angles_per_radius=256, r_min=0.05, max_radius=0.995):
        if n_radii < 1:
            raise UsageError("need at least one radius")
        radii = np.geomspace(r_min, max_radius, n_radii) if n_radii > 1 else [max_radius]
        return cls(tuple(radii), angles_per_radius, max_radius)

    def points(self, domain_radius=1.0):
        """Sample points r·e^(iθ) with r = domain_radius · radius, radius <= max_radius."""
        r = np.array([x for x in self.radii if x <= self.max_radius]) * domain_radius
        if r.size == 0:
            raise DegenerateInputError("no grid radius lies within max_radius")
        theta = 2.0 * np.pi * np.arange(self.angles_per_radius) / self.angles_per_radius
        return (r[:, None] * np.exp(1j * theta)[None, :]).ravel()

    def describe(self):
        return (f"{len(self.radii)} radii in [{self.radii[0]:.4g}, {self.radii[-1]:.4g}] "
                f"x {self.angles_per_radius} angles, max_radius {self.max_radius:g}")


DEFAULT_GRID = DiscGrid.geometric()


class Property(enum.Enum):
    STARLIKE = "Starlike"
    CONVEX = "Convex"
    CLOSE_TO_CONVEX_LOG = "CloseToConvexLog"
    RE_OVER_Z = "ReOverZ"
    DERIV_DIST = "DerivDist"
    RATIO_DIST = "RatioDist"
    SUBORDINATING = "Subordinating"


_NEEDS_C = {Property.RE_OVER_Z, Property.DERIV_DIST, Property.RATIO_DIST}


@dataclass(frozen=True)
class PropertyKind:
    """A property plus its constant ``c`` (the three distance/bound kinds).

    ``order`` shifts the Starlike/Convex/CloseToConvexLog margins, giving the
    order-α classes.
    """

    prop: Property
    c: float | None = None
    order: float = 0.0

    def __post_init__(self):
        if self.prop in _NEEDS_C:
            if self.c is None or not self.c > 0:
                raise UsageError(f"{self.prop.value} needs a constant c > 0")
        elif self.c is not None:
            raise UsageError(f"{self.prop.value} takes no constant")

    @classmethod
    def parse(cls, name, c=None, order=0.0):
        lookup = {p.value.lower(): p for p in Property}
        try:
            prop = lookup[str(name).lower()]
        except KeyError:
            raise UsageError(f"unknown property {name!r} (known: {', '.join(p.value for p in Property)})") from None
        return cls(prop, c, order)

    def __str__(self):
        s = self.prop.value
        if self.c is not None:
            s += f"({self.c:.17g})"
        if self.order:
            s += f"[order {self.order:.17g}]"
        return s


@dataclass(frozen=True)
class PropertyReport:
    kind: PropertyKind
    domain_radius: float
    min_margin: float
    witness: complex
    passed: bool
    points_checked: int
    points_skipped: int = 0
    grid: str = ""


class SeriesFunction:
    """Normalized Fox-Wright function with the controls used to sum it."""

    def __init__(self, params, ctl=DEFAULT_CONTROL):
        self.params = params
        self.ctl = ctl

    def ratio(self, z):
        return eval_ratio(self.params, z, self.ctl)

    def deriv(self, z, order):
        return eval_derivative(self.params, z, order, self.ctl)


class ClosedForm:
    """Evaluator from explicit callables; ``ratio`` defaults to f(z)/z."""

    def __init__(self, f, df, d2f=None, ratio=None):
        self.f, self.df, self.d2f = f, df, d2f
        self._ratio = ratio

    def ratio(self, z):
        return self._ratio(z) if self._ratio is not None else self.f(z) / z

    def deriv(self, z, order):
        fn = self.df if order == 1 else self.d2f
        if fn is None:
            raise UsageError(f"no derivative of order {order} supplied")
        return fn(z)


def _margins(f, kind, z):
    prop = kind.prop
    skip = np.zeros(z.shape, dtype=bool)
    if prop is Property.STARLIKE:
        ratio = f.ratio(z)
        skip = np.abs(z * ratio) < SKIP_BELOW
        with np.errstate(divide="ignore", invalid="ignore"):
            m = (f.deriv(z, 1) / ratio).real - kind.order
    elif prop is Property.CONVEX:
        d1 = f.deriv(z, 1)
        skip = np.abs(d1) < SKIP_BELOW
        with np.errstate(divide="ignore", invalid="ignore"):
            m = (1.0 + z * f.deriv(z, 2) / d1).real - kind.order
    elif prop is Property.CLOSE_TO_CONVEX_LOG:
        m = ((1.0 - z) * f.deriv(z, 1)).real - kind.order
    elif prop is Property.RE_OVER_Z:
        m = f.ratio(z).real - kind.c
    elif prop is Property.DERIV_DIST:
        m = kind.c - np.abs(f.deriv(z, 1) - 1.0)
    elif prop is Property.RATIO_DIST:
        m = kind.c - np.abs(f.ratio(z) - 1.0)
    else:
        raise UsageError(f"{prop.value} is not a function property; use subordinating_check")
    return np.asarray(m, dtype=float), skip


def _report(kind, z, margins, skip, domain_radius, grid):
    keep = ~skip
    if not keep.any():
        raise DegenerateInputError("every grid point was skipped (vanishing denominator)")
    z, m = z[keep], margins[keep]
    # NaN margins (e.g. 0/0 that escaped the skip test) count as failures
    m = np.where(np.isnan(m), -np.inf, m)
    order = np.lexsort((z.imag, z.real, m))
    best = order[0]
    min_margin = float(m[best])
    return PropertyReport(
        kind=kind,
        domain_radius=float(domain_radius),
        min_margin=min_margin,
        witness=complex(z[best]),
        passed=min_margin >= -PASS_TOL,
        points_checked=int(keep.sum()),
        points_skipped=int(skip.sum()),
        grid=grid.describe(),
    )


def verify_property(f, kind, grid=DEFAULT_GRID, domain_radius=1.0):
    """Minimum of the margin of ``kind`` over the grid scaled to ``domain_radius``."""
    if not 0 < domain_radius <= 1:
        raise UsageError(f"domain_radius must lie in (0, 1], got {domain_radius}")
    z = grid.points(domain_radius)
    margins, skip = _margins(f, kind, z)
    return _report(kind, z, margins, skip, domain_radius, grid)


def subordinating_check(seq, grid=DEFAULT_GRID, prefix_len=200):
    """Minimum of Re(1 + 2 Σ_(k<=N) α_k z^k) on the unit-disc grid; seq[0] is α_1."""
    if prefix_len < 8:
        raise UsageError(f"prefix_len must be at least 8, got {prefix_len}")
    alpha = np.asarray(seq, dtype=float)[:prefix_len]
    z = grid.points(1.0)
    acc = np.zeros(z.shape, dtype=complex)
    for a in alpha[::-1]:
        acc = (acc + a) * z
    margins = (1.0 + 2.0 * acc).real
    kind = PropertyKind(Property.SUBORDINATING)
    return _report(kind, z, margins, np.zeros(z.shape, dtype=bool), 1.0, grid)


def verify_params(params, kind, grid=DEFAULT_GRID, domain_radius=1.0, ctl=DEFAULT_CONTROL):
    return verify_property(SeriesFunction(params, ctl), kind, grid, domain_radius)

