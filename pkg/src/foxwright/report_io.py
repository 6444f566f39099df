"""Job files, scans, and text/CSV rendering of reports.

Job files are TOML. The grammar, in full:

    upper = [[a1, A1], [a2, A2], ...]      # required, may be []
    lower = [[b1, B1], ...]                # required, may be []

    [[actions]]
    kind = "check"
    criteria = ["T1_CASE1", "T3"]          # required
    rho = 0.5                              # optional, T8_INEQ / TY8_INEQ
    assert_h_nonneg = false                # optional

    [[actions]]
    kind = "verify"
    property = "Starlike"                  # required
    radius = 0.5                           # optional, default 1
    c = 0.5                                # ReOverZ / DerivDist / RatioDist only
    augment = false                        # prepend the upper pair (1, 1)
    grid_radii = 64                        # optional grid overrides
    grid_angles = 256

    [[actions]]
    kind = "scan"
    variable = "b1"                        # a<i>, A<i>, b<j> or B<j>, 1-based
    start = 1.5
    stop = 3.5
    steps = 20                             # >= 2, endpoints included
    criterion = "TT9_INEQ"                 # exactly one of criterion / property
    # property = "Starlike", radius = 1, c = ..., augment = ...,
    # rho = ..., assert_h_nonneg = ..., grid_radii = ..., grid_angles = ...

Unknown keys anywhere are rejected.
"""

import csv
import io
import math
import re
from dataclasses import dataclass

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .criteria import Criterion, Overall, check_theorem
from .errors import ParseError, UsageError
from .geometry import DEFAULT_GRID, DiscGrid, PropertyKind, verify_params
from .series import DEFAULT_CONTROL, FWParams


@dataclass(frozen=True)
class GridOverride:
    radii: int | None = None
    angles: int | None = None

    def grid(self):
        if self.radii is None and self.angles is None:
            return DEFAULT_GRID
        return DiscGrid.geometric(
            self.radii if self.radii is not None else len(DEFAULT_GRID.radii),
            self.angles if self.angles is not None else DEFAULT_GRID.angles_per_radius,
        )


@dataclass(frozen=True)
class CheckAction:
    criteria: tuple
    rho: float | None = None
    assert_h_nonneg: bool = False


@dataclass(frozen=True)
class VerifyAction:
    kind: PropertyKind
    radius: float = 1.0
    augment: bool = False
    grid: GridOverride = GridOverride()


@dataclass(frozen=True)
class ScanAction:
    variable: str
    start: float
    stop: float
    steps: int
    criterion: Criterion | None = None
    verify: VerifyAction | None = None
    rho: float | None = None
    assert_h_nonneg: bool = False

    def values(self):
        return np.linspace(self.start, self.stop, self.steps)

    @property
    def header(self):
        return f"{self.variable},margin,pass"


@dataclass(frozen=True)
class JobSpec:
    params: FWParams
    actions: tuple


_ACTION_KEYS = {
    "check": {"kind", "criteria", "rho", "assert_h_nonneg"},
    "verify": {"kind", "property", "radius", "c", "augment", "grid_radii", "grid_angles"},
    "scan": {"kind", "variable", "start", "stop", "steps", "criterion", "property", "radius", "c",
             "augment", "rho", "assert_h_nonneg", "grid_radii", "grid_angles"},
}


def _line_of(text, key, section=None):
    """Best-effort 1-based line of ``key =`` within the ``section``-th [[actions]] table.

    Falls back to the table's header line when the key is absent.
    """
    start, end, head = 0, len(text), None
    if section is not None:
        heads = [m.start() for m in re.finditer(r"(?m)^[ \t]*\[\[[ \t]*actions[ \t]*\]\]", text)]
        if section < len(heads):
            start = head = heads[section]
            end = heads[section + 1] if section + 1 < len(heads) else len(text)
    m = re.compile(rf"(?m)^[ \t]*{re.escape(key)}[ \t]*=").search(text, start, end)
    pos = m.start() if m else head
    return None if pos is None else text.count("\n", 0, pos) + 1


class _Fields:
    """Typed access to one TOML table, raising ParseError with context."""

    def __init__(self, table, path, text, section=None):
        self.table, self.path, self.text, self.section = table, path, text, section

    def fail(self, key, message):
        field = f"{self.path}.{key}" if self.path else key
        raise ParseError(message, line=_line_of(self.text, key, self.section), field=field)

    def number(self, key, default=None, required=False):
        if key not in self.table:
            if required:
                self.fail(key, "missing required key")
            return default
        v = self.table[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            self.fail(key, f"expected a finite number, got {v!r}")
        return float(v)

    def integer(self, key, default=None, required=False, minimum=None):
        if key not in self.table:
            if required:
                self.fail(key, "missing required key")
            return default
        v = self.table[key]
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(key, f"expected an integer, got {v!r}")
        if minimum is not None and v < minimum:
            self.fail(key, f"must be at least {minimum}, got {v}")
        return v

    def string(self, key, required=False):
        if key not in self.table:
            if required:
                self.fail(key, "missing required key")
            return None
        v = self.table[key]
        if not isinstance(v, str):
            self.fail(key, f"expected a string, got {v!r}")
        return v

    def boolean(self, key, default=False):
        v = self.table.get(key, default)
        if not isinstance(v, bool):
            self.fail(key, f"expected true or false, got {v!r}")
        return v


def _parse_pairs(fields, key):
    raw = fields.table.get(key)
    if raw is None:
        fields.fail(key, "missing required key")
    if not isinstance(raw, list):
        fields.fail(key, "expected an array of [value, weight] pairs")
    for idx, pair in enumerate(raw):
        ok = (isinstance(pair, list) and len(pair) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair))
        if not ok:
            fields.fail(key, f"entry {idx} must be a [value, weight] pair of numbers, got {pair!r}")
        if not all(math.isfinite(v) and v > 0 for v in pair):
            fields.fail(key, f"entry {idx}: parameters and weights must be positive (finite) reals, got {pair!r}")
    return [tuple(float(v) for v in pair) for pair in raw]


def _parse_verify(f):
    name = f.string("property", required=True)
    try:
        kind = PropertyKind.parse(name, f.number("c"))
    except UsageError as exc:
        f.fail("property", str(exc))
    radius = f.number("radius", 1.0)
    if not 0 < radius <= 1:
        f.fail("radius", f"must lie in (0, 1], got {radius}")
    grid = GridOverride(f.integer("grid_radii", minimum=1), f.integer("grid_angles", minimum=8))
    return VerifyAction(kind, radius, f.boolean("augment"), grid)


def _parse_rho(f):
    rho = f.number("rho")
    if rho is not None and rho <= 0:
        f.fail("rho", f"must be positive, got {rho}")
    return rho


def _parse_action(table, idx, text, params):
    path = f"actions[{idx}]"
    if not isinstance(table, dict):
        raise ParseError("each action must be a table", field=path)
    f = _Fields(table, path, text, section=idx)
    kind = f.string("kind", required=True)
    if kind not in _ACTION_KEYS:
        f.fail("kind", f"unknown action kind {kind!r} (expected check, verify or scan)")
    for key in table:
        if key not in _ACTION_KEYS[kind]:
            f.fail(key, f"unknown key for a {kind} action")

    if kind == "check":
        names = table.get("criteria")
        if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
            f.fail("criteria", "expected a non-empty array of criterion names")
        try:
            crits = tuple(Criterion.parse(n) for n in names)
        except UsageError as exc:
            f.fail("criteria", str(exc))
        return CheckAction(crits, _parse_rho(f), f.boolean("assert_h_nonneg"))

    if kind == "verify":
        return _parse_verify(f)

    variable = f.string("variable", required=True)
    start = f.number("start", required=True)
    stop = f.number("stop", required=True)
    steps = f.integer("steps", required=True, minimum=2)
    if start == stop:
        f.fail("stop", "scan range must have distinct endpoints")
    try:
        params.replace(variable, max(start, stop))
        params.replace(variable, min(start, stop))
    except UsageError as exc:
        f.fail("variable", str(exc))
    has_crit, has_prop = "criterion" in table, "property" in table
    if has_crit == has_prop:
        f.fail("criterion", "a scan needs exactly one of 'criterion' or 'property'")
    crit = verify = None
    if has_crit:
        for key in ("radius", "c", "augment", "grid_radii", "grid_angles"):
            if key in table:
                f.fail(key, "only valid for a property scan")
        try:
            crit = Criterion.parse(f.string("criterion"))
        except UsageError as exc:
            f.fail("criterion", str(exc))
    else:
        verify = _parse_verify(f)
    return ScanAction(variable, start, stop, steps, crit, verify, _parse_rho(f), f.boolean("assert_h_nonneg"))


def parse_job(data):
    """Parse a UTF-8 TOML job file (bytes or str) into a JobSpec."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"job file is not valid UTF-8 ({exc})") from None
    else:
        text = data
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ParseError(f"malformed TOML: {exc}", line=int(m.group(1)) if m else None) from None
    top = _Fields(doc, "", text)
    for key in doc:
        if key not in ("upper", "lower", "actions"):
            top.fail(key, "unknown key")
    upper = _parse_pairs(top, "upper")
    lower = _parse_pairs(top, "lower")
    try:
        params = FWParams(upper, lower)
    except UsageError as exc:
        raise ParseError(str(exc)) from None
    actions = doc.get("actions")
    if not isinstance(actions, list) or not actions:
        top.fail("actions", "need a non-empty array of actions")
    return JobSpec(params, tuple(_parse_action(t, i, text, params) for i, t in enumerate(actions)))


def run_check(params, action):
    return [check_theorem(c, params, action.assert_h_nonneg, action.rho) for c in action.criteria]


def run_verify(params, action, ctl=DEFAULT_CONTROL, grid=None):
    target = params.augmented() if action.augment else params
    return verify_params(target, action.kind, grid or action.grid.grid(), action.radius, ctl)


def run_scan(params, action, ctl=DEFAULT_CONTROL, grid=None):
    """Rows (value, margin, passed) for each scan value, in increasing order."""
    rows = []
    for v in action.values():
        p = params.replace(action.variable, float(v))
        if action.criterion is not None:
            rep = check_theorem(action.criterion, p, action.assert_h_nonneg, action.rho)
            rows.append((float(v), rep.min_margin, rep.overall is Overall.PASS))
        else:
            rep = run_verify(p, action.verify, ctl, grid)
            rows.append((float(v), rep.min_margin, rep.passed))
    return rows


# ---- formatting ---------------------------------------------------------------

def fmt(x):
    """17 significant digits for floats, true/false for booleans."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, complex):
        return f"{x.real:.17g}{x.imag:+.17g}j"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def write_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue().encode("utf-8")


def write_scan_csv(rows, header="value,margin,pass"):
    """CSV bytes: header, then one (value, margin, pass) row per sample sorted by value."""
    if not rows:
        raise UsageError("no rows to write")
    names = header.split(",") if isinstance(header, str) else list(header)
    if len(names) != 3:
        raise UsageError(f"scan header needs 3 columns, got {names!r}")
    ordered = sorted(rows, key=lambda r: r[0])
    return write_csv(names, [(float(v), float(m), bool(ok)) for v, m, ok in ordered])


def read_scan_csv(data):
    """Inverse of write_scan_csv: (header, [(value, margin, pass), ...])."""
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    header = next(reader)
    rows = []
    for rec in reader:
        if rec[2] not in ("true", "false"):
            raise ParseError(f"pass column must be true or false, got {rec[2]!r}", line=reader.line_num)
        rows.append((float(rec[0]), float(rec[1]), rec[2] == "true"))
    return header, rows


def format_criterion_report(report):
    lines = [f"criterion     {report.criterion_id.value}",
             f"parameters    {report.target}"]
    for c in report.checks:
        lines.append(f"  [{'ok' if c.holds else 'NO'}] {c.name:<60s} margin {fmt(float(c.margin))}")
    lines.append(f"overall       {report.overall.value}")
    lines.append(f"conclusion    {report.conclusion}" + ("" if report.overall is Overall.PASS else " (not established)"))
    for n in report.notes:
        lines.append(f"note          {n}")
    return "\n".join(lines)


def criterion_rows(report):
    return [(report.criterion_id.value, c.name, c.holds, float(c.margin)) for c in report.checks] + [
        (report.criterion_id.value, "overall", report.overall.value, report.min_margin)
    ]


CRITERION_HEADER = ("criterion", "check", "holds", "margin")


def format_property_report(report):
    verdict = "PASS" if report.passed else "FAIL"
    strength = ("evidence on the sampled grid only" if report.passed
                else "certificate: margin negative at the witness point")
    w = report.witness
    return "\n".join([
        f"property      {report.kind}",
        f"domain        |z| < {report.domain_radius:g}",
        f"grid          {report.grid}",
        f"points        {report.points_checked} checked, {report.points_skipped} skipped",
        f"min margin    {fmt(report.min_margin)}",
        f"witness       {fmt(w)} (|z| = {fmt(abs(w))})",
        f"verdict       {verdict} ({strength})",
    ])


PROPERTY_HEADER = ("property", "domain_radius", "min_margin", "witness_re", "witness_im",
                   "pass", "points_checked", "points_skipped")


def property_row(report):
    return (str(report.kind), report.domain_radius, report.min_margin, report.witness.real,
            report.witness.imag, report.passed, report.points_checked, report.points_skipped)


__all__ = [
    "CheckAction", "VerifyAction", "ScanAction", "JobSpec", "GridOverride", "parse_job",
    "run_check", "run_verify", "run_scan", "write_scan_csv", "read_scan_csv", "write_csv",
    "format_criterion_report", "format_property_report", "criterion_rows", "property_row", "fmt",
]
