"""Value functions, duality gap, saddle certificates and epsilon-saddle sets.

For a payoff table f on X x Y (rows indexed by X, columns by Y):

    v(x) = min_y f(x, y)      V = max_x v(x)
    w(y) = max_x f(x, y)      W = min_y w(y)      gap = W - V >= 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InputError, PreconditionError
from .extreal import fmt, sub
from .space import GridSpec, MetricSpace, ScalarField, build_grid

DEFAULT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BiFunction:
    X: MetricSpace
    Y: MetricSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (len(self.X), len(self.Y)):
            raise InputError(f"payoff table has shape {vals.shape}, spaces need {(len(self.X), len(self.Y))}")
        if np.isnan(vals).any():
            i, j = np.argwhere(np.isnan(vals))[0]
            raise InputError(f"payoff is undefined (nan) at ({self.X.label(i)},{self.Y.label(j)})")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def __call__(self, i: int, j: int) -> float:
        return float(self.values[i, j])

    def pair_label(self, i: int, j: int) -> str:
        return f"({self.X.label(i)},{self.Y.label(j)})"

    def with_values(self, values: np.ndarray) -> "BiFunction":
        return BiFunction(self.X, self.Y, values)

    def add_separable(self, s: np.ndarray, u: np.ndarray) -> "BiFunction":
        """f(x,y) + s(x) + u(y), for finite s and u."""
        s = np.asarray(s, dtype=float)
        u = np.asarray(u, dtype=float)
        if not (np.isfinite(s).all() and np.isfinite(u).all()):
            raise InputError("separable perturbations must be finite")
        return self.with_values(self.values + s[:, None] + u[None, :])


@dataclass(frozen=True, eq=False)
class MinimaxSummary:
    v: ScalarField
    w: ScalarField
    V: float
    W: float
    gap: float | None  # None when W - V is inf - inf
    sup_argset: tuple[int, ...]
    inf_argset: tuple[int, ...]

    @property
    def gap_defined(self) -> bool:
        return self.gap is not None

    def gap_is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return self.gap is not None and math.isfinite(self.gap) and abs(self.gap) <= tol


def summarize(f: BiFunction) -> MinimaxSummary:
    v = f.values.min(axis=1)
    w = f.values.max(axis=0)
    V = float(v.max())
    W = float(w.min())
    return MinimaxSummary(
        v=ScalarField(f.X, v),
        w=ScalarField(f.Y, w),
        V=V,
        W=W,
        gap=sub(W, V),
        sup_argset=tuple(int(i) for i in np.flatnonzero(v == V)),
        inf_argset=tuple(int(j) for j in np.flatnonzero(w == W)),
    )


@dataclass(frozen=True)
class AssumptionVerdict:
    name: str
    holds: bool
    detail: str
    witness: int | None = None


@dataclass(frozen=True)
class AssumptionReport:
    verdicts: tuple[AssumptionVerdict, ...]

    def __getitem__(self, name: str) -> AssumptionVerdict:
        for a in self.verdicts:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def all_hold(self) -> bool:
        return all(a.holds for a in self.verdicts)


def _proper_bounded(values: np.ndarray, bad: float, space: MetricSpace, fname: str, name: str) -> AssumptionVerdict:
    hits = np.flatnonzero(values == bad)
    if len(hits):
        i = int(hits[0])
        side = "above" if bad > 0 else "below"
        return AssumptionVerdict(name, False, f"{fname}({space.label(i)}) = {fmt(bad)}: not bounded {side}", i)
    finite = np.flatnonzero(np.isfinite(values))
    if not len(finite):
        return AssumptionVerdict(name, False, f"{fname} is nowhere finite: not proper")
    i = int(finite[0])
    return AssumptionVerdict(name, True, f"{fname}({space.label(i)}) = {fmt(values[i])} is finite", i)


def check_assumptions(f: BiFunction, summary: MinimaxSummary | None = None) -> AssumptionReport:
    s = summary or summarize(f)
    vacuous = "every function on a finite space is continuous"
    return AssumptionReport(
        (
            AssumptionVerdict("A1", True, f"f(., y) upper semicontinuous: {vacuous}"),
            _proper_bounded(s.v.values, math.inf, f.X, "v", "A2"),
            AssumptionVerdict("A3", True, f"f(x, .) lower semicontinuous: {vacuous}"),
            _proper_bounded(s.w.values, -math.inf, f.Y, "w", "A4"),
        )
    )


@dataclass(frozen=True)
class SaddleCertificate:
    x0: int
    y0: int
    value: float
    valid: bool
    checked_rows: int
    checked_cols: int
    tolerance: float
    violation: str | None = None

    def __bool__(self) -> bool:
        return self.valid


def is_saddle(f: BiFunction, x0: int, y0: int, tol: float = 0.0) -> SaddleCertificate:
    """Two-sided check f(x, y0) <= f(x0, y0) <= f(x0, y) over all x and y.

    A failed check returns an invalid certificate naming the first
    violated comparison (rows before columns, in index order).
    """
    c = f(x0, y0)
    if not math.isfinite(c):
        raise PreconditionError(f"saddle value must be finite: f{f.pair_label(x0, y0)} = {fmt(c)}")
    nx, ny = f.shape
    col = f.values[:, y0]
    row = f.values[x0, :]
    bad_x = np.flatnonzero(col > c + tol)
    bad_y = np.flatnonzero(row < c - tol)
    violation = None
    if len(bad_x):
        i = int(bad_x[0])
        violation = f"f{f.pair_label(i, y0)} = {fmt(col[i])} > f{f.pair_label(x0, y0)} = {fmt(c)}"
    elif len(bad_y):
        j = int(bad_y[0])
        violation = f"f{f.pair_label(x0, j)} = {fmt(row[j])} < f{f.pair_label(x0, y0)} = {fmt(c)}"
    return SaddleCertificate(x0, y0, c, violation is None, nx, ny, tol, violation)


def saddle_mask(f: BiFunction, tol: float = 0.0) -> np.ndarray:
    """Boolean table of saddle points, via the marginals.

    (x, y) passes iff f(x, y) is finite, every entry of its column is
    <= f(x, y) + tol and every entry of its row is >= f(x, y) - tol.
    """
    vals = f.values
    w = vals.max(axis=0)
    v = vals.min(axis=1)
    with np.errstate(invalid="ignore"):
        return np.isfinite(vals) & (w[None, :] <= vals + tol) & (v[:, None] >= vals - tol)


def enumerate_saddles(f: BiFunction, tol: float = 0.0) -> list[SaddleCertificate]:
    nx, ny = f.shape
    return [
        SaddleCertificate(int(i), int(j), f(i, j), True, nx, ny, tol)
        for i, j in np.argwhere(saddle_mask(f, tol))
    ]


@dataclass(frozen=True)
class EpsSaddleSet:
    eps: float
    x_members: tuple[int, ...]
    y_members: tuple[int, ...]

    @property
    def members(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self.x_members for j in self.y_members]

    def __contains__(self, pair) -> bool:
        i, j = pair
        return i in self.x_members and j in self.y_members

    def __len__(self) -> int:
        return len(self.x_members) * len(self.y_members)


def require_zero_gap(summary: MinimaxSummary, tol: float, what: str) -> None:
    if not summary.gap_is_zero(tol):
        raise PreconditionError(f"{what} requires zero gap: gap = {fmt(summary.gap)} (tolerance {fmt(tol)})")


def eps_saddle_set(
    f: BiFunction, eps: float, tol: float = DEFAULT_TOL, summary: MinimaxSummary | None = None
) -> EpsSaddleSet:
    """Pairs with v(x) > V - eps/3 and w(y) < W + eps/3 (both strict)."""
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps!r}")
    s = summary or summarize(f)
    require_zero_gap(s, tol, "eps-saddle")
    xs = np.flatnonzero(s.V - s.v.values < eps / 3)
    ys = np.flatnonzero(s.w.values - s.W < eps / 3)
    return EpsSaddleSet(eps, tuple(int(i) for i in xs), tuple(int(j) for j in ys))


@dataclass(frozen=True, eq=False)
class CounterexampleReport:
    n: int
    f: BiFunction
    summary: MinimaxSummary
    saddles: list[SaddleCertificate]
    saddle_exact: tuple[Fraction, Fraction]
    corner_distance: Fraction

    @property
    def saddle_point(self) -> tuple[float, float]:
        return float(self.saddle_exact[0]), float(self.saddle_exact[1])


def discretized_counterexample(n: int) -> CounterexampleReport:
    """f(x, y) = x - y sampled on (0,1) x (0,1] at resolution n.

    The continuum problem has zero gap and no saddle point; every grid has
    one, sitting at distance exactly 1/(n+1) from the excluded corner (1, 1)
    in the max metric.
    """
    gx = GridSpec(0.0, 1.0, n, lower_open=True, upper_open=True)
    gy = GridSpec(0.0, 1.0, n, lower_open=True, upper_open=False)
    X, Y = build_grid(gx, prefix="x"), build_grid(gy, prefix="y")
    f = BiFunction(X, Y, X.coords[:, None] - Y.coords[None, :])
    s = summarize(f)
    saddles = enumerate_saddles(f)
    if not saddles:
        raise AssertionError("grid counterexample lost its saddle point")
    first = saddles[0]
    ex, ey = gx.exact_samples()[first.x0], gy.exact_samples()[first.y0]
    dist = max(1 - ex, 1 - ey)
    return CounterexampleReport(n, f, s, saddles, (ex, ey), dist)
