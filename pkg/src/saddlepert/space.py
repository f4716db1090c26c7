"""Finite metric spaces, grid discretizations and explicit separating functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from .errors import InputError, MetricError


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MetricSpace:
    points: tuple
    dist: np.ndarray
    labels: tuple[str, ...]
    coords: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.points)

    def label(self, i: int) -> str:
        return self.labels[i]

    def index(self, token: Any) -> int:
        """Resolve a label or point identifier to its position."""
        if isinstance(token, (int, np.integer)) and not isinstance(token, bool):
            if 0 <= token < len(self):
                return int(token)
        for i, lab in enumerate(self.labels):
            if lab == str(token):
                return i
        for i, p in enumerate(self.points):
            if p == token or str(p) == str(token):
                return i
        raise InputError(f"unknown point {token!r}; known labels: {', '.join(self.labels)}")

    def distance_to_set(self, A: Iterable[int]) -> np.ndarray:
        idx = list(A)
        return self.dist[:, idx].min(axis=1)

    def diameter(self, members: Iterable[int]) -> float:
        idx = sorted(set(members))
        if len(idx) <= 1:
            return 0.0
        return float(self.dist[np.ix_(idx, idx)].max())

    def ball(self, center: int, radius: float) -> list[int]:
        """Open ball, as sorted point indices."""
        return [int(i) for i in np.flatnonzero(self.dist[center] < radius)]


def _default_labels(n: int, prefix: str) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(n))


def validate_metric(
    dist_table: Any,
    points: Sequence[Hashable] | None = None,
    labels: Sequence[str] | None = None,
    coords: Any = None,
    prefix: str = "p",
) -> MetricSpace:
    """Check the metric axioms exhaustively and build a MetricSpace.

    Comparisons are exact. Raises MetricError naming the first violation
    in index order.
    """
    try:
        d = np.array(dist_table, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MetricError("shape", (), f"distance table is not numeric: {exc}") from exc
    if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
        raise MetricError("shape", d.shape, f"distance table must be square and nonempty, got shape {d.shape}")
    n = d.shape[0]

    bad = np.argwhere(~np.isfinite(d))
    if len(bad):
        raise MetricError("nonfinite", tuple(bad[0]), f"non-finite distance at {tuple(int(i) for i in bad[0])}")
    bad = np.argwhere(d < 0)
    if len(bad):
        raise MetricError("negative", tuple(bad[0]), f"negative distance at {tuple(int(i) for i in bad[0])}")
    diag = np.flatnonzero(np.diag(d) != 0)
    if len(diag):
        i = int(diag[0])
        raise MetricError("diagonal", (i, i), f"zero-diagonal failure at ({i},{i})")
    bad = np.argwhere(d != d.T)
    if len(bad):
        i, j = sorted(int(k) for k in bad[0])
        raise MetricError("asymmetry", (i, j), f"asymmetry at ({i},{j}): {d[i, j]!r} != {d[j, i]!r}")
    off = d + np.eye(n)
    bad = np.argwhere(off == 0)
    if len(bad):
        i, j = (int(k) for k in bad[0])
        raise MetricError("separation", (i, j), f"distinct points ({i},{j}) at distance 0")

    first = None
    for b in range(n):
        viol = np.argwhere(d > d[:, b : b + 1] + d[b : b + 1, :])
        for a, c in viol:
            cand = (int(a), b, int(c))
            if first is None or cand < first:
                first = cand
            break  # argwhere is row-major, so the first hit is minimal for this b
    if first is not None:
        a, b, c = first
        raise MetricError(
            "triangle",
            first,
            f"triangle violation ({a},{b},{c}): d[{a},{c}]={d[a, c]!r} > d[{a},{b}]+d[{b},{c}]={d[a, b] + d[b, c]!r}",
        )

    pts = tuple(points) if points is not None else tuple(range(n))
    if len(pts) != n:
        raise InputError(f"{len(pts)} point identifiers for a {n}x{n} distance table")
    if len(set(pts)) != n:
        raise InputError("point identifiers must be distinct")
    labs = tuple(str(s) for s in labels) if labels is not None else _default_labels(n, prefix)
    if len(labs) != n:
        raise InputError(f"{len(labs)} labels for {n} points")
    cs = None
    if coords is not None:
        cs = _frozen(coords)
        if cs.shape[0] != n:
            raise InputError(f"{cs.shape[0]} coordinates for {n} points")
    return MetricSpace(points=pts, dist=_frozen(d), labels=labs, coords=cs)


def real_line_space(values: Sequence[float], prefix: str = "p", labels: Sequence[str] | None = None) -> MetricSpace:
    """Points on the real line with the absolute-difference metric."""
    c = np.array(values, dtype=float)
    if c.ndim != 1 or len(c) == 0:
        raise InputError("real-line space needs a nonempty list of numbers")
    if not np.isfinite(c).all():
        raise InputError("real-line coordinates must be finite")
    if len(np.unique(c)) != len(c):
        raise InputError("real-line coordinates must be distinct")
    return MetricSpace(
        points=tuple(float(v) for v in c),
        dist=_frozen(np.abs(c[:, None] - c[None, :])),
        labels=tuple(labels) if labels is not None else _default_labels(len(c), prefix),
        coords=_frozen(c),
    )


def discrete_space(n: int, prefix: str = "p") -> MetricSpace:
    """n points, all pairwise distances 1."""
    if n < 1:
        raise InputError("a space needs at least one point")
    return MetricSpace(
        points=tuple(range(n)),
        dist=_frozen(1.0 - np.eye(n)),
        labels=_default_labels(n, prefix),
    )


@dataclass(frozen=True)
class GridSpec:
    lower: float
    upper: float
    n: int
    lower_open: bool = False
    upper_open: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise InputError("grid endpoints must be finite")
        if not self.lower < self.upper:
            raise InputError(f"grid needs lower < upper, got [{self.lower}, {self.upper}]")
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 2:
            raise InputError(f"grid resolution must be an integer >= 2, got {self.n!r}")

    def exact_samples(self) -> list[Fraction]:
        """Sample positions as exact rationals.

        Open endpoints are skipped by shifting the lattice inward: both open
        gives i/(n+1), one open gives i/n (counted from the closed side), both
        closed gives i/(n-1).
        """
        lo, hi, n = Fraction(self.lower), Fraction(self.upper), int(self.n)
        span = hi - lo
        if self.lower_open and self.upper_open:
            steps, start = n + 1, 1
        elif self.lower_open:
            steps, start = n, 1
        elif self.upper_open:
            steps, start = n, 0
        else:
            steps, start = n - 1, 0
        return [lo + span * Fraction(start + i, steps) for i in range(n)]


def build_grid(spec: GridSpec, prefix: str = "p") -> MetricSpace:
    exact = spec.exact_samples()
    coords = [float(q) for q in exact]
    for endpoint, is_open in ((spec.lower, spec.lower_open), (spec.upper, spec.upper_open)):
        if is_open and endpoint in coords:
            raise InputError(f"grid resolution {spec.n} too fine: open endpoint {endpoint} rounds into the sample set")
    if len(set(coords)) != len(coords):
        raise InputError(f"grid resolution {spec.n} too fine for float64 coordinates")
    return real_line_space(coords, prefix=prefix)


@dataclass(frozen=True, eq=False)
class ScalarField:
    space: MetricSpace
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (len(self.space),):
            raise InputError(f"field has {vals.size} values for {len(self.space)} points")
        if np.isnan(vals).any():
            raise InputError("field contains nan")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())


def urysohn_separator(space: MetricSpace, x0: int, A: Iterable[int]) -> ScalarField:
    """Continuous h with h(x0) = 0 and h = 1 on A, from the distance quotient."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise InputError("separated set must be nonempty")
    if x0 in A:
        raise InputError(f"not separated: {space.label(x0)} lies in the set")
    to_x0 = space.dist[:, x0]
    to_A = space.distance_to_set(A)
    return ScalarField(space, to_x0 / (to_x0 + to_A))


def bump(space: MetricSpace, x0: int, amplitude: float) -> ScalarField:
    """(amplitude/2) * d/(1+d): zero at x0, strictly positive elsewhere, below amplitude/2."""
    if not amplitude > 0:
        raise InputError(f"bump amplitude must be positive, got {amplitude!r}")
    d = space.dist[:, x0]
    return ScalarField(space, (amplitude / 2) * d / (1 + d))


def nested_base_function(space: MetricSpace, x0: int, n: int) -> ScalarField:
    """min(1, n*d(x, x0)): vanishes at x0 and equals 1 off the open 1/n ball."""
    if n < 1:
        raise InputError(f"nested base index must be >= 1, got {n}")
    return ScalarField(space, np.minimum(1.0, n * space.dist[:, x0]))
