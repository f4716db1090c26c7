"""Constructive perturbations that make a chosen near-optimal point exactly optimal.

Every constructor builds its perturbation in closed form and then checks
its own postconditions, raising VerificationError if one fails. Inputs
that violate a hypothesis raise PreconditionError naming the inequality.

Sign convention: minimax perturbations are applied as f(x,y) - k(x) + r(y)
with k, r >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, PreconditionError, VerificationError
from .extreal import fmt
from .minimax import (
    DEFAULT_TOL,
    BiFunction,
    MinimaxSummary,
    check_assumptions,
    enumerate_saddles,
    eps_saddle_set,
    is_saddle,
    require_zero_gap,
    summarize,
)
from .space import MetricSpace, ScalarField, bump, discrete_space

CONVENTION = "f(x,y) - k(x) + r(y)"


@dataclass(frozen=True)
class Budget:
    relation: str  # "<", "<=" or "="
    bound: float
    expression: str

    def holds(self, norm: float) -> bool:
        if self.relation == "<":
            return norm < self.bound
        if self.relation == "<=":
            return norm <= self.bound
        return norm == self.bound

    def describe(self, name: str, norm: float) -> str:
        return f"||{name}|| = {fmt(norm)} {self.relation} {self.expression} = {fmt(self.bound)}"


@dataclass(frozen=True, eq=False)
class Perturbation:
    name: str
    axis: str  # "X" or "Y"
    field: ScalarField
    anchor: int
    norm: float
    budget: Budget
    theorem: str

    @property
    def values(self) -> np.ndarray:
        return self.field.values

    @property
    def is_zero(self) -> bool:
        return not self.values.any()

    def check(self) -> None:
        vals = self.values
        if not np.isfinite(vals).all():
            raise VerificationError(f"{self.name}: non-finite values")
        if (vals < 0).any():
            raise VerificationError(f"{self.name}: negative value at index {int(np.flatnonzero(vals < 0)[0])}")
        if vals[self.anchor] != 0:
            raise VerificationError(f"{self.name}: value {fmt(vals[self.anchor])} at anchor, expected 0")
        if self.norm != float(vals.max()):
            raise VerificationError(f"{self.name}: recorded norm {fmt(self.norm)} != max {fmt(vals.max())}")
        if not self.budget.holds(self.norm):
            raise VerificationError(f"{self.name}: budget fails, {self.budget.describe(self.name, self.norm)}")

    def describe(self) -> str:
        return self.budget.describe(self.name, self.norm)


def _perturbation(name, axis, space, values, anchor, budget, theorem) -> Perturbation:
    vals = np.asarray(values, dtype=float)
    p = Perturbation(name, axis, ScalarField(space, vals), anchor, float(vals.max()), budget, theorem)
    p.check()
    return p


@dataclass(frozen=True, eq=False)
class PerturbationPair:
    on_x: Perturbation
    on_y: Perturbation
    combined: BiFunction = field(repr=False)
    x0: int
    y0: int
    theorem: str
    transcript: tuple[str, ...] = ()
    convention: str = CONVENTION

    @property
    def is_zero(self) -> bool:
        return self.on_x.is_zero and self.on_y.is_zero


def effective_tol(tol: float, *tables: np.ndarray) -> float:
    """Absolute tolerance, scaled up by the largest finite magnitude when that exceeds 1."""
    scale = 1.0
    for t in tables:
        a = np.abs(np.asarray(t, dtype=float))
        a = a[np.isfinite(a)]
        if a.size:
            scale = max(scale, float(a.max()))
    return tol * scale


def _verify(cond: bool, message: str) -> None:
    if not cond:
        raise VerificationError(message)


# -- one-variable principles -------------------------------------------------


def kr_min_perturbation(f1: ScalarField, x0: int, tol: float = DEFAULT_TOL) -> Perturbation:
    """h = max(0, f1(x0) - f1): f1 + h = max(f1, f1(x0)) is minimized at x0.

    The sup-norm of h is exactly f1(x0) - inf f1.
    """
    vals = f1.values
    c = float(vals[x0])
    if c == math.inf:
        raise PreconditionError(f"x0 not in domain: f({f1.space.label(x0)}) = +inf")
    if (vals == -math.inf).any():
        i = int(np.flatnonzero(vals == -math.inf)[0])
        raise PreconditionError(f"not bounded below: f({f1.space.label(i)}) = -inf")
    low = float(vals.min())
    h = np.maximum(0.0, c - vals)
    p = _perturbation("h", "X", f1.space, h, x0, Budget("=", c - low, "f(x0) - inf f"), "kr-min")
    total = vals + h
    t = effective_tol(tol, vals)
    _verify(bool((total >= total[x0] - t).all()), "f + h does not attain its minimum at x0")
    return p


def kr_strong_min_perturbation(f1: ScalarField, x0: int, eps: float, tol: float = DEFAULT_TOL) -> Perturbation:
    """kr_min_perturbation plus a distance bump of amplitude eps.

    x0 becomes the unique minimizer, with excess at least bump(x) > 0
    elsewhere, and ||h|| <= f1(x0) - inf f1 + eps/2.
    """
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps!r}")
    base = kr_min_perturbation(f1, x0, tol)
    b = bump(f1.space, x0, eps).values
    h = base.values + b
    gap = base.budget.bound
    p = _perturbation("h", "X", f1.space, h, x0, Budget("<", gap + eps, "f(x0) - inf f + eps"), "kr-strong-min")
    vals = f1.values
    t = effective_tol(tol, vals)
    with np.errstate(invalid="ignore"):
        total = vals + h
        excess = total - (vals[x0] + h[x0])
    others = np.arange(len(vals)) != x0
    # h = base + bump and f + h each round once, at the scale of the summands
    mags = np.abs(np.concatenate([h, vals, total]))
    mags = mags[np.isfinite(mags)]
    slack = t + 2 * float(np.spacing(mags.max())) if mags.size else t
    _verify(bool((b[others] > 0).all()), "bump vanishes away from x0")
    _verify(bool((excess[others] >= b[others] - slack).all()), "f + h does not exceed its value at x0 by the bump")
    _verify(p.norm <= gap + eps / 2 + t, "strong perturbation exceeds gap + eps/2")
    return p


# -- minimax principles ------------------------------------------------------


def _require(cond: bool, message) -> None:
    """``message`` may be a zero-argument callable, formatted only on failure."""
    if not cond:
        raise PreconditionError(message() if callable(message) else message)


def _assumption(f: BiFunction, s: MinimaxSummary, name: str, checked: bool) -> None:
    if checked:
        return
    verdict = check_assumptions(f, s)[name]
    _require(verdict.holds, lambda: f"assumption {name} fails: {verdict.detail}")


def _summary(f: BiFunction, summary: MinimaxSummary | None) -> MinimaxSummary:
    return summary if summary is not None else summarize(f)


def supinf_perturbation(
    f: BiFunction,
    x0: int,
    y0: int,
    eps: float,
    delta: float,
    tol: float = DEFAULT_TOL,
    summary: MinimaxSummary | None = None,
    _checked: bool = False,
) -> PerturbationPair:
    """q on X and p on Y making (x0, y0) solve the supinf problem of f - q + p.

    q(x) = max(0, v(x) - v(x0)) lifts x0 to a maximizer of v;
    p(y) = max(0, f(x0,y0) - f(x0,y)) makes y0 minimize the row of x0.
    """
    s = _summary(f, summary)
    _assumption(f, s, "A2", _checked)
    lx, ly = f.X.label(x0), f.Y.label(y0)
    v0 = float(s.v.values[x0])
    c = f(x0, y0)
    _require(math.isfinite(v0), lambda: f"x0 not eps-optimal: v({lx}) = {fmt(v0)}")
    _require(s.V - v0 < eps, lambda: f"x0 not eps-optimal: V - v({lx}) = {fmt(s.V - v0)} is not < eps = {fmt(eps)}")
    _require(math.isfinite(c), lambda: f"f({lx},{ly}) = {fmt(c)} must be finite")
    _require(c - v0 < delta, lambda: f"y0 not delta-optimal: f({lx},{ly}) - v({lx}) = {fmt(c - v0)} is not < delta = {fmt(delta)}")

    row = f.values[x0]
    q = _perturbation("q", "X", f.X, np.maximum(0.0, s.v.values - v0), x0, Budget("<", eps, "eps"), "supinf")
    p = _perturbation("p", "Y", f.Y, np.maximum(0.0, c - row), y0, Budget("<", delta, "delta"), "supinf")
    combined = f.with_values(f.values - q.values[:, None] + p.values[None, :])

    t = effective_tol(tol, f.values)
    inner = combined.values.min(axis=1)
    _verify(abs(float(inner[x0]) - c) <= t, f"inf_y [f(x0,y) + p(y)] = {fmt(inner[x0])} != f(x0,y0) = {fmt(c)}")
    _verify(abs(float(inner.max()) - c) <= t, f"sup_x inf_y [f - q + p] = {fmt(inner.max())} != f(x0,y0) = {fmt(c)}")
    transcript = (
        q.describe(),
        p.describe(),
        f"supinf problem of {CONVENTION.replace('k', 'q').replace('r', 'p')} solved at ({lx},{ly}) with value {fmt(c)}",
    )
    return PerturbationPair(q, p, combined, x0, y0, "supinf", transcript)


def infsup_perturbation(
    f: BiFunction,
    x0: int,
    y0: int,
    eps: float,
    delta: float,
    tol: float = DEFAULT_TOL,
    summary: MinimaxSummary | None = None,
    _checked: bool = False,
) -> PerturbationPair:
    """h on X and g on Y making (x0, y0) solve the infsup problem of f - h + g.

    g(y) = max(0, w(y0) - w(y)) lowers y0 to a minimizer of w;
    h(x) = max(0, f(x,y0) - f(x0,y0)) makes x0 maximize the column of y0.
    """
    s = _summary(f, summary)
    _assumption(f, s, "A4", _checked)
    lx, ly = f.X.label(x0), f.Y.label(y0)
    w0 = float(s.w.values[y0])
    c = f(x0, y0)
    _require(math.isfinite(w0), lambda: f"y0 not eps-optimal: w({ly}) = {fmt(w0)}")
    _require(w0 - s.W < eps, lambda: f"y0 not eps-optimal: w({ly}) - W = {fmt(w0 - s.W)} is not < eps = {fmt(eps)}")
    _require(math.isfinite(c), lambda: f"f({lx},{ly}) = {fmt(c)} must be finite")
    _require(w0 - c < delta, lambda: f"x0 not delta-optimal: w({ly}) - f({lx},{ly}) = {fmt(w0 - c)} is not < delta = {fmt(delta)}")

    col = f.values[:, y0]
    h = _perturbation("h", "X", f.X, np.maximum(0.0, col - c), x0, Budget("<", delta, "delta"), "infsup")
    g = _perturbation("g", "Y", f.Y, np.maximum(0.0, w0 - s.w.values), y0, Budget("<", eps, "eps"), "infsup")
    combined = f.with_values(f.values - h.values[:, None] + g.values[None, :])

    t = effective_tol(tol, f.values)
    outer = combined.values.max(axis=0)
    _verify(abs(float(outer[y0]) - c) <= t, f"sup_x [f(x,y0) - h(x)] = {fmt(outer[y0])} != f(x0,y0) = {fmt(c)}")
    _verify(abs(float(outer.min()) - c) <= t, f"inf_y sup_x [f - h + g] = {fmt(outer.min())} != f(x0,y0) = {fmt(c)}")
    transcript = (
        h.describe(),
        g.describe(),
        f"infsup problem of f(x,y) - h(x) + g(y) solved at ({lx},{ly}) with value {fmt(c)}",
    )
    return PerturbationPair(h, g, combined, x0, y0, "infsup", transcript)


def saddle_perturbation(
    f: BiFunction,
    x0: int,
    y0: int,
    eps1: float,
    eps2: float,
    tol: float = DEFAULT_TOL,
    summary: MinimaxSummary | None = None,
) -> PerturbationPair:
    """k on X and r on Y such that f - k + r has a saddle point at (x0, y0).

    Requires V - v(x0) < eps1 and w(y0) - W < eps2. Combines the supinf
    pair (q, p) and the infsup pair (h, g), both taken with
    delta = eps1 + eps2 + gap, as k = q + h and r = p + g.
    """
    if not (eps1 > 0 and eps2 > 0):
        raise InputError(f"eps1 and eps2 must be positive, got {eps1!r}, {eps2!r}")
    s = _summary(f, summary)
    report = check_assumptions(f, s)
    for verdict in report.verdicts:
        _require(verdict.holds, lambda: f"assumption {verdict.name} fails: {verdict.detail}")
    gap = s.gap
    _require(gap is not None and math.isfinite(gap), lambda: f"gap must be finite, got {fmt(gap)}")
    lx, ly = f.X.label(x0), f.Y.label(y0)
    v0, w0 = float(s.v.values[x0]), float(s.w.values[y0])
    _require(math.isfinite(v0) and s.V - v0 < eps1,
             lambda: f"x0 not eps'-optimal: V - v({lx}) = {fmt(s.V - v0)} is not < eps' = {fmt(eps1)}")
    _require(math.isfinite(w0) and w0 - s.W < eps2,
             lambda: f"y0 not eps''-optimal: w({ly}) - W = {fmt(w0 - s.W)} is not < eps'' = {fmt(eps2)}")

    delta = eps1 + eps2 + gap
    sup_pair = supinf_perturbation(f, x0, y0, eps1, delta, tol, s, _checked=True)
    inf_pair = infsup_perturbation(f, x0, y0, eps2, delta, tol, s, _checked=True)
    kv = sup_pair.on_x.values + inf_pair.on_x.values
    rv = sup_pair.on_y.values + inf_pair.on_y.values
    k = _perturbation("k", "X", f.X, kv, x0, Budget("<", 2 * eps1 + eps2 + gap, "2eps' + eps'' + gap"), "saddle")
    r = _perturbation("r", "Y", f.Y, rv, y0, Budget("<", eps1 + 2 * eps2 + gap, "eps' + 2eps'' + gap"), "saddle")
    combined = f.with_values(f.values - kv[:, None] + rv[None, :])

    cert = is_saddle(combined, x0, y0, effective_tol(tol, f.values))
    _verify(cert.valid, f"f - k + r has no saddle at ({lx},{ly}): {cert.violation}")
    transcript = [k.describe(), r.describe()]
    if k.is_zero and r.is_zero:
        transcript.append(f"({lx},{ly}) is already a saddle point: perturbations collapse to zero")
    transcript.append(f"saddle verified at ({lx},{ly}) with value {fmt(cert.value)}")
    return PerturbationPair(k, r, combined, x0, y0, "saddle", tuple(transcript))


def eps_saddle_perturbation(
    f: BiFunction,
    x0: int,
    y0: int,
    eps: float,
    tol: float = DEFAULT_TOL,
    summary: MinimaxSummary | None = None,
) -> PerturbationPair:
    """Zero-gap case: relocate the saddle to an eps-saddle point with norms < eps."""
    s = _summary(f, summary)
    require_zero_gap(s, tol, "eps-saddle perturbation")
    members = eps_saddle_set(f, eps, tol, s)
    _require((x0, y0) in members, lambda: f"{f.pair_label(x0, y0)} is not an eps-saddle point for eps = {fmt(eps)}")
    base = saddle_perturbation(f, x0, y0, eps / 3, eps / 3, tol, s)
    k = _perturbation("k", "X", f.X, base.on_x.values, x0, Budget("<", eps, "eps"), "eps-saddle")
    r = _perturbation("r", "Y", f.Y, base.on_y.values, y0, Budget("<", eps, "eps"), "eps-saddle")
    transcript = (k.describe(), r.describe()) + base.transcript[2:]
    return PerturbationPair(k, r, base.combined, x0, y0, "eps-saddle", transcript)


# -- well-posedness sharpening ------------------------------------------------


def _sharpener_unit(d: float) -> float:
    """sum_{n>=1} 2^-n min(1, n d), in closed form.

    With M the least n such that n d >= 1 and K = M - 1, the sum is
    d (2 - (K+2) 2^-K) + 2^-K.
    """
    if d <= 0:
        return 0.0
    if d >= 1:
        return 1.0
    inv = 1.0 / d
    if inv > 2.0**60:
        return 2.0 * d
    m = max(1, math.ceil(inv))
    while m > 1 and (m - 1) * d >= 1:
        m -= 1
    while m * d < 1:
        m += 1
    k = m - 1
    tail = math.ldexp(1.0, -k)
    return d * (2.0 - (k + 2) * tail) + tail


def sharpener_partial_sum(d: float, n_terms: int) -> float:
    """Direct N-term evaluation of the series, for cross-checking the closed form."""
    return math.fsum(math.ldexp(min(1.0, n * d), -n) for n in range(1, n_terms + 1))


def sharpener(space: MetricSpace, x0: int, delta: float) -> np.ndarray:
    """delta * sum_n 2^-n min(1, n d(x, x0)): zero at x0, positive elsewhere, at most delta."""
    return np.array([delta * _sharpener_unit(float(d)) for d in space.dist[:, x0]])


@dataclass(frozen=True, eq=False)
class WellPosedPerturbation:
    base: PerturbationPair
    sharpener: PerturbationPair
    delta: float
    n_terms: int
    truncation_error: float

    @property
    def g(self) -> BiFunction:
        return self.sharpener.combined


def wellposed_perturbation(
    f: BiFunction,
    x0: int,
    y0: int,
    eps1: float,
    eps2: float,
    delta: float,
    n_terms: int = 53,
    tol: float = DEFAULT_TOL,
    summary: MinimaxSummary | None = None,
) -> WellPosedPerturbation:
    """Saddle perturbation followed by sharpeners k', r' of norm <= delta.

    g = f - k - k' + r + r' has (x0, y0) as its unique saddle point, and
    x0 (resp. y0) as unique maximizer of v_g (resp. minimizer of w_g).
    """
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta!r}")
    if n_terms < 1:
        raise InputError(f"n_terms must be >= 1, got {n_terms}")
    base = saddle_perturbation(f, x0, y0, eps1, eps2, tol, summary)
    bound = Budget("<=", delta, "delta")
    kp = _perturbation("k'", "X", f.X, sharpener(f.X, x0, delta), x0, bound, "wellposed")
    rp = _perturbation("r'", "Y", f.Y, sharpener(f.Y, y0, delta), y0, bound, "wellposed")
    F = base.combined.values
    g = f.with_values(F - kp.values[:, None] + rp.values[None, :])

    lx, ly = f.X.label(x0), f.Y.label(y0)
    _verify(bool((np.delete(kp.values, x0) > 0).all()), "k' vanishes away from x0")
    _verify(bool((np.delete(rp.values, y0) > 0).all()), "r' vanishes away from y0")
    t = effective_tol(tol, f.values)
    saddles = [(c.x0, c.y0) for c in enumerate_saddles(g, t)]
    _verify(saddles == [(x0, y0)], f"sharpened function has saddles {saddles}, expected only ({lx},{ly})")
    sg = summarize(g)
    _verify(sg.sup_argset == (x0,) and sg.inf_argset == (y0,), "v_g / w_g optimizers are not unique")
    transcript = (
        kp.describe(),
        rp.describe(),
        f"truncation error of the {n_terms}-term series <= delta * 2^-{n_terms} = {fmt(math.ldexp(delta, -n_terms))}",
        f"unique saddle of f - k - k' + r + r' verified at ({lx},{ly}) with value {fmt(g(x0, y0))}",
    )
    sharp = PerturbationPair(kp, rp, g, x0, y0, "wellposed", transcript, "f(x,y) - k(x) - k'(x) + r(y) + r'(y)")
    return WellPosedPerturbation(base, sharp, delta, n_terms, math.ldexp(delta, -n_terms))


# -- witnesses for the characterizations ---------------------------------------


def characteristic_regularity_witness(space: MetricSpace, A, x0: int) -> Perturbation:
    """Separating function obtained by applying kr_min_perturbation to 1 - indicator(A)."""
    A = sorted(set(int(a) for a in A))
    if not A:
        raise InputError("closed set A must be nonempty")
    if x0 in A:
        raise InputError(f"not separated: {space.label(x0)} lies in A")
    char = np.ones(len(space))
    char[A] = 0.0
    h = kr_min_perturbation(ScalarField(space, char), x0)
    _verify(h.norm == 1.0, f"witness norm {fmt(h.norm)} != 1")
    _verify(bool((h.values[A] == 1.0).all()), "witness is not identically 1 on A")
    return Perturbation(h.name, h.axis, h.field, x0, h.norm, h.budget, "regularity-witness")


@dataclass(frozen=True, eq=False)
class LocalBase:
    x0: int
    h: ScalarField
    sets: tuple[tuple[int, ...], ...]

    @property
    def intersection(self) -> tuple[int, ...]:
        common = set(self.sets[0])
        for s in self.sets[1:]:
            common &= set(s)
        return tuple(sorted(common))


def local_base_sets(space: MetricSpace, x0: int, eps: float, depth: int | None = None) -> LocalBase:
    """Sublevel sets L_n = {h < 1/n} of the strong-minimum perturbation of f = 0.

    With ``depth=None`` the family is extended until it isolates x0.
    """
    zero = ScalarField(space, np.zeros(len(space)))
    h = kr_strong_min_perturbation(zero, x0, eps).field
    if depth is None:
        others = np.delete(h.values, x0)
        depth = 1
        if others.size:
            depth = max(1, math.ceil(1.0 / float(others.min())))
            while (others < 1.0 / depth).any():
                depth += 1
    if depth < 1:
        raise InputError(f"depth must be >= 1, got {depth}")
    sets = tuple(tuple(int(i) for i in np.flatnonzero(h.values < 1.0 / n)) for n in range(1, depth + 1))
    for outer, inner in zip(sets, sets[1:]):
        _verify(set(inner) <= set(outer), "local base family is not nested")
    return LocalBase(x0, h, sets)


# -- dense principle, separable payoffs -----------------------------------------


@dataclass(frozen=True, eq=False)
class DenseResult:
    k: ScalarField
    r: ScalarField
    x_star: int
    y_star: int
    distance_k: float
    distance_r: float
    saddles: tuple[tuple[int, int], ...]


def dense_separable_perturbation(
    f1: ScalarField,
    f2: ScalarField,
    k_target: np.ndarray,
    r_target: np.ndarray,
    eps: float,
    x_star: int | None = None,
    y_star: int | None = None,
    tol: float = DEFAULT_TOL,
) -> DenseResult:
    """(k, r) within eps of the targets such that f1 + f2 + k + r has a saddle point.

    k lowers f1 + k_target onto its value at x_star, making x_star a maximizer;
    r raises f2 + r_target onto its value at y_star, making y_star a minimizer.
    Defaults pick the first exact optimizers, in which case k, r equal the targets.
    """
    if not eps > 0:
        raise InputError(f"eps must be positive, got {eps!r}")
    a1, a2 = f1.values, f2.values
    kt = np.asarray(k_target, dtype=float)
    rt = np.asarray(r_target, dtype=float)
    if kt.shape != a1.shape or rt.shape != a2.shape:
        raise InputError("target perturbations must match the space sizes")
    if not (np.isfinite(kt).all() and np.isfinite(rt).all()):
        raise InputError("target perturbations must be finite")
    _require(not (a1 == math.inf).any() and np.isfinite(a1).any(), "improper f1: needs values < +inf, finite somewhere")
    _require(not (a2 == -math.inf).any() and np.isfinite(a2).any(), "improper f2: needs values > -inf, finite somewhere")

    F1 = a1 + kt
    F2 = a2 + rt
    if x_star is None:
        x_star = int(np.argmax(F1))
    if y_star is None:
        y_star = int(np.argmin(F2))
    gx = float(F1.max() - F1[x_star])
    gy = float(F2[y_star] - F2.min())
    _require(math.isfinite(F1[x_star]) and gx < eps,
             lambda: f"x* not eps-optimal: max(f1 + k^) - (f1 + k^)(x*) = {fmt(gx)} is not < eps = {fmt(eps)}")
    _require(math.isfinite(F2[y_star]) and gy < eps,
             lambda: f"y* not eps-optimal: (f2 + r^)(y*) - min(f2 + r^) = {fmt(gy)} is not < eps = {fmt(eps)}")

    hx = kr_min_perturbation(ScalarField(f1.space, -F1), x_star, tol)
    hy = kr_min_perturbation(ScalarField(f2.space, F2), y_star, tol)
    k = kt - hx.values
    r = rt + hy.values
    dk, dr = hx.norm, hy.norm
    _verify(dk < eps and dr < eps, "dense perturbation left the eps-ball")

    joint = BiFunction(f1.space, f2.space, a1[:, None] + a2[None, :])
    perturbed = joint.add_separable(k, r)
    t = effective_tol(tol, perturbed.values)
    xs = np.flatnonzero(a1 + k >= (a1 + k)[x_star] - t)
    ys = np.flatnonzero(a2 + r <= (a2 + r)[y_star] + t)
    saddles = tuple((int(i), int(j)) for i in xs for j in ys)
    for i, j in saddles:
        cert = is_saddle(perturbed, i, j, t)
        _verify(cert.valid, f"dense perturbation: optimizer pair is not a saddle, {cert.violation}")
    return DenseResult(ScalarField(f1.space, k), ScalarField(f2.space, r), x_star, y_star, dk, dr, saddles)


def constant_field(space: MetricSpace | int, value: float = 0.0) -> ScalarField:
    sp = discrete_space(space) if isinstance(space, int) else space
    return ScalarField(sp, np.full(len(sp), float(value)))
