"""Finite-scale well-posedness diagnostics.

Convergence of sequences is replaced by quantities computed over an
epsilon grid: the diameter of the eps-saddle set shrinking to 0 is the
finite stand-in for every optimizing sequence converging to the unique
solution. The solution correspondence is probed adversarially.

Perturbations in this module use the additive convention f + s(x) + u(y).
The relocation perturbations built by ``perturb`` use f - k + r; the
conversion is s = -k, u = r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, PreconditionError
from .extreal import fmt
from .minimax import (
    DEFAULT_TOL,
    BiFunction,
    eps_saddle_set,
    enumerate_saddles,
    require_zero_gap,
    saddle_mask,
    summarize,
)
from .perturb import saddle_perturbation

ADDITIVE = "f(x,y) + s(x) + u(y)"
JOINT = "f(x,y) + z(x,y)"
DEFAULT_EPS_GRID = tuple(10.0**-k for k in range(9))


@dataclass(frozen=True)
class PairSequence:
    pairs: tuple[tuple[int, int], ...]
    v: tuple[float, ...]
    w: tuple[float, ...]
    f: tuple[float, ...]

    @classmethod
    def evaluate(cls, fn: BiFunction, pairs: Iterable[tuple[int, int]]) -> "PairSequence":
        pairs = tuple((int(i), int(j)) for i, j in pairs)
        nx, ny = fn.shape
        for i, j in pairs:
            if not (0 <= i < nx and 0 <= j < ny):
                raise InputError(f"pair ({i},{j}) outside X x Y")
        s = summarize(fn)
        return cls(
            pairs,
            tuple(float(s.v.values[i]) for i, _ in pairs),
            tuple(float(s.w.values[j]) for _, j in pairs),
            tuple(fn(i, j) for i, j in pairs),
        )

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SequenceVerdict:
    holds: bool
    reason: str
    errors: tuple[float, ...]
    first_violation: int | None = None
    tail_start: int | None = None


def _tail_verdict(errors: Sequence[float], bound: float, tail: int, label: str) -> SequenceVerdict:
    errs = tuple(float(e) for e in errors)
    n = len(errs)
    start = max(0, n - tail)
    bad = [i for i in range(start, n) if not errs[i] <= bound]
    # first index from which every later error is within the bound
    settled = n
    while settled > 0 and errs[settled - 1] <= bound:
        settled -= 1
    if bad:
        return SequenceVerdict(False, f"{label} = {fmt(errs[bad[0]])} exceeds {fmt(bound)} at index {bad[0]}",
                               errs, bad[0], settled if settled < n else None)
    return SequenceVerdict(True, f"{label} within {fmt(bound)} from index {settled}", errs, None, settled)


def _check_sequence(fn: BiFunction, seq: PairSequence):
    if len(seq) == 0:
        raise InputError("empty sequence")
    s = summarize(fn)
    if s.gap is None or not math.isfinite(s.gap):
        raise PreconditionError(f"gap must be finite, got {fmt(s.gap)}")
    return s


def is_optimizing(fn: BiFunction, seq: PairSequence, tol: float = DEFAULT_TOL, tail: int = 1) -> SequenceVerdict:
    """Zero gap, and over the last ``tail`` terms both V - v(x_n) and w(y_n) - W within tol.

    The reported errors are max(V - v(x_n), w(y_n) - W).
    """
    s = _check_sequence(fn, seq)
    errs = [max(s.V - v, w - s.W) for v, w in zip(seq.v, seq.w)]
    if abs(s.gap) > tol:
        return SequenceVerdict(False, f"gap = {fmt(s.gap)} is not zero", tuple(errs))
    return _tail_verdict(errs, tol, tail, "marginal error")


def is_maximinimizing(fn: BiFunction, seq: PairSequence, tol: float = DEFAULT_TOL, tail: int = 1) -> SequenceVerdict:
    """w(y_n) - v(x_n) within 3 tol over the last ``tail`` terms.

    The gap w - v is the sum of three tolerance-bounded terms for an
    optimizing sequence, hence the 3 tol bound; this keeps the
    implication optimizing => maximinimizing exact, and it is asserted.
    """
    s = _check_sequence(fn, seq)
    gaps = [w - v for v, w in zip(seq.v, seq.w)]
    verdict = _tail_verdict(gaps, 3 * tol, tail, "w - v")
    if not verdict.holds and is_optimizing(fn, seq, tol, tail).holds:
        raise AssertionError("optimizing sequence failed the maximinimizing check")
    return verdict


@dataclass(frozen=True)
class WellPosednessModulus:
    eps_grid: tuple[float, ...]
    diam: tuple[float, ...]
    sizes: tuple[int, ...]
    unique_solution: tuple[int, int] | None

    def rows(self) -> list[tuple[float, float, int]]:
        return list(zip(self.eps_grid, self.diam, self.sizes))


def modulus(fn: BiFunction, eps_grid: Iterable[float] = DEFAULT_EPS_GRID, tol: float = DEFAULT_TOL) -> WellPosednessModulus:
    """Diameter (max metric on X x Y) of the eps-saddle set along a decreasing eps grid."""
    grid = tuple(sorted({float(e) for e in eps_grid}, reverse=True))
    if not grid or grid[-1] <= 0:
        raise InputError("eps grid must be nonempty and positive")
    s = summarize(fn)
    require_zero_gap(s, tol, "well-posedness modulus")
    diam, sizes = [], []
    last = None
    for eps in grid:
        es = eps_saddle_set(fn, eps, tol, s)
        diam.append(max(fn.X.diameter(es.x_members), fn.Y.diameter(es.y_members)))
        sizes.append(len(es))
        last = es
    unique = None
    if diam[-1] == 0 and sizes[-1] == 1:
        unique = last.members[0]
    return WellPosednessModulus(grid, tuple(diam), tuple(sizes), unique)


def value_margin(fn: BiFunction, x0: int, y0: int) -> float:
    """Smallest slack in the saddle inequalities at (x0, y0); +inf on singleton spaces."""
    c = fn(x0, y0)
    col = np.delete(fn.values[:, y0], x0)
    row = np.delete(fn.values[x0, :], y0)
    slacks = np.concatenate([c - col, row - c])
    return float(slacks.min()) if slacks.size else math.inf


@dataclass(frozen=True)
class SolutionSet:
    pairs: tuple[tuple[int, int], ...]
    convention: str = ADDITIVE

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def inside(self, U: Iterable[int], V: Iterable[int]) -> bool:
        U, V = set(U), set(V)
        return all(i in U and j in V for i, j in self.pairs)


def solution_map(fn: BiFunction, s: np.ndarray, u: np.ndarray, tol: float = 0.0) -> SolutionSet:
    """Saddle points of f(x,y) + s(x) + u(y)."""
    g = fn.add_separable(s, u)
    return SolutionSet(tuple((c.x0, c.y0) for c in enumerate_saddles(g, tol)))


def _joint_solutions(fn: BiFunction, z: np.ndarray, tol: float) -> SolutionSet:
    g = fn.with_values(fn.values + z)
    return SolutionSet(tuple((int(i), int(j)) for i, j in np.argwhere(saddle_mask(g, tol))), JOINT)


@dataclass(frozen=True, eq=False)
class ProbeSample:
    index: int
    source: str  # "center", "adversary" or "random"
    s: np.ndarray = field(repr=False)
    u: np.ndarray | None = field(repr=False)
    distance: float
    solutions: SolutionSet
    escaped: bool
    note: str = ""


@dataclass(frozen=True, eq=False)
class SolutionMapProbe:
    convention: str
    center: tuple[np.ndarray, np.ndarray | None]
    target: tuple[tuple[int, ...], tuple[int, ...]]
    rho: float
    trials: int
    seed: int
    samples: tuple[ProbeSample, ...]
    verdict: str  # "contained" or "escaped"
    witness: ProbeSample | None
    notes: tuple[str, ...] = ()


def _default_target(sol: SolutionSet) -> tuple[tuple[int, ...], tuple[int, ...]]:
    i, j = sol.pairs[0]
    return (i,), (j,)


def _adversary_candidates(g: BiFunction, rho: float, U, V, ref: tuple[int, int], tol: float):
    """eps-saddle points of g outside U x V for eps = 3 rho, farthest from ref first."""
    es = eps_saddle_set(g, 3 * rho, tol)
    outside = [(i, j) for i, j in es.members if not (i in U and j in V)]
    x0, y0 = ref
    key = lambda p: (-max(g.X.dist[p[0], x0], g.Y.dist[p[1], y0]), p)  # noqa: E731
    return sorted(outside, key=key)


def _relocate(g: BiFunction, i: int, j: int, tol: float):
    """The f - k + r relocation of the saddle to (i, j), or None if g rejects it."""
    s = summarize(g)
    eps1 = (s.V - float(s.v.values[i])) * 2 + 1.0
    eps2 = (float(s.w.values[j]) - s.W) * 2 + 1.0
    try:
        pair = saddle_perturbation(g, i, j, eps1, eps2, tol, s)
    except PreconditionError:
        return None
    return pair.on_x.values, pair.on_y.values


def _run_probe(
    fn: BiFunction,
    center_s: np.ndarray,
    center_u: np.ndarray | None,
    joint: bool,
    target,
    rho: float,
    trials: int,
    seed: int,
    tol: float,
) -> SolutionMapProbe:
    if not rho >= 0:
        raise InputError(f"probe radius must be >= 0, got {rho!r}")
    if trials < 0:
        raise InputError(f"trials must be >= 0, got {trials}")
    nx, ny = fn.shape
    if joint:
        base_z = center_s
        solve = lambda z: _joint_solutions(fn, z, tol)  # noqa: E731
        g = fn.with_values(fn.values + base_z)
    else:
        solve = lambda pair: solution_map(fn, pair[0], pair[1], tol)  # noqa: E731
        g = fn.add_separable(center_s, center_u)

    center_sol = solve(center_s) if joint else solve((center_s, center_u))
    if not len(center_sol):
        raise PreconditionError("solution map is empty at the probe center")
    U, V = target if target is not None else _default_target(center_sol)
    U, V = tuple(sorted(set(int(i) for i in U))), tuple(sorted(set(int(j) for j in V)))
    samples: list[ProbeSample] = []
    notes: list[str] = []

    def record(source, ds, du, note=""):
        if joint:
            z = base_z + ds
            sol = solve(z)
            dist = float(np.abs(ds).max()) if ds.size else 0.0
            smp = ProbeSample(len(samples), source, z, None, dist, sol, not sol.inside(U, V), note)
        else:
            s2, u2 = center_s + ds, center_u + du
            sol = solve((s2, u2))
            dist = max(float(np.abs(ds).max()), float(np.abs(du).max()))
            smp = ProbeSample(len(samples), source, s2, u2, dist, sol, not sol.inside(U, V), note)
        samples.append(smp)
        return smp

    zeros_x, zeros_y = np.zeros(nx), np.zeros(ny)
    record("center", np.zeros((nx, ny)) if joint else zeros_x, None if joint else zeros_y)

    if rho > 0:
        # a saddle at the center forces zero gap, so eps-saddle sets are defined
        candidates = _adversary_candidates(g, rho, set(U), set(V), center_sol.pairs[0], DEFAULT_TOL)
        used = 0
        for i, j in candidates:
            moved = _relocate(g, i, j, tol)
            if moved is None:
                continue
            k, r = moved
            if max(float(k.max()), float(r.max())) > rho:
                continue
            used += 1
            if joint:
                record("adversary", -k[:, None] + r[None, :], None, f"relocate to ({i},{j})")
            else:
                record("adversary", -k, r, f"relocate to ({i},{j})")
        notes.append(f"adversary: {len(candidates)} eps-saddle points outside the target, {used} relocations within budget")
        rng = np.random.default_rng(seed)
        for t in range(trials):
            shape_x = (nx, ny) if joint else (nx,)
            if t % 2 == 0:
                ds = rng.uniform(-rho, rho, size=shape_x)
                du = None if joint else rng.uniform(-rho, rho, size=ny)
            else:
                ds = rho * rng.choice([-1.0, 1.0], size=shape_x)
                du = None if joint else rho * rng.choice([-1.0, 1.0], size=ny)
            record("random", ds, du)

    witness = next((smp for smp in samples if smp.escaped), None)
    center = (center_s, None) if joint else (center_s, center_u)
    return SolutionMapProbe(
        JOINT if joint else ADDITIVE,
        center,
        (U, V),
        float(rho),
        int(trials),
        int(seed),
        tuple(samples),
        "escaped" if witness is not None else "contained",
        witness,
        tuple(notes),
    )


def usc_adversary_probe(
    fn: BiFunction,
    s: np.ndarray | None = None,
    u: np.ndarray | None = None,
    target: tuple[Iterable[int], Iterable[int]] | None = None,
    rho: float = 0.1,
    trials: int = 32,
    seed: int = 0,
    tol: float = 0.0,
) -> SolutionMapProbe:
    """Search for (s', u') within rho of (s, u) whose solution set leaves U x V.

    The adversary relocates the saddle to each eps-saddle point outside
    U x V (eps = 3 rho) and keeps relocations of norm <= rho; seeded random
    perturbations, alternating uniform samples and sign vertices of the
    rho-box, supplement it. ``target`` defaults to the first solution.
    """
    nx, ny = fn.shape
    s = np.zeros(nx) if s is None else np.asarray(s, dtype=float)
    u = np.zeros(ny) if u is None else np.asarray(u, dtype=float)
    if s.shape != (nx,) or u.shape != (ny,):
        raise InputError("s and u must match the space sizes")
    return _run_probe(fn, s, u, False, target, rho, trials, seed, tol)


def product_usc_probe(
    fn: BiFunction,
    z: np.ndarray | None = None,
    target: tuple[Iterable[int], Iterable[int]] | None = None,
    rho: float = 0.1,
    trials: int = 32,
    seed: int = 0,
    tol: float = 0.0,
) -> SolutionMapProbe:
    """Same protocol with joint perturbations z' of f, ||z' - z|| <= rho."""
    z = np.zeros(fn.shape) if z is None else np.asarray(z, dtype=float)
    if z.shape != fn.shape:
        raise InputError("z must match the payoff shape")
    if not np.isfinite(z).all():
        raise InputError("z must be finite")
    return _run_probe(fn, z, None, True, target, rho, trials, seed, tol)
