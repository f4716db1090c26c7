"""Acceptance gate: one test per criterion, reported by conftest as PASS/FAIL lines."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from saddlepert import (
    PreconditionError,
    ScalarField,
    characteristic_regularity_witness,
    discretized_counterexample,
    enumerate_saddles,
    kr_min_perturbation,
    local_base_sets,
    modulus,
    saddle_perturbation,
    summarize,
    usc_adversary_probe,
    value_margin,
    wellposed_perturbation,
)
from saddlepert.minimax import eps_saddle_set
from saddlepert.perturb import eps_saddle_perturbation

from suite import (
    EPS_SADDLE_MENU,
    admissible_pairs,
    brute_saddles,
    brute_values,
    instances,
    random_space,
    zero_gap_instances,
)


def _saddle_by_loops(table: np.ndarray, i: int, j: int) -> bool:
    c = float(table[i, j])
    return math.isfinite(c) and all(float(t) <= c for t in table[:, j]) and all(float(t) >= c for t in table[i, :])


@pytest.fixture(scope="module")
def suite():
    return instances()


@pytest.fixture(scope="module")
def zero_gap():
    return zero_gap_instances()


def test_criterion_1_counterexample_reproduction():
    for n in (10, 100, 1000):
        start = time.perf_counter()
        rep = discretized_counterexample(n)
        elapsed = time.perf_counter() - start
        assert rep.summary.gap == 0.0
        assert rep.saddle_exact == (Fraction(n, n + 1), Fraction(1))
        assert rep.corner_distance == Fraction(1, n + 1)
        assert [(c.x0, c.y0) for c in rep.saddles] == [(n - 1, n - 1)]
        assert rep.f.X.coords[n - 1] == float(Fraction(n, n + 1))
        assert rep.f.Y.coords[n - 1] == 1.0
        # open endpoints never sampled
        assert 0.0 not in rep.f.X.coords and 1.0 not in rep.f.X.coords and 0.0 not in rep.f.Y.coords
        if n <= 100:
            assert brute_saddles(rep.f.values) == [(n - 1, n - 1)]
        if n == 1000:
            assert elapsed < 1.0, f"n=1000 took {elapsed:.3f}s"


def test_criterion_2_saddle_perturbation_postconditions(suite):
    start = time.perf_counter()
    accepted = 0
    for inst in suite:
        f, e1, e2 = inst.f, inst.eps1, inst.eps2
        s = summarize(f)
        for i, j in admissible_pairs(f, e1, e2):
            pair = saddle_perturbation(f, i, j, e1, e2, 0.0, s)
            k, r = pair.on_x.values, pair.on_y.values
            assert (k >= 0).all() and (r >= 0).all() and k[i] == 0 and r[j] == 0
            assert np.array_equal(pair.combined.values, f.values - k[:, None] + r[None, :])
            assert _saddle_by_loops(pair.combined.values, i, j)
            assert k.max() < 2 * e1 + e2 + s.gap
            assert r.max() < e1 + 2 * e2 + s.gap
            accepted += 1
    elapsed = time.perf_counter() - start
    assert accepted >= len(suite)
    assert elapsed < 30.0, f"suite took {elapsed:.1f}s"


def test_criterion_3_kr_norm_equality(suite):
    checked = 0
    for inst in suite:
        f = inst.f
        v, w, _, _ = brute_values(f.values)
        for space, vals in ((f.Y, np.array(w)), (f.X, -np.array(v))):
            low = min(vals)
            for a in range(len(space)):
                if vals[a] == math.inf:
                    with pytest.raises(PreconditionError):
                        kr_min_perturbation(ScalarField(space, vals), a, 0.0)
                    continue
                h = kr_min_perturbation(ScalarField(space, vals), a, 0.0)
                assert h.norm == vals[a] - low
                assert (vals + h.values >= vals[a]).all()
                checked += 1
    assert checked > 0


def test_criterion_4_weak_duality(suite):
    finite = 0
    for inst in suite:
        f = inst.f
        s = summarize(f)
        v, w, V, W = brute_values(f.values)
        assert list(s.v.values) == v and list(s.w.values) == w and s.V == V and s.W == W
        if math.isfinite(V) and math.isfinite(W):
            assert s.gap >= 0
            finite += 1
        vals = f.values
        mask = np.isfinite(vals)
        assert (s.v.values[:, None] <= vals)[mask].all()
        assert (vals <= s.w.values[None, :])[mask].all()
    assert finite == len(suite)


def test_criterion_5_oracle_equivalence(suite, zero_gap):
    with_saddles = 0
    for f in [inst.f for inst in suite] + list(zero_gap):
        got = [(c.x0, c.y0) for c in enumerate_saddles(f)]
        assert got == brute_saddles(f.values)
        with_saddles += bool(got)
    assert with_saddles >= len(zero_gap)


def test_criterion_6_wellposed_sharpening(suite):
    for inst in suite:
        f = inst.f
        s = summarize(f)
        x0, y0 = s.sup_argset[0], s.inf_argset[0]
        wp = wellposed_perturbation(f, x0, y0, inst.eps1, inst.eps2, 1.0, tol=0.0, summary=s)
        g = wp.g
        sg = summarize(g)
        for n in range(1, 11):
            eps = 2.0**-n
            for x in np.flatnonzero(sg.V - sg.v.values <= eps):
                assert f.X.dist[x, x0] < 1.0 / n
            for y in np.flatnonzero(sg.w.values - sg.W <= eps):
                assert f.Y.dist[y, y0] < 1.0 / n
        mod = modulus(g)
        assert all(a >= b for a, b in zip(mod.diam, mod.diam[1:]))
        assert mod.diam[-1] == 0 and mod.unique_solution == (x0, y0)
        dyadic = modulus(g, [2.0**-n for n in range(11)], tol=0.0)
        for n, d in zip(range(11), dyadic.diam):
            assert d <= 2.0 / max(n, 1)


def test_criterion_7_eps_saddle_budget(zero_gap):
    accepted = 0
    for idx, f in enumerate(zero_gap):
        eps = EPS_SADDLE_MENU[idx % len(EPS_SADDLE_MENU)]
        s = summarize(f)
        for i, j in eps_saddle_set(f, eps, 0.0, s).members:
            pair = eps_saddle_perturbation(f, i, j, eps, 0.0, s)
            assert pair.on_x.norm < eps and pair.on_y.norm < eps
            assert _saddle_by_loops(pair.combined.values, i, j)
            accepted += 1
    assert accepted >= len(zero_gap)


def test_criterion_8_probe_consistency(zero_gap):
    start = time.perf_counter()
    escaped = 0
    for idx, f in enumerate(zero_gap[:100]):
        probe = usc_adversary_probe(f, rho=1.0, trials=8, seed=idx)
        assert all(smp.distance <= probe.rho for smp in probe.samples)
        if probe.verdict == "escaped":
            w = probe.witness
            assert w.distance <= probe.rho
            found = brute_saddles(f.values + w.s[:, None] + w.u[None, :])
            U, V = probe.target
            assert found and not all(i in U and j in V for i, j in found)
            escaped += 1
    assert escaped >= 1

    for idx, f in enumerate(zero_gap[:100]):
        s = summarize(f)
        x0, y0 = s.sup_argset[0], s.inf_argset[0]
        g = wellposed_perturbation(f, x0, y0, 1.0, 1.0, 1.0, tol=0.0, summary=s).g
        margin = value_margin(g, x0, y0)
        rho = margin / 5 if math.isfinite(margin) else 1.0
        probe = usc_adversary_probe(g, target=((x0,), (y0,)), rho=rho, trials=16, seed=idx)
        assert probe.verdict == "contained", (idx, margin, probe.witness)
    elapsed = time.perf_counter() - start
    assert elapsed < 60.0, f"probes took {elapsed:.1f}s"


def test_criterion_9_characterization_witnesses():
    rng = np.random.default_rng(9)
    for _ in range(200):
        n = int(rng.integers(2, 21))
        space = random_space(rng, n, "p")
        x0 = int(rng.integers(n))
        others = [i for i in range(n) if i != x0]
        A = sorted(int(a) for a in rng.choice(others, size=int(rng.integers(1, n)), replace=False))
        h = characteristic_regularity_witness(space, A, x0).values
        assert h[x0] == 0 and (h[A] == 1).all() and h.max() == 1
        expected = np.zeros(n)
        expected[A] = 1.0
        assert np.array_equal(h, expected)

        base = local_base_sets(space, x0, float(rng.choice([0.5, 1.0, 2.0])))
        sets = [set(s) for s in base.sets]
        assert sets[0] == set(range(n))
        assert all(b <= a for a, b in zip(sets, sets[1:]))
        assert base.intersection == (x0,)
        d = space.dist[:, x0]
        for s in sets:
            radius = max(d[i] for i in s)
            assert s == {i for i in range(n) if d[i] <= radius}
