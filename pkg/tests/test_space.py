import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddlepert import (
    GridSpec,
    InputError,
    MetricError,
    ScalarField,
    build_grid,
    bump,
    discrete_space,
    nested_base_function,
    real_line_space,
    urysohn_separator,
    validate_metric,
)

from suite import brute_triangle_violation


# -- strategies ----------------------------------------------------------------

@st.composite
def lattice_spaces(draw, min_size=1, max_size=8):
    """Distinct quarter-integer points on the line or in the plane (Chebyshev)."""
    dim = draw(st.sampled_from([1, 2]))
    pts = draw(st.lists(st.tuples(*[st.integers(0, 16)] * dim), min_size=min_size, max_size=max_size, unique=True))
    arr = np.array(pts, dtype=float) / 4
    dist = np.abs(arr[:, None, :] - arr[None, :, :]).max(axis=2)
    return validate_metric(dist.tolist(), points=pts)


@st.composite
def space_point_set(draw):
    space = draw(lattice_spaces(min_size=2))
    n = len(space)
    x0 = draw(st.integers(0, n - 1))
    others = [i for i in range(n) if i != x0]
    A = draw(st.lists(st.sampled_from(others), min_size=1, unique=True))
    return space, x0, A


# -- validate_metric --------------------------------------------------------------

def test_two_point_metric_is_valid():
    sp = validate_metric([[0, 1], [1, 0]])
    assert len(sp) == 2 and sp.labels == ("p1", "p2")
    assert sp.dist[0, 1] == 1.0


def test_asymmetry_is_named():
    with pytest.raises(MetricError) as exc:
        validate_metric([[0, 1], [2, 0]])
    assert exc.value.kind == "asymmetry" and exc.value.where == (0, 1)
    assert "asymmetry at (0,1)" in str(exc.value)


def test_triangle_violation_cites_triple():
    # points a, b, c with d(a,c) = 5 and d(a,b) = d(b,c) = 1
    dist = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    with pytest.raises(MetricError) as exc:
        validate_metric(dist)
    assert exc.value.kind == "triangle"
    assert exc.value.where == brute_triangle_violation(dist) == (0, 1, 2)


@pytest.mark.parametrize(
    "table, kind",
    [
        ([[0, -1], [-1, 0]], "negative"),
        ([[1, 1], [1, 0]], "diagonal"),
        ([[0, 0], [0, 0]], "separation"),
        ([[0, math.inf], [math.inf, 0]], "nonfinite"),
        ([[0, 1, 2]], "shape"),
        ([], "shape"),
    ],
)
def test_other_axiom_failures(table, kind):
    with pytest.raises(MetricError) as exc:
        validate_metric(table)
    assert exc.value.kind == kind


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=4, max_size=4))
def test_triangle_check_matches_brute_force(rows):
    d = np.array(rows, dtype=float)
    d = np.triu(d, 1)
    d = d + d.T
    d[d == 0] = 1.0
    np.fill_diagonal(d, 0.0)
    expected = brute_triangle_violation(d.tolist())
    if expected is None:
        validate_metric(d.tolist())
    else:
        with pytest.raises(MetricError) as exc:
            validate_metric(d.tolist())
        assert exc.value.where == expected


@settings(max_examples=50, deadline=None)
@given(lattice_spaces())
def test_lattice_spaces_satisfy_axioms(space):
    d = space.dist
    n = len(space)
    assert (np.diag(d) == 0).all() and (d == d.T).all()
    assert all(d[a, b] > 0 for a in range(n) for b in range(n) if a != b)
    assert brute_triangle_violation(d.tolist()) is None


def test_distances_are_read_only():
    sp = discrete_space(3)
    with pytest.raises(ValueError):
        sp.dist[0, 1] = 5.0


def test_index_accepts_int_label_and_point():
    sp = real_line_space([0.0, 0.5, 2.0], prefix="x")
    assert sp.index(1) == 1
    assert sp.index("x3") == 2
    assert sp.index(0.5) == 1
    with pytest.raises(InputError):
        sp.index("nowhere")


# -- grids ----------------------------------------------------------------------

@pytest.mark.parametrize(
    "spec, expected",
    [
        (GridSpec(0, 1, 3, True, True), [0.25, 0.5, 0.75]),
        (GridSpec(0, 1, 4, True, False), [0.25, 0.5, 0.75, 1.0]),
        (GridSpec(0, 1, 2), [0.0, 1.0]),
    ],
)
def test_grid_samples(spec, expected):
    assert list(build_grid(spec).coords) == expected


@pytest.mark.parametrize("lower, upper, n", [(1, 0, 3), (0, 0, 3), (0, 1, 1), (0, math.inf, 3)])
def test_invalid_grid_specs(lower, upper, n):
    with pytest.raises(InputError):
        GridSpec(lower, upper, n)


@settings(max_examples=80, deadline=None)
@given(
    st.integers(-8, 8),
    st.integers(1, 8),
    st.integers(2, 60),
    st.booleans(),
    st.booleans(),
)
def test_grid_endpoint_rules(lower, width, n, lower_open, upper_open):
    spec = GridSpec(lower, lower + width, n, lower_open, upper_open)
    exact = spec.exact_samples()
    coords = list(build_grid(spec).coords)
    assert len(coords) == n == len(set(exact))
    assert (Fraction(lower) in exact) != lower_open
    assert (Fraction(lower + width) in exact) != upper_open
    assert all(Fraction(lower) <= q <= Fraction(lower + width) for q in exact)
    if not lower_open:
        assert coords[0] == lower
    if not upper_open:
        assert coords[-1] == lower + width


# -- separators ---------------------------------------------------------------------

def test_urysohn_on_the_line():
    sp = real_line_space([0.0, 0.5, 2.0])
    assert list(urysohn_separator(sp, 0, [2]).values) == [0.0, 0.25, 1.0]


def test_urysohn_equidistant_complement():
    sp = discrete_space(4)
    h = urysohn_separator(sp, 2, [0, 1, 3]).values
    assert list(h) == [1.0, 1.0, 0.0, 1.0]


def test_urysohn_rejects_anchor_in_set():
    with pytest.raises(InputError, match="not separated"):
        urysohn_separator(discrete_space(3), 1, [1, 2])


@settings(max_examples=80, deadline=None)
@given(space_point_set())
def test_urysohn_separates(args):
    space, x0, A = args
    h = urysohn_separator(space, x0, A).values
    assert h[x0] == 0
    assert (h[A] == 1).all()
    assert ((0 <= h) & (h <= 1)).all()


def test_bump_examples():
    sp = discrete_space(2)
    b = bump(sp, 0, 1.0).values
    assert b[0] == 0 and b[1] == 0.25
    far = real_line_space([0.0, 1e12])
    assert bump(far, 0, 1.0).values[1] < 0.5


@settings(max_examples=60, deadline=None)
@given(lattice_spaces(min_size=2), st.sampled_from([0.125, 0.5, 1.0, 3.0]), st.data())
def test_bump_properties(space, eps, data):
    x0 = data.draw(st.integers(0, len(space) - 1))
    b = bump(space, x0, eps).values
    d = space.dist[:, x0]
    others = np.arange(len(space)) != x0
    assert b[x0] == 0 and (b[others] > 0).all() and b.max() < eps / 2
    order = np.argsort(d, kind="stable")
    assert (np.diff(b[order]) >= 0).all()


def test_nested_base_examples():
    sp = real_line_space([0.0, 0.5, 1.5])
    assert list(nested_base_function(sp, 0, 1).values) == [0.0, 0.5, 1.0]
    assert list(nested_base_function(sp, 0, 2).values) == [0.0, 1.0, 1.0]
    with pytest.raises(InputError):
        nested_base_function(sp, 0, 0)


@settings(max_examples=60, deadline=None)
@given(lattice_spaces(min_size=2), st.data())
def test_nested_base_monotone_and_saturating(space, data):
    x0 = data.draw(st.integers(0, len(space) - 1))
    d = space.dist[:, x0]
    prev = np.zeros(len(space))
    for n in range(1, 12):
        h = nested_base_function(space, x0, n).values
        assert (h >= prev).all() and h[x0] == 0
        for x in range(len(space)):
            if x != x0 and n >= math.ceil(1 / d[x]):
                assert h[x] == 1
        prev = h


def test_scalar_field_validation():
    sp = discrete_space(2)
    with pytest.raises(InputError):
        ScalarField(sp, [1.0])
    with pytest.raises(InputError):
        ScalarField(sp, [1.0, math.nan])
    assert ScalarField(sp, [-3.0, 2.0]).sup_norm() == 3.0
