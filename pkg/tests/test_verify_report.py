import dataclasses
import math

import numpy as np
import pytest

from saddlepert import BiFunction, InputError, VerificationError, discrete_space, saddle_perturbation
from saddlepert.extreal import encode_ext, fmt, parse_ext, sub
from saddlepert.perturb import infsup_perturbation, supinf_perturbation, wellposed_perturbation
from saddlepert.report import decode_numbers, pair_dict, to_csv, to_json
from saddlepert.verify import infsup_by_definition, reverify, supinf_by_definition


def bf(rows) -> BiFunction:
    t = np.array(rows, dtype=float)
    return BiFunction(discrete_space(t.shape[0], "x"), discrete_space(t.shape[1], "y"), t)


def test_reverify_each_theorem():
    f = bf([[0, 1], [1, 0]])
    assert len(reverify(saddle_perturbation(f, 0, 0, 0.5, 0.5))) == 3
    assert any("sup inf" in t for t in reverify(supinf_perturbation(f, 0, 0, 0.5, 0.5)))
    assert any("inf sup" in t for t in reverify(infsup_perturbation(f, 0, 0, 0.5, 2.0)))
    lines = reverify(wellposed_perturbation(f, 0, 0, 0.5, 0.5, 1.0))
    assert lines[-1].startswith("exhaustive: unique saddle")


def test_reverify_catches_tampering():
    pair = saddle_perturbation(bf([[0, 1], [1, 0]]), 0, 0, 0.5, 0.5)
    broken = dataclasses.replace(pair, combined=pair.combined.with_values(np.array([[0.0, 1.0], [1.0, 0.0]])))
    with pytest.raises(VerificationError):
        reverify(broken)


def test_value_loops():
    t = [[1, 2], [3, 4]]
    assert supinf_by_definition(t) == 3 and infsup_by_definition(t) == 3


def test_extended_real_helpers():
    assert parse_ext("+inf") == math.inf and parse_ext(" -INF ") == -math.inf and parse_ext(2) == 2.0
    for bad in (True, "x", math.nan, None):
        with pytest.raises(InputError):
            parse_ext(bad)
    assert encode_ext(math.inf) == "+inf" and encode_ext(-math.inf) == "-inf" and encode_ext(1.5) == 1.5
    assert sub(math.inf, math.inf) is None and sub(math.inf, -math.inf) == math.inf
    assert fmt(None) == "undefined" and fmt(3.0) == "3" and fmt(0.1) == "0.1" and fmt(-math.inf) == "-inf"


def test_report_json_is_strict_and_round_trips():
    pair = saddle_perturbation(bf([[0, 1], [1, 0]]), 0, 0, 0.5, 0.5)
    d = pair_dict(pair)
    text = to_json(d)
    assert text.endswith("\n")
    with pytest.raises(ValueError):
        to_json({"x": math.nan})
    assert decode_numbers({"a": ["+inf", 1]}) == {"a": [math.inf, 1]}


def test_csv_only_for_curves():
    with pytest.raises(ValueError):
        to_csv({"command": "analyze"})
