"""Problem files: spaces plus a payoff, as JSON.

    {
      "schema": 1,
      "X": {"grid": {"lower": 0, "upper": 1, "lower_open": true, "upper_open": true, "n": 100}},
      "Y": {"points": ["a", "b"], "dist": [[0, 1], [1, 0]]},
      "payoff": {"expr": "x - y"},
      "options": {"tolerance": 1e-12, "seed": 0}
    }

A single ``"space"`` section is used for both axes. Spaces may be omitted
when the payoff is a table; they then default to discrete spaces of the
matching size. Table entries are numbers or the strings "+inf" / "-inf".
"""

from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import jsonschema
import numpy as np

from .errors import InputError, MetricError
from .extreal import parse_ext
from .minimax import BiFunction
from .space import GridSpec, MetricSpace, build_grid, discrete_space, real_line_space, validate_metric

_NUMBER_OR_INF = {"oneOf": [{"type": "number"}, {"type": "string", "enum": ["+inf", "-inf", "inf"]}]}

SPACE_SCHEMA = {
    "type": "object",
    "oneOf": [
        {
            "required": ["grid"],
            "properties": {
                "grid": {
                    "type": "object",
                    "required": ["lower", "upper", "n"],
                    "properties": {
                        "lower": {"type": "number"},
                        "upper": {"type": "number"},
                        "lower_open": {"type": "boolean"},
                        "upper_open": {"type": "boolean"},
                        "n": {"type": "integer", "minimum": 2},
                    },
                    "additionalProperties": False,
                }
            },
            "additionalProperties": False,
        },
        {
            "required": ["points"],
            "properties": {
                "points": {"type": "array", "minItems": 1},
                "dist": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
                "labels": {"type": "array", "items": {"type": "string"}},
                "coords": {"type": "array", "items": {"type": "number"}},
            },
            "additionalProperties": False,
        },
        {
            "required": ["discrete"],
            "properties": {"discrete": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
    ],
}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["payoff"],
    "properties": {
        "schema": {"const": 1},
        "space": SPACE_SCHEMA,
        "X": SPACE_SCHEMA,
        "Y": SPACE_SCHEMA,
        "payoff": {
            "type": "object",
            "oneOf": [
                {
                    "required": ["table"],
                    "properties": {"table": {"type": "array", "minItems": 1,
                                             "items": {"type": "array", "minItems": 1, "items": _NUMBER_OR_INF}}},
                    "additionalProperties": False,
                },
                {
                    "required": ["expr"],
                    "properties": {"expr": {"type": "string", "minLength": 1}},
                    "additionalProperties": False,
                },
            ],
        },
        "options": {"type": "object"},
        "description": {"type": "string"},
    },
    "additionalProperties": False,
    "not": {"anyOf": [{"required": ["space", "X"]}, {"required": ["space", "Y"]}]},
}


# -- expressions ---------------------------------------------------------------

def _variadic(fn):
    def call(*args):
        if not args:
            raise InputError("min/max need at least one argument")
        out = args[0]
        for a in args[1:]:
            out = fn(out, a)
        return out

    return call


EXACT_FUNCTIONS: dict[str, Callable] = {
    "min": _variadic(np.minimum),
    "max": _variadic(np.maximum),
    "abs": np.abs,
}
FLOAT_FUNCTIONS: dict[str, Callable] = {
    **EXACT_FUNCTIONS,
    "sqrt": np.sqrt,
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


@dataclass(frozen=True)
class Expression:
    source: str
    profile: str
    uses_inf: bool
    _fn: Callable = field(repr=False, compare=False)

    def __call__(self, x, y) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return self._fn(x, y)


def compile_expression(source: str, profile: str = "exact") -> Expression:
    """Compile an arithmetic expression in x and y.

    The exact profile allows + - * /, min, max, abs, numeric literals and
    ``inf``; the float profile adds sqrt, exp, log, sin, cos, tan.
    """
    if profile not in ("exact", "float"):
        raise InputError(f"unknown evaluation profile {profile!r}")
    funcs = EXACT_FUNCTIONS if profile == "exact" else FLOAT_FUNCTIONS
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise InputError(f"payoff.expr: syntax error at column {exc.offset}: {source!r}") from exc
    uses_inf = False

    def build(node) -> Callable:
        nonlocal uses_inf
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            val = np.float64(node.value)
            return lambda x, y: val
        if isinstance(node, ast.Name):
            if node.id == "x":
                return lambda x, y: x
            if node.id == "y":
                return lambda x, y: y
            if node.id == "inf":
                uses_inf = True
                return lambda x, y: np.float64(math.inf)
            raise InputError(f"payoff.expr: unknown name {node.id!r} at column {node.col_offset}")
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            op, lhs, rhs = _BINOPS[type(node.op)], build(node.left), build(node.right)
            return lambda x, y: op(lhs(x, y), rhs(x, y))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            op, arg = _UNOPS[type(node.op)], build(node.operand)
            return lambda x, y: op(arg(x, y))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
            if node.func.id not in funcs:
                raise InputError(f"payoff.expr: function {node.func.id!r} not available in the {profile} profile")
            fn, args = funcs[node.func.id], [build(a) for a in node.args]
            return lambda x, y: fn(*(a(x, y) for a in args))
        raise InputError(f"payoff.expr: unsupported syntax {type(node).__name__} at column {getattr(node, 'col_offset', 0)}")

    fn = build(tree)
    return Expression(source, profile, uses_inf, fn)


def evaluate_expression(expr: Expression, X: MetricSpace, Y: MetricSpace) -> np.ndarray:
    for name, sp in (("X", X), ("Y", Y)):
        if sp.coords is None:
            raise InputError(f"payoff.expr needs real coordinates on {name}; give a grid or numeric points")
    table = np.broadcast_to(expr(X.coords[:, None], Y.coords[None, :]), (len(X), len(Y))).astype(float)
    if np.isnan(table).any():
        i, j = np.argwhere(np.isnan(table))[0]
        raise InputError(f"payoff.expr is undefined at ({X.label(i)},{Y.label(j)})")
    if not expr.uses_inf and np.isinf(table).any():
        i, j = np.argwhere(np.isinf(table))[0]
        raise InputError(f"payoff.expr is infinite at ({X.label(i)},{Y.label(j)}); use the inf literal to allow infinities")
    return table


# -- problem files -----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProblemFile:
    f: BiFunction
    payoff_source: str  # "table" or "expr"
    expr: str | None
    options: dict
    source: str
    grids: dict = field(default_factory=dict)

    @property
    def X(self) -> MetricSpace:
        return self.f.X

    @property
    def Y(self) -> MetricSpace:
        return self.f.Y


def _build_space(section: dict, prefix: str, where: str, size_hint: int | None):
    if section is None:
        if size_hint is None:
            raise InputError(f"{where}: a space section is required when the payoff is an expression")
        return discrete_space(size_hint, prefix), None
    if "grid" in section:
        g = section["grid"]
        spec = GridSpec(float(g["lower"]), float(g["upper"]), int(g["n"]),
                        bool(g.get("lower_open", False)), bool(g.get("upper_open", False)))
        return build_grid(spec, prefix), spec
    if "discrete" in section:
        return discrete_space(int(section["discrete"]), prefix), None
    points = section["points"]
    labels = section.get("labels")
    if "dist" in section:
        try:
            space = validate_metric(section["dist"], points=[_hashable(p) for p in points], labels=labels,
                                    coords=section.get("coords"), prefix=prefix)
        except MetricError as exc:
            raise MetricError(exc.kind, exc.where, f"{where}.dist: {exc}") from None
        if labels is None and all(isinstance(p, str) for p in points):
            space = MetricSpace(space.points, space.dist, tuple(points), space.coords)
        return space, None
    if all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in points):
        return real_line_space(points, prefix, labels), None
    raise InputError(f"{where}: non-numeric points need an explicit dist table")


def _hashable(p):
    return tuple(p) if isinstance(p, list) else p


def problem_from_dict(data: Any, source: str = "<dict>") -> ProblemFile:
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{source}: schema violation at {path}: {exc.message}") from None

    payoff = data["payoff"]
    opts = dict(data.get("options", {}))
    sx = data.get("space", data.get("X"))
    sy = data.get("space", data.get("Y"))
    hint_x = hint_y = None
    table = None
    if "table" in payoff:
        rows = payoff["table"]
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise InputError(f"{source}: payoff.table rows have unequal lengths {sorted(widths)}")
        try:
            table = np.array([[parse_ext(v) for v in r] for r in rows], dtype=float)
        except InputError as exc:
            raise InputError(f"{source}: payoff.table: {exc}") from None
        hint_x, hint_y = table.shape
    X, gx = _build_space(sx, "x", "X", hint_x)
    Y, gy = _build_space(sy, "y", "Y", hint_y)
    if table is not None:
        if table.shape != (len(X), len(Y)):
            raise InputError(f"{source}: payoff.table has shape {table.shape} but the spaces have sizes {(len(X), len(Y))}")
        expr = None
    else:
        expr = compile_expression(payoff["expr"], opts.get("profile", "exact"))
        table = evaluate_expression(expr, X, Y)
    grids = {k: v for k, v in (("X", gx), ("Y", gy)) if v is not None}
    return ProblemFile(BiFunction(X, Y, table), "table" if expr is None else "expr",
                       None if expr is None else expr.source, opts, source, grids)


def parse_problem(path: str | Path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read problem file {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(data, str(path))
