"""Definition-level re-verification with plain loops (the ``--verify exhaustive`` path).

Nothing here reuses the vectorized scans of ``minimax``; every check walks
the table entry by entry.
"""

from __future__ import annotations

import math

from .errors import VerificationError
from .extreal import fmt
from .perturb import PerturbationPair, WellPosedPerturbation


def saddle_by_definition(table, i: int, j: int, tol: float = 0.0) -> int:
    """Count comparisons after checking every f(x, j) <= f(i, j) <= f(i, y)."""
    c = table[i][j]
    if not math.isfinite(c):
        raise VerificationError(f"saddle value {fmt(c)} is not finite")
    n = 0
    for x in range(len(table)):
        n += 1
        if table[x][j] > c + tol:
            raise VerificationError(f"row {x}: f = {fmt(table[x][j])} exceeds saddle value {fmt(c)}")
    for y in range(len(table[i])):
        n += 1
        if table[i][y] < c - tol:
            raise VerificationError(f"column {y}: f = {fmt(table[i][y])} below saddle value {fmt(c)}")
    return n


def all_saddles_by_definition(table, tol: float = 0.0) -> list[tuple[int, int]]:
    found = []
    for i in range(len(table)):
        for j in range(len(table[i])):
            c = table[i][j]
            if not math.isfinite(c):
                continue
            if all(table[x][j] <= c + tol for x in range(len(table))) and all(
                table[i][y] >= c - tol for y in range(len(table[i]))
            ):
                found.append((i, j))
    return found


def supinf_by_definition(table) -> float:
    best = -math.inf
    for row in table:
        inner = math.inf
        for val in row:
            inner = min(inner, val)
        best = max(best, inner)
    return best


def infsup_by_definition(table) -> float:
    best = math.inf
    for j in range(len(table[0])):
        inner = -math.inf
        for row in table:
            inner = max(inner, row[j])
        best = min(best, inner)
    return best


def _budget_lines(pair: PerturbationPair) -> list[str]:
    out = []
    for p in (pair.on_x, pair.on_y):
        vals = [float(v) for v in p.values]
        norm = max(vals)
        if min(vals) < 0 or vals[p.anchor] != 0 or norm != p.norm or not p.budget.holds(norm):
            raise VerificationError(f"exhaustive check failed for {p.name}: {p.describe()}")
        out.append(f"exhaustive: {p.name} >= 0, {p.name}(anchor) = 0, {p.describe()}")
    return out


def reverify(obj, tol: float = 0.0) -> list[str]:
    """Re-run the postconditions of a constructed object; returns transcript lines."""
    if isinstance(obj, WellPosedPerturbation):
        lines = reverify(obj.base, tol)
        g = obj.g.values.tolist()
        lines += _budget_lines(obj.sharpener)
        found = all_saddles_by_definition(g, tol)
        if found != [(obj.sharpener.x0, obj.sharpener.y0)]:
            raise VerificationError(f"exhaustive: sharpened saddles {found}, expected the single anchor")
        lines.append(f"exhaustive: unique saddle of the sharpened payoff over {len(g) * len(g[0])} cells")
        return lines
    pair: PerturbationPair = obj
    table = pair.combined.values.tolist()
    x0, y0 = pair.x0, pair.y0
    c = table[x0][y0]
    lines = _budget_lines(pair)
    if pair.theorem in ("saddle", "eps-saddle"):
        n = saddle_by_definition(table, x0, y0, tol)
        lines.append(f"exhaustive: saddle inequalities hold at the anchor ({n} comparisons)")
    elif pair.theorem == "supinf":
        val, row = supinf_by_definition(table), min(table[x0])
        if abs(val - c) > tol or abs(row - c) > tol:
            raise VerificationError(f"exhaustive: supinf value {fmt(val)}, row value {fmt(row)}, expected {fmt(c)}")
        lines.append(f"exhaustive: sup inf = inf at x0 = f(x0,y0) = {fmt(c)}")
    elif pair.theorem == "infsup":
        val, col = infsup_by_definition(table), max(r[y0] for r in table)
        if abs(val - c) > tol or abs(col - c) > tol:
            raise VerificationError(f"exhaustive: infsup value {fmt(val)}, column value {fmt(col)}, expected {fmt(c)}")
        lines.append(f"exhaustive: inf sup = sup at y0 = f(x0,y0) = {fmt(c)}")
    return lines
