"""Report assembly and emission: canonical JSON, CSV curves, markdown digest."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable

import numpy as np

from .extreal import encode_ext, fmt, parse_ext
from .minimax import AssumptionReport, BiFunction, CounterexampleReport, EpsSaddleSet, MinimaxSummary, SaddleCertificate
from .perturb import Perturbation, PerturbationPair, WellPosedPerturbation
from .space import MetricSpace
from .wellposed import SolutionMapProbe, WellPosednessModulus

SCHEMA_VERSION = 1


def _vec(values: Iterable[float]) -> list:
    return [encode_ext(v) for v in np.asarray(values, dtype=float).ravel()]


def _table(values: np.ndarray) -> list:
    return [_vec(row) for row in np.asarray(values, dtype=float)]


def _labels(space: MetricSpace, idx: Iterable[int]) -> list[str]:
    return [space.label(i) for i in idx]


def space_dict(space: MetricSpace) -> dict:
    out: dict[str, Any] = {"size": len(space), "labels": list(space.labels)}
    if space.coords is not None:
        out["coords"] = _vec(space.coords)
    return out


def summary_dict(f: BiFunction, s: MinimaxSummary) -> dict:
    return {
        "v": _vec(s.v.values),
        "w": _vec(s.w.values),
        "V": encode_ext(s.V),
        "W": encode_ext(s.W),
        "gap": "undefined" if s.gap is None else encode_ext(s.gap),
        "sup_argset": _labels(f.X, s.sup_argset),
        "inf_argset": _labels(f.Y, s.inf_argset),
    }


def assumptions_dict(report: AssumptionReport) -> dict:
    return {a.name: {"holds": a.holds, "detail": a.detail} for a in report.verdicts}


def certificate_dict(f: BiFunction, c: SaddleCertificate) -> dict:
    out = {
        "point": [f.X.label(c.x0), f.Y.label(c.y0)],
        "value": encode_ext(c.value),
        "valid": c.valid,
        "checked_rows": c.checked_rows,
        "checked_cols": c.checked_cols,
        "tolerance": c.tolerance,
    }
    if c.violation:
        out["violation"] = c.violation
    return out


def eps_set_dict(f: BiFunction, es: EpsSaddleSet) -> dict:
    return {
        "eps": es.eps,
        "x_members": _labels(f.X, es.x_members),
        "y_members": _labels(f.Y, es.y_members),
        "members": [[f.X.label(i), f.Y.label(j)] for i, j in es.members],
    }


def perturbation_dict(p: Perturbation) -> dict:
    return {
        "name": p.name,
        "axis": p.axis,
        "anchor": p.field.space.label(p.anchor),
        "values": _vec(p.values),
        "norm": p.norm,
        "budget": {"relation": p.budget.relation, "bound": p.budget.bound, "expression": p.budget.expression},
        "theorem": p.theorem,
    }


def pair_dict(pair: PerturbationPair) -> dict:
    f = pair.combined
    return {
        "theorem": pair.theorem,
        "convention": pair.convention,
        "at": [f.X.label(pair.x0), f.Y.label(pair.y0)],
        "on_x": perturbation_dict(pair.on_x),
        "on_y": perturbation_dict(pair.on_y),
        "combined": _table(f.values),
        "transcript": list(pair.transcript),
    }


def wellposed_dict(wp: WellPosedPerturbation) -> dict:
    return {
        "delta": wp.delta,
        "n_terms": wp.n_terms,
        "truncation_error": wp.truncation_error,
        "base": pair_dict(wp.base),
        "sharpener": pair_dict(wp.sharpener),
    }


def modulus_dict(f: BiFunction, m: WellPosednessModulus) -> dict:
    return {
        "curve": [{"eps": e, "diam": d, "size": n} for e, d, n in m.rows()],
        "unique_solution": None if m.unique_solution is None else [f.X.label(m.unique_solution[0]),
                                                                   f.Y.label(m.unique_solution[1])],
    }


def probe_dict(f: BiFunction, probe: SolutionMapProbe) -> dict:
    def sample(smp):
        out = {
            "trial": smp.index,
            "source": smp.source,
            "distance": smp.distance,
            "solutions": [[f.X.label(i), f.Y.label(j)] for i, j in smp.solutions],
            "escaped": smp.escaped,
        }
        if smp.note:
            out["note"] = smp.note
        return out

    U, V = probe.target
    witness = None
    if probe.witness is not None:
        w = probe.witness
        witness = sample(w)
        if w.u is None:
            witness["z"] = _table(w.s)
        else:
            witness["s"] = _vec(w.s)
            witness["u"] = _vec(w.u)
    return {
        "convention": probe.convention,
        "seed": probe.seed,
        "budget": probe.rho,
        "trials": probe.trials,
        "target": {"U": _labels(f.X, U), "V": _labels(f.Y, V)},
        "verdict": probe.verdict,
        "witness": witness,
        "samples": [sample(s) for s in probe.samples],
        "notes": list(probe.notes),
    }


def counterexample_dict(rep: CounterexampleReport) -> dict:
    ex, ey = rep.saddle_exact
    return {
        "n": rep.n,
        "payoff": "x - y",
        "X": "(0,1)",
        "Y": "(0,1]",
        "V": encode_ext(rep.summary.V),
        "W": encode_ext(rep.summary.W),
        "gap": encode_ext(rep.summary.gap),
        "grid_saddles": len(rep.saddles),
        "saddle": [float(ex), float(ey)],
        "saddle_exact": [str(ex), str(ey)],
        "excluded_corner": [1, 1],
        "corner_distance": float(rep.corner_distance),
        "corner_distance_exact": str(rep.corner_distance),
    }


# -- emission --------------------------------------------------------------------

def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def decode_numbers(obj: Any) -> Any:
    """Inverse of the sentinel encoding, for round-tripping numeric payloads."""
    if isinstance(obj, list):
        return [decode_numbers(v) for v in obj]
    if isinstance(obj, dict):
        return {k: decode_numbers(v) for k, v in obj.items()}
    if isinstance(obj, str) and obj in ("+inf", "-inf"):
        return parse_ext(obj)
    return obj


def to_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if "modulus" in report:
        writer.writerow(["eps", "diam", "size"])
        for row in report["modulus"]["curve"]:
            writer.writerow([repr(row["eps"]), repr(row["diam"]), row["size"]])
    elif "probe" in report:
        writer.writerow(["trial", "source", "distance", "escaped", "solutions"])
        for s in report["probe"]["samples"]:
            writer.writerow([s["trial"], s["source"], repr(s["distance"]), s["escaped"],
                             " ".join(f"({a},{b})" for a, b in s["solutions"])])
    else:
        raise ValueError(f"command {report.get('command')!r} has no CSV curve")
    return buf.getvalue()


def _md_vec(values) -> str:
    return ", ".join(fmt(v if not isinstance(v, str) else parse_ext(v)) for v in values)


def to_markdown(report: dict) -> str:
    lines = [f"# {report['command']}", ""]
    if "problem" in report:
        p = report["problem"]
        lines.append(f"- problem: `{p['source']}` ({p['X']['size']} x {p['Y']['size']}, payoff from {p['payoff']})")
    lines.append(f"- tolerance: {fmt(report['tolerance'])}")
    if "summary" in report:
        s = report["summary"]
        gap = s["gap"] if s["gap"] == "undefined" else fmt(parse_ext(s["gap"]) if isinstance(s["gap"], str) else s["gap"])
        lines += [
            "",
            "## Summary",
            "",
            f"- v = ({_md_vec(s['v'])})",
            f"- w = ({_md_vec(s['w'])})",
            f"- V = {_md_vec([s['V']])}, W = {_md_vec([s['W']])}, gap = {gap}",
            f"- argmax v: {', '.join(s['sup_argset'])}; argmin w: {', '.join(s['inf_argset'])}",
        ]
    if "assumptions" in report:
        lines += ["", "## Assumptions", ""]
        lines += [f"- {k}: {'holds' if a['holds'] else 'fails'} ({a['detail']})" for k, a in report["assumptions"].items()]
    if "saddles" in report:
        pts = [f"({a},{b})" for a, b in (c["point"] for c in report["saddles"])]
        lines += ["", f"Saddle points: {', '.join(pts) if pts else 'none'}"]
    if "certificate" in report:
        c = report["certificate"]
        state = "valid" if c["valid"] else f"refused: {c.get('violation')}"
        lines += ["", f"Saddle check at ({c['point'][0]},{c['point'][1]}): {state}"]
    if "eps_saddle" in report:
        e = report["eps_saddle"]
        lines += ["", f"eps-saddle set for eps = {fmt(e['eps'])}: "
                  + (", ".join(f"({a},{b})" for a, b in e["members"]) or "empty")]
    for key in ("perturbation", "wellposed"):
        if key in report:
            pairs = [report[key]] if key == "perturbation" else [report[key]["base"], report[key]["sharpener"]]
            lines += ["", f"## {key.capitalize()}", ""]
            for pr in pairs:
                if "on_x" not in pr:
                    lines.append(f"- {pr['name']} = ({_md_vec(pr['values'])}), {pr['budget']['expression']}")
                    continue
                for side in ("on_x", "on_y"):
                    q = pr[side]
                    lines.append(f"- {q['name']} on {q['axis']} = ({_md_vec(q['values'])})")
                lines += [f"  - {t}" for t in pr["transcript"]]
    if "modulus" in report:
        lines += ["", "## Modulus", "", "| eps | diam | size |", "|---|---|---|"]
        lines += [f"| {fmt(r['eps'])} | {fmt(r['diam'])} | {r['size']} |" for r in report["modulus"]["curve"]]
        u = report["modulus"]["unique_solution"]
        lines += ["", f"Unique solution: {'(' + ','.join(u) + ')' if u else 'none'}"]
    if "probe" in report:
        p = report["probe"]
        lines += ["", "## Probe", "",
                  f"- verdict: **{p['verdict']}** (budget {fmt(p['budget'])}, {len(p['samples'])} samples, seed {p['seed']})",
                  f"- target: U = {{{', '.join(p['target']['U'])}}}, V = {{{', '.join(p['target']['V'])}}}"]
        if p["witness"]:
            w = p["witness"]
            lines.append(f"- witness: trial {w['trial']} ({w['source']}), distance {fmt(w['distance'])}, "
                         f"solutions {' '.join(f'({a},{b})' for a, b in w['solutions'])}")
        lines += [f"- note: {n}" for n in p["notes"]]
    if "counterexample" in report:
        c = report["counterexample"]
        lines += ["", "## Counterexample f(x,y) = x - y on (0,1) x (0,1]", "",
                  f"- n = {c['n']}, gap = {fmt(parse_ext(c['gap']) if isinstance(c['gap'], str) else c['gap'])}",
                  f"- grid saddle at ({c['saddle_exact'][0]}, {c['saddle_exact'][1]})",
                  f"- distance to the excluded corner (1,1): {c['corner_distance_exact']}"]
    if "verification" in report:
        lines += ["", "## Verification", ""] + [f"- {t}" for t in report["verification"]]
    return "\n".join(lines) + "\n"
