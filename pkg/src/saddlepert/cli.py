"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 theorem precondition unmet,
3 internal verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import report as rep
from .errors import InputError, SaddlePertError, VerificationError
from .minimax import (
    DEFAULT_TOL,
    check_assumptions,
    discretized_counterexample,
    enumerate_saddles,
    eps_saddle_set,
    is_saddle,
    summarize,
)
from .perturb import (
    eps_saddle_perturbation,
    infsup_perturbation,
    kr_min_perturbation,
    kr_strong_min_perturbation,
    saddle_perturbation,
    supinf_perturbation,
    wellposed_perturbation,
)
from .problem import ProblemFile, parse_problem
from .space import ScalarField
from .verify import all_saddles_by_definition, reverify
from .wellposed import DEFAULT_EPS_GRID, modulus, product_usc_probe, usc_adversary_probe

TOL_ENV = "SADDLEPERT_TOL"
MODES = ("min", "strong-min", "supinf", "infsup", "saddle", "eps-saddle", "wellposed")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "md", "csv"), default="json")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")
    common.add_argument("--tol", type=float, help=f"absolute tolerance (env {TOL_ENV}, default {DEFAULT_TOL})")
    common.add_argument("--verify", choices=("exhaustive",), help="re-run postconditions with definition-level loops")

    parser = _Parser(prog="saddlepert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="value functions, gap, assumptions, saddle points")
    p.add_argument("problem")

    p = sub.add_parser("saddle-check", parents=[common], help="certify or refuse a saddle point")
    p.add_argument("problem")
    p.add_argument("x0")
    p.add_argument("y0")

    p = sub.add_parser("eps-saddle", parents=[common], help="eps-saddle set (zero gap only)")
    p.add_argument("problem")
    p.add_argument("eps", type=float)

    p = sub.add_parser("perturb", parents=[common], help="synthesize and verify a perturbation")
    p.add_argument("problem")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--at", required=True, help="x0,y0 (or a single point for min / strong-min)")
    p.add_argument("--function", choices=("w", "neg-v"), default="w",
                   help="one-variable function for min / strong-min: w on Y, or -v on X")
    p.add_argument("--eps", type=float)
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--n-terms", type=int, default=53)

    p = sub.add_parser("wellposed", parents=[common], help="eps-saddle diameter modulus")
    p.add_argument("problem")
    p.add_argument("--eps-grid", type=_float_list, default=list(DEFAULT_EPS_GRID))

    p = sub.add_parser("probe-usc", parents=[common], help="adversarial probe of the solution map")
    p.add_argument("problem")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--seed", type=int)
    p.add_argument("--target", help="U;V as comma-separated labels, e.g. 'x1,x2;y1'")
    p.add_argument("--joint", action="store_true", help="probe with joint perturbations z(x,y)")

    p = sub.add_parser("counterexample", parents=[common], help="f(x,y) = x - y on (0,1) x (0,1] at resolution n")
    p.add_argument("--n", type=int, required=True)
    return parser


def _tolerance(args, problem: ProblemFile | None) -> float:
    if args.tol is not None:
        return args.tol
    if problem is not None and "tolerance" in problem.options:
        return float(problem.options["tolerance"])
    env = os.environ.get(TOL_ENV)
    if env:
        try:
            return float(env)
        except ValueError:
            raise InputError(f"{TOL_ENV}={env!r} is not a number") from None
    return DEFAULT_TOL


def _need(value, name: str, problem: ProblemFile, key: str | None = None):
    if value is None and problem is not None:
        value = problem.options.get(key or name)
    if value is None:
        raise InputError(f"--{name.replace('_', '-')} is required for this mode")
    return float(value)


def _point_pair(problem: ProblemFile, text: str) -> tuple[int, int]:
    parts = [t.strip() for t in text.split(",")]
    if len(parts) != 2:
        raise InputError(f"--at expects x0,y0, got {text!r}")
    return problem.X.index(parts[0]), problem.Y.index(parts[1])


def _base_report(command: str, tol: float, problem: ProblemFile | None) -> dict:
    out = {"schema": rep.SCHEMA_VERSION, "command": command, "tolerance": tol}
    if problem is not None:
        out["problem"] = {
            "source": problem.source,
            "payoff": problem.payoff_source if problem.expr is None else f"expr: {problem.expr}",
            "X": rep.space_dict(problem.X),
            "Y": rep.space_dict(problem.Y),
        }
    return out


def _perturb(args, problem: ProblemFile, tol: float, out: dict) -> object:
    f = problem.f
    mode = args.mode
    if mode in ("min", "strong-min"):
        s = summarize(f)
        if args.function == "w":
            field, at = s.w, problem.Y.index(args.at.strip())
        else:
            field, at = ScalarField(problem.X, -s.v.values), problem.X.index(args.at.strip())
        if mode == "min":
            h = kr_min_perturbation(field, at, tol)
        else:
            h = kr_strong_min_perturbation(field, at, _need(args.eps, "eps", problem), tol)
        out["perturbation"] = rep.perturbation_dict(h)
        out["perturbation"]["function"] = args.function
        out["perturbation"]["transcript"] = [h.describe(), f"minimum of f + h attained at {field.space.label(at)}"]
        return None
    x0, y0 = _point_pair(problem, args.at)
    if mode == "supinf":
        obj = supinf_perturbation(f, x0, y0, _need(args.eps, "eps", problem), _need(args.delta, "delta", problem), tol)
    elif mode == "infsup":
        obj = infsup_perturbation(f, x0, y0, _need(args.eps, "eps", problem), _need(args.delta, "delta", problem), tol)
    elif mode == "saddle":
        obj = saddle_perturbation(f, x0, y0, _need(args.eps1, "eps1", problem), _need(args.eps2, "eps2", problem), tol)
    elif mode == "eps-saddle":
        obj = eps_saddle_perturbation(f, x0, y0, _need(args.eps, "eps", problem), tol)
    else:
        obj = wellposed_perturbation(f, x0, y0, _need(args.eps1, "eps1", problem), _need(args.eps2, "eps2", problem),
                                     _need(args.delta, "delta", problem), args.n_terms, tol)
        out["wellposed"] = rep.wellposed_dict(obj)
        return obj
    out["perturbation"] = rep.pair_dict(obj)
    return obj


def _parse_target(problem: ProblemFile, text: str | None):
    if text is None:
        return None
    if ";" not in text:
        raise InputError(f"--target expects 'U;V', got {text!r}")
    us, vs = text.split(";", 1)
    U = [problem.X.index(t.strip()) for t in us.split(",") if t.strip()]
    V = [problem.Y.index(t.strip()) for t in vs.split(",") if t.strip()]
    return U, V


def run(args) -> dict:
    if args.command == "counterexample":
        tol = _tolerance(args, None)
        out = _base_report("counterexample", tol, None)
        out["counterexample"] = rep.counterexample_dict(discretized_counterexample(args.n))
        return out

    problem = parse_problem(args.problem)
    tol = _tolerance(args, problem)
    f = problem.f
    out = _base_report(args.command, tol, problem)

    if args.command == "analyze":
        s = summarize(f)
        out["summary"] = rep.summary_dict(f, s)
        out["assumptions"] = rep.assumptions_dict(check_assumptions(f, s))
        out["saddles"] = [rep.certificate_dict(f, c) for c in enumerate_saddles(f)]
    elif args.command == "saddle-check":
        cert = is_saddle(f, problem.X.index(args.x0), problem.Y.index(args.y0), tol)
        out["certificate"] = rep.certificate_dict(f, cert)
    elif args.command == "eps-saddle":
        s = summarize(f)
        out["summary"] = rep.summary_dict(f, s)
        out["eps_saddle"] = rep.eps_set_dict(f, eps_saddle_set(f, args.eps, tol, s))
    elif args.command == "perturb":
        obj = _perturb(args, problem, tol, out)
        if args.verify == "exhaustive" and obj is not None:
            out["verification"] = reverify(obj, tol)
    elif args.command == "wellposed":
        out["modulus"] = rep.modulus_dict(f, modulus(f, args.eps_grid, tol))
    elif args.command == "probe-usc":
        seed = args.seed if args.seed is not None else int(problem.options.get("seed", 0))
        target = _parse_target(problem, args.target)
        probe = (product_usc_probe if args.joint else usc_adversary_probe)(
            f, target=target, rho=args.rho, trials=args.trials, seed=seed, tol=tol
        )
        out["probe"] = rep.probe_dict(f, probe)
        if args.verify == "exhaustive":
            out["verification"] = _reverify_probe(f, probe)
    return out


def _reverify_probe(f, probe) -> list[str]:
    w = probe.witness
    if w is None:
        return [f"exhaustive: no witness; {len(probe.samples)} samples stayed inside the target"]
    table = f.values + (w.s if w.u is None else w.s[:, None] + w.u[None, :])
    found = all_saddles_by_definition(table.tolist())
    U, V = probe.target
    if w.distance > probe.rho or all(i in U and j in V for i, j in found):
        raise VerificationError("exhaustive: probe witness does not escape within budget")
    return [f"exhaustive: witness within budget {probe.rho!r}; solutions {found} leave the target"]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = run(args)
        if args.format == "json":
            text = rep.to_json(out)
        elif args.format == "md":
            text = rep.to_markdown(out)
        else:
            try:
                text = rep.to_csv(out)
            except ValueError as exc:
                raise InputError(str(exc)) from None
    except SaddlePertError as exc:
        print(f"saddlepert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
