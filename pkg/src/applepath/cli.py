"""Command-line front end: ``applepath {fit,cv,simulate}``.

Exit codes: 0 success, 2 usage, 3 parse error, 4 response-domain error,
5 degenerate response, 6 singular system, 1 any other solver error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import (
    AppleError, CsvParseError, DegenerateResponseError, ResponseDomainError, SingularSystemError,
)
from .glm import Dataset
from .io import fmt, load_csv, write_cv_csv, write_path_csv
from .path import PathConfig, solve_path
from .penalty import PenaltySpec
from .selection import select_cv, select_ebic
from .simulation import example_spec, run_experiment
from .utils import standardize, unstandardize_coefs

logger = logging.getLogger("applepath")

EXIT_CODES = (
    (CsvParseError, 3, "parse error"),
    (ResponseDomainError, 4, "domain error"),
    (DegenerateResponseError, 5, "degenerate response"),
    (SingularSystemError, 6, "singular system"),
    (AppleError, 1, "solver error"),
)


def _solver_options(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    g.add_argument("--penalty", choices=("lasso", "mcp"), default="lasso")
    g.add_argument("--gamma", type=float, default=None, help="MCP concavity (> 1, default 3)")
    g.add_argument("--nlambda", type=int, default=100, help="grid size K")
    g.add_argument("--lambda-min-ratio", type=float, default=0.01, help="lambda_min / lambda_max")
    g.add_argument("--switch-c", type=float, default=1.0, help="Newton while nonzeros <= c sqrt(n)")
    g.add_argument("--saturation-eps", type=float, default=1e-6)
    g.add_argument("--max-active", type=int, default=None)
    g.add_argument("--tol", type=float, default=1e-7, help="corrector tolerance")
    g.add_argument("--approx", choices=("linear", "quadratic"), default="quadratic")
    g.add_argument("--select", choices=("ebic", "cv"), default=None)
    g.add_argument("--ebic-gamma", type=float, default=1.0)
    g.add_argument("--folds", type=int, default=None)
    g.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="applepath", description="LASSO/MCP solution paths for GLMs")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("fit", "fit a path and select by EBIC"), ("cv", "fit a path and select by K-fold CV")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True, help="CSV file with a header row")
        p.add_argument("--response", default="0", help="response column name or 0-based index")
        p.add_argument("--family", choices=("logistic", "poisson"), default="logistic")
        p.add_argument("--standardize", action="store_true", help="centre/scale columns; outputs on raw scale")
        p.add_argument("--plot", action="store_true", help="write path.svg")
        p.add_argument("--out", default=".", help="output directory")
        _solver_options(p)

    s = sub.add_parser("simulate", help="run a preset simulation design")
    s.add_argument("--example", type=int, choices=(1, 2), default=1, help="1 logistic, 2 Poisson")
    s.add_argument("--rho", type=float, default=0.0)
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--p", type=int, default=1000)
    s.add_argument("--d", type=int, choices=(3, 24), default=3)
    s.add_argument("--reps", type=int, default=100)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timing", action="store_true", help="add a fit-time column")
    s.add_argument("--out", default=None, help="output directory for report.csv")
    _solver_options(s)
    return parser


def _penalty(args) -> PenaltySpec:
    if args.penalty == "lasso":
        if args.gamma is not None:
            raise argparse.ArgumentTypeError("--gamma only applies to --penalty mcp")
        return PenaltySpec.lasso()
    return PenaltySpec.mcp(3.0 if args.gamma is None else args.gamma)


def _config(args) -> PathConfig:
    return PathConfig(K=args.nlambda, delta=args.lambda_min_ratio, c=args.switch_c,
                      epsilon=args.saturation_eps, max_active=args.max_active,
                      corr_tol=args.tol, approx_order=args.approx)


def _selection(args) -> str:
    sel = args.select or ("cv" if args.command == "cv" else "ebic")
    if args.command == "cv" and sel != "cv":
        raise argparse.ArgumentTypeError("the cv command always selects by cross-validation")
    if args.folds is not None and sel != "cv":
        raise argparse.ArgumentTypeError("--folds only applies to cross-validation")
    return sel


def _run_fit(args) -> int:
    pen, config, sel = _penalty(args), _config(args), _selection(args)
    response = int(args.response) if args.response.lstrip("-").isdigit() else args.response
    data = load_csv(args.input, response, args.family)
    scaling = None
    if args.standardize:
        Xs, scaling = standardize(data.X)
        data = Dataset(Xs, data.y, data.family)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if sel == "ebic":
        path = solve_path(data, pen, config)
        report = select_ebic(path, data, args.ebic_gamma)
    else:
        report = select_cv(data, pen, config, folds=args.folds or 5, seed=args.seed)
        path = report.path
    coefs = path.coefs if scaling is None else unstandardize_coefs(path.coefs, scaling)
    chosen = coefs[report.chosen_index]

    write_path_csv(out / "path.csv", path, coefs)
    summary = {
        "family": data.family.value,
        "penalty": pen.kind.value,
        "gamma": pen.gamma,
        "n": data.n,
        "p": data.p,
        "standardized": bool(args.standardize),
        "n_points": len(path.points),
        "stop_reason": path.stop_reason.value,
        "selection": sel,
        "chosen": {
            "k": report.chosen_index + 1,
            "lambda": report.chosen_lambda,
            "score": float(report.scores[report.chosen_index]),
            "nonzero": [int(j) for j in np.flatnonzero(chosen[1:]) + 1],
            "beta": [float(v) for v in chosen],
        },
    }
    if sel == "ebic":
        summary["chosen"]["ebic_gamma"] = args.ebic_gamma
    else:
        summary["chosen"]["folds"] = args.folds or 5
        write_cv_csv(out / "cv.csv", report)
    with (out / "summary.json").open("w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if args.plot:
        from .plotting import plot_path

        plot_path(path.lambdas, coefs, out / "path.svg", title=f"{pen.kind.value} {data.family.value}")
    print(f"{len(path.points)} path points ({path.stop_reason.value}); chosen lambda "
          f"{fmt(report.chosen_lambda)} with {len(summary['chosen']['nonzero'])} nonzero slopes")
    return 0


def _run_simulate(args) -> int:
    pen, config, sel = _penalty(args), _config(args), _selection(args)
    spec = example_spec(args.example, args.rho, n=args.n, p=args.p, d=args.d, reps=args.reps,
                        seed=args.seed, penalty=pen, config=config, selection=sel,
                        ebic_gamma=args.ebic_gamma, folds=args.folds or 5)
    report = run_experiment(spec, n_jobs=args.jobs)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.csv").write_text(report.to_csv(timing=args.timing))
    sys.stdout.write(report.to_text(timing=args.timing))
    if report.failures:
        print(f"{report.failures} repetition(s) failed with a degenerate response", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        return _run_fit(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except (ValueError, OSError, AppleError) as exc:
        for cls, code, label in EXIT_CODES:
            if isinstance(exc, cls):
                break
        else:
            code, label = (2, "invalid input") if isinstance(exc, ValueError) else (1, "I/O error")
        print(f"applepath: {label}: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
