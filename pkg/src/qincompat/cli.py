"""Command-line front end over the JSON interchange format.

Exit codes: 0 success (pass / undetected / feasible / within bound), 1 bad input,
2 validation failed, 3 incompatible / infeasible / violation, 4 inconclusive,
5 solver failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bell import chsh_max_general, chsh_max_qubit, restricted_tau
from .chamber import chamber_export, export_csv
from .errors import IncompatError, SolverError, ValidationError
from .io import (InputError, dumps, fixture_names, load_json, load_povm, observable_from_json,
                 param_point_from_json, povm_from_json, stochastic_from_json)
from .measures import noise_threshold, robustness, tau, uncertainty_check, uncertainty_check_eta
from .povm import validate
from .sdp import DEFAULT_MAX_ITER, DEFAULT_TOL, joint_feasibility

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_POSITIVE, EXIT_INCONCLUSIVE, EXIT_SOLVER = range(6)
TOL_ENV = "INCOMPAT_TOL"


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InputError("tolerance must be positive", "--tolerance")
        if self.max_iter < 1:
            raise InputError("max-iter must be at least 1", "--max-iter")


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"cannot parse {raw!r} as a number", TOL_ENV) from None


def _vector(text: str, name: str) -> np.ndarray:
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise InputError(f"expected three comma-separated numbers, got {text!r}", name) from None
    if v.shape != (3,):
        raise InputError(f"expected three comma-separated numbers, got {text!r}", name)
    return v


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json_only(cfg: RunConfig, command: str) -> None:
    if cfg.format != "json":
        raise InputError(f"format {cfg.format!r} is not available for {command}", "--format")


def _load_povms(sources: list[str]):
    povms = [load_povm(s) for s in sources]
    dims = {p.dim for p in povms}
    if len(dims) > 1:
        raise InputError(f"POVMs have different dimensions {sorted(dims)}", ", ".join(sources))
    return povms


def _with_inputs(doc: dict, sources: list[str], cfg: RunConfig) -> dict:
    return {"inputs": list(sources), **doc, "tolerance": cfg.tolerance}


def cmd_validate(args, cfg: RunConfig) -> int:
    _json_only(cfg, "validate")
    data, loc = load_json(args.povm)
    p = povm_from_json(data, loc)
    report = validate(p, cfg.tolerance)
    doc = report.to_dict()
    doc["message"] = report.message()
    _emit(cfg, dumps(_with_inputs(doc, [args.povm], cfg)))
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_tau(args, cfg: RunConfig) -> int:
    _json_only(cfg, "tau")
    povms = _load_povms(args.povms)
    rep = tau(povms, tol=cfg.tolerance, max_iter=cfg.max_iter)
    doc = rep.to_dict()
    doc["noise_threshold"] = noise_threshold(povms, tol=cfg.tolerance)
    _emit(cfg, dumps(_with_inputs(doc, args.povms, cfg)))
    return EXIT_POSITIVE if rep.verdict == "incompatible" else EXIT_OK


def cmd_check_joint(args, cfg: RunConfig) -> int:
    _json_only(cfg, "check-joint")
    povms = _load_povms(args.povms)
    sol = joint_feasibility(povms, tol=cfg.tolerance, max_iter=cfg.max_iter)
    _emit(cfg, dumps(_with_inputs(sol.to_dict(), args.povms, cfg)))
    return {"feasible": EXIT_OK, "infeasible": EXIT_POSITIVE}.get(sol.status, EXIT_INCONCLUSIVE)


def cmd_robustness(args, cfg: RunConfig) -> int:
    _json_only(cfg, "robustness")
    povms = _load_povms(args.povms)
    res = robustness(povms, tol=args.bisection_tol, feas_tol=cfg.tolerance, max_iter=cfg.max_iter)
    doc = res.to_dict()
    doc["bisection_tolerance"] = doc.pop("tolerance")
    _emit(cfg, dumps(_with_inputs(doc, args.povms, cfg)))
    return EXIT_OK


def cmd_uncertainty(args, cfg: RunConfig) -> int:
    _json_only(cfg, "uncertainty")
    povms = _load_povms(args.povms)
    pt = None
    if args.point:
        data, loc = load_json(args.point)
        pt = param_point_from_json(data, loc)
    if (args.eta is None) == (args.lambdas is None):
        raise InputError("give exactly one of --eta or --lambda", "uncertainty")
    if args.eta is not None:
        try:
            etas = [float(x) for x in args.eta.split(",")]
        except ValueError:
            raise InputError(f"cannot parse {args.eta!r}", "--eta") from None
        if len(etas) not in (1, len(povms)):
            raise InputError("give one eta or one per POVM", "--eta")
        res = uncertainty_check_eta(povms, etas if len(etas) > 1 else etas[0], pt, cfg.tolerance)
        noise = {"eta": etas}
    else:
        lambdas = []
        for src in args.lambdas:
            data, loc = load_json(src)
            lambdas.append(stochastic_from_json(data, loc))
        res = uncertainty_check(povms, lambdas, pt, cfg.tolerance)
        noise = {"lambda": list(args.lambdas)}
    _emit(cfg, dumps(_with_inputs({**noise, **res.to_dict()}, args.povms, cfg)))
    return EXIT_POSITIVE if res.verdict == "violates-QM-bound" else EXIT_OK


def cmd_chsh(args, cfg: RunConfig) -> int:
    _json_only(cfg, "chsh")
    if args.qubit:
        a, b = _vector(args.qubit[0], "a"), _vector(args.qubit[1], "b")
        doc = {"max_violation": chsh_max_qubit(a, b), "local_bound": 1.0}
        sources = [args.qubit[0], args.qubit[1]]
    else:
        if len(args.observables) != 2:
            raise InputError("expected two observable files or --qubit a b", "chsh")
        ops = []
        for src in args.observables:
            data, loc = load_json(src)
            ops.append(observable_from_json(data, loc))
        if ops[0].shape != ops[1].shape:
            raise InputError("observables have different dimensions", ", ".join(args.observables))
        res = chsh_max_general(*ops)
        doc = res.to_dict()
        doc["restricted_tau"] = restricted_tau(*ops, result=res)
        sources = list(args.observables)
    _emit(cfg, dumps(_with_inputs(doc, sources, cfg)))
    return EXIT_OK


def cmd_chamber_export(args, cfg: RunConfig) -> int:
    s = _vector(args.s, "--s")
    rows = chamber_export(s, args.n, seed=cfg.seed)
    meta = {"s": s, "seed": cfg.seed, "n": args.n, "tolerance": cfg.tolerance,
            "columns": ["i11", "i12", "i13", "i22", "i23", "i33"]}
    if cfg.format == "csv":
        _emit(cfg, export_csv(rows))
        if cfg.output:
            Path(cfg.output).with_suffix(".meta.json").write_text(dumps(meta))
    else:
        _emit(cfg, dumps({**meta, "rows": rows}))
    return EXIT_OK


def cmd_fixtures(args, cfg: RunConfig) -> int:
    _emit(cfg, "".join(f"fixture:{n}\n" for n in fixture_names()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=None,
                        help=f"decision tolerance (default 1e-7, or ${TOL_ENV})")
    common.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--output", "-o", default=None, help="write to this path instead of stdout")

    parser = argparse.ArgumentParser(prog="qincompat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    inputs = "POVM JSON files or fixture:NAME references"

    p = sub.add_parser("validate", parents=[common], help="check positivity and completeness")
    p.add_argument("povm")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("tau", parents=[common], help="incompatibility measure")
    p.add_argument("povms", nargs="+", help=inputs)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("check-joint", parents=[common], help="joint measurability test")
    p.add_argument("povms", nargs="+", help=inputs)
    p.set_defaults(func=cmd_check_joint)

    p = sub.add_parser("robustness", parents=[common], help="noise robustness by bisection")
    p.add_argument("povms", nargs="+", help=inputs)
    p.add_argument("--bisection-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("uncertainty", parents=[common], help="noisy uncertainty check")
    p.add_argument("povms", nargs="+", help=inputs)
    p.add_argument("--eta", help="visibility, one value or comma-separated per POVM")
    p.add_argument("--lambda", dest="lambdas", nargs="+", help="stochastic matrix files")
    p.add_argument("--point", help="parameter point JSON (default: maximally mixed state)")
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("chsh", parents=[common], help="maximal CHSH violation")
    p.add_argument("observables", nargs="*", help="two +-1 observable files")
    p.add_argument("--qubit", nargs=2, metavar=("A", "B"), help="Bloch axes a1,a2,a3 b1,b2,b3")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("chamber-export", parents=[common], help="boundary Fisher point cloud")
    p.add_argument("--s", required=True, help="Bloch vector s1,s2,s3")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_chamber_export, default_format="csv")

    p = sub.add_parser("fixtures", parents=[common], help="list bundled fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        tol = args.tolerance if args.tolerance is not None else default_tolerance()
        fmt = args.format or getattr(args, "default_format", "json")
        cfg = RunConfig(tol, args.max_iter, args.seed, args.output, fmt)
        return args.func(args, cfg)
    except SolverError as exc:
        sys.stdout.write(dumps({"error": "solver", "message": str(exc), "lower_bound": exc.lower,
                                "upper_bound": exc.upper, "iterations": exc.iterations}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (ValidationError, IncompatError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
