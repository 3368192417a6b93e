"""Command line driver.

``belavin-lab check <name> [options]`` runs one check and writes its JSON
report; ``belavin-lab all [--config PATH]`` runs the full suite;
``belavin-lab flow ...`` integrates a classical trajectory to CSV.

Exit codes: 0 pass, 1 check failed, 2 usage error or unknown check,
3 degenerate parameters after 100 resampling attempts.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields, replace

import numpy as np

from . import classical
from .checks import REGISTRY, RunConfig, flow_from_seed, run_all, run_check
from .errors import DegenerateParameter

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3


def _complex(text: str) -> complex:
    """Parse ``RE,IM``."""
    try:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from exc


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="belavin-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("check", help="run one registered check")
    c.add_argument("name")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--samples", type=int)
    c.add_argument("--tol", type=float)
    c.add_argument("--tau", type=_complex)
    c.add_argument("--eta", type=_complex)
    c.add_argument("--eps", type=float)
    c.add_argument("--out", help="report path (default: stdout)")

    a = sub.add_parser("all", help="run the whole suite")
    a.add_argument("--config", help="JSON file with RunConfig fields, 'checks' overrides and 'out'")
    a.add_argument("--out", help="summary path (overrides the config file)")

    f = sub.add_parser("flow", help="integrate a classical flow to CSV")
    f.add_argument("--kind", default="rational", choices=("sinh", "rational"))
    f.add_argument("--n", type=int, default=3)
    f.add_argument("--dt", type=float, default=1e-3)
    f.add_argument("--steps", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True)
    return ap


def _config_from_mapping(d: dict) -> RunConfig:
    known = {fl.name for fl in fields(RunConfig)}
    bad = set(d) - known
    if bad:
        raise ValueError(f"unknown config keys: {sorted(bad)}")
    d = dict(d)
    for key in ("tau", "eta"):
        if isinstance(d.get(key), list):
            d[key] = complex(*d[key])
        elif isinstance(d.get(key), str):
            d[key] = _complex(d[key])
    for key in ("im_tau_schedule", "chi_schedule"):
        if key in d:
            d[key] = tuple(d[key])
    return RunConfig(**d)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_check(args) -> int:
    if args.name not in REGISTRY:
        print(f"unknown check {args.name!r}; known: {', '.join(REGISTRY)}", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(n=args.n, seed=args.seed, samples=args.samples, tol=args.tol)
    if args.tau is not None:
        cfg = replace(cfg, tau=args.tau)
    if args.eta is not None:
        cfg = replace(cfg, eta=args.eta)
    if args.eps is not None:
        cfg = replace(cfg, eps=args.eps)
    try:
        report = run_check(args.name, cfg)
    except DegenerateParameter as exc:
        print(f"degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    _emit(report.to_json(), args.out)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_all(args) -> int:
    raw: dict = {}
    if args.config:
        with open(args.config) as fh:
            raw = json.load(fh)
    overrides = raw.pop("checks", {})
    names = raw.pop("only", None)
    out = args.out or raw.pop("out", None)
    raw.pop("out", None)
    try:
        cfg = _config_from_mapping(raw)
    except (TypeError, ValueError) as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    unknown = [k for k in list(overrides) + list(names or []) if k not in REGISTRY]
    if unknown:
        print(f"unknown checks in config: {unknown}", file=sys.stderr)
        return EXIT_USAGE
    summary = run_all(cfg, overrides, names)
    _emit(json.dumps(summary, indent=2, sort_keys=True), out)
    for name, ok in summary["summary"].items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}", file=sys.stderr)
    return EXIT_PASS if summary["all_passed"] else EXIT_FAIL


def cmd_flow(args) -> int:
    rng = np.random.default_rng(args.seed)
    H = classical.ClassicalHamiltonian(args.kind, args.n)
    _, traj, rejected = flow_from_seed(H, rng, args.dt, args.steps)
    traj.write_csv(args.out)
    if rejected:
        print(f"{rejected} colliding initial points redrawn", file=sys.stderr)
    if traj.aborted:
        print(f"flow aborted after {len(traj.t) - 1} steps: {traj.aborted}", file=sys.stderr)
        return EXIT_FAIL
    print(f"H drift {traj.max_relative_drift('H'):.3e}, F_2 drift {traj.max_relative_drift('F2'):.3e}",
          file=sys.stderr)
    return EXIT_PASS


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return {"check": cmd_check, "all": cmd_all, "flow": cmd_flow}[args.cmd](args)


if __name__ == "__main__":
    sys.exit(main())
