"""Command-line front end.

Subcommands:

  simulate     run one trajectory and write a CSV file
  convergence  global-error table over a list of step sizes (CSV to stdout)
  check        invariant self-test suite

Configuration merges, lowest priority first: built-in defaults, a
``--config`` key=value file, a ``--preset``, then explicit flags.  Exit
codes: 0 success, 1 usage or configuration error, 2 numerical failure
(non-convergent Newton step, degenerate fit).
"""
from __future__ import annotations

import argparse
import sys as _sys

import numpy as np

from .algebra import validate_rotation
from .checks import run_check_suite
from .diagnostics import DegenerateFitError, convergence_errors, fit_order
from .integrators import StepFailure, normalize_method, simulate
from .system import SuslovSystem

CSV_HEADER = ("step,t,R11,R12,R13,R21,R22,R23,R31,R32,R33,"
              "Pi1,Pi2,Pi3,Omega1,Omega2,Omega3,"
              "energy,energy_err,constraint,ortho_defect,det_defect")

_IDENTITY9 = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)

DEFAULTS = {
    "method": None,
    "inertia": (1.0, 10.0, 100.0),
    "pi0": (1.0, 1.0, 0.0),
    "r0": _IDENTITY9,
    "dt": 0.01,
    "duration": None,
    "output_path": "trajectory.csv",
    "newton_tol": 1e-12,
    "newton_max_iter": 25,
}

_FIG1 = {
    "inertia": (1.0, 10.0, 100.0),
    "pi0": (1.0, 1.0, 0.0),
    "r0": _IDENTITY9,
    "dt": 0.01,
    "duration": 1800.0,
}

PRESETS = {
    "fig1": dict(_FIG1),
    "fig1-exp": dict(_FIG1, method="lps-exp"),
    "fig1-cay": dict(_FIG1, method="lps-cay"),
    "fig2": dict(_FIG1, method="lp-exp", duration=18.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; we reserve 2 for numerics
    def error(self, message):
        raise UsageError(message)


def _floats(text: str, name: str, counts) -> tuple:
    try:
        vals = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}")
    if len(vals) not in counts:
        want = " or ".join(str(c) for c in counts)
        raise UsageError(f"{name}: expected {want} values, got {len(vals)}")
    return vals


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "method":
        return raw
    if key == "inertia":
        return _floats(raw, "inertia", (3,))
    if key == "pi0":
        return _floats(raw, "pi0", (2, 3))
    if key == "r0":
        if raw == "identity":
            return _IDENTITY9
        return _floats(raw, "r0", (9,))
    if key in ("dt", "duration", "newton_tol"):
        try:
            return float(raw)
        except ValueError:
            raise UsageError(f"{key}: expected a number, got {raw!r}")
    if key == "newton_max_iter":
        try:
            return int(raw)
        except ValueError:
            raise UsageError(f"newton_max_iter: expected an integer, got {raw!r}")
    if key == "output_path":
        return raw
    raise UsageError(f"unknown config key {key!r}")


def read_config_file(path: str) -> dict:
    """Line-oriented ``key = value`` text; blank lines and # comments allowed."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}")
    out = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, raw = stripped.partition("=")
        out[key.strip()] = _parse_value(key.strip(), raw)
    return out


def _merge_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config_file(args.config))
    if getattr(args, "preset", None):
        if args.preset not in PRESETS:
            raise UsageError(
                f"unknown preset {args.preset!r} (known: {', '.join(sorted(PRESETS))})")
        cfg.update(PRESETS[args.preset])
    for key, flag in (("method", "method"), ("inertia", "inertia"),
                      ("pi0", "pi0"), ("r0", "r0"), ("dt", "dt"),
                      ("duration", "duration"), ("output_path", "out"),
                      ("newton_tol", "newton_tol"),
                      ("newton_max_iter", "newton_max_iter")):
        val = getattr(args, flag, None)
        if val is not None:
            cfg[key] = _parse_value(key, val) if isinstance(val, str) else val
    return cfg


def _build_run(cfg: dict):
    if not cfg["method"]:
        raise UsageError("no method selected (use --method or a method preset)")
    try:
        method = normalize_method(cfg["method"])
    except ValueError as exc:
        raise UsageError(str(exc))
    try:
        system = SuslovSystem(np.array(cfg["inertia"], dtype=float))
    except ValueError as exc:
        raise UsageError(f"inertia: {exc}")
    try:
        r0 = validate_rotation(np.array(cfg["r0"], dtype=float).reshape(3, 3))
    except ValueError as exc:
        raise UsageError(f"r0: {exc}")
    pi0 = np.array(cfg["pi0"], dtype=float)
    if method in ("lps-exp", "lps-cay"):
        if pi0.shape == (3,):
            if pi0[2] != 0.0:
                raise UsageError(
                    "pi0: the third momentum component must be 0 for the "
                    "constraint-adapted methods")
            pi0 = pi0[:2]
    else:
        if pi0.shape == (2,):
            pi0 = np.array([pi0[0], pi0[1], 0.0])
    if cfg["dt"] is None or cfg["dt"] <= 0.0:
        raise UsageError(f"dt must be positive, got {cfg['dt']}")
    return method, system, r0, pi0


def write_trajectory_csv(path: str, traj) -> None:
    n = len(traj)
    table = np.column_stack([
        np.arange(n, dtype=float), traj.t, traj.R.reshape(n, 9),
        traj.Pi, traj.Omega, traj.energy, traj.energy_err,
        traj.constraint, traj.ortho_defect, traj.det_defect,
    ])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        np.savetxt(fh, table, fmt=["%d"] + ["%.17g"] * 21, delimiter=",")


def cmd_simulate(args) -> int:
    cfg = _merge_config(args)
    method, system, r0, pi0 = _build_run(cfg)
    if cfg["duration"] is None:
        raise UsageError("no duration given (use --duration or a preset)")
    try:
        traj = simulate(system, method, (r0, pi0), cfg["dt"], cfg["duration"],
                        newton_tol=cfg["newton_tol"],
                        newton_max_iter=cfg["newton_max_iter"])
    except ValueError as exc:
        raise UsageError(str(exc))
    except StepFailure as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    try:
        write_trajectory_csv(cfg["output_path"], traj)
    except OSError as exc:
        raise UsageError(f"cannot write {cfg['output_path']}: {exc}")
    print(f"wrote {cfg['output_path']}: {len(traj)} rows "
          f"({method}, dt={cfg['dt']:g}, duration={cfg['duration']:g})")
    return 0


def cmd_convergence(args) -> int:
    cfg = _merge_config(args)
    method, system, r0, pi0 = _build_run(cfg)
    if pi0.shape == (3,):
        if pi0[2] != 0.0:
            raise UsageError("pi0: convergence studies start on the constraint")
        pi0 = pi0[:2]
    if args.dts is None:
        raise UsageError("--dts is required (comma-separated, strictly decreasing)")
    dts = list(_floats(args.dts, "dts", range(1, 65)))
    T = cfg["duration"] if cfg["duration"] is not None else 1.0
    from .system import SuslovState
    state0 = SuslovState(r0, pi0)
    try:
        errs = convergence_errors(system, method, state0, T, dts)
    except ValueError as exc:
        raise UsageError(str(exc))
    except StepFailure as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    print("dt,global_error")
    for dt, err in zip(dts, errs):
        print(f"{dt:.17g},{err:.17g}")
    try:
        order = fit_order(dts, errs)
    except DegenerateFitError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    print(f"# fitted_order = {order:.17g}")
    return 0


def cmd_check(args) -> int:
    results = run_check_suite(seed=args.seed, samples=args.samples)
    for res in results:
        print(res.line())
    if all(r.passed for r in results):
        print("all checks passed")
        return 0
    return 2


def _add_run_flags(sub, convergence: bool = False):
    sub.add_argument("--method", help="lps-exp, lps-cay or lp-exp")
    sub.add_argument("--inertia", metavar="a,b,c",
                     help="diagonal inertia entries (default 1,10,100)")
    sub.add_argument("--pi0", metavar="x,y[,z]",
                     help="initial momentum (default 1,1,0)")
    sub.add_argument("--r0", metavar="r11,...,r33",
                     help="initial rotation, row-major, or 'identity'")
    sub.add_argument("--dt", type=float, help="step size (default 0.01)")
    sub.add_argument("--duration", type=float, help="total simulated time")
    sub.add_argument("--out", help="output CSV path (default trajectory.csv)")
    sub.add_argument("--preset", help="fig1, fig1-exp, fig1-cay or fig2")
    sub.add_argument("--config", help="key = value configuration file")
    sub.add_argument("--newton-tol", dest="newton_tol", type=float)
    sub.add_argument("--newton-max-iter", dest="newton_max_iter", type=int)
    if convergence:
        sub.add_argument("--dts", metavar="d1,d2,...",
                         help="strictly decreasing step sizes (at least 3)")


def build_parser() -> _Parser:
    parser = _Parser(prog="suslov",
                     description="Constraint-preserving integrators for the "
                                 "Suslov rigid body.")
    subs = parser.add_subparsers(dest="command")
    sim = subs.add_parser("simulate", help="run one trajectory, write CSV")
    _add_run_flags(sim)
    conv = subs.add_parser("convergence",
                           help="global-error table over step sizes")
    _add_run_flags(conv, convergence=True)
    chk = subs.add_parser("check", help="run the invariant self-tests")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--samples", type=int, default=1000)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "convergence":
            return cmd_convergence(args)
        if args.command == "check":
            if args.samples < 1:
                raise UsageError("--samples must be at least 1")
            return cmd_check(args)
        raise UsageError("missing subcommand (simulate, convergence or check)")
    except UsageError as exc:
        print(f"usage error: {exc}", file=_sys.stderr)
        return 1


def main_entry() -> None:
    _sys.exit(main())
