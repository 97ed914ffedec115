"""Command-line entry point: ``subopt {solve,bench,cluster,cheby}``.

Exit codes: 0 success, 1 an unsuccessful run, 2 a configuration error.
Every flag may also come from a ``--config`` file of ``key=value`` lines
(keys spelled like the flags, without dashes); flags on the command line win.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .core import ParameterError, SolverParams, Status, validate_params

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# Values used when neither the command line nor the config file sets a flag.
_DEFAULTS = {
    "solve": {"n": 10, "eta": 1e-8, "seed": 0, "reset_theta": 0.9},
    "bench": {"problems": "all", "solvers": "subopt", "n": 10, "seed": 0, "workers": 1},
    "cluster": {"eta": 1e-8, "seed": 0},
    "cheby": {"eta": 1e-8},
}
_REQUIRED = {
    "solve": ("problem",),
    "bench": ("out",),
    "cluster": ("data", "kappa", "out"),
    "cheby": ("target", "degree", "out"),
}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="subopt", description="Descent subgradient solver for nonsmooth objectives.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file with defaults for these flags")
        return p

    s = common(sub.add_parser("solve", help="minimize one test problem"))
    s.add_argument("--problem")
    s.add_argument("--n", type=int)
    s.add_argument("--eta", type=float)
    s.add_argument("--seed", type=int)
    s.add_argument("--reset-m", dest="reset_m", type=int, help="enable the bundle reset with this cap")
    s.add_argument("--reset-theta", dest="reset_theta", type=float)
    s.add_argument("--trace", help="CSV file for the per-iteration trace")

    b = common(sub.add_parser("bench", help="run a solver x problem grid"))
    b.add_argument("--problems", help="comma-separated names or 'all'")
    b.add_argument("--solvers", help="comma-separated subset of subopt,subg,gs")
    b.add_argument("--n", type=int)
    b.add_argument("--seed", type=int)
    b.add_argument("--out")
    b.add_argument("--profile", choices=("evals", "time"))
    b.add_argument("--workers", type=int)

    c = common(sub.add_parser("cluster", help="cluster points from a CSV file"))
    c.add_argument("--data")
    c.add_argument("--kappa", type=int)
    c.add_argument("--eta", type=float)
    c.add_argument("--seed", type=int)
    c.add_argument("--out")

    h = common(sub.add_parser("cheby", help="uniform polynomial approximation"))
    h.add_argument("--target")
    h.add_argument("--degree", type=int)
    h.add_argument("--interval", nargs=2, type=float, metavar=("A", "B"))
    h.add_argument("--eta", type=float)
    h.add_argument("--out")
    return parser


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise ConfigError(f"unknown command {command}")


def read_config(path) -> dict[str, str]:
    entries = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        entries[key.lstrip("-").replace("-", "_")] = value
    return entries


def merge_config(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file, then from defaults; check required flags."""
    if ns.config:
        actions = {a.dest: a for a in _subparser(parser, ns.command)._actions}
        for key, text in read_config(ns.config).items():
            if key not in actions or key in ("config", "help"):
                raise ConfigError(f"unknown config key {key!r} for {ns.command}")
            if getattr(ns, key) is not None:
                continue
            action = actions[key]
            conv = action.type or str
            try:
                if action.nargs == 2:
                    parts = text.replace(",", " ").split()
                    if len(parts) != 2:
                        raise ValueError(text)
                    value = [conv(p) for p in parts]
                else:
                    value = conv(text)
            except ValueError:
                raise ConfigError(f"bad value {text!r} for {key}") from None
            if action.choices is not None and value not in action.choices:
                raise ConfigError(f"{key} must be one of {', '.join(action.choices)}")
            setattr(ns, key, value)
    for key, value in _DEFAULTS[ns.command].items():
        if getattr(ns, key) is None:
            setattr(ns, key, value)
    missing = [k for k in _REQUIRED[ns.command] if getattr(ns, k) is None]
    if missing:
        raise ConfigError("missing required setting(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return ns


def _params(ns, **extra) -> SolverParams:
    fields = {"eta": ns.eta, **extra}
    try:
        return validate_params(SolverParams(**fields))
    except ParameterError as exc:
        raise ConfigError(str(exc)) from None


def _cmd_solve(ns) -> int:
    from .inner import CSVTrace
    from .outer import solve
    from .problems import canonical_name, make_problem, random_start, reference_value, relative_error

    try:
        name = canonical_name(ns.problem)
        oracle, spec = make_problem(name, ns.n)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    extra = {}
    if ns.reset_m is not None:
        extra = {"reset_enabled": True, "reset_M": ns.reset_m, "reset_theta": ns.reset_theta}
    params = _params(ns, **extra)
    x0 = random_start(spec.default_start, ns.n, ns.seed)
    if ns.trace:
        with CSVTrace(ns.trace) as trace:
            x, report = solve(oracle, x0, params, observer=trace)
    else:
        x, report = solve(oracle, x0, params)
    f_star = reference_value(name, ns.n)
    err = relative_error(report.f_end, f_star)
    print(f"problem {name}  n {ns.n}  seed {ns.seed}")
    print(f"f_end {report.f_end!r}  f* {f_star!r}  E {err:.3e}")
    print(f"status {report.status.value}  outer {report.outer_iters}  inner {report.inner_iters}  "
          f"#fun {report.fun_evals}  #sub {report.sub_evals}  time {report.wall_time:.3f}s")
    if report.message:
        print(report.message)
    return EXIT_OK if err < 5e-4 and report.status != Status.ITER_CAP else EXIT_FAIL


def _cmd_bench(ns) -> int:
    from .bench import emit_csv, performance_profile, run_suite
    from .problems import PROBLEM_NAMES

    problems = list(PROBLEM_NAMES) if ns.problems.strip().lower() == "all" else \
        [p.strip() for p in ns.problems.split(",") if p.strip()]
    solvers = [s.strip() for s in ns.solvers.split(",") if s.strip()]
    try:
        results = run_suite(problems, solvers, ns.n, seeds=[ns.seed], workers=ns.workers)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    emit_csv(results, ns.out)
    for r in results:
        print(f"{r.problem:18s} {r.solver:7s} {'ok  ' if r.success else 'FAIL'} E {r.E_end:.2e} "
              f"evals {r.cost_evals} time {r.cost_time:.3f}s {r.status}")
    if ns.profile and results:
        out = Path(ns.out)
        prof_path = out.with_name(f"{out.stem}_profile_{ns.profile}{out.suffix or '.csv'}")
        emit_csv(performance_profile(results, ns.profile), prof_path)
        print(f"profile written to {prof_path}")
    return EXIT_OK if all(r.success for r in results) else EXIT_FAIL


def _cmd_cluster(ns) -> int:
    from .apps.clustering import (DataFormatError, assign_clusters, cluster_objective, load_points_csv,
                                  random_centers, unflatten_centers)
    from .outer import solve

    try:
        data = load_points_csv(ns.data)
        oracle = cluster_objective(data, ns.kappa)
    except (OSError, DataFormatError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    params = _params(ns)
    x, report = solve(oracle, random_centers(data, ns.kappa, ns.seed), params)
    centers = unflatten_centers(x, data.dim)
    assignment = assign_clusters(centers, data)
    with open(ns.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["center", "size"] + [f"x{i + 1}" for i in range(data.dim)])
        for j, (row, size) in enumerate(zip(centers, assignment.sizes)):
            w.writerow([j + 1, int(size)] + [repr(float(v)) for v in row])
    print(f"m {data.m}  kappa {ns.kappa}  f_end {report.f_end!r}  status {report.status.value}  "
          f"inner {report.inner_iters}")
    if assignment.empty:
        print("empty clusters: " + ", ".join(str(j + 1) for j in assignment.empty))
    return EXIT_OK if report.status != Status.ITER_CAP and math.isfinite(report.f_end) else EXIT_FAIL


def _cmd_cheby(ns) -> int:
    from .apps.chebyshev import alternation_check, cheby_objective, get_target
    from .outer import solve

    try:
        target, default_interval = get_target(ns.target)
        interval = tuple(ns.interval) if ns.interval is not None else default_interval
        oracle = cheby_objective(target, interval, ns.degree)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc).strip("'\"")) from None
    params = _params(ns)
    rng = np.random.default_rng(0)
    c, report = solve(oracle, 0.1 * rng.uniform(-1.0, 1.0, ns.degree + 1), params)
    alt = alternation_check(c, target, interval)
    with open(ns.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["power", "coefficient"])
        for power, coef in zip(range(ns.degree, -1, -1), c):
            w.writerow([power, repr(float(coef))])
    print(f"target {ns.target}  degree {ns.degree}  interval [{interval[0]}, {interval[1]}]")
    print(f"h_end {report.f_end!r}  alternation {alt.count}  status {report.status.value}  "
          f"inner {report.inner_iters}")
    return EXIT_OK if report.status != Status.ITER_CAP and math.isfinite(report.f_end) else EXIT_FAIL


_COMMANDS = {"solve": _cmd_solve, "bench": _cmd_bench, "cluster": _cmd_cluster, "cheby": _cmd_cheby}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        ns = merge_config(parser, ns)
        return _COMMANDS[ns.command](ns)
    except ConfigError as exc:
        print(f"subopt: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
