"""Command-line benchmark harness writing CSV error tables.

Sub-commands ``solve``, ``sweep-h``, ``sweep-omega`` and ``compare`` all run
the cartesian product of the given problems, methods, frequencies and steps;
they differ only in which flags are required. Output rows are sorted
deterministically, and ``wall_seconds`` is the last column so that bodies can
be diffed with it cut off.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .operators import InvalidGridError, NumericError
from .reference import error_l2, example_problem, scalar_problem
from .stepper import METHODS, integrate

HEADER = ("problem", "method", "omega", "h", "M", "t_final", "l2_error", "wall_seconds")
COMMANDS = ("solve", "sweep-h", "sweep-omega", "compare")
PROBLEMS = ("1", "2", "3", "4", "scalar")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    problem: str
    omegas: Tuple[float, ...]
    hs: Tuple[float, ...]
    methods: Tuple[str, ...]
    M: Optional[int] = None
    t_final: float = 1.0
    out: str = "-"
    jobs: int = 1
    epsilon: float = 0.3


def parse_list(text: str) -> List[float]:
    """Comma-separated numbers, or ``a:b:factor`` for the geometric range a, a/f, ... down to b
    (or up to b when a < b)."""
    text = text.strip()
    if not text:
        raise ConfigError("empty list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be a:b:factor, got {text!r}")
        a, b, f = (float(s) for s in parts)
        if not (a > 0 and b > 0 and f > 1):
            raise ConfigError(f"range needs a, b > 0 and factor > 1, got {text!r}")
        out = [a]
        shrink = b < a
        while True:
            nxt = out[-1] / f if shrink else out[-1] * f
            if (shrink and nxt < b * (1 - 1e-9)) or (not shrink and nxt > b * (1 + 1e-9)):
                break
            out.append(nxt)
            if len(out) > 10000:
                raise ConfigError("range too long")
        return out
    try:
        return [float(s) for s in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="neumann-filon", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--problem", required=True, help="example id 1-4 or 'scalar'")
    parser.add_argument("--omega", type=float)
    parser.add_argument("--omega-list")
    parser.add_argument("--h", type=float)
    parser.add_argument("--h-list")
    parser.add_argument("--method", default="nf3", help="comma list of " + ",".join(METHODS))
    parser.add_argument("--grid-points", type=int, help="spatial resolution M")
    parser.add_argument("--t-final", type=float, default=1.0)
    parser.add_argument("--out", default="-", help="CSV path, '-' for standard output")
    parser.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    parser.add_argument("--epsilon", type=float, default=0.3,
                        help="forcing amplitude of the scalar problem (0 disables it)")
    return parser


def make_config(argv: Sequence[str]) -> RunConfig:
    args = build_parser().parse_args(list(argv))
    if args.problem not in PROBLEMS:
        raise ConfigError(f"unknown problem {args.problem!r}; expected one of {PROBLEMS}")

    def pick(single, many, name):
        values = []
        if single is not None:
            values.append(single)
        if many is not None:
            values.extend(parse_list(many))
        if not values:
            raise ConfigError(f"--{name} or --{name}-list is required")
        if any(not (v > 0 and np.isfinite(v)) for v in values):
            raise ConfigError(f"--{name} values must be positive")
        return tuple(values)

    omegas = pick(args.omega, args.omega_list, "omega")
    hs = pick(args.h, args.h_list, "h")
    methods = tuple(m.strip() for m in args.method.split(",") if m.strip())
    if not methods:
        raise ConfigError("--method is empty")
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
    if "nf3-resonance" in methods and args.problem != "4":
        raise ConfigError("nf3-resonance needs a symmetric potential (problem 4)")
    if args.command == "solve" and (len(omegas) > 1 or len(hs) > 1):
        raise ConfigError("solve takes a single --omega and --h")
    if args.command == "sweep-h" and len(omegas) != 1:
        raise ConfigError("sweep-h takes a single --omega")
    if args.command == "sweep-omega" and len(hs) != 1:
        raise ConfigError("sweep-omega takes a single --h")
    if args.grid_points is not None and args.grid_points < 4:
        raise ConfigError("--grid-points must be at least 4")
    if not args.t_final > 0:
        raise ConfigError("--t-final must be positive")
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    return RunConfig(args.command, args.problem, omegas, hs, methods, args.grid_points,
                     args.t_final, args.out, args.jobs, args.epsilon)


def _build(problem: str, omega: float, M, t_final: float, epsilon: float):
    if problem == "scalar":
        prob, exact = scalar_problem(-1.0, epsilon, omega, t_final)
    else:
        prob, exact = example_problem(int(problem), omega, M)
        prob = prob.with_t_final(t_final)
    return prob, exact


def run_point(job):
    """Integrate one (problem, method, omega, h) point; returns a CSV row tuple."""
    problem, method, omega, h, M, t_final, epsilon = job
    prob, exact = _build(problem, omega, M, t_final, epsilon)
    start = time.perf_counter()
    traj = integrate(prob, h, method, keep=False)
    err = error_l2(traj.final, exact, traj.t_final, prob.operator.grid)
    wall = time.perf_counter() - start
    grid = prob.operator.grid
    m = grid.M if grid.kind != "point" else 1
    return (problem, method, omega, h, m, t_final, err, wall)


def _fmt(v):
    if isinstance(v, float):
        return "%.17g" % v
    return str(v)


def format_rows(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def run(config: RunConfig) -> int:
    jobs = [(config.problem, m, w, h, config.M, config.t_final, config.epsilon)
            for m in config.methods for w in config.omegas for h in config.hs]
    try:
        if config.jobs > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                rows = list(pool.map(run_point, jobs))
        else:
            rows = [run_point(j) for j in jobs]
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidGridError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for r in rows:
        if not np.isfinite(r[6]):
            print(f"error: non-finite error for {r[:4]}", file=sys.stderr)
            return EXIT_NUMERIC
    rows.sort(key=lambda r: (r[1], r[2], -r[3]))
    text = format_rows(rows)
    if config.out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(config.out, "w", newline="") as fh:
            fh.write(text)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = make_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
