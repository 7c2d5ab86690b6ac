"""Command line driver: ``equifem solve --problem NAME [options]``.

Options may also come from a JSON config file whose keys are the option
names with dashes replaced by underscores; explicit flags win over the file.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .adapt import AdaptOptions
from .exceptions import EquifemError
from .problems import Benchmark, BenchmarkSpec
from .sweep import FORMATS, N_COUNTS, RunConfig, format_summary, run_sweep

DEFAULT_N_LIST = (21, 41, 81, 161, 321, 641)
PROBLEM_PARAMS = ("epsilon", "p", "q", "r", "alpha")

_DEFAULTS = {
    "n_list": list(DEFAULT_N_LIST),
    "kappa": 1.01,
    "tol_mesh": 1e-8,
    "max_iter": 1000,
    "trace": False,
    "trace_dir": None,
    "out": None,
    "format": "csv",
    "n_counts": "nodes",
    "jobs": 1,
}


def _n_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equifem", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run an adaptive N-sweep on a benchmark problem")
    s.add_argument("--config", type=Path, help="JSON file with default option values")
    s.add_argument("--problem", choices=[b.value for b in Benchmark])
    s.add_argument("--epsilon", type=float)
    s.add_argument("--p", type=float)
    s.add_argument("--q", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--alpha", type=float)
    s.add_argument("--n-list", type=_n_list, help="comma-separated, e.g. 21,41,81")
    s.add_argument("--n-counts", choices=N_COUNTS,
                   help="whether N counts mesh points (default) or elements")
    s.add_argument("--kappa", type=float)
    s.add_argument("--tol-mesh", type=float)
    s.add_argument("--max-iter", type=int)
    s.add_argument("--trace", action="store_true", default=None)
    s.add_argument("--trace-dir", type=Path, help="directory for per-N trace files")
    s.add_argument("--out", type=Path, help="summary file (default: stdout)")
    s.add_argument("--format", choices=FORMATS)
    s.add_argument("--jobs", type=int, help="parallel worker processes")
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, the config file and explicit flags."""
    opts = dict(_DEFAULTS)
    if args.config is not None:
        opts.update(json.loads(Path(args.config).read_text()))
    opts.update({k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config", "verbose")})
    return opts


def config_from_options(opts: dict) -> RunConfig:
    if not opts.get("problem"):
        raise EquifemError("no problem given (use --problem or a config file)")
    params = {k: opts[k] for k in PROBLEM_PARAMS if opts.get(k) is not None}
    trace = bool(opts["trace"])
    trace_dir = opts["trace_dir"]
    if trace and trace_dir is None:
        trace_dir = Path("traces")
    return RunConfig(
        benchmark=BenchmarkSpec(opts["problem"], params),
        n_list=opts["n_list"],
        options=AdaptOptions(
            kappa=opts["kappa"],
            tol_mesh=opts["tol_mesh"],
            max_iter=opts["max_iter"],
            record_trace=trace,
        ),
        summary_path=Path(opts["out"]) if opts["out"] else None,
        trace_dir=Path(trace_dir) if trace and trace_dir is not None else None,
        format=opts["format"],
        n_counts=opts["n_counts"],
        jobs=int(opts["jobs"]),
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_options(resolve_options(args))
        rows = run_sweep(config)
        if config.summary_path is None:
            sys.stdout.write(format_summary(rows, config.format))
    except (EquifemError, ValueError) as exc:
        print(f"equifem: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"equifem: I/O error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
