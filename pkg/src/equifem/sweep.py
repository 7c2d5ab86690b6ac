"""Batch N-sweeps over the benchmark problems and their file formats.

Summary CSV columns::

    n, iterations, converged_by, h1_error, eta_tilde, alpha_sqrt, max_quality,
    sigma, order_h1, elements, order_eta_tilde, status

Trace CSV columns ``k, mesh_diff, qmax_minus_1, h1_error``; the final mesh
goes to a sibling ``<stem>_mesh.csv`` with columns ``i, x``. JSON output
mirrors the same field names. Floats are written in shortest round-trip form.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

from .adapt import AdaptiveResult, AdaptOptions, convergence_order, solve_adaptive
from .exceptions import EquifemError, InvalidArgument
from .problems import BenchmarkSpec, make_problem

log = logging.getLogger(__name__)

FORMATS = ("csv", "json")
N_COUNTS = ("nodes", "elements")
SUMMARY_COLUMNS = (
    "n", "iterations", "converged_by", "h1_error", "eta_tilde", "alpha_sqrt",
    "max_quality", "sigma", "order_h1", "elements", "order_eta_tilde", "status",
)
TRACE_COLUMNS = ("k", "mesh_diff", "qmax_minus_1", "h1_error")


@dataclass(frozen=True)
class RunConfig:
    """One sweep.

    With ``n_counts="nodes"`` (the usual convention for the reference tables) an
    entry ``N`` of ``n_list`` means ``N`` mesh points, i.e. ``N - 1``
    elements; with ``"elements"`` it is used as the element count directly.
    """

    benchmark: BenchmarkSpec
    n_list: Sequence[int]
    options: AdaptOptions = field(default_factory=AdaptOptions)
    summary_path: Optional[Path] = None
    trace_dir: Optional[Path] = None
    format: str = "csv"
    n_counts: str = "nodes"
    jobs: int = 1

    def __post_init__(self):
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list:
            raise InvalidArgument("n_list is empty")
        if any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise InvalidArgument("n_list must be strictly increasing")
        if self.format not in FORMATS:
            raise InvalidArgument(f"format must be one of {FORMATS}")
        if self.n_counts not in N_COUNTS:
            raise InvalidArgument(f"n_counts must be one of {N_COUNTS}")
        if min(n_list) - (self.n_counts == "nodes") < 2:
            raise InvalidArgument("every run needs at least 2 elements")
        object.__setattr__(self, "n_list", n_list)

    def elements(self, n: int) -> int:
        return n - 1 if self.n_counts == "nodes" else n


@dataclass(frozen=True)
class SummaryRow:
    n: int
    iterations: int
    converged_by: str
    h1_error: float
    eta_tilde: float
    alpha_sqrt: float
    max_quality: float
    sigma: float
    order_h1: Optional[float] = None
    elements: int = 0
    order_eta_tilde: Optional[float] = None
    status: str = "ok"


def _failed_row(n: int, elements: int, exc: Exception) -> SummaryRow:
    nan = math.nan
    return SummaryRow(n, 0, "", nan, nan, nan, nan, nan, None, elements, None, f"error: {exc}")


def _row(n: int, elements: int, result: AdaptiveResult) -> SummaryRow:
    rep = result.final_report
    return SummaryRow(
        n=n,
        iterations=result.iterations,
        converged_by=result.converged_by.value,
        h1_error=rep.h1_semi,
        eta_tilde=rep.eta_tilde,
        alpha_sqrt=rep.alpha_sqrt,
        max_quality=result.final_state.max_quality,
        sigma=result.final_state.sigma,
        elements=elements,
    )


def trace_path(config: RunConfig, n: int) -> Path:
    return Path(config.trace_dir) / f"trace_{config.benchmark.name.value}_N{n}.{config.format}"


def _run_one(config: RunConfig, n: int) -> SummaryRow:
    elements = config.elements(n)
    try:
        result = solve_adaptive(make_problem(config.benchmark), elements, config.options)
    except EquifemError as exc:
        log.warning("run N=%d failed: %s", n, exc)
        return _failed_row(n, elements, exc)
    if config.trace_dir is not None and result.trace is not None:
        emit_trace(result, trace_path(config, n), config.format)
    return _row(n, elements, result)


def _with_orders(rows: list[SummaryRow]) -> list[SummaryRow]:
    out = list(rows)
    for k in range(1, len(rows)):
        prev, cur = rows[k - 1], rows[k]
        if prev.status != "ok" or cur.status != "ok":
            continue
        pair = [(prev.elements, prev.h1_error), (cur.elements, cur.h1_error)]
        order_h1 = float(convergence_order(pair)[0])
        pair = [(prev.elements, prev.eta_tilde), (cur.elements, cur.eta_tilde)]
        order_eta = float(convergence_order(pair)[0])
        out[k] = SummaryRow(**{**asdict(cur), "order_h1": order_h1, "order_eta_tilde": order_eta})
    return out


def run_sweep(config: RunConfig) -> list[SummaryRow]:
    """Independent adaptive runs for every N, returned in N order.

    A failing run is recorded in its row's ``status`` and the sweep goes on.
    Traces are written to ``config.trace_dir`` when tracing is enabled.
    """
    if config.trace_dir is not None:
        Path(config.trace_dir).mkdir(parents=True, exist_ok=True)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_run_one, [config] * len(config.n_list), config.n_list))
    else:
        rows = [_run_one(config, n) for n in config.n_list]
    rows = _with_orders(rows)
    if config.summary_path is not None:
        write_summary(rows, config.summary_path, config.format)
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _parse(name: str, text: str):
    kind = {f.name: f.type for f in fields(SummaryRow)}[name]
    if kind == "str":
        return text
    if text == "":
        return None
    if kind == "int":
        return int(text)
    return float(text)


def format_summary(rows: Sequence[SummaryRow], fmt: str = "csv") -> str:
    if fmt == "json":
        payload = {"columns": list(SUMMARY_COLUMNS), "rows": [asdict(r) for r in rows]}
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in SUMMARY_COLUMNS])
    return buf.getvalue()


def write_summary(rows: Sequence[SummaryRow], path, fmt: str = "csv") -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_summary(rows, fmt))


def read_summary(path, fmt: Optional[str] = None) -> list[SummaryRow]:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    if fmt == "json":
        return [SummaryRow(**d) for d in json.loads(path.read_text())["rows"]]
    with open(path, newline="") as fh:
        return [SummaryRow(**{k: _parse(k, v) for k, v in d.items()}) for d in csv.DictReader(fh)]


def emit_trace(result: AdaptiveResult, path, fmt: Optional[str] = None) -> Path:
    """Write the per-iteration trace and the final mesh of ``result``."""
    if result.trace is None:
        raise InvalidArgument("result carries no trace; run with record_trace=True")
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    records = [
        {"k": t.k, "mesh_diff": t.mesh_diff, "qmax_minus_1": t.max_quality - 1.0, "h1_error": t.h1_error}
        for t in result.trace
    ]
    nodes = [float(x) for x in result.final_mesh.nodes]
    if fmt == "json":
        path.write_text(json.dumps({"trace": records, "final_mesh": nodes}, indent=2) + "\n")
        return path
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for rec in records:
            w.writerow([_fmt(rec[c]) for c in TRACE_COLUMNS])
    with open(mesh_path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("i", "x"))
        for i, x in enumerate(nodes):
            w.writerow((i, repr(x)))
    return path


def mesh_path(trace_file) -> Path:
    p = Path(trace_file)
    return p.with_name(p.stem + "_mesh" + p.suffix)


def read_trace(path) -> list[dict]:
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text())["trace"]
    with open(path, newline="") as fh:
        return [{"k": int(d["k"]), **{c: float(d[c]) for c in TRACE_COLUMNS[1:]}} for d in csv.DictReader(fh)]
