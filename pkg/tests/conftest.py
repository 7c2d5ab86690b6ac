from functools import lru_cache

from equifem import AdaptOptions, make_problem, solve_adaptive

TABLE_N = (21, 41, 81, 161, 321, 641)


@lru_cache(maxsize=None)
def benchmark_run(name: str, n_points: int, record_trace: bool = False):
    """Adaptive run for a table column N (N mesh points, N - 1 elements)."""
    return solve_adaptive(make_problem(name), n_points - 1, AdaptOptions(record_trace=record_trace))


@lru_cache(maxsize=None)
def table_sweep(name: str):
    """Full table sweep N = 21 .. 641 through the batch driver."""
    from equifem import BenchmarkSpec, RunConfig, run_sweep

    return tuple(run_sweep(RunConfig(BenchmarkSpec(name), TABLE_N)))


_criteria_lines = []


def record_criterion(cid: str, passed: bool, detail: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {cid}: {detail}"
    _criteria_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _criteria_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criteria_lines:
            terminalreporter.write_line(line)
