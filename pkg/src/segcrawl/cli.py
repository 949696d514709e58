"""Command-line interface: crawl, bench and report commands.

Exit codes: 0 success, 1 runtime failure, 2 usage error. SIGINT requests a
graceful stop — fetchers cease pulling new work, parsers drain, and partial
results are flushed with an interrupted marker in the summary.
"""

import argparse
import signal
import sys
import threading
import time
from datetime import datetime
from pathlib import Path

from . import __version__
from .bench import BenchSummary, ExperimentPlan, compute_speedup, run_experiment
from .dataio import load_url_file, write_errors_file, write_records_file
from .errors import InvalidConfigError, RuleError
from .extraction import load_rules
from .fetchers import LiveFetcher, SimProfile, SimulatedFetcher
from .pipeline import run_pipeline
from .reporting import column_labels, emit_plot, emit_table, emit_timing_table


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="segcrawl",
        description="Segmented multi-worker crawler with a deterministic benchmark harness",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    crawl = sub.add_parser("crawl", help="crawl a URL list and extract targeted records")
    crawl.add_argument("--urls", required=True, help="URL list file, one absolute URL per line")
    crawl.add_argument("--rules", required=True, help="extraction rules JSON file")
    crawl.add_argument("-n", type=int, default=1, help="segment / worker-group count")
    crawl.add_argument("-m", type=int, default=1, help="fetch workers per group")
    crawl.add_argument("-k", type=int, default=1, help="parse workers per group")
    crawl.add_argument("--queue-cap", type=int, default=None, help="bounded queue capacity per group")
    crawl.add_argument("--timeout-ms", type=float, default=10_000.0, help="per-attempt fetch timeout")
    crawl.add_argument("--retries", type=int, default=1, help="extra attempts on timeout/connection error")
    crawl.add_argument("--fetcher", choices=("simulated", "live"), default="simulated")
    crawl.add_argument("--allow-live", action="store_true",
                       help="required to let --fetcher live touch the network")
    crawl.add_argument("--sim-latency-ms", type=float, default=40.0)
    crawl.add_argument("--sim-jitter-ms", type=int, default=0)
    crawl.add_argument("--seed", type=int, default=0, help="simulated fetcher seed")
    crawl.add_argument("--out", default="crawl_out", help="output directory")

    bench = sub.add_parser("bench", help="run a benchmark experiment plan")
    bench.add_argument("--plan", required=True, help="experiment plan JSON file")
    bench.add_argument("--out", default="bench_out", help="base output directory")
    bench.add_argument("--allow-live", action="store_true",
                       help="required when the plan requests the live fetcher")

    report = sub.add_parser("report", help="compare two summary columns and plot them")
    report.add_argument("--summary", required=True, help="bench summary CSV")
    report.add_argument("--single", required=True, help="baseline column label")
    report.add_argument("--multi", required=True, help="optimized column label")
    report.add_argument("--plot", default=None, help="comparison SVG path "
                        "(default: comparison.svg beside the summary)")
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/--version/usage errors
        return int(exc.code or 0)
    handler = {"crawl": cmd_crawl, "bench": cmd_bench, "report": cmd_report}[args.command]
    try:
        return handler(args)
    except (InvalidConfigError, RuleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


def cmd_crawl(args: argparse.Namespace) -> int:
    from .types import RunConfig

    urls_path = Path(args.urls)
    rules_path = Path(args.rules)
    for path in (urls_path, rules_path):
        if not path.is_file():
            print(f"error: no such file: {path}", file=sys.stderr)
            return 2
    try:
        dataset = load_url_file(urls_path)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rules = load_rules(rules_path)
    config = RunConfig(n=args.n, m=args.m, k=args.k, queue_capacity=args.queue_cap,
                       fetch_timeout_ms=args.timeout_ms, retries=args.retries)

    if args.fetcher == "live":
        if not args.allow_live:
            print("error: --fetcher live requires --allow-live", file=sys.stderr)
            return 2
        fetcher = LiveFetcher()
    else:
        profile = SimProfile(base_latency_ms=args.sim_latency_ms,
                             jitter_ms=args.sim_jitter_ms, seed=args.seed)
        fetcher = SimulatedFetcher(profile)

    print(f"config: n={config.n} m={config.m} k={config.k} "
          f"queue_capacity={config.queue_capacity} fetcher={args.fetcher}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stop = threading.Event()
    with _sigint_sets(stop):
        start = time.perf_counter()
        result, timings = run_pipeline(dataset, config, rules, fetcher, stop=stop)
        wall = time.perf_counter() - start

    write_records_file(result.records, out_dir / "records.jsonl")
    write_errors_file(result.errors, out_dir / "errors.jsonl")
    emit_timing_table(timings, out_dir / "timings.csv")

    print(f"fetched_ok={result.fetched_ok} fetched_failed={result.fetched_failed} "
          f"records={result.records_extracted}")
    print(f"wall_time_s={wall:.3f}")
    print(f"outputs written to {out_dir}")
    if result.interrupted:
        print("status: interrupted (partial results)")
        return 1
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    plan_path = Path(args.plan)
    if not plan_path.is_file():
        print(f"error: no such file: {plan_path}", file=sys.stderr)
        return 2
    plan = ExperimentPlan.from_file(plan_path)

    for config in plan.configs:
        print(f"config: n={config.n} m={config.m} k={config.k} "
              f"queue_capacity={config.queue_capacity}")
    print(f"sizes={list(plan.sizes)} repetitions={plan.repetitions} fetcher={plan.fetcher}")

    run_dir = _make_run_dir(Path(args.out))
    stop = threading.Event()
    with _sigint_sets(stop):
        summary = run_experiment(plan, allow_live=args.allow_live, stop=stop)

    if not summary.cells:
        print("status: interrupted before any trial completed", file=sys.stderr)
        return 1

    emit_table(summary, run_dir / "bench_summary.csv")
    labels = column_labels(summary)
    last_timings = {}
    for sample in summary.samples:
        last_timings[(sample.config.label(), sample.dataset_size)] = sample.group_timings
    for cell, label in zip(summary.cells, labels):
        timings = last_timings[(cell.config.label(), cell.dataset_size)]
        emit_timing_table(timings, run_dir / f"timing_{label}.csv")

    plots = run_dir / "plots"
    plots.mkdir()
    _emit_bench_plots(summary, labels, plots)

    print(f"summary written to {run_dir / 'bench_summary.csv'}")
    if summary.interrupted:
        print("status: interrupted (partial summary)")
        return 1
    return 0


def _emit_bench_plots(summary: BenchSummary, labels: list[str], plots_dir: Path) -> None:
    by_config: dict[str, list[tuple[float, float]]] = {}
    for cell in summary.cells:
        by_config.setdefault(cell.config.label(), []).append(
            (float(cell.dataset_size), cell.mean))
    mean_series = [(label, points) for label, points in by_config.items()]
    emit_plot(mean_series, plots_dir / "means.svg", title="Mean wall time per configuration",
              x_label="dataset size", y_label="seconds")

    if len(by_config) < 2:
        return
    overall = {label: sum(y for _, y in pts) / len(pts) for label, pts in by_config.items()}
    single = "n1m1k1" if "n1m1k1" in by_config else max(overall, key=overall.get)
    best = min((label for label in overall if label != single), key=overall.get)
    emit_plot(
        [(single, by_config[single]), (best, by_config[best])],
        plots_dir / "single_vs_best.svg",
        title="Baseline vs best configuration",
        x_label="dataset size", y_label="seconds",
    )


def cmd_report(args: argparse.Namespace) -> int:
    summary_path = Path(args.summary)
    if not summary_path.is_file():
        print(f"error: no such file: {summary_path}", file=sys.stderr)
        return 2
    try:
        header, trial_rows, averages = _read_summary_csv(summary_path)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for label in (args.single, args.multi):
        if label not in header:
            print(f"error: column {label!r} not found in {summary_path}", file=sys.stderr)
            return 2
    t_single = averages[args.single]
    t_multi = averages[args.multi]
    if t_single <= 0:
        print("error: baseline average is zero; cannot compute a speedup percentage",
              file=sys.stderr)
        return 1
    report = compute_speedup(t_single, t_multi)
    print(f"saved {report.absolute_saving:.3f} s ({report.percent:.2f}%)")

    plot_path = Path(args.plot) if args.plot else summary_path.parent / "comparison.svg"
    series = []
    for label in (args.single, args.multi):
        points = [(float(i + 1), row[label]) for i, row in enumerate(trial_rows)]
        series.append((label, points))
    emit_plot(series, plot_path, title="Baseline vs optimized wall time per trial",
              x_label="trial", y_label="seconds")
    print(f"comparison plot written to {plot_path}")
    return 0


def _read_summary_csv(path: Path) -> tuple[list[str], list[dict[str, float]], dict[str, float]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("experiment,"):
        raise ValueError(f"{path} is not a bench summary CSV")
    header = lines[0].split(",")[1:]
    trial_rows: list[dict[str, float]] = []
    averages: dict[str, float] = {}
    for line in lines[1:]:
        cells = line.split(",")
        values = {label: float(cell) for label, cell in zip(header, cells[1:])}
        if cells[0] == "average":
            averages = values
        else:
            trial_rows.append(values)
    if not averages:
        raise ValueError(f"{path} has no average row")
    return header, trial_rows, averages


def _make_run_dir(base: Path) -> Path:
    stamp = datetime.now().strftime("%Y%m%d-%H%M%S")
    run_dir = base / stamp
    suffix = 1
    while run_dir.exists():
        run_dir = base / f"{stamp}-{suffix}"
        suffix += 1
    run_dir.mkdir(parents=True)
    return run_dir


class _sigint_sets:
    """Context manager routing SIGINT to a stop event for graceful draining."""

    def __init__(self, stop: threading.Event):
        self._stop = stop
        self._previous = None

    def __enter__(self):
        def handler(signum, frame):
            self._stop.set()
            print("interrupt received; draining workers...", file=sys.stderr)

        try:
            self._previous = signal.signal(signal.SIGINT, handler)
        except ValueError:  # not in the main thread (e.g. tests)
            self._previous = None
        return self

    def __exit__(self, *exc_info):
        if self._previous is not None:
            signal.signal(signal.SIGINT, self._previous)
