"""segcrawl: segmented multi-worker crawling pipeline with rule-based
extraction and a deterministic benchmark harness."""

__version__ = "0.1.0"

from .bench import (
    BenchSummary,
    ExperimentPlan,
    RunSample,
    SpeedupReport,
    SummaryCell,
    compute_speedup,
    run_experiment,
    summarize,
)
from .dataio import load_url_file, synthetic_dataset, write_errors_file, write_records_file
from .errors import ConsistencyError, InvalidConfigError, RuleError
from .extraction import ExtractionRule, RuleSet, compile_rules, extract, load_rules
from .fetchers import (
    FetchOutcome,
    Fetcher,
    LiveFetcher,
    SimProfile,
    SimulatedFetcher,
    fetch_live,
    fetch_simulated,
    fetch_with_retries,
    fnv1a_64,
    stable_hash,
)
from .fixtures import FixtureCorpus, FixtureServer, serve_fixtures
from .oracle import makespan_oracle
from .pipeline import GroupResult, aggregate, partition, run_group, run_pipeline
from .queues import ClosableQueue, QueueClosed
from .reporting import emit_plot, emit_table, emit_timing_table, format_seconds, round_half_up
from .types import (
    ErrorEntry,
    FetchStatus,
    GroupTiming,
    ResultDataSet,
    RunConfig,
    Segment,
    TargetedRecord,
    UrlDataset,
    UrlEntry,
    WebDocument,
)

__all__ = [
    "BenchSummary",
    "ClosableQueue",
    "ConsistencyError",
    "ErrorEntry",
    "ExperimentPlan",
    "ExtractionRule",
    "FetchOutcome",
    "FetchStatus",
    "Fetcher",
    "FixtureCorpus",
    "FixtureServer",
    "GroupResult",
    "GroupTiming",
    "InvalidConfigError",
    "LiveFetcher",
    "QueueClosed",
    "ResultDataSet",
    "RuleError",
    "RuleSet",
    "RunConfig",
    "RunSample",
    "Segment",
    "SimProfile",
    "SimulatedFetcher",
    "SpeedupReport",
    "SummaryCell",
    "TargetedRecord",
    "UrlDataset",
    "UrlEntry",
    "WebDocument",
    "aggregate",
    "compile_rules",
    "compute_speedup",
    "emit_plot",
    "emit_table",
    "emit_timing_table",
    "extract",
    "fetch_live",
    "fetch_simulated",
    "fetch_with_retries",
    "fnv1a_64",
    "format_seconds",
    "load_rules",
    "load_url_file",
    "makespan_oracle",
    "partition",
    "round_half_up",
    "run_experiment",
    "run_group",
    "run_pipeline",
    "serve_fixtures",
    "stable_hash",
    "summarize",
    "synthetic_dataset",
    "write_errors_file",
    "write_records_file",
]
