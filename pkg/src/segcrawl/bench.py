"""Benchmark harness: repeated timed pipeline runs over a config/size grid.

Trials run strictly one at a time so they never contend with each other;
the only concurrency during a trial is the pipeline's own. Wall time is
measured around run_pipeline alone — dataset generation and rule
compilation happen outside the timed region.
"""

import json
import logging
import statistics
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from .dataio import load_url_file, synthetic_dataset
from .errors import InvalidConfigError
from .extraction import RuleSet, load_rules
from .fetchers import LiveFetcher, SimProfile, SimulatedFetcher
from .pipeline import run_pipeline
from .types import GroupTiming, RunConfig, UrlDataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentPlan:
    """What to run: dataset sizes x configs, repeated `repetitions` times."""

    sizes: tuple[int, ...]
    configs: tuple[RunConfig, ...]
    repetitions: int = 1
    fetcher: str = "simulated"
    sim_profile: SimProfile = field(default_factory=SimProfile)
    rules: RuleSet = field(default_factory=RuleSet)
    urls_path: str | None = None  # live mode's URL source

    def __post_init__(self):
        if not self.sizes:
            raise InvalidConfigError("plan needs at least one dataset size")
        if any(not isinstance(s, int) or s < 0 for s in self.sizes):
            raise InvalidConfigError("dataset sizes must be non-negative integers")
        if not self.configs:
            raise InvalidConfigError("plan needs at least one config")
        if not isinstance(self.repetitions, int) or self.repetitions < 1:
            raise InvalidConfigError("repetitions must be a positive integer")
        if self.fetcher not in ("simulated", "live"):
            raise InvalidConfigError(f"unknown fetcher kind: {self.fetcher!r}")
        if self.fetcher == "live" and not self.urls_path:
            raise InvalidConfigError('live mode needs a "urls" file in the plan')

    @classmethod
    def from_dict(cls, payload: dict, base_dir: str | Path = ".") -> "ExperimentPlan":
        if not isinstance(payload, dict):
            raise InvalidConfigError("plan must be a JSON object")
        base_dir = Path(base_dir)
        try:
            sizes = tuple(payload["sizes"])
            raw_configs = payload["configs"]
        except KeyError as exc:
            raise InvalidConfigError(f"plan is missing key {exc}") from exc
        if not isinstance(raw_configs, list):
            raise InvalidConfigError('"configs" must be a list of {n,m,k} objects')
        configs = []
        for entry in raw_configs:
            if not isinstance(entry, dict):
                raise InvalidConfigError(f"config entry is not an object: {entry!r}")
            known = {"n", "m", "k", "queue_capacity", "fetch_timeout_ms", "retries"}
            unknown = set(entry) - known
            if unknown:
                raise InvalidConfigError(f"unknown config keys: {sorted(unknown)}")
            configs.append(RunConfig(**entry))
        profile_payload = payload.get("sim_profile", {})
        try:
            profile = SimProfile.from_dict(profile_payload) if profile_payload else SimProfile()
        except (TypeError, ValueError) as exc:
            raise InvalidConfigError(f"bad sim_profile: {exc}") from exc
        rules_path = payload.get("rules")
        rules = load_rules(base_dir / rules_path) if rules_path else RuleSet()
        return cls(
            sizes=sizes,
            configs=tuple(configs),
            repetitions=payload.get("repetitions", 1),
            fetcher=payload.get("fetcher", "simulated"),
            sim_profile=profile,
            rules=rules,
            urls_path=str(base_dir / payload["urls"]) if payload.get("urls") else None,
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentPlan":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidConfigError(f"{path}: not valid JSON: {exc}") from exc
        return cls.from_dict(payload, base_dir=path.parent)


@dataclass
class RunSample:
    """One timed trial."""

    config: RunConfig
    dataset_size: int
    trial: int
    wall_time_s: float
    group_timings: list[GroupTiming]


@dataclass
class SummaryCell:
    """All trials of one (config, dataset size) combination."""

    config: RunConfig
    dataset_size: int
    trials: list[float]

    @property
    def mean(self) -> float:
        return summarize(self.trials)


@dataclass
class BenchSummary:
    cells: list[SummaryCell]
    samples: list[RunSample]
    interrupted: bool = False

    def cell(self, label: str, dataset_size: int | None = None) -> SummaryCell:
        for cell in self.cells:
            if cell.config.label() == label and dataset_size in (None, cell.dataset_size):
                return cell
        raise KeyError(f"no cell for {label!r} (size {dataset_size})")


def summarize(trials: list[float]) -> float:
    """Arithmetic mean of trial wall times. The raw value; display rounding
    (3 decimals, half-up) is reporting.format_seconds's job."""
    if not trials:
        raise ValueError("cannot summarize an empty trial list")
    return statistics.fmean(trials)


@dataclass(frozen=True)
class SpeedupReport:
    t_single: float
    t_multi: float
    absolute_saving: float
    percent: float


def compute_speedup(t_single: float, t_multi: float) -> SpeedupReport:
    """Absolute and percentage time saving of a multi-worker run over the
    single-worker baseline."""
    if t_single <= 0:
        raise ValueError("t_single must be positive")
    saving = t_single - t_multi
    return SpeedupReport(
        t_single=t_single,
        t_multi=t_multi,
        absolute_saving=saving,
        percent=100.0 * saving / t_single,
    )


def run_experiment(plan: ExperimentPlan, allow_live: bool = False,
                   stop: threading.Event | None = None) -> BenchSummary:
    """Execute the full grid: repetitions x configs x sizes, sequentially.

    Simulated runs build their URL lists deterministically from the
    profile's seed. Live runs are refused unless allow_live is set, and
    slice prefixes of the plan's URL file.
    """
    if plan.fetcher == "live" and not allow_live:
        raise InvalidConfigError(
            "plan requests the live fetcher; pass allow_live=True to opt in"
        )
    if plan.fetcher == "live":
        source = load_url_file(plan.urls_path)
        fetcher = LiveFetcher()
    else:
        source = None
        fetcher = SimulatedFetcher(plan.sim_profile)

    cells: list[SummaryCell] = []
    samples: list[RunSample] = []
    interrupted = False
    for size in plan.sizes:
        dataset = _dataset_for(size, plan, source)
        for config in plan.configs:
            trials: list[float] = []
            for trial in range(1, plan.repetitions + 1):
                if stop is not None and stop.is_set():
                    interrupted = True
                    break
                start = time.perf_counter()
                _, timings = run_pipeline(dataset, config, plan.rules, fetcher, stop=stop)
                wall = time.perf_counter() - start
                trials.append(wall)
                samples.append(RunSample(config, size, trial, wall, timings))
                logger.debug("size=%d %s trial %d: %.3fs", size, config.label(), trial, wall)
            if trials:
                cells.append(SummaryCell(config, size, trials))
            if interrupted:
                break
        if interrupted:
            break
    return BenchSummary(cells=cells, samples=samples, interrupted=interrupted)


def _dataset_for(size: int, plan: ExperimentPlan, source: UrlDataset | None) -> UrlDataset:
    if source is None:
        return synthetic_dataset(size, plan.sim_profile.seed)
    if size > len(source):
        raise InvalidConfigError(
            f"plan size {size} exceeds the {len(source)} URLs provided for live mode"
        )
    return UrlDataset.from_urls(entry.url for entry in source.entries[:size])
