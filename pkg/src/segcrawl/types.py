"""Domain types shared by the pipeline, fetchers and benchmark harness."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator
from urllib.parse import urlsplit

from .errors import InvalidConfigError


class FetchStatus(str, Enum):
    """Terminal state of one page retrieval."""

    OK = "ok"
    HTTP_ERROR = "http_error"
    TIMEOUT = "timeout"
    CONNECTION_ERROR = "connection_error"


@dataclass(frozen=True)
class UrlEntry:
    """One input line: its 0-based dataset position and the absolute URL."""

    index: int
    url: str


@dataclass
class UrlDataset:
    """Ordered URL list. Duplicates are allowed and fetched per occurrence."""

    entries: list[UrlEntry] = field(default_factory=list)

    @classmethod
    def from_urls(cls, urls: Iterable[str]) -> "UrlDataset":
        entries = []
        for index, url in enumerate(urls):
            _require_absolute_url(url, index)
            entries.append(UrlEntry(index, url))
        return cls(entries)

    def validate(self) -> None:
        for expected, entry in enumerate(self.entries):
            if entry.index != expected:
                raise ValueError(
                    f"dataset indices must be 0..{len(self.entries) - 1} without "
                    f"gaps; entry {expected} carries index {entry.index}"
                )
            _require_absolute_url(entry.url, expected)

    def urls(self) -> list[str]:
        return [entry.url for entry in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[UrlEntry]:
        return iter(self.entries)


def _require_absolute_url(url: str, position: int) -> None:
    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"entry {position}: not an absolute URL: {url!r}")


@dataclass
class Segment:
    """A contiguous slice of the dataset, owned by one worker group."""

    segment_id: int
    entries: list[UrlEntry]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[UrlEntry]:
        return iter(self.entries)


@dataclass(frozen=True)
class RunConfig:
    """Worker topology: n segments/groups, m fetchers and k parsers per group.

    queue_capacity defaults to 2 * (m + k) when not given. fetch_timeout_ms
    bounds one fetch attempt; retries applies to timeouts and connection
    errors only.
    """

    n: int = 1
    m: int = 1
    k: int = 1
    queue_capacity: int | None = None
    fetch_timeout_ms: float = 10_000.0
    retries: int = 1

    def __post_init__(self):
        for label, value in (("n", self.n), ("m", self.m), ("k", self.k)):
            if not isinstance(value, int) or value < 1:
                raise InvalidConfigError(f"{label} must be a positive integer, got {value!r}")
        if self.queue_capacity is None:
            object.__setattr__(self, "queue_capacity", 2 * (self.m + self.k))
        if not isinstance(self.queue_capacity, int) or self.queue_capacity < 1:
            raise InvalidConfigError(
                f"queue_capacity must be a positive integer, got {self.queue_capacity!r}"
            )
        if self.fetch_timeout_ms <= 0:
            raise InvalidConfigError("fetch_timeout_ms must be positive")
        if not isinstance(self.retries, int) or self.retries < 0:
            raise InvalidConfigError("retries must be a non-negative integer")

    def label(self) -> str:
        return f"n{self.n}m{self.m}k{self.k}"


@dataclass(frozen=True)
class WebDocument:
    """One fetched page as it travels through a group's buffer queue."""

    url: str
    dataset_index: int
    segment_id: int
    status: FetchStatus
    body: str = ""
    fetch_duration_ms: float = 0.0
    http_code: int | None = None


@dataclass(frozen=True)
class TargetedRecord:
    """One extracted value, tagged with the document it came from."""

    url: str
    dataset_index: int
    rule_name: str
    value: str
    segment_id: int

    def sort_key(self) -> tuple[int, str, str]:
        return (self.dataset_index, self.rule_name, self.value)


@dataclass(frozen=True)
class ErrorEntry:
    """A URL whose fetch failed after all retries."""

    url: str
    dataset_index: int
    status: FetchStatus
    http_code: int | None = None

    def status_label(self) -> str:
        if self.status is FetchStatus.HTTP_ERROR and self.http_code is not None:
            return f"http_error({self.http_code})"
        return self.status.value


@dataclass
class ResultDataSet:
    """Merged output of all worker groups, canonically ordered."""

    records: list[TargetedRecord]
    errors: list[ErrorEntry]
    fetched_ok: int
    fetched_failed: int
    records_extracted: int
    interrupted: bool = False

    def comparable_records(self) -> list[tuple[int, str, str, str]]:
        """Records without their segment tag, for cross-configuration comparison.

        segment_id depends on n by construction, so equivalence checks between
        configurations must ignore it.
        """
        return [(r.dataset_index, r.rule_name, r.value, r.url) for r in self.records]


@dataclass(frozen=True)
class GroupTiming:
    """Start/end/duration of one worker group, from a monotonic clock, in ms."""

    group_id: int
    start_ms: float
    end_ms: float
    duration_ms: float

    def __post_init__(self):
        if self.end_ms < self.start_ms:
            raise ValueError("timing ends before it starts")
        if self.duration_ms != self.end_ms - self.start_ms:
            raise ValueError("duration must equal end - start exactly")

    @classmethod
    def spanning(cls, group_id: int, start_ms: float, end_ms: float) -> "GroupTiming":
        return cls(group_id, start_ms, end_ms, end_ms - start_ms)
