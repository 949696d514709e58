"""Page retrieval backends: live HTTP and a deterministic simulator.

The simulator makes benchmark runs reproducible: latency, failures and page
bodies are pure functions of (url, profile), derived from a documented
64-bit hash, so two runs with the same seed produce identical outcomes on
any machine.
"""

import json
import logging
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Protocol
from urllib.parse import urlsplit

import requests

from .types import FetchStatus

logger = logging.getLogger(__name__)

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

#: Statuses that warrant another attempt; HTTP errors are definitive answers.
RETRYABLE_STATUSES = frozenset({FetchStatus.TIMEOUT, FetchStatus.CONNECTION_ERROR})


def fnv1a_64(data: bytes) -> int:
    """Plain 64-bit FNV-1a over a byte string."""
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK64
    return h


def _fmix64(h: int) -> int:
    """splitmix64 finalizer: spreads trailing-byte changes across all bits."""
    h ^= h >> 30
    h = (h * 0xBF58476D1CE4E5B9) & _MASK64
    h ^= h >> 27
    h = (h * 0x94D049BB133111EB) & _MASK64
    h ^= h >> 31
    return h


def stable_hash(text: str, seed: int = 0) -> int:
    """Seeded, platform-independent 64-bit hash.

    Defined as the splitmix64 finalizer applied to 64-bit FNV-1a (offset
    0xcbf29ce484222325, prime 0x100000001b3) over the seed encoded as 8
    little-endian bytes followed by the UTF-8 bytes of `text`. The finalizer
    matters: bare FNV-1a barely mixes the last few bytes into the high bits,
    and URLs that differ only in a trailing counter would all land on the
    same side of a failure-rate threshold. This is the reproducibility
    anchor for simulated fetches; the same (text, seed) yields the same
    value on any machine.
    """
    prefix = (seed & _MASK64).to_bytes(8, "little")
    return _fmix64(fnv1a_64(prefix + text.encode("utf-8")))


@dataclass(frozen=True)
class FetchOutcome:
    """Result of one retrieval: status, decoded body and elapsed time."""

    status: FetchStatus
    body: str = ""
    elapsed_ms: float = 0.0
    http_code: int | None = None
    truncated: bool = False


class Fetcher(Protocol):
    """One retrieval attempt. Implementations must be safe to share across
    all n*m fetch workers; the retry policy belongs to the caller."""

    def fetch(self, url: str, timeout_ms: float) -> FetchOutcome: ...


def fetch_with_retries(fetcher: Fetcher, url: str, timeout_ms: float,
                       retries: int) -> FetchOutcome:
    """Apply the shared retry policy: retry timeouts and connection errors
    up to `retries` extra attempts, never HTTP error responses. The returned
    elapsed_ms accumulates over attempts."""
    outcome = FetchOutcome(status=FetchStatus.CONNECTION_ERROR)
    total_ms = 0.0
    for _ in range(retries + 1):
        try:
            outcome = fetcher.fetch(url, timeout_ms)
        except Exception:
            # Fetchers are contracted to return outcomes; treat a raise as a
            # transport failure rather than killing the worker.
            logger.exception("fetcher raised for %s", url)
            outcome = FetchOutcome(status=FetchStatus.CONNECTION_ERROR)
        total_ms += outcome.elapsed_ms
        if outcome.status not in RETRYABLE_STATUSES:
            break
    return replace(outcome, elapsed_ms=total_ms)


# --- deterministic simulation ------------------------------------------------

DEFAULT_BODY_TEMPLATE = (
    "<html><head><title>{host}{path}</title></head><body>\n"
    "<p>url: {url}</p>\n"
    "<p>token: {token}</p>\n"
    "</body></html>\n"
)


@dataclass(frozen=True)
class SimProfile:
    """Parameters of the simulated fetcher.

    Per-URL latency is base_latency_ms + (stable_hash(url, seed) mod
    (jitter_ms + 1)). A URL fails with connection_error when
    stable_hash(url, seed + 1) / 2**64 < failure_rate. body_template is
    rendered with str.format using the url-derived fields {url}, {scheme},
    {host}, {path} and {token} (token = 16 hex digits of
    stable_hash(url, seed + 2)).
    """

    base_latency_ms: float = 40.0
    jitter_ms: int = 0
    seed: int = 0
    failure_rate: float = 0.0
    body_template: str = DEFAULT_BODY_TEMPLATE

    def __post_init__(self):
        if self.base_latency_ms < 0:
            raise ValueError("base_latency_ms must be >= 0")
        if not isinstance(self.jitter_ms, int) or self.jitter_ms < 0:
            raise ValueError("jitter_ms must be a non-negative integer")
        if not 0.0 <= self.failure_rate <= 1.0:
            raise ValueError("failure_rate must be within [0, 1]")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")

    @classmethod
    def from_dict(cls, payload: dict) -> "SimProfile":
        known = {"base_latency_ms", "jitter_ms", "seed", "failure_rate", "body_template"}
        unknown = set(payload) - known
        if unknown:
            raise ValueError(f"unknown sim profile keys: {sorted(unknown)}")
        return cls(**payload)

    @classmethod
    def from_file(cls, path: str | Path) -> "SimProfile":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        if not isinstance(payload, dict):
            raise ValueError("sim profile file must hold a JSON object")
        return cls.from_dict(payload)

    def mean_latency_ms(self) -> float:
        return self.base_latency_ms + self.jitter_ms / 2.0


def modeled_latency_ms(url: str, profile: SimProfile) -> float:
    return profile.base_latency_ms + stable_hash(url, profile.seed) % (profile.jitter_ms + 1)


def fetch_simulated(url: str, profile: SimProfile) -> FetchOutcome:
    """Deterministic stand-in for a live fetch.

    Sleeps the modeled latency (time.sleep yields the interpreter, so
    parallel workers genuinely overlap), then returns either a rendered
    synthetic page or a modeled connection error. Identical inputs yield
    byte-identical outcomes; elapsed_ms reports the modeled latency.
    """
    latency_ms = modeled_latency_ms(url, profile)
    if latency_ms > 0:
        time.sleep(latency_ms / 1000.0)
    if stable_hash(url, profile.seed + 1) / 2.0**64 < profile.failure_rate:
        return FetchOutcome(status=FetchStatus.CONNECTION_ERROR, elapsed_ms=latency_ms)
    parts = urlsplit(url)
    fields = {
        "url": url,
        "scheme": parts.scheme,
        "host": parts.netloc,
        "path": parts.path or "/",
        "token": f"{stable_hash(url, profile.seed + 2):016x}",
    }
    try:
        body = profile.body_template.format_map(fields)
    except (KeyError, IndexError) as exc:
        raise ValueError(f"body_template references unknown placeholder: {exc}") from exc
    return FetchOutcome(status=FetchStatus.OK, body=body, elapsed_ms=latency_ms, http_code=200)


class SimulatedFetcher:
    """Fetcher facade over fetch_simulated; stateless, safe to share."""

    def __init__(self, profile: SimProfile):
        self.profile = profile

    def fetch(self, url: str, timeout_ms: float = 0.0) -> FetchOutcome:
        return fetch_simulated(url, self.profile)


# --- live HTTP ----------------------------------------------------------------

class LiveFetcher:
    """Real HTTP GET fetcher: follows up to 5 redirects, caps bodies at
    4 MiB (truncating with a flag) and decodes with invalid bytes replaced.

    One fetch() call is one attempt. Sessions are per-thread, so a single
    instance may be shared by any number of workers.
    """

    max_redirects = 5
    body_cap_bytes = 4 * 1024 * 1024
    chunk_bytes = 65536

    def __init__(self, user_agent: str = "segcrawl/0.1"):
        self._user_agent = user_agent
        self._local = threading.local()

    def _session(self) -> requests.Session:
        session = getattr(self._local, "session", None)
        if session is None:
            session = requests.Session()
            session.max_redirects = self.max_redirects
            session.headers["User-Agent"] = self._user_agent
            self._local.session = session
        return session

    def fetch(self, url: str, timeout_ms: float) -> FetchOutcome:
        parts = urlsplit(url)
        if parts.scheme not in ("http", "https"):
            raise ValueError(f"live fetching requires an http/https URL, got {url!r}")
        timeout_s = timeout_ms / 1000.0
        start = time.perf_counter()
        try:
            response = self._session().get(
                url, timeout=(timeout_s, timeout_s), stream=True, allow_redirects=True
            )
        except requests.Timeout:
            return FetchOutcome(status=FetchStatus.TIMEOUT, elapsed_ms=self._since(start))
        except requests.RequestException:
            # DNS/socket failures and redirect-limit breaches land here.
            return FetchOutcome(status=FetchStatus.CONNECTION_ERROR, elapsed_ms=self._since(start))
        with response:
            try:
                raw, truncated = self._read_capped(response)
            except requests.Timeout:
                return FetchOutcome(status=FetchStatus.TIMEOUT, elapsed_ms=self._since(start))
            except requests.RequestException:
                return FetchOutcome(status=FetchStatus.CONNECTION_ERROR, elapsed_ms=self._since(start))
            code = response.status_code
            encoding = response.encoding or "utf-8"
        elapsed = self._since(start)
        if 200 <= code < 300:
            body = raw.decode(encoding, errors="replace")
            return FetchOutcome(status=FetchStatus.OK, body=body, elapsed_ms=elapsed,
                                http_code=code, truncated=truncated)
        return FetchOutcome(status=FetchStatus.HTTP_ERROR, elapsed_ms=elapsed, http_code=code)

    def _read_capped(self, response: requests.Response) -> tuple[bytes, bool]:
        chunks: list[bytes] = []
        seen = 0
        for chunk in response.iter_content(self.chunk_bytes):
            chunks.append(chunk)
            seen += len(chunk)
            if seen > self.body_cap_bytes:
                return b"".join(chunks)[: self.body_cap_bytes], True
        return b"".join(chunks), False

    @staticmethod
    def _since(start: float) -> float:
        return (time.perf_counter() - start) * 1000.0


_default_live: LiveFetcher | None = None
_default_live_lock = threading.Lock()


def fetch_live(url: str, timeout_ms: float, retries: int = 1) -> FetchOutcome:
    """GET a URL with the shared retry policy applied on top of LiveFetcher."""
    global _default_live
    with _default_live_lock:
        if _default_live is None:
            _default_live = LiveFetcher()
    return fetch_with_retries(_default_live, url, timeout_ms, retries)
