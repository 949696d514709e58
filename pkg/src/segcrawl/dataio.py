"""File formats: URL lists, result records, error entries, synthetic corpora."""

import json
from pathlib import Path
from typing import Sequence

from .types import ErrorEntry, TargetedRecord, UrlDataset


def load_url_file(path: str | Path) -> UrlDataset:
    """Read one absolute URL per line; blank lines and '#' comments are
    ignored. The order of the remaining lines defines dataset_index."""
    urls = []
    text = Path(path).read_text(encoding="utf-8")
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        urls.append(stripped)
    try:
        return UrlDataset.from_urls(urls)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc


def synthetic_dataset(size: int, seed: int) -> UrlDataset:
    """Deterministic URL list for simulated benchmark runs."""
    if size < 0:
        raise ValueError("size must be >= 0")
    return UrlDataset.from_urls(
        f"http://bench.test/s{seed}/doc{i:06d}" for i in range(size)
    )


def record_line(record: TargetedRecord) -> str:
    return json.dumps(
        {
            "url": record.url,
            "index": record.dataset_index,
            "rule": record.rule_name,
            "value": record.value,
            "segment": record.segment_id,
        },
        ensure_ascii=False,
    )


def error_line(error: ErrorEntry) -> str:
    return json.dumps(
        {"url": error.url, "index": error.dataset_index, "status": error.status_label()},
        ensure_ascii=False,
    )


def write_records_file(records: Sequence[TargetedRecord], path: str | Path) -> Path:
    """One JSON object per record, UTF-8, LF line endings."""
    return _write_lines([record_line(r) for r in records], path)


def write_errors_file(errors: Sequence[ErrorEntry], path: str | Path) -> Path:
    return _write_lines([error_line(e) for e in errors], path)


def _write_lines(lines: list[str], path: str | Path) -> Path:
    path = Path(path)
    body = "\n".join(lines) + "\n" if lines else ""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)
    return path
