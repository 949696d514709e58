"""CSV tables and self-contained SVG line charts for benchmark output.

All emitters are deterministic: the same inputs produce byte-identical
files, which the reproducibility checks rely on.
"""

from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Sequence

from .bench import BenchSummary
from .types import GroupTiming

Series = Sequence[tuple[str, Sequence[tuple[float, float]]]]


def round_half_up(value: float, digits: int = 3) -> float:
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def format_seconds(value: float) -> str:
    """Fixed 3-decimal display, half-up — the table convention."""
    quantum = Decimal(1).scaleb(-3)
    return str(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def column_labels(summary: BenchSummary) -> list[str]:
    """One label per summary cell: n<i>m<j>k<l>, suffixed with _<size> when
    the summary spans several dataset sizes (the plain label would repeat)."""
    multi_size = len({cell.dataset_size for cell in summary.cells}) > 1
    labels = []
    for cell in summary.cells:
        base = cell.config.label()
        labels.append(f"{base}_{cell.dataset_size}" if multi_size else base)
    if len(set(labels)) != len(labels):
        raise ValueError(f"summary columns are not uniquely labeled: {labels}")
    return labels


def emit_table(summary: BenchSummary, out: str | Path) -> Path:
    """Trial-by-trial wall times plus the average row, one column per cell.

    Layout: header "experiment,<label>,...", rows "1".."R", then "average";
    3-decimal fixed point, LF line endings.
    """
    if not summary.cells:
        raise ValueError("cannot emit a table for an empty summary")
    counts = {len(cell.trials) for cell in summary.cells}
    if len(counts) != 1:
        raise ValueError("summary cells have differing trial counts")
    repetitions = counts.pop()
    labels = column_labels(summary)

    lines = ["experiment," + ",".join(labels)]
    for row in range(repetitions):
        cells = ",".join(format_seconds(cell.trials[row]) for cell in summary.cells)
        lines.append(f"{row + 1},{cells}")
    lines.append("average," + ",".join(format_seconds(cell.mean) for cell in summary.cells))
    return _write_text(out, "\n".join(lines) + "\n")


def emit_timing_table(timings: Sequence[GroupTiming], out: str | Path) -> Path:
    """Per-group start/end/duration CSV, ordered by group id.

    Values are printed at microsecond precision; the duration column is the
    difference of the printed start and end, so the table is internally
    consistent at its own precision.
    """
    lines = ["group_id,start_ms,end_ms,duration_ms"]
    for timing in sorted(timings, key=lambda t: t.group_id):
        start = round(timing.start_ms, 3)
        end = round(timing.end_ms, 3)
        lines.append(f"{timing.group_id},{start:.3f},{end:.3f},{end - start:.3f}")
    return _write_text(out, "\n".join(lines) + "\n")


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
            "#9467bd", "#8c564b", "#17becf", "#7f7f7f")
_W, _H = 800, 480
_ML, _MR, _MT, _MB = 70, 170, 45, 55


def emit_plot(series: Series, out: str | Path, title: str = "",
              x_label: str = "", y_label: str = "") -> Path:
    """Self-contained SVG line chart: one polyline + markers per series,
    labeled axes, a legend; byte-identical output for identical input."""
    series = [(name, list(points)) for name, points in series]
    if not series:
        raise ValueError("at least one series is required")
    for name, points in series:
        if not points:
            raise ValueError(f"series {name!r} has no points")

    xs = [x for _, points in series for x, _ in points]
    ys = [y for _, points in series for _, y in points]
    x_lo, x_hi = _padded_range(min(xs), max(xs))
    y_lo, y_hi = _padded_range(min(ys), max(ys))
    plot_w = _W - _ML - _MR
    plot_h = _H - _MT - _MB

    def sx(value: float) -> float:
        return _ML + (value - x_lo) / (x_hi - x_lo) * plot_w

    def sy(value: float) -> float:
        return _MT + plot_h - (value - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="#ffffff"/>',
    ]
    if title:
        parts.append(f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
                     f'font-size="15">{_esc(title)}</text>')

    for i in range(5):
        x_val = x_lo + (x_hi - x_lo) * i / 4
        y_val = y_lo + (y_hi - y_lo) * i / 4
        gx, gy = sx(x_val), sy(y_val)
        parts.append(f'<line x1="{gx:.2f}" y1="{_MT}" x2="{gx:.2f}" '
                     f'y2="{_MT + plot_h}" stroke="#eeeeee"/>')
        parts.append(f'<line x1="{_ML}" y1="{gy:.2f}" x2="{_ML + plot_w}" '
                     f'y2="{gy:.2f}" stroke="#eeeeee"/>')
        parts.append(f'<text x="{gx:.2f}" y="{_MT + plot_h + 18}" '
                     f'text-anchor="middle">{_tick(x_val)}</text>')
        parts.append(f'<text x="{_ML - 8}" y="{gy + 4:.2f}" '
                     f'text-anchor="end">{_tick(y_val)}</text>')

    parts.append(f'<line x1="{_ML}" y1="{_MT + plot_h}" x2="{_ML + plot_w}" '
                 f'y2="{_MT + plot_h}" stroke="#333333"/>')
    parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" '
                 f'y2="{_MT + plot_h}" stroke="#333333"/>')
    if x_label:
        parts.append(f'<text x="{_ML + plot_w / 2:.1f}" y="{_H - 12}" '
                     f'text-anchor="middle">{_esc(x_label)}</text>')
    if y_label:
        parts.append(f'<text x="18" y="{_MT + plot_h / 2:.1f}" text-anchor="middle" '
                     f'transform="rotate(-90 18 {_MT + plot_h / 2:.1f})">{_esc(y_label)}</text>')

    for index, (name, points) in enumerate(series):
        color = _PALETTE[index % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="2"/>')
        for x, y in points:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" '
                         f'fill="{color}"/>')
        ly = _MT + 10 + index * 20
        lx = _ML + plot_w + 12
        parts.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly + 4}">{_esc(name)}</text>')

    parts.append("</svg>")
    return _write_text(out, "\n".join(parts) + "\n")


def _padded_range(low: float, high: float) -> tuple[float, float]:
    if low == high:
        pad = abs(low) * 0.05 or 1.0
        return low - pad, high + pad
    pad = (high - low) * 0.05
    return low - pad, high + pad


def _tick(value: float) -> str:
    return f"{value:.6g}"


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def _write_text(out: str | Path, body: str) -> Path:
    path = Path(out)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)
    return path
