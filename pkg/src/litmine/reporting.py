"""Deterministic data-file emitters for tables, the word cloud, trends, and
the screening funnel. Identical inputs always produce byte-identical text;
every artifact starts with a comment header carrying the tool version and the
effective configuration.
"""

from __future__ import annotations

import io
import csv
import json
import math
from dataclasses import dataclass
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from litmine import __version__
from litmine.ranking import TermScore
from litmine.textstats import DocFrequencyTable

FONT_MIN = 12.0
FONT_MAX = 48.0


def _header_lines(config_snapshot: Mapping | None, notes: Sequence[str] = ()) -> list[str]:
    lines = [f"# tool: litmine {__version__}"]
    if config_snapshot is not None:
        lines.append("# config: " + json.dumps(config_snapshot, sort_keys=True, separators=(",", ":")))
    lines.extend(f"# note: {note}" for note in notes)
    return lines


def emit_term_table(scores: Sequence[TermScore], top_k: int,
                    config_snapshot: Mapping | None = None, precise: bool = False) -> str:
    """Ranked term table as TSV; probabilities rendered with 3 decimals.

    When precise is set, full-precision sidecar columns are appended.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    notes = []
    if top_k > len(scores):
        notes.append(f"requested top_k={top_k} exceeds the {len(scores)} available rows; emitting all")
        top_k = len(scores)
    rows = sorted(scores, key=lambda t: -t.score)[:top_k]
    columns = ["word", "df_p", "df_n", "p_given_p", "p_given_n", "score"]
    if precise:
        columns += ["p_given_p_exact", "p_given_n_exact", "score_exact"]
    lines = _header_lines(config_snapshot, notes)
    lines.append("\t".join(columns))
    for t in rows:
        cells = [t.word, str(t.df_p), str(t.df_n),
                 f"{t.p_given_p:.3f}", f"{t.p_given_n:.3f}", f"{t.score:.3f}"]
        if precise:
            cells += [repr(t.p_given_p), repr(t.p_given_n), repr(t.score)]
        lines.append("\t".join(cells))
    return "\n".join(lines) + "\n"


def emit_frequency_table(table: DocFrequencyTable, top_k: int,
                         config_snapshot: Mapping | None = None) -> str:
    """Most probable words of one corpus as TSV (word, df, probability)."""
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    ranked = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
    lines = _header_lines(config_snapshot, [f"corpus: {table.corpus_label}", f"n_docs: {table.n_docs}"])
    lines.append("\t".join(["word", "df", "probability"]))
    for word, df in ranked:
        lines.append(f"{word}\t{df}\t{df / table.n_docs:.3f}")
    return "\n".join(lines) + "\n"


def _font_size(score: float, lo: float, hi: float) -> float:
    if hi == lo:
        return FONT_MAX
    return FONT_MIN + (FONT_MAX - FONT_MIN) * (score - lo) / (hi - lo)


def emit_word_cloud(scores: Sequence[TermScore], config_snapshot: Mapping | None = None) -> str:
    """Word cloud as SVG text, weighted by score.

    Layout is a row-major grid ordered by score descending: reproducibility
    over aesthetics. Font size maps the score range linearly onto
    [12, 48] points; a degenerate range maps to the maximum.
    """
    if not scores:
        raise ValueError("word cloud requires at least one term")
    ordered = sorted(scores, key=lambda t: -t.score)
    lo = min(t.score for t in ordered)
    hi = max(t.score for t in ordered)
    n_cols = max(1, math.ceil(math.sqrt(len(ordered))))
    n_rows = math.ceil(len(ordered) / n_cols)
    longest = max(len(t.word) for t in ordered)
    cell_w = max(120, round(longest * FONT_MAX * 0.62))
    cell_h = round(FONT_MAX * 1.5)
    width = n_cols * cell_w
    height = n_rows * cell_h

    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    for header in _header_lines(config_snapshot):
        lines.append(f"<!-- {header[2:]} -->")
    lines.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">')
    for idx, t in enumerate(ordered):
        row, col = divmod(idx, n_cols)
        x = col * cell_w + cell_w // 2
        y = row * cell_h + round(cell_h * 0.7)
        size = _font_size(t.score, lo, hi)
        lines.append(
            f'  <text x="{x}" y="{y}" font-size="{size:g}" text-anchor="middle" '
            f'font-family="sans-serif">{escape(t.word)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_trend_csv(series: Mapping[str, Sequence[tuple[int, int]]],
                   config_snapshot: Mapping | None = None) -> str:
    """Cumulative hit counts per engine as long-format CSV.

    Counts must be nondecreasing within an engine; a decreasing series is a
    data error and is reported with the engine and year.
    """
    for engine, points in series.items():
        years = [y for y, _ in points]
        if years != sorted(years) or len(set(years)) != len(years):
            raise ValueError(f"engine {engine!r}: years must be strictly ascending")
        for (year_a, count_a), (year_b, count_b) in zip(points, points[1:]):
            if count_b < count_a:
                raise ValueError(
                    f"engine {engine!r}: cumulative count decreases at year {year_b} "
                    f"({count_a} -> {count_b})")
    buf = io.StringIO()
    for line in _header_lines(config_snapshot):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["engine", "year", "cumulative_count"])
    for engine in sorted(series):
        for year, count in series[engine]:
            writer.writerow([engine, year, count])
    return buf.getvalue()


def funnel_to_json(funnel: dict, config_snapshot: Mapping | None = None) -> str:
    """Funnel flow data as JSON with an embedded meta object."""
    payload = {
        "meta": {"tool": f"litmine {__version__}", "config": config_snapshot},
        "nodes": funnel["nodes"],
        "links": funnel["links"],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


@dataclass(frozen=True)
class ReportBundle:
    """Manifest describing one report run; the only artifact carrying a timestamp."""

    term_table_path: str | None
    cloud_path: str | None
    trend_path: str | None
    funnel_path: str | None
    generated_at: str | None
    config_snapshot: Mapping | None

    def to_json(self) -> str:
        payload = {
            "term_table_path": self.term_table_path,
            "cloud_path": self.cloud_path,
            "trend_path": self.trend_path,
            "funnel_path": self.funnel_path,
            "generated_at": self.generated_at,
            "config": self.config_snapshot,
            "tool": f"litmine {__version__}",
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
