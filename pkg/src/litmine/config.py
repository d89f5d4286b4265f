"""Pipeline configuration: one JSON document driving every subcommand.

Referenced input paths are checked eagerly at load time and reported together
in a single error. Precedence for identity parameters is config value, then
environment (ENTREZ_API_KEY / ENTREZ_EMAIL).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from litmine.entrez import FetchSpec
from litmine.ranking import RankerConfig
from litmine.screening import ScreeningPolicy
from litmine.textstats import TokenizerConfig, load_stop_words

_TOP_LEVEL_KEYS = {
    "fetch", "tokenizer", "ranker", "curation", "policy",
    "compose", "screen", "trend", "output_dir",
}


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    positive: FetchSpec
    negative: FetchSpec
    tokenizer: TokenizerConfig
    ranker: RankerConfig
    policy: ScreeningPolicy
    output_dir: Path
    curation_path: Path | None = None
    merge_plurals: bool = True
    compose_expression: str | None = None
    votes_path: Path | None = None
    pre_stages: list[tuple[str, int, int]] = field(default_factory=list)
    post_stages: list[tuple[str, int, int]] = field(default_factory=list)
    trend_counts_csv: Path | None = None
    trend_query: str | None = None
    trend_years: list[int] = field(default_factory=list)
    stop_words_path: Path | None = None

    def snapshot(self) -> dict:
        """The full effective configuration, embedded in artifact headers."""
        return {
            "fetch": {
                "positive": {"query": self.positive.query, "year": self.positive.year},
                "negative": {
                    "query": self.negative.query,
                    "year": self.negative.year,
                    "per_month_cap": self.negative.per_month_cap,
                },
                "tool": self.positive.tool,
                "email": self.positive.email,
                "api_key_set": bool(self.positive.api_key),
            },
            "tokenizer": {
                "min_token_length": self.tokenizer.min_token_length,
                "fold_case": self.tokenizer.fold_case,
                "stop_words": str(self.stop_words_path) if self.stop_words_path else "embedded",
                "stop_word_count": len(self.tokenizer.stop_words),
            },
            "ranker": {
                "min_p_given_p": self.ranker.min_p_given_p,
                "score_threshold": self.ranker.score_threshold,
            },
            "curation": str(self.curation_path) if self.curation_path else None,
            "merge_plurals": self.merge_plurals,
            "policy": {
                "majority_threshold": self.policy.majority_threshold,
                "inconclusive_max_effective": self.policy.inconclusive_max_effective,
                "expert_override_min": self.policy.expert_override_min,
            },
            "compose_expression": self.compose_expression,
            "output_dir": str(self.output_dir),
        }


def _fetch_spec(section: dict, shared: dict) -> FetchSpec:
    return FetchSpec(
        query=section.get("query", ""),
        year=section.get("year"),
        per_month_cap=section.get("per_month_cap"),
        email=shared.get("email") or os.environ.get("ENTREZ_EMAIL"),
        tool=shared.get("tool"),
        api_key=shared.get("api_key") or os.environ.get("ENTREZ_API_KEY"),
    )


def _stage_list(raw, where: str) -> list[tuple[str, int, int]]:
    stages = []
    for entry in raw or []:
        if not (isinstance(entry, (list, tuple)) and len(entry) == 3):
            raise ConfigError(f"{where}: each stage must be [name, in_count, out_count]")
        stages.append((str(entry[0]), int(entry[1]), int(entry[2])))
    return stages


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {sorted(unknown)}")

    base = path.parent

    def resolve(value) -> Path | None:
        return (base / value).resolve() if value else None

    fetch = raw.get("fetch", {})
    tokenizer_raw = raw.get("tokenizer", {})
    ranker_raw = raw.get("ranker", {})
    policy_raw = raw.get("policy", {})
    compose_raw = raw.get("compose", {})
    screen_raw = raw.get("screen", {})
    trend_raw = raw.get("trend", {})

    curation_path = resolve(raw.get("curation"))
    votes_path = resolve(screen_raw.get("votes"))
    counts_csv = resolve(trend_raw.get("counts_csv"))
    stop_words_path = resolve(tokenizer_raw.get("stop_words"))

    missing = [p for p in (curation_path, votes_path, counts_csv, stop_words_path)
               if p is not None and not p.exists()]
    if missing:
        raise ConfigError(
            f"{path}: referenced files do not exist: " + ", ".join(str(p) for p in missing))

    try:
        tokenizer = TokenizerConfig(
            min_token_length=tokenizer_raw.get("min_token_length", 2),
            fold_case=tokenizer_raw.get("fold_case", True),
            **({"stop_words": load_stop_words(stop_words_path)} if stop_words_path else {}),
        )
        ranker = RankerConfig(
            min_p_given_p=ranker_raw.get("min_p_given_p", 0.05),
            score_threshold=ranker_raw.get("score_threshold", 0.70),
        )
        policy = ScreeningPolicy(
            majority_threshold=policy_raw.get("majority_threshold", 0.5),
            inconclusive_max_effective=policy_raw.get("inconclusive_max_effective", 2),
            expert_override_min=policy_raw.get("expert_override_min", 1),
        )
        positive = _fetch_spec(fetch.get("positive", {}), fetch)
        negative = _fetch_spec(fetch.get("negative", {}), fetch)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc

    return PipelineConfig(
        positive=positive,
        negative=negative,
        tokenizer=tokenizer,
        ranker=ranker,
        policy=policy,
        output_dir=(base / raw.get("output_dir", "out")).resolve(),
        curation_path=curation_path,
        merge_plurals=bool(ranker_raw.get("merge_plurals", True)),
        compose_expression=compose_raw.get("expression"),
        votes_path=votes_path,
        pre_stages=_stage_list(screen_raw.get("pre_stages"), f"{path}: screen.pre_stages"),
        post_stages=_stage_list(screen_raw.get("post_stages"), f"{path}: screen.post_stages"),
        trend_counts_csv=counts_csv,
        trend_query=trend_raw.get("query"),
        trend_years=[int(y) for y in trend_raw.get("years", [])],
        stop_words_path=stop_words_path,
    )
