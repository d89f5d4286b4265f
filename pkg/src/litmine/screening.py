"""Crowd-screening vote aggregation and selection-funnel export.

"Not Sure" answers are ignored as if never given. Articles with too few
effective votes and both answers present pass through as inconclusive, since
no conclusion can be drawn either way; articles failing the majority rule are
still included when enough expert voters said yes.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence


class ScreeningError(ValueError):
    pass


class ScreeningDecision(enum.Enum):
    INCLUDE_MAJORITY = "include_majority"
    INCLUDE_INCONCLUSIVE = "include_inconclusive"
    INCLUDE_EXPERT_OVERRIDE = "include_expert_override"
    EXCLUDE = "exclude"


@dataclass(frozen=True)
class VoteRecord:
    article_id: str
    yes: int
    no: int
    not_sure: int = 0
    expert_yes: int = 0

    def __post_init__(self):
        if not self.article_id:
            raise ScreeningError("article_id must be nonempty")
        for name in ("yes", "no", "not_sure", "expert_yes"):
            if getattr(self, name) < 0:
                raise ScreeningError(f"{self.article_id}: {name} must be >= 0")
        if self.expert_yes > self.yes:
            raise ScreeningError(f"{self.article_id}: expert_yes exceeds yes")

    @property
    def effective(self) -> int:
        return self.yes + self.no


@dataclass(frozen=True)
class ScreeningPolicy:
    majority_threshold: float = 0.5       # inclusive: "50% or more"
    inconclusive_max_effective: int = 2
    expert_override_min: int = 1

    def __post_init__(self):
        if not 0 < self.majority_threshold <= 1:
            raise ScreeningError("majority_threshold must lie in (0, 1]")
        if self.inconclusive_max_effective < 0:
            raise ScreeningError("inconclusive_max_effective must be >= 0")
        if self.expert_override_min < 1:
            raise ScreeningError("expert_override_min must be >= 1")


def decide(vote: VoteRecord, policy: ScreeningPolicy | None = None) -> ScreeningDecision:
    """Classify one article from its votes.

    Rule order matters: a 1-yes/1-no article is exactly at the majority
    threshold, so the inconclusive rule must fire first to keep the
    categories disjoint.
    """
    if policy is None:
        policy = ScreeningPolicy()
    if vote.yes + vote.no + vote.not_sure == 0:
        raise ScreeningError(f"{vote.article_id}: no votes at all")
    effective = vote.effective
    if effective == 0:
        # Every answer was "Not Sure"; nothing to conclude, so fail open.
        return ScreeningDecision.INCLUDE_INCONCLUSIVE
    if effective <= policy.inconclusive_max_effective and vote.yes >= 1 and vote.no >= 1:
        return ScreeningDecision.INCLUDE_INCONCLUSIVE
    if vote.yes / effective >= policy.majority_threshold:
        return ScreeningDecision.INCLUDE_MAJORITY
    if vote.expert_yes >= policy.expert_override_min:
        return ScreeningDecision.INCLUDE_EXPERT_OVERRIDE
    return ScreeningDecision.EXCLUDE


@dataclass(frozen=True)
class StageReport:
    """Disjoint partition of one screening stage's articles."""

    majority: tuple[str, ...]
    inconclusive: tuple[str, ...]
    expert_override: tuple[str, ...]
    excluded: tuple[str, ...]

    @property
    def included(self) -> tuple[str, ...]:
        return self.majority + self.inconclusive + self.expert_override

    @property
    def counts(self) -> dict[str, int]:
        return {
            "include_majority": len(self.majority),
            "include_inconclusive": len(self.inconclusive),
            "include_expert_override": len(self.expert_override),
            "exclude": len(self.excluded),
        }

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "included_total": len(self.included),
            "total": len(self.included) + len(self.excluded),
            "categories": {
                "include_majority": list(self.majority),
                "include_inconclusive": list(self.inconclusive),
                "include_expert_override": list(self.expert_override),
                "exclude": list(self.excluded),
            },
        }


def run_stage(votes: Sequence[VoteRecord], policy: ScreeningPolicy | None = None) -> StageReport:
    """Partition a batch of vote records into the four decision categories."""
    seen: set[str] = set()
    buckets: dict[ScreeningDecision, list[str]] = {d: [] for d in ScreeningDecision}
    for vote in votes:
        if vote.article_id in seen:
            raise ScreeningError(f"duplicate article_id {vote.article_id!r}")
        seen.add(vote.article_id)
        buckets[decide(vote, policy)].append(vote.article_id)
    return StageReport(
        majority=tuple(buckets[ScreeningDecision.INCLUDE_MAJORITY]),
        inconclusive=tuple(buckets[ScreeningDecision.INCLUDE_INCONCLUSIVE]),
        expert_override=tuple(buckets[ScreeningDecision.INCLUDE_EXPERT_OVERRIDE]),
        excluded=tuple(buckets[ScreeningDecision.EXCLUDE]),
    )


def funnel_export(stages: Sequence[tuple[str, int, int]]) -> dict:
    """Node/link flow data for a staged selection funnel.

    Each stage contributes a "filtered in" link carrying its survivors and a
    "filtered out" link carrying the rest; the last stage flows into a
    terminal "included" node. The result fits common Sankey renderers.
    """
    if not stages:
        raise ScreeningError("funnel requires at least one stage")
    for name, in_count, out_count in stages:
        if out_count > in_count:
            raise ScreeningError(f"stage {name!r}: out_count {out_count} exceeds in_count {in_count}")
        if in_count < 0 or out_count < 0:
            raise ScreeningError(f"stage {name!r}: counts must be >= 0")
    for (name_a, _, out_a), (name_b, in_b, _) in zip(stages, stages[1:]):
        if out_a != in_b:
            raise ScreeningError(
                f"stages {name_a!r} -> {name_b!r} do not chain: {out_a} out vs {in_b} in")

    names = [name for name, _, _ in stages]
    nodes = names + ["included"] + [f"excluded: {name}" for name in names]
    included_idx = len(names)
    links = []
    for k, (name, in_count, out_count) in enumerate(stages):
        target = k + 1 if k + 1 < len(names) else included_idx
        links.append({"source": k, "target": target, "value": out_count, "kind": "in"})
        links.append({"source": k, "target": included_idx + 1 + k,
                      "value": in_count - out_count, "kind": "out"})
    return {"nodes": [{"name": n} for n in nodes], "links": links}


VOTES_CSV_FIELDS = ("article_id", "yes", "no", "not_sure", "expert_yes")


def read_votes_csv(path: str | Path) -> list[VoteRecord]:
    """Read vote records from CSV; schema violations name the line number."""
    path = Path(path)
    votes: list[VoteRecord] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ScreeningError(f"{path}: line 1: empty file, expected header "
                                 f"{','.join(VOTES_CSV_FIELDS)}")
        if tuple(reader.fieldnames) != VOTES_CSV_FIELDS:
            raise ScreeningError(
                f"{path}: line 1: expected header {','.join(VOTES_CSV_FIELDS)}, "
                f"got {','.join(reader.fieldnames)}")
        for row in reader:
            lineno = reader.line_num
            try:
                vote = VoteRecord(
                    article_id=(row["article_id"] or "").strip(),
                    yes=_count_field(row, "yes"),
                    no=_count_field(row, "no"),
                    not_sure=_count_field(row, "not_sure"),
                    expert_yes=_count_field(row, "expert_yes"),
                )
            except ScreeningError as exc:
                raise ScreeningError(f"{path}: line {lineno}: {exc}") from exc
            if vote.article_id in seen:
                raise ScreeningError(
                    f"{path}: line {lineno}: duplicate article_id {vote.article_id!r}")
            seen.add(vote.article_id)
            votes.append(vote)
    return votes


def _count_field(row: dict, name: str) -> int:
    raw = (row.get(name) or "").strip()
    if not raw.isdigit() and not (raw.startswith("-") and raw[1:].isdigit()):
        raise ScreeningError(f"{name} must be an integer, got {raw!r}")
    return int(raw)
