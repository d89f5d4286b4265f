"""Discriminative term ranking and manual curation.

A word's score is the probability it appears in a topic document divided by
the summed probabilities of appearing in a topic or background document. The
score is computed raw (no smoothing): a word absent from the background
corpus scores exactly 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from litmine.textstats import DocFrequencyTable

# "mice" is the one irregular plural the default curation needs to merge;
# the naive trailing-'s' rule covers the rest.
DEFAULT_IRREGULAR_PLURALS: Mapping[str, str] = {"mice": "mouse"}


@dataclass(frozen=True)
class TermScore:
    word: str
    df_p: int
    df_n: int
    p_given_p: float
    p_given_n: float
    score: float


@dataclass(frozen=True)
class RankerConfig:
    """Candidate filter and selection thresholds, both strict as documented:
    candidates need p_given_p >= min_p_given_p, selection needs score > score_threshold."""

    min_p_given_p: float = 0.05
    score_threshold: float = 0.70

    def __post_init__(self):
        if not 0 < self.min_p_given_p < 1:
            raise ValueError("min_p_given_p must lie in (0, 1)")
        if not 0 < self.score_threshold < 1:
            raise ValueError("score_threshold must lie in (0, 1)")


@dataclass(frozen=True)
class CurationList:
    """Manual curation applied after threshold selection."""

    exclusions: frozenset[str] = frozenset()
    merge_plurals: bool = True
    additions: tuple[str, ...] = ()
    irregular_plurals: Mapping[str, str] = field(
        default_factory=lambda: dict(DEFAULT_IRREGULAR_PLURALS))

    def __post_init__(self):
        object.__setattr__(self, "exclusions", frozenset(self.exclusions))
        object.__setattr__(self, "additions", tuple(self.additions))
        overlap = {a.rstrip("*") for a in self.additions} & self.exclusions
        if overlap:
            raise ValueError(f"terms both excluded and added: {sorted(overlap)}")


def discriminative_score(p_given_p: float, p_given_n: float) -> float:
    """How strongly a word indicates the topic, in [0, 1]."""
    if p_given_p < 0 or p_given_n < 0:
        raise ValueError("probabilities must be nonnegative")
    if p_given_p == 0 and p_given_n == 0:
        raise ValueError("word absent from both corpora")
    if p_given_n == 0:
        return 1.0
    return p_given_p / (p_given_p + p_given_n)


def score_terms(p_table: DocFrequencyTable, n_table: DocFrequencyTable,
                cfg: RankerConfig | None = None) -> list[TermScore]:
    """Score every sufficiently frequent word of the positive vocabulary.

    Words whose positive-corpus probability falls below the floor are
    omitted. The result is sorted by score descending; ties break by
    descending positive document frequency, then word order.
    """
    if cfg is None:
        cfg = RankerConfig()
    if p_table.n_docs < 1 or n_table.n_docs < 1:
        raise ValueError("both corpora must contain at least one document")
    scored = []
    for word, df_p in p_table.counts.items():
        p_given_p = df_p / p_table.n_docs
        if p_given_p < cfg.min_p_given_p:
            continue
        df_n = n_table.counts.get(word, 0)
        p_given_n = df_n / n_table.n_docs
        scored.append(TermScore(
            word=word,
            df_p=df_p,
            df_n=df_n,
            p_given_p=p_given_p,
            p_given_n=p_given_n,
            score=discriminative_score(p_given_p, p_given_n),
        ))
    if not scored:
        raise ValueError(
            f"no candidate terms: every word of corpus {p_table.corpus_label!r} "
            f"fell below the document-frequency floor {cfg.min_p_given_p}")
    scored.sort(key=lambda t: (-t.score, -t.df_p, t.word))
    return scored


def _singular_of(word: str, irregular: Mapping[str, str]) -> str | None:
    if word in irregular:
        return irregular[word]
    if word.endswith("s") and len(word) > 1:
        return word[:-1]
    return None


def select_terms(scores: Sequence[TermScore], cfg: RankerConfig | None = None,
                 curation: CurationList | None = None) -> list[str]:
    """Final ordered term list: threshold selection, then curation.

    Keeps terms scoring strictly above the threshold, drops curated
    exclusions, drops plural forms whose singular is also kept, and appends
    curated additions verbatim at the end.
    """
    if cfg is None:
        cfg = RankerConfig()
    if curation is None:
        curation = CurationList()
    kept = [t.word for t in scores if t.score > cfg.score_threshold]
    kept = [w for w in kept if w not in curation.exclusions]
    if curation.merge_plurals:
        kept_set = set(kept)
        pruned = []
        for word in kept:
            singular = _singular_of(word, curation.irregular_plurals)
            if singular is not None and singular != word and singular in kept_set:
                continue
            pruned.append(word)
        kept = pruned
    result = kept + list(curation.additions)
    if not result:
        raise ValueError("no terms selected; lower threshold or reduce exclusions")
    return result


def load_curation(path: str | Path, merge_plurals: bool = True) -> CurationList:
    """Parse a curation file with [exclude], [add], and [irregular-plurals]
    sections, one entry per line; '#' starts a comment."""
    path = Path(path)
    exclusions: set[str] = set()
    additions: list[str] = []
    irregular = dict(DEFAULT_IRREGULAR_PLURALS)
    section = None
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("exclude", "add", "irregular-plurals"):
                raise ValueError(f"{path}: line {lineno}: unknown section [{section}]")
            continue
        if section == "exclude":
            exclusions.add(line.lower())
        elif section == "add":
            additions.append(line)
        elif section == "irregular-plurals":
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(
                    f"{path}: line {lineno}: expected 'plural singular', got {line!r}")
            irregular[parts[0].lower()] = parts[1].lower()
        else:
            raise ValueError(f"{path}: line {lineno}: entry before any section header")
    return CurationList(exclusions=frozenset(exclusions), merge_plurals=merge_plurals,
                        additions=tuple(additions), irregular_plurals=irregular)
