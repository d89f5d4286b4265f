"""Tokenization and per-word document-frequency statistics.

Counting is document-level: a word occurring fifty times in one abstract
contributes exactly one. Tokens are surface forms; no stemming is applied so
every counted word can be used verbatim as a search term.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from litmine.corpus import Corpus

# A token is a maximal run of letters; digits, punctuation, and hyphens all
# separate. Non-ASCII letters count as letters.
_WORD_RE = re.compile(r"[^\W\d_]+", re.UNICODE)


def _parse_stop_word_lines(lines: Iterable[str], origin: str) -> frozenset[str]:
    words = set()
    for lineno, raw in enumerate(lines, start=1):
        word = raw.strip()
        if not word or word.startswith("#"):
            continue
        if word != word.lower():
            raise ValueError(f"{origin}: line {lineno}: stop word {word!r} is not lowercase")
        words.add(word)
    return frozenset(words)


def load_stop_words(path: str | Path) -> frozenset[str]:
    """Load a stop-word file: one lowercase word per line, '#' comments allowed."""
    path = Path(path)
    return _parse_stop_word_lines(path.read_text(encoding="utf-8").splitlines(), str(path))


@lru_cache(maxsize=1)
def default_stop_words() -> frozenset[str]:
    text = resources.files("litmine").joinpath("data/stopwords_en.txt").read_text(encoding="utf-8")
    return _parse_stop_word_lines(text.splitlines(), "stopwords_en.txt")


@dataclass(frozen=True)
class TokenizerConfig:
    min_token_length: int = 2
    fold_case: bool = True
    stop_words: frozenset[str] = field(default_factory=default_stop_words)

    def __post_init__(self):
        if self.min_token_length < 1:
            raise ValueError("min_token_length must be >= 1")
        for word in self.stop_words:
            if not word or word != word.lower():
                raise ValueError(f"stop words must be nonempty and lowercase; got {word!r}")

    def without_stop_words(self) -> "TokenizerConfig":
        return replace(self, stop_words=frozenset())


def tokenize(text: str, cfg: TokenizerConfig | None = None) -> frozenset[str]:
    """Distinct lowercase tokens of a text, stop words and short tokens removed."""
    if cfg is None:
        cfg = TokenizerConfig()
    text = unicodedata.normalize("NFC", text)
    if cfg.fold_case:
        text = text.casefold()
    return frozenset(
        tok for tok in _WORD_RE.findall(text)
        if len(tok) >= cfg.min_token_length and tok not in cfg.stop_words
    )


@dataclass(frozen=True)
class DocFrequencyTable:
    """Document frequency per word for one corpus."""

    corpus_label: str
    n_docs: int
    counts: dict[str, int]

    def probability(self, word: str) -> float:
        return self.counts.get(word, 0) / self.n_docs


def document_tokens(doc, cfg: TokenizerConfig | None = None) -> frozenset[str]:
    """Token set of a document; title and abstract are counted together."""
    return tokenize(doc.title + " " + doc.abstract, cfg)


def doc_frequency(corpus: Corpus, cfg: TokenizerConfig | None = None) -> DocFrequencyTable:
    """Count, for every word, the number of documents containing it."""
    if corpus.n_docs < 1:
        raise ValueError(f"cannot compute document frequencies for empty corpus {corpus.label!r}")
    if cfg is None:
        cfg = TokenizerConfig()
    counts: Counter[str] = Counter()
    for doc in corpus.docs:
        counts.update(document_tokens(doc, cfg))
    return DocFrequencyTable(corpus_label=corpus.label, n_docs=corpus.n_docs, counts=dict(counts))


def conditional_probability(table: DocFrequencyTable, word: str) -> float:
    """Fraction of the corpus' documents containing the word; 0 when absent."""
    if table.n_docs < 1:
        raise ValueError("document-frequency table is empty")
    return table.counts.get(word, 0) / table.n_docs


def distinct_word_count(corpus: Corpus, cfg: TokenizerConfig | None = None,
                        remove_stop_words: bool = True) -> int:
    """Vocabulary size of a corpus, with or without stop-word removal.

    Both variants are reported by the stats command since raw word totals are
    ambiguous about whether stop words were already dropped.
    """
    if cfg is None:
        cfg = TokenizerConfig()
    if not remove_stop_words:
        cfg = cfg.without_stop_words()
    vocab: set[str] = set()
    for doc in corpus.docs:
        vocab.update(document_tokens(doc, cfg))
    return len(vocab)
