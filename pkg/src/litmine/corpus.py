"""Document and corpus types plus line-delimited JSON persistence.

A corpus file is UTF-8 JSON lines: line 1 is a header object
``{"label": ..., "n_docs": ...}``, each following line is one document record.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

POSITIVE = "positive"
NEGATIVE = "negative"

SOURCES = ("pubmed", "local")


class CorpusError(ValueError):
    """Invalid document, corpus, or corpus file."""


_DATE_RE = re.compile(r"^(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?$")


@dataclass(frozen=True, order=True)
class PubDate:
    """Publication date; month and day may be unknown."""

    year: int
    month: int | None = None
    day: int | None = None

    def __post_init__(self):
        if not 1000 <= self.year <= 9999:
            raise CorpusError(f"implausible publication year: {self.year}")
        if self.month is not None and not 1 <= self.month <= 12:
            raise CorpusError(f"month out of range: {self.month}")
        if self.day is not None:
            if self.month is None:
                raise CorpusError("day given without month")
            if not 1 <= self.day <= 31:
                raise CorpusError(f"day out of range: {self.day}")

    def isoformat(self) -> str:
        if self.month is None:
            return f"{self.year:04d}"
        if self.day is None:
            return f"{self.year:04d}-{self.month:02d}"
        return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"

    @classmethod
    def fromisoformat(cls, text: str) -> "PubDate":
        m = _DATE_RE.match(text)
        if m is None:
            raise CorpusError(f"bad publication date {text!r}; expected YYYY[-MM[-DD]]")
        year, month, day = m.groups()
        return cls(int(year), int(month) if month else None, int(day) if day else None)


@dataclass(frozen=True)
class DocumentRecord:
    """One fetched abstract."""

    id: str
    title: str
    abstract: str
    pub_date: PubDate
    source: str = "pubmed"

    def __post_init__(self):
        if not self.id:
            raise CorpusError("document id must be nonempty")
        if not (self.title or self.abstract):
            raise CorpusError(f"document {self.id}: title and abstract both empty")
        if self.source not in SOURCES:
            raise CorpusError(f"document {self.id}: unknown source {self.source!r}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "abstract": self.abstract,
            "pub_date": self.pub_date.isoformat(),
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DocumentRecord":
        try:
            return cls(
                id=data["id"],
                title=data.get("title", ""),
                abstract=data.get("abstract", ""),
                pub_date=PubDate.fromisoformat(data["pub_date"]),
                source=data.get("source", "pubmed"),
            )
        except KeyError as exc:
            raise CorpusError(f"document record missing field {exc.args[0]!r}") from exc


@dataclass(frozen=True)
class Corpus:
    """An immutable labeled collection of documents with unique ids."""

    label: str
    docs: tuple[DocumentRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "docs", tuple(self.docs))
        if not self.label:
            raise CorpusError("corpus label must be nonempty")
        seen: set[str] = set()
        for doc in self.docs:
            if doc.id in seen:
                raise CorpusError(f"duplicate document id {doc.id!r} in corpus {self.label!r}")
            seen.add(doc.id)

    @property
    def n_docs(self) -> int:
        return len(self.docs)

    def __len__(self) -> int:
        return len(self.docs)

    def __iter__(self):
        return iter(self.docs)


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus as JSON lines (header line, then one document per line)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        header = {"label": corpus.label, "n_docs": corpus.n_docs}
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for doc in corpus.docs:
            fh.write(json.dumps(doc.to_dict(), ensure_ascii=False) + "\n")


def load_corpus(path: str | Path) -> Corpus:
    """Read a corpus file, validating the header count and id uniqueness.

    Schema violations raise CorpusError naming the offending line number.
    """
    path = Path(path)
    docs: list[DocumentRecord] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line.strip():
            raise CorpusError(f"{path}: line 1: missing header")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}: line 1: bad header: {exc}") from exc
        if not isinstance(header, dict) or "label" not in header or "n_docs" not in header:
            raise CorpusError(f"{path}: line 1: header must carry 'label' and 'n_docs'")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                doc = DocumentRecord.from_dict(data)
            except (json.JSONDecodeError, CorpusError) as exc:
                raise CorpusError(f"{path}: line {lineno}: {exc}") from exc
            if doc.id in seen:
                raise CorpusError(f"{path}: line {lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    if header["n_docs"] != len(docs):
        raise CorpusError(
            f"{path}: count mismatch: header says n_docs={header['n_docs']} but file has {len(docs)} records"
        )
    return Corpus(label=header["label"], docs=tuple(docs))
