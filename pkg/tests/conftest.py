"""Shared fakes: a deterministic clock, an in-memory E-utilities service, and
corpus construction helpers. No test in this suite touches the network unless
LITMINE_LIVE=1 is set.
"""

from __future__ import annotations

import datetime as dt
import json
from xml.sax.saxutils import escape

import pytest

from litmine.corpus import Corpus, DocumentRecord, PubDate


class FakeClock:
    """Monotonic clock whose sleep() advances time instead of waiting."""

    def __init__(self):
        self.now = 0.0
        self.sleeps: list[float] = []

    def time(self) -> float:
        return self.now

    def sleep(self, duration: float) -> None:
        self.sleeps.append(duration)
        self.now += duration


class FakePubMed:
    """Answers esearch/efetch requests from an in-memory document store.

    Store entries are dicts with keys: id, title, abstract, date (datetime.date),
    and optionally query (the entry only matches that search term).
    """

    def __init__(self, docs=(), fail_times: int = 0, error_body: str | None = None):
        self.docs = list(docs)
        self.requests: list[tuple[str, dict]] = []
        self.fail_times = fail_times
        self.error_body = error_body

    def get(self, url: str, params: dict) -> bytes:
        from litmine.entrez import NetworkError, ServiceError

        self.requests.append((url, dict(params)))
        if self.fail_times > 0:
            self.fail_times -= 1
            raise NetworkError("connection reset by fake")
        if self.error_body is not None:
            raise ServiceError("HTTP 500 from fake", body_excerpt=self.error_body)
        if "esearch" in url:
            return self._esearch(params)
        if "efetch" in url:
            return self._efetch(params)
        raise AssertionError(f"unexpected url {url}")

    @property
    def esearch_requests(self):
        return [p for u, p in self.requests if "esearch" in u]

    @property
    def efetch_requests(self):
        return [p for u, p in self.requests if "efetch" in u]

    def _matching(self, params: dict):
        start = dt.datetime.strptime(params["mindate"], "%Y/%m/%d").date()
        end = dt.datetime.strptime(params["maxdate"], "%Y/%m/%d").date()
        term = params["term"]
        return [d for d in self.docs
                if start <= d["date"] <= end and d.get("query") in (None, term)]

    def _esearch(self, params: dict) -> bytes:
        hits = self._matching(params)
        offset = int(params["retstart"])
        size = int(params["retmax"])
        ids = [d["id"] for d in hits[offset:offset + size]]
        payload = {"esearchresult": {"count": str(len(hits)), "idlist": ids}}
        return json.dumps(payload).encode()

    def _efetch(self, params: dict) -> bytes:
        wanted = params["id"].split(",")
        by_id = {d["id"]: d for d in self.docs}
        articles = []
        for i in wanted:
            doc = by_id.get(i)
            if doc is None:
                continue
            articles.append(pubmed_article_xml(
                pmid=doc["id"], title=doc.get("title", ""),
                abstract=doc.get("abstract", ""), date=doc["date"]))
        return ("<?xml version=\"1.0\"?><PubmedArticleSet>"
                + "".join(articles) + "</PubmedArticleSet>").encode()


def pubmed_article_xml(pmid: str, title: str, abstract: str, date: dt.date) -> str:
    abstract_xml = (f"<Abstract><AbstractText>{escape(abstract)}</AbstractText></Abstract>"
                    if abstract else "")
    return (
        "<PubmedArticle><MedlineCitation>"
        f"<PMID Version=\"1\">{pmid}</PMID>"
        "<Article>"
        "<Journal><JournalIssue><PubDate>"
        f"<Year>{date.year}</Year><Month>{date.strftime('%b')}</Month><Day>{date.day:02d}</Day>"
        "</PubDate></JournalIssue></Journal>"
        f"<ArticleTitle>{escape(title)}</ArticleTitle>"
        f"{abstract_xml}"
        "</Article></MedlineCitation></PubmedArticle>"
    )


def make_doc(doc_id: str, text: str, title: str = "", year: int = 2016,
             month: int | None = 6, day: int | None = 15,
             source: str = "local") -> DocumentRecord:
    return DocumentRecord(id=doc_id, title=title, abstract=text,
                          pub_date=PubDate(year, month, day), source=source)


def make_corpus(label: str, texts: list[str], prefix: str = "d") -> Corpus:
    docs = tuple(make_doc(f"{prefix}{i:04d}", text) for i, text in enumerate(texts, start=1))
    return Corpus(label=label, docs=docs)


@pytest.fixture
def fake_clock():
    return FakeClock()
