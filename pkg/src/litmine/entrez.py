"""PubMed E-utilities client and corpus builders.

All network traffic goes through a pluggable transport so tests run against
recorded fixtures. The rate limit is global across everything a client does:
at most 3 requests/second without an API key, 10 with one.
"""

from __future__ import annotations

import calendar
import datetime as dt
import json
import logging
import re
import threading
import time
from dataclasses import dataclass
from xml.etree import ElementTree

import requests

from litmine.corpus import NEGATIVE, POSITIVE, Corpus, CorpusError, DocumentRecord, PubDate

log = logging.getLogger(__name__)

EUTILS_BASE = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils"
ESEARCH_URL = EUTILS_BASE + "/esearch.fcgi"
EFETCH_URL = EUTILS_BASE + "/efetch.fcgi"

# Service-documented safe values.
EFETCH_BATCH_SIZE = 200
DEFAULT_PAGE_SIZE = 10_000

REQUESTS_PER_SECOND = 3.0
REQUESTS_PER_SECOND_WITH_KEY = 10.0

DateWindow = tuple[dt.date, dt.date]


class EntrezError(Exception):
    """Base class for E-utilities failures."""


class NetworkError(EntrezError):
    """Connectivity problem; retried with backoff before being surfaced."""


class ServiceError(EntrezError):
    """HTTP or service-level error payload; not retried."""

    def __init__(self, message: str, body_excerpt: str = ""):
        self.body_excerpt = body_excerpt
        if body_excerpt:
            message = f"{message}: {body_excerpt}"
        super().__init__(message)


@dataclass(frozen=True)
class FetchSpec:
    """What to fetch: engine-syntax query, year window, and identity params."""

    query: str
    year: int | None = None
    per_month_cap: int | None = None
    email: str | None = None
    tool: str | None = None
    api_key: str | None = None

    def __post_init__(self):
        if self.per_month_cap is not None and self.per_month_cap < 1:
            raise ValueError("per_month_cap must be >= 1 when finite")


class RequestsTransport:
    """Default HTTP transport."""

    def __init__(self, timeout: float = 60.0):
        self.timeout = timeout

    def get(self, url: str, params: dict) -> bytes:
        try:
            resp = requests.get(url, params=params, timeout=self.timeout)
        except requests.RequestException as exc:
            raise NetworkError(str(exc)) from exc
        if resp.status_code != 200:
            raise ServiceError(f"HTTP {resp.status_code} from {url}", body_excerpt=resp.text[:200])
        return resp.content


class RateLimiter:
    """Enforce a minimum spacing between requests, shared across threads."""

    def __init__(self, clock=time.monotonic, sleep=time.sleep):
        self._clock = clock
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last: float | None = None

    def acquire(self, min_interval: float) -> None:
        with self._lock:
            now = self._clock()
            if self._last is not None:
                wait = self._last + min_interval - now
                if wait > 0:
                    self._sleep(wait)
                    now = self._clock()
            self._last = now


def year_window(year: int) -> DateWindow:
    return dt.date(year, 1, 1), dt.date(year, 12, 31)


def month_window(year: int, month: int) -> DateWindow:
    last = calendar.monthrange(year, month)[1]
    return dt.date(year, month, 1), dt.date(year, month, last)


class EntrezClient:
    """Thin ESearch/EFetch client with retry, backoff, and rate limiting.

    Network failures are retried up to ``retries`` times with exponential
    backoff; service errors (bad HTTP status or an error payload) are raised
    immediately with a body excerpt.
    """

    def __init__(self, transport=None, retries: int = 3, backoff: float = 0.5,
                 clock=time.monotonic, sleep=time.sleep):
        if retries < 1:
            raise ValueError("retries must be >= 1")
        self.transport = transport if transport is not None else RequestsTransport()
        self.retries = retries
        self.backoff = backoff
        self._sleep = sleep
        self._limiter = RateLimiter(clock=clock, sleep=sleep)

    # -- low level ---------------------------------------------------------

    def _request(self, url: str, params: dict) -> bytes:
        rate = REQUESTS_PER_SECOND_WITH_KEY if params.get("api_key") else REQUESTS_PER_SECOND
        last_exc: NetworkError | None = None
        for attempt in range(self.retries):
            self._limiter.acquire(1.0 / rate)
            try:
                return self.transport.get(url, params)
            except NetworkError as exc:
                last_exc = exc
                if attempt < self.retries - 1:
                    self._sleep(self.backoff * (2 ** attempt))
        raise NetworkError(f"request failed after {self.retries} attempts: {last_exc}")

    @staticmethod
    def _identity_params(spec: FetchSpec) -> dict:
        params = {}
        if spec.tool:
            params["tool"] = spec.tool
        if spec.email:
            params["email"] = spec.email
        if spec.api_key:
            params["api_key"] = spec.api_key
        return params

    # -- esearch -----------------------------------------------------------

    def esearch(self, spec: FetchSpec, window: DateWindow, offset: int = 0,
                page_size: int = DEFAULT_PAGE_SIZE) -> tuple[int, list[str]]:
        """One page of matching ids plus the engine's total hit count."""
        if page_size < 0:
            raise ValueError("page_size must be >= 0")
        start, end = window
        params = {
            "db": "pubmed",
            "term": spec.query,
            "datetype": "pdat",
            "mindate": start.strftime("%Y/%m/%d"),
            "maxdate": end.strftime("%Y/%m/%d"),
            "retstart": offset,
            "retmax": page_size,
            "retmode": "json",
        }
        params.update(self._identity_params(spec))
        body = self._request(ESEARCH_URL, params)
        return self._parse_esearch(body)

    @staticmethod
    def _parse_esearch(body: bytes) -> tuple[int, list[str]]:
        try:
            payload = json.loads(body)
        except ValueError as exc:
            raise ServiceError("unparseable esearch response", body_excerpt=body[:200].decode("utf-8", "replace")) from exc
        result = payload.get("esearchresult")
        if result is None:
            excerpt = str(payload.get("error", payload))[:200]
            raise ServiceError("esearch payload missing result", body_excerpt=excerpt)
        if result.get("ERROR"):
            raise ServiceError("esearch service error", body_excerpt=str(result["ERROR"])[:200])
        if "count" not in result:
            raise ServiceError("esearch payload missing count", body_excerpt=str(result)[:200])
        return int(result["count"]), list(result.get("idlist", []))

    def count_hits(self, spec: FetchSpec, window: DateWindow) -> int:
        total, _ = self.esearch(spec, window, offset=0, page_size=0)
        return total

    def search_ids(self, spec: FetchSpec, window: DateWindow, limit: int | None = None,
                   page_size: int = DEFAULT_PAGE_SIZE) -> list[str]:
        """All (or the first ``limit``) ids for a query, paginated, deduplicated."""
        ids: list[str] = []
        seen: set[str] = set()
        offset = 0
        while True:
            size = page_size if limit is None else min(page_size, limit - len(ids))
            total, page = self.esearch(spec, window, offset=offset, page_size=size)
            for i in page:
                if i not in seen:
                    seen.add(i)
                    ids.append(i)
                    if limit is not None and len(ids) >= limit:
                        return ids
            offset += size
            if offset >= total or not page:
                return ids

    # -- efetch ------------------------------------------------------------

    def efetch_abstracts(self, ids: list[str], spec: FetchSpec | None = None,
                         ) -> tuple[list[DocumentRecord], list[str]]:
        """Fetch abstract records for ids in batches of at most 200.

        Returns (records, skipped) where skipped lists every requested id that
        did not yield an abstract-bearing record.
        """
        if not ids:
            raise ValueError("efetch_abstracts requires at least one id")
        identity = self._identity_params(spec) if spec is not None else {}
        records: list[DocumentRecord] = []
        fetched: set[str] = set()
        for i in range(0, len(ids), EFETCH_BATCH_SIZE):
            batch = ids[i:i + EFETCH_BATCH_SIZE]
            params = {
                "db": "pubmed",
                "id": ",".join(batch),
                "rettype": "abstract",
                "retmode": "xml",
            }
            params.update(identity)
            body = self._request(EFETCH_URL, params)
            for record in parse_pubmed_xml(body):
                if record.id not in fetched:
                    fetched.add(record.id)
                    records.append(record)
        skipped = [i for i in ids if i not in fetched]
        if skipped:
            log.info("efetch: %d of %d ids had no usable abstract", len(skipped), len(ids))
        return records, skipped


# PubMed month names are English regardless of locale.
_MONTHS = {"jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
           "jul": 7, "aug": 8, "sep": 9, "oct": 10, "nov": 11, "dec": 12}
_YEAR_RE = re.compile(r"\b(\d{4})\b")


def _parse_pub_date(pubdate_el) -> PubDate | None:
    if pubdate_el is None:
        return None
    year_text = pubdate_el.findtext("Year")
    month_text = pubdate_el.findtext("Month")
    day_text = pubdate_el.findtext("Day")
    if year_text is None:
        # MedlineDate holds free text such as "2016 Mar-Apr".
        medline = pubdate_el.findtext("MedlineDate") or ""
        m = _YEAR_RE.search(medline)
        if m is None:
            return None
        return PubDate(int(m.group(1)))
    month = None
    if month_text:
        month_text = month_text.strip().lower()
        month = _MONTHS.get(month_text[:3]) or (int(month_text) if month_text.isdigit() else None)
    day = int(day_text) if day_text and day_text.isdigit() and month is not None else None
    return PubDate(int(year_text), month, day)


def parse_pubmed_xml(body: bytes) -> list[DocumentRecord]:
    """Parse an EFetch abstract payload; records without an abstract or a
    parseable id/date are dropped (and logged), never fabricated."""
    try:
        root = ElementTree.fromstring(body)
    except ElementTree.ParseError as exc:
        raise ServiceError("unparseable efetch XML", body_excerpt=body[:200].decode("utf-8", "replace")) from exc
    records = []
    for article in root.iter("PubmedArticle"):
        pmid = article.findtext("./MedlineCitation/PMID")
        if not pmid:
            log.warning("efetch: record without PMID skipped")
            continue
        art = article.find("./MedlineCitation/Article")
        if art is None:
            log.warning("efetch: %s has no Article element", pmid)
            continue
        title_el = art.find("ArticleTitle")
        title = "".join(title_el.itertext()).strip() if title_el is not None else ""
        abstract_parts = [
            "".join(el.itertext()).strip()
            for el in art.findall("./Abstract/AbstractText")
        ]
        abstract = " ".join(p for p in abstract_parts if p)
        if not abstract:
            log.debug("efetch: %s has no abstract text", pmid)
            continue
        pub_date = _parse_pub_date(art.find("./Journal/JournalIssue/PubDate"))
        if pub_date is None:
            log.warning("efetch: %s has no parseable publication date", pmid)
            continue
        records.append(DocumentRecord(id=pmid, title=title, abstract=abstract,
                                      pub_date=pub_date, source="pubmed"))
    return records


# -- corpus builders --------------------------------------------------------

def build_positive_corpus(spec: FetchSpec, client: EntrezClient) -> Corpus:
    """Every abstract the engine returns for the query in the year window."""
    if not spec.query:
        raise ValueError("positive corpus requires a nonempty query")
    if spec.year is None:
        raise ValueError("positive corpus requires a year")
    ids = client.search_ids(spec, year_window(spec.year))
    if not ids:
        raise CorpusError(f"empty positive corpus for query {spec.query!r}")
    records, skipped = client.efetch_abstracts(ids, spec)
    if skipped:
        log.info("positive corpus: skipped %d ids without abstracts", len(skipped))
    if not records:
        raise CorpusError(f"empty positive corpus for query {spec.query!r}")
    return Corpus(label=POSITIVE, docs=tuple(records))


def build_negative_corpus(spec: FetchSpec, client: EntrezClient) -> Corpus:
    """At most per_month_cap documents per month, in engine order, unioned."""
    if not spec.query:
        raise ValueError("negative corpus requires a nonempty query")
    if spec.year is None:
        raise ValueError("negative corpus requires a year")
    if spec.per_month_cap is None:
        raise ValueError("negative corpus requires a finite per_month_cap")
    ids: list[str] = []
    seen: set[str] = set()
    for month in range(1, 13):
        month_ids = client.search_ids(spec, month_window(spec.year, month), limit=spec.per_month_cap)
        for i in month_ids:
            if i not in seen:
                seen.add(i)
                ids.append(i)
    if not ids:
        raise CorpusError(f"empty negative corpus for query {spec.query!r}")
    records, skipped = client.efetch_abstracts(ids, spec)
    if skipped:
        log.info("negative corpus: skipped %d ids without abstracts", len(skipped))
    if not records:
        raise CorpusError(f"empty negative corpus for query {spec.query!r}")
    return Corpus(label=NEGATIVE, docs=tuple(records))


def count_by_year(query: str, years: list[int], client: EntrezClient,
                  spec: FetchSpec | None = None) -> list[tuple[int, int]]:
    """Cumulative hit counts: for each year, hits published up to its end."""
    if sorted(years) != list(years):
        raise ValueError("years must be sorted ascending")
    identity = spec or FetchSpec(query=query)
    counting_spec = FetchSpec(query=query, email=identity.email, tool=identity.tool,
                              api_key=identity.api_key)
    earliest = dt.date(1800, 1, 1)
    out = []
    for year in years:
        total = client.count_hits(counting_spec, (earliest, dt.date(year, 12, 31)))
        out.append((year, total))
    return out
