"""litmine: build labeled abstract corpora, mine discriminative search terms,
compose Boolean queries, and aggregate screening votes for literature reviews."""

__version__ = "0.1.0"

from litmine.corpus import Corpus, CorpusError, DocumentRecord, PubDate, load_corpus, save_corpus
from litmine.entrez import (EntrezClient, FetchSpec, NetworkError, ServiceError,
                            build_negative_corpus, build_positive_corpus, count_by_year)
from litmine.textstats import DocFrequencyTable, TokenizerConfig, conditional_probability, doc_frequency, tokenize
from litmine.ranking import CurationList, RankerConfig, TermScore, discriminative_score, score_terms, select_terms
from litmine.boolquery import And, Dialect, Not, Or, Phrase, QuerySyntaxError, Term, and_combine, or_of_terms, parse, serialize
from litmine.screening import ScreeningDecision, ScreeningPolicy, StageReport, VoteRecord, decide, funnel_export, run_stage

__all__ = [
    "__version__",
    "Corpus", "CorpusError", "DocumentRecord", "PubDate", "load_corpus", "save_corpus",
    "EntrezClient", "FetchSpec", "NetworkError", "ServiceError",
    "build_negative_corpus", "build_positive_corpus", "count_by_year",
    "DocFrequencyTable", "TokenizerConfig", "conditional_probability", "doc_frequency", "tokenize",
    "CurationList", "RankerConfig", "TermScore", "discriminative_score", "score_terms", "select_terms",
    "And", "Dialect", "Not", "Or", "Phrase", "QuerySyntaxError", "Term",
    "and_combine", "or_of_terms", "parse", "serialize",
    "ScreeningDecision", "ScreeningPolicy", "StageReport", "VoteRecord",
    "decide", "funnel_export", "run_stage",
]
