import json

import pytest

from litmine.corpus import Corpus, CorpusError, DocumentRecord, PubDate, load_corpus, save_corpus

from conftest import make_corpus, make_doc


def test_pub_date_roundtrip_full_partial_and_year_only():
    for text in ("2016-03-05", "2016-03", "2016"):
        assert PubDate.fromisoformat(text).isoformat() == text


def test_pub_date_rejects_bad_strings():
    for text in ("16-03-05", "2016/03/05", "March 2016", ""):
        with pytest.raises(CorpusError):
            PubDate.fromisoformat(text)


def test_pub_date_rejects_day_without_month():
    with pytest.raises(CorpusError):
        PubDate(2016, None, 5)


def test_document_requires_id_and_some_text():
    with pytest.raises(CorpusError):
        DocumentRecord(id="", title="t", abstract="a", pub_date=PubDate(2016))
    with pytest.raises(CorpusError):
        DocumentRecord(id="x", title="", abstract="", pub_date=PubDate(2016))


def test_corpus_rejects_duplicate_ids():
    doc = make_doc("dup", "text")
    with pytest.raises(CorpusError, match="dup"):
        Corpus(label="positive", docs=(doc, doc))


def test_corpus_n_docs_matches_length():
    corpus = make_corpus("positive", ["one", "two", "three"])
    assert corpus.n_docs == len(corpus.docs) == 3


def test_save_load_roundtrip_is_identity(tmp_path):
    corpus = make_corpus("positive", ["alpha beta", "gamma délta", "epsilon"])
    path = tmp_path / "c.jsonl"
    save_corpus(corpus, path)
    assert load_corpus(path) == corpus


def test_roundtrip_preserves_partial_dates(tmp_path):
    docs = (
        make_doc("a", "x", month=None, day=None),
        make_doc("b", "y", month=3, day=None),
        make_doc("c", "z", month=3, day=9),
    )
    corpus = Corpus(label="custom-set", docs=docs)
    path = tmp_path / "c.jsonl"
    save_corpus(corpus, path)
    assert load_corpus(path) == corpus


def _write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _record_line(doc_id):
    return json.dumps({"id": doc_id, "title": "t", "abstract": "a",
                       "pub_date": "2016-01-02", "source": "local"})


def test_load_reports_duplicate_id_line_number(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_lines(path, [
        json.dumps({"label": "positive", "n_docs": 3}),
        _record_line("a"),
        _record_line("b"),
        _record_line("a"),
    ])
    with pytest.raises(CorpusError, match="line 4"):
        load_corpus(path)


def test_load_reports_count_mismatch(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_lines(path, [json.dumps({"label": "positive", "n_docs": 5})]
                 + [_record_line(f"d{i}") for i in range(4)])
    with pytest.raises(CorpusError, match="count mismatch"):
        load_corpus(path)


def test_load_reports_malformed_record_line_number(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_lines(path, [
        json.dumps({"label": "positive", "n_docs": 2}),
        _record_line("a"),
        "{not json",
    ])
    with pytest.raises(CorpusError, match="line 3"):
        load_corpus(path)


def test_load_requires_header(tmp_path):
    path = tmp_path / "c.jsonl"
    _write_lines(path, [_record_line("a")])
    with pytest.raises(CorpusError, match="line 1"):
        load_corpus(path)


def test_roundtrip_property_on_generated_corpora(tmp_path):
    import random

    rng = random.Random(7)
    for trial in range(20):
        texts = [" ".join(rng.choice(["alpha", "beta", "gamma", "delta"])
                          for _ in range(rng.randint(1, 8)))
                 for _ in range(rng.randint(1, 15))]
        corpus = make_corpus(rng.choice(["positive", "negative", "custom"]), texts,
                             prefix=f"t{trial}-")
        path = tmp_path / f"c{trial}.jsonl"
        save_corpus(corpus, path)
        assert load_corpus(path) == corpus
