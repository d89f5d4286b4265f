import random
import re

import pytest
from hypothesis import given, settings, strategies as st

from litmine.corpus import Corpus
from litmine.textstats import (DocFrequencyTable, TokenizerConfig, conditional_probability,
                               default_stop_words, distinct_word_count, doc_frequency,
                               load_stop_words, tokenize)

from conftest import make_corpus, make_doc


# -- tokenizer -------------------------------------------------------------------

def test_stop_words_only_text_tokenizes_to_nothing():
    assert tokenize("the at is") == frozenset()


def test_case_folding_and_set_semantics():
    assert tokenize("Pathology pathology.") == {"pathology"}


def test_splitting_rules_hyphen_digits_punctuation():
    assert tokenize("Crowd-sourced BioGames: 12 RBCs!") == {"crowd", "sourced", "biogames", "rbcs"}


def test_min_token_length_removes_single_letters():
    assert tokenize("a b xy") == {"xy"}
    assert tokenize("a b xy", TokenizerConfig(min_token_length=3)) == frozenset()


def test_no_stemming_keeps_surface_forms():
    tokens = tokenize("pathology pathologies pathological")
    assert tokens == {"pathology", "pathologies", "pathological"}


def test_accented_letters_are_letters():
    assert tokenize("Müller café naïve") == {"müller", "café", "naïve"}


def test_fold_case_off_keeps_case():
    cfg = TokenizerConfig(fold_case=False, stop_words=frozenset())
    assert tokenize("Tumor tumor", cfg) == {"Tumor", "tumor"}


def test_default_stop_word_list_has_179_entries():
    assert len(default_stop_words()) == 179


def test_stop_word_file_loader_supports_comments(tmp_path):
    path = tmp_path / "stops.txt"
    path.write_text("# a comment\nfoo\n\nbar\n", encoding="utf-8")
    assert load_stop_words(path) == {"foo", "bar"}


def test_stop_word_file_loader_rejects_uppercase(tmp_path):
    path = tmp_path / "stops.txt"
    path.write_text("Foo\n", encoding="utf-8")
    with pytest.raises(ValueError, match="lowercase"):
        load_stop_words(path)


@settings(derandomize=True, max_examples=300)
@given(st.text(max_size=200))
def test_tokenize_is_idempotent_on_its_own_output(text):
    once = tokenize(text)
    again = tokenize(" ".join(sorted(once)))
    assert again == once


def test_tokenize_idempotent_on_case_fold_expansions():
    # Case folding can expand or decompose characters; the second pass must
    # still see the same tokens.
    for text in ("ΐΐxx", "straße", "İstanbul",
                 "Ångstrom", "ﬁle ﬃcient"):
        once = tokenize(text)
        assert tokenize(" ".join(sorted(once))) == once


# -- document frequency ------------------------------------------------------------

def test_doc_frequency_counts_documents_not_occurrences():
    corpus = make_corpus("positive", ["tumor tumor tumor"])
    table = doc_frequency(corpus)
    assert table.counts["tumor"] == 1


def test_doc_frequency_counts_membership_across_docs():
    corpus = make_corpus("positive", ["carcinoma study", "study alone", "carcinoma again"])
    table = doc_frequency(corpus)
    assert table.counts["carcinoma"] == 2
    assert table.n_docs == 3


def test_doc_frequency_includes_title_text():
    doc = make_doc("d1", "abstract words", title="Carcinoma margins")
    table = doc_frequency(Corpus(label="positive", docs=(doc,)))
    assert table.counts["carcinoma"] == 1
    assert table.counts["margins"] == 1


def test_doc_frequency_rejects_empty_corpus():
    with pytest.raises(ValueError, match="empty"):
        doc_frequency(Corpus(label="positive", docs=()))


def _random_corpus(rng, n_docs, vocab):
    texts = []
    for _ in range(n_docs):
        k = rng.randint(1, len(vocab))
        texts.append(" ".join(rng.sample(vocab, k)))
    return make_corpus("positive", texts)


def _oracle_doc_frequency(corpus, cfg):
    """Independent recount: nested loops over documents and candidate words."""
    stop = cfg.stop_words
    token_sets = []
    for doc in corpus.docs:
        raw = (doc.title + " " + doc.abstract).casefold()
        words = set(re.findall(r"[^\W\d_]+", raw))
        token_sets.append({w for w in words if len(w) >= cfg.min_token_length and w not in stop})
    vocab = set().union(*token_sets) if token_sets else set()
    counts = {}
    for word in vocab:
        n = 0
        for tokens in token_sets:
            if word in tokens:
                n += 1
        counts[word] = n
    return counts


def test_doc_frequency_matches_brute_force_on_random_corpora():
    rng = random.Random(20)
    vocab = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
             "iota", "kappa", "mu", "nu", "omicron", "sigma", "tau"]
    cfg = TokenizerConfig()
    for _ in range(25):
        corpus = _random_corpus(rng, rng.randint(1, 20), vocab)
        table = doc_frequency(corpus, cfg)
        assert table.counts == _oracle_doc_frequency(corpus, cfg)


def test_doc_frequency_is_permutation_invariant():
    texts = ["alpha beta", "beta gamma", "gamma delta alpha", "delta"]
    forward = make_corpus("positive", texts)
    docs_reversed = tuple(reversed(forward.docs))
    backward = Corpus(label="positive", docs=docs_reversed)
    assert doc_frequency(forward).counts == doc_frequency(backward).counts


def test_adding_an_unrelated_document_lowers_probability():
    base = make_corpus("positive", ["tumor margin", "tumor cell"])
    more = Corpus(label="positive", docs=base.docs + (make_doc("extra", "benign sample"),))
    t_base = doc_frequency(base)
    t_more = doc_frequency(more)
    assert t_more.counts["tumor"] == t_base.counts["tumor"]
    assert conditional_probability(t_more, "tumor") < conditional_probability(t_base, "tumor")


# -- conditional probability ---------------------------------------------------------

def test_conditional_probability_is_the_document_fraction():
    table = DocFrequencyTable("positive", 4, {"w": 2})
    assert conditional_probability(table, "w") == 0.5


def test_conditional_probability_absent_word_is_zero():
    table = DocFrequencyTable("positive", 4, {"w": 2})
    assert conditional_probability(table, "missing") == 0.0


def test_conditional_probability_bounds_on_random_tables():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(1, 50)
        df = rng.randint(0, n)
        table = DocFrequencyTable("positive", n, {"w": df} if df else {})
        p = conditional_probability(table, "w")
        assert 0.0 <= p <= 1.0


def test_table_frequencies_stay_within_document_count():
    corpus = make_corpus("positive", ["alpha beta", "alpha", "beta alpha gamma"])
    table = doc_frequency(corpus)
    assert all(1 <= f <= table.n_docs for f in table.counts.values())
    assert not any(w in default_stop_words() for w in table.counts)


# -- vocabulary statistics -------------------------------------------------------------

def test_distinct_word_count_with_and_without_stop_words():
    corpus = make_corpus("positive", ["the tumor was large", "a tumor and a cyst"])
    cfg = TokenizerConfig()
    with_removal = distinct_word_count(corpus, cfg)
    without_removal = distinct_word_count(corpus, cfg, remove_stop_words=False)
    assert with_removal == 3  # tumor, large, cyst
    assert without_removal == 6  # + the, was, and (single-letter 'a' stays sub-length)
    assert without_removal > with_removal
