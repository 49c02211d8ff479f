import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracle_summ.textprep import (DocumentSet, PreprocessConfig, ReferenceSummary, Sentence, build_document_set,
                                  default_stopwords, extract_ngrams, ngrams_of_sentences, porter_stem,
                                  preprocess_tokens, read_stopwords, reference_multiset, tokenize)

from conftest import FIXTURES

tokens_st = st.lists(st.sampled_from(["a", "b", "c", "running", "ponies"]), max_size=12)


@pytest.mark.parametrize("raw, expected", [
    ("The cat sat.", ["the", "cat", "sat"]),
    ("", []),
    ("A  b", ["a", "b"]),
    ("“Quoted,” she said -- twice!", ["quoted", "she", "said", "twice"]),
    ("state-of-the-art don't", ["state-of-the-art", "don't"]),
])
def test_tokenize(raw, expected):
    assert tokenize(raw) == expected


def test_tokenize_keeps_case_when_asked():
    assert tokenize("The Cat", lowercase=False) == ["The", "Cat"]


@pytest.mark.parametrize("word, stem", [
    ("caresses", "caress"), ("ponies", "poni"), ("ties", "ti"), ("caress", "caress"), ("cats", "cat"),
    ("feed", "feed"), ("agreed", "agre"), ("plastered", "plaster"), ("motoring", "motor"),
    ("sing", "sing"), ("conflated", "conflat"), ("troubled", "troubl"), ("sized", "size"),
    ("hopping", "hop"), ("falling", "fall"), ("filing", "file"), ("happy", "happi"),
    ("relational", "relat"), ("conditional", "condit"), ("generalization", "gener"), ("a", "a"),
])
def test_porter_reference_vectors(word, stem):
    assert porter_stem(word) == stem


@pytest.mark.parametrize("token", ["2,000", "don't", "x-ray", "café", "42"])
def test_porter_passes_non_alphabetic_through(token):
    assert porter_stem(token) == token


@pytest.mark.parametrize("tokens, n, expected", [
    (["a", "b", "a"], 1, {("a",): 2, ("b",): 1}),
    (["a", "b", "a"], 2, {("a", "b"): 1, ("b", "a"): 1}),
    (["a"], 2, {}),
])
def test_extract_ngrams(tokens, n, expected):
    assert dict(extract_ngrams(tokens, n)) == expected


def test_extract_ngrams_rejects_order_zero():
    with pytest.raises(ValueError):
        extract_ngrams(["a"], 0)


@given(tokens_st, st.integers(1, 4))
def test_ngram_total_count(tokens, n):
    assert sum(extract_ngrams(tokens, n).values()) == max(0, len(tokens) - n + 1)


@given(tokens_st, st.integers(1, 3))
def test_stemming_commutes_with_extraction(tokens, n):
    stemmed_first = extract_ngrams([porter_stem(t) for t in tokens], n)
    stemmed_after = extract_ngrams([], n)
    for g, c in extract_ngrams(tokens, n).items():
        stemmed_after[tuple(porter_stem(t) for t in g)] += c
    assert stemmed_first == stemmed_after


def test_windows_do_not_cross_sentences():
    grams = ngrams_of_sentences([["a", "b"], ["c", "d"]], 2)
    assert ("b", "c") not in grams
    assert sum(grams.values()) == 2


def test_joined_reference_mode_crosses_sentences():
    ref = ReferenceSummary(0, (("a", "b"), ("c",)))
    assert ("b", "c") in reference_multiset(ref, 2, "joined")
    assert ("b", "c") not in reference_multiset(ref, 2, "sentence")


@given(st.lists(st.sampled_from(["the", "of", "flood", "river", "rain."]), max_size=10))
def test_raw_count_ignores_stopword_toggle(words):
    raw = " ".join(words)
    on = PreprocessConfig(n=1, stopword_removal=True, stopwords=frozenset({"the", "of"}))
    off = PreprocessConfig(n=1, stopword_removal=False, stopwords=frozenset({"the", "of"}))
    toks_on, count_on = preprocess_tokens(raw, on)
    toks_off, count_off = preprocess_tokens(raw, off)
    assert count_on == count_off >= len(toks_on)
    assert len(toks_off) == count_off


def test_stopwords_matched_before_stemming():
    cfg = PreprocessConfig(n=1, stopword_removal=True, stopwords=frozenset({"was"}))
    # "was" stems to "wa"; the list entry must still catch it
    assert preprocess_tokens("It was raining", cfg)[0] == ("it", "rain")


def test_build_document_set_ids_and_lengths():
    cfg = PreprocessConfig.for_order(1)
    docs = build_document_set([["The river flooded.", "  ", "..."], ["Rain fell on the town."]], cfg)
    assert [s.id for s in docs] == [0, 1]
    assert [s.doc for s in docs] == [0, 1]
    assert docs.lengths("raw") == [3, 5]
    assert docs.lengths("tokens") == [2, 3]


def test_document_set_requires_ordered_ids():
    with pytest.raises(ValueError):
        DocumentSet((Sentence(1, ("a",), 1),))


def test_reference_must_have_content():
    with pytest.raises(ValueError):
        ReferenceSummary(0, ((),))


def test_config_defaults_follow_order():
    assert PreprocessConfig.for_order(1).stopword_removal
    assert not PreprocessConfig.for_order(2).stopword_removal
    with pytest.raises(ValueError):
        PreprocessConfig(n=0)


def test_stopword_file(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("# comment\nThe\n\nof\n", encoding="utf-8")
    assert read_stopwords(path) == {"the", "of"}
    assert read_stopwords(FIXTURES / "text" / "stop.txt") == {"the", "of"}
    assert {"the", "a", "of"} <= default_stopwords()
