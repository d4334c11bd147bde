from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from findialog.errors import EmptyVocabulary
from findialog.textvec import (
    CjkTfidfVectorizer,
    SparseVector,
    cosine,
    fit_vocabulary,
    tokenize,
    vectorize,
)

# 3-document fixture; token lists hand-derived, weights computed by an
# independent script applying tf * (ln((1+N)/(1+df)) + 1), L2-normalized.
FIXTURE_DOCS = [
    "锂电池 价格 上涨",
    "锂电池 需求 strong",
    "价格 价格 回落 price falls",
]
FIXTURE_COLUMNS = {"falls": 0, "price": 1, "strong": 2, "上涨": 3, "价格": 4,
                   "回落": 5, "电池": 6, "锂电": 7, "需求": 8}
FIXTURE_DOC_FREQ = {"falls": 1, "price": 1, "strong": 1, "上涨": 1, "价格": 2,
                    "回落": 1, "电池": 2, "锂电": 2, "需求": 1}
FIXTURE_WEIGHTS = [
    {3: 0.604652128305311, 4: 0.45985352875883484, 6: 0.45985352875883484,
     7: 0.45985352875883484},
    {2: 0.5628290964997665, 6: 0.4280460350631185, 7: 0.4280460350631185,
     8: 0.5628290964997665},
    {0: 0.4338160942155483, 1: 0.4338160942155483, 4: 0.6598566429147316,
     5: 0.4338160942155483},
]
FIXTURE_COS_01 = 0.39367695939000596
FIXTURE_COS_02 = 0.3034374057192977


class TestTokenize:
    def test_ascii(self):
        assert tokenize("ABC stock") == ["abc", "stock"]

    def test_cjk_bigrams(self):
        assert tokenize("锂电池") == ["锂电", "电池"]

    def test_mixed_hand_derived(self):
        assert tokenize("Q4营收增长") == ["q4", "营收", "收增", "增长"]

    def test_single_cjk_char(self):
        assert tokenize("涨") == ["涨"]

    def test_punctuation_separates_runs(self):
        assert tokenize("锂电池。价格") == ["锂电", "电池", "价格"]

    def test_digits_kept(self):
        assert tokenize("增长 23% q4") == ["增长", "23", "q4"]

    @given(st.text(max_size=80))
    @settings(max_examples=400, deadline=None)
    def test_total_and_no_empty_terms(self, text):
        terms = tokenize(text)
        assert all(terms), "no empty terms"
        assert all(t == t.lower() for t in terms)


class TestVocabulary:
    def test_min_df_one(self):
        vocab = fit_vocabulary(["a b", "a c"], min_df=1)
        assert set(vocab.terms) == {"a", "b", "c"}
        assert vocab.doc_freq == {"a": 2, "b": 1, "c": 1}
        assert vocab.n_docs == 2

    def test_min_df_two(self):
        vocab = fit_vocabulary(["a b", "a c"], min_df=2)
        assert set(vocab.terms) == {"a"}

    def test_empty_vocabulary(self):
        with pytest.raises(EmptyVocabulary):
            fit_vocabulary(["a", "b"], min_df=2)

    def test_fixture_doc_freq_matches_brute_force(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        assert vocab.doc_freq == FIXTURE_DOC_FREQ
        assert vocab.terms == FIXTURE_COLUMNS  # lexicographic columns

    def test_columns_lexicographic(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        assert vocab.columns == sorted(vocab.columns)


class TestVectorize:
    def test_all_unknown_gives_zero_vector(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        v = vectorize("unknown words only", vocab)
        assert v.is_zero and v.entries == ()

    def test_single_term_repeated_collapses_to_unit(self):
        vocab = fit_vocabulary(["alpha beta"])
        for n in (1, 2, 7):
            v = vectorize(" ".join(["alpha"] * n), vocab)
            assert len(v.entries) == 1
            assert v.entries[0][1] == pytest.approx(1.0, abs=1e-12)

    def test_fixture_weights_to_1e9(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        for doc, expected in zip(FIXTURE_DOCS, FIXTURE_WEIGHTS):
            v = vectorize(doc, vocab)
            got = dict(v.entries)
            assert set(got) == set(expected)
            for col, weight in expected.items():
                assert got[col] == pytest.approx(weight, rel=1e-9)

    def test_unit_norm(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        for doc in FIXTURE_DOCS:
            v = vectorize(doc, vocab)
            norm = math.sqrt(sum(w * w for _, w in v.entries))
            assert abs(norm - 1.0) <= 1e-9

    @given(st.lists(st.text(alphabet="abc甲乙丙 ", min_size=1, max_size=30), min_size=1, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_unit_norm_property(self, docs):
        try:
            vocab = fit_vocabulary(docs)
        except EmptyVocabulary:
            return
        for doc in docs:
            v = vectorize(doc, vocab)
            if not v.is_zero:
                norm = math.sqrt(sum(w * w for _, w in v.entries))
                assert abs(norm - 1.0) <= 1e-9


class TestCosine:
    def test_self_similarity_is_one(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        v = vectorize(FIXTURE_DOCS[0], vocab)
        assert cosine(v, v) == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_supports(self):
        a = SparseVector.from_counts({0: 1.0})
        b = SparseVector.from_counts({1: 1.0})
        assert cosine(a, b) == 0.0

    def test_zero_vector(self):
        zero = SparseVector((), 0.0)
        a = SparseVector.from_counts({0: 1.0})
        assert cosine(zero, a) == 0.0

    def test_fixture_pairs_match_hand_product(self):
        vocab = fit_vocabulary(FIXTURE_DOCS)
        v0, v1, v2 = (vectorize(d, vocab) for d in FIXTURE_DOCS)
        assert cosine(v0, v1) == pytest.approx(FIXTURE_COS_01, rel=1e-9)
        assert cosine(v0, v2) == pytest.approx(FIXTURE_COS_02, rel=1e-9)


class TestEstimatorApi:
    def test_fit_transform_and_params(self):
        vec = CjkTfidfVectorizer(min_df=1)
        assert vec.get_params() == {"min_df": 1}
        out = vec.fit_transform(FIXTURE_DOCS)
        assert len(out) == 3
        assert vec.get_feature_names_out() == sorted(FIXTURE_COLUMNS, key=FIXTURE_COLUMNS.get)
        direct = vectorize(FIXTURE_DOCS[0], vec.vocabulary_)
        assert out[0] == direct

    def test_transform_before_fit_raises(self):
        with pytest.raises(RuntimeError):
            CjkTfidfVectorizer().transform(["x"])

    def test_set_params_roundtrip(self):
        vec = CjkTfidfVectorizer().set_params(min_df=3)
        assert vec.min_df == 3
