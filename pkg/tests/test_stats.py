from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from findialog.curation.types import QuestionRecord
from findialog.errors import EmptyInput
from findialog.stats import (
    dataset_stats,
    quantile,
    topic_report,
    topics_markdown,
    word_count,
)
from findialog.textvec import fit_vocabulary, kmeans, vectorize

from .conftest import make_dialogue, random_cjk_text


class TestWordCount:
    def test_empty(self):
        assert word_count("") == 0

    def test_ascii(self):
        assert word_count("what is revenue") == 3

    def test_mixed(self):
        # 4 CJK chars + 1 token, hand-applied rule
        assert word_count("锂价上涨 impact?") == 5


class TestQuantile:
    def test_singleton(self):
        for p in (0.0, 0.3, 1.0):
            assert quantile([5], p) == 5

    def test_type7_1_to_100_p05(self):
        values = list(range(1, 101))
        assert quantile(values, 0.05) == pytest.approx(5.95, abs=1e-12)

    def test_median_even_count(self):
        assert quantile([1, 2, 3, 4], 0.5) == pytest.approx(2.5)

    def test_extremes_are_min_max(self):
        values = sorted([3.5, 1.25, 9.75, 2.0])
        assert quantile(values, 0.0) == min(values)
        assert quantile(values, 1.0) == max(values)

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            quantile([], 0.5)

    def test_matches_numpy_type7(self):
        rng = random.Random(7)
        values = sorted(rng.uniform(0, 100) for _ in range(37))
        for p in (0.05, 0.25, 0.5, 0.9, 0.95):
            assert quantile(values, p) == pytest.approx(
                float(np.quantile(values, p)), rel=1e-12)

    @given(st.lists(st.floats(0, 1000, allow_nan=False), min_size=1, max_size=50),
           st.lists(st.floats(0, 1, allow_nan=False), min_size=2, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_monotone_in_p(self, values, ps):
        values = sorted(values)
        ps = sorted(ps)
        results = [quantile(values, p) for p in ps]
        assert all(results[i] <= results[i + 1] + 1e-9 for i in range(len(results) - 1))


def synthetic_dialogues(n: int, seed: int = 11):
    rng = random.Random(seed)
    dialogues = []
    for i in range(n):
        pairs = []
        for _ in range(rng.randint(1, 6)):
            pairs.append((random_cjk_text(rng, rng.randint(5, 30)) + " extra?",
                          random_cjk_text(rng, rng.randint(20, 120)) + " 结论 ok"))
        dialogues.append(make_dialogue(f"d{i:05d}", pairs, round_no=0))
    return dialogues


class TestDatasetStats:
    def test_single_dialogue_all_stats_equal(self):
        dlg = make_dialogue("d0", [("q 甲?", "a 乙。")] * 4)
        report = dataset_stats([dlg])
        pairs = report.metrics["dialog_pairs"]
        assert pairs.mean == pairs.q05 == pairs.q95 == 4.0

    def test_three_dialogues_hand_quantiles(self):
        dialogues = [
            make_dialogue("d0", [("q?", "a.")] * 3),
            make_dialogue("d1", [("q?", "a.")] * 4),
            make_dialogue("d2", [("q?", "a.")] * 5),
        ]
        pairs = dataset_stats(dialogues).metrics["dialog_pairs"]
        assert pairs.mean == pytest.approx(4.0)
        assert pairs.q05 == pytest.approx(3.1)   # h=0.1 between 3 and 4
        assert pairs.q95 == pytest.approx(4.9)

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            dataset_stats([])

    def test_500_dialogue_fixture_matches_numpy_oracle(self):
        dialogues = synthetic_dialogues(500)
        report = dataset_stats(dialogues)

        # independent brute-force oracle over the same unit-count rule
        pairs, q_words, a_words, d_words = [], [], [], []
        for dlg in dialogues:
            pairs.append(len(dlg.turns) / 2)
            total = 0
            for idx, turn in enumerate(dlg.turns):
                units = word_count(turn.text)
                total += units
                (q_words if idx % 2 == 0 else a_words).append(units)
            d_words.append(total)
        oracle = {
            "dialog_pairs": pairs,
            "words_per_question": q_words,
            "words_per_answer": a_words,
            "words_per_dialog": d_words,
        }
        for name, values in oracle.items():
            summary = report.metrics[name]
            assert summary.mean == pytest.approx(float(np.mean(values)), rel=1e-9)
            assert summary.q05 == pytest.approx(float(np.quantile(values, 0.05)), rel=1e-9)
            assert summary.q95 == pytest.approx(float(np.quantile(values, 0.95)), rel=1e-9)
        assert report.n_dialogues == 500

    def test_permutation_invariance(self):
        dialogues = synthetic_dialogues(50)
        shuffled = list(dialogues)
        random.Random(3).shuffle(shuffled)
        a = dataset_stats(dialogues).to_record()
        b = dataset_stats(shuffled).to_record()
        assert a == b

    def test_markdown_layout(self):
        report = dataset_stats(synthetic_dialogues(10))
        md = report.to_markdown()
        lines = md.splitlines()
        assert lines[0] == "| | Mean | Q-5% | Q-95% |"
        assert "# dialog pairs" in lines[2]
        assert "# words per question" in lines[3]
        assert "# words per answer" in lines[4]
        assert "# words per dialog" in lines[5]
        assert "units" in md  # footnote present


class TestTopicReport:
    def _setup(self, texts, k):
        questions = [QuestionRecord(id=f"q{i:02d}", text=t) for i, t in enumerate(texts)]
        vocab = fit_vocabulary(texts)
        vectors = [vectorize(t, vocab) for t in texts]
        clustering = kmeans(vectors, k=k, rng_seed=0, dim=len(vocab))
        return questions, vectors, clustering, vocab

    def test_single_cluster_share_one(self):
        questions, vectors, clustering, vocab = self._setup(
            ["风险 分析?", "风险 评估?", "风险 控制?"], k=1)
        rows = topic_report(questions, vectors, clustering, vocab)
        assert len(rows) == 1
        assert rows[0].share == pytest.approx(1.0)
        assert rows[0].size == 3
        assert 1 <= len(rows[0].samples) <= 3

    def test_two_equal_clusters(self):
        texts = ["利率 上升?", "利率 下降?", "汇率 贬值?", "汇率 升值?"]
        questions, vectors, clustering, vocab = self._setup(texts, k=2)
        rows = topic_report(questions, vectors, clustering, vocab)
        assert sorted(r.share for r in rows) == [0.5, 0.5]
        assert sum(r.share for r in rows) == pytest.approx(1.0, abs=1e-9)

    def test_shares_sum_to_one_and_match_counts(self):
        rng = random.Random(13)
        texts = [random_cjk_text(rng, 14) for _ in range(30)]
        questions, vectors, clustering, vocab = self._setup(texts, k=4)
        rows = topic_report(questions, vectors, clustering, vocab)
        assert sum(r.share for r in rows) == pytest.approx(1.0, abs=1e-9)
        sizes = clustering.sizes()
        assert [r.size for r in rows] == sizes
        for r in rows:
            assert r.share == pytest.approx(r.size / 30)
            assert r.theme_label  # top-terms label nonempty

    def test_markdown_renders_rows(self):
        questions, vectors, clustering, vocab = self._setup(
            ["风险 分析?", "风险 评估?"], k=1)
        rows = topic_report(questions, vectors, clustering, vocab)
        md = topics_markdown(rows)
        assert md.startswith("| Theme | Size | Share | Sample questions |")
        assert "100.0%" in md
