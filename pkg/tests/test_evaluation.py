import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from tesim.evaluation import (
    AnnotatedPair,
    ConfusionCounts,
    PairFileError,
    UndefinedMetric,
    accuracy,
    confusion_at_threshold,
    default_thresholds,
    evaluation_report,
    f_score,
    load_pairs,
    pearson,
    threshold_sweep,
)


class TestLoadPairs:
    def test_rows(self, fixtures_dir):
        pairs = load_pairs((fixtures_dir / "pairs.tsv").read_text())
        assert pairs[0] == AnnotatedPair("P1", "P2", 1, 4)
        assert len(pairs) == 4

    def test_bad_label_has_line_number(self):
        with pytest.raises(PairFileError, match="line 2"):
            load_pairs("a\tb\t1\t4\nc\td\t1\t6\n")

    def test_wrong_field_count(self):
        with pytest.raises(PairFileError, match="line 1"):
            load_pairs("a\tb\t1\n")

    def test_empty(self):
        assert load_pairs("") == []
        assert load_pairs("# header only\n\n") == []

    def test_duplicate_either_order(self):
        with pytest.warns(UserWarning, match="duplicate"):
            pairs = load_pairs("a\tb\t1\t4\nb\ta\t0\t1\n")
        assert pairs == [AnnotatedPair("a", "b", 1, 4)]

    def test_bytes(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert len(load_pairs(b"x\ty\t0\t2\n")) == 1


class TestPearson:
    def test_fixed_points(self):
        assert pearson([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8, abs=1e-12)
        assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0, abs=1e-12)
        assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)

    def test_constant_undefined(self):
        with pytest.raises(UndefinedMetric):
            pearson([1, 1, 1], [1, 2, 3])

    def test_length_checks(self):
        with pytest.raises(ValueError):
            pearson([1, 2], [1])
        with pytest.raises(ValueError):
            pearson([1], [1])

    @given(st.integers(0, 10_000), st.floats(0.1, 10), st.floats(-5, 5))
    def test_affine_invariance_and_oracle(self, seed, a, b):
        rng = np.random.default_rng(seed)
        x, y = rng.random(12), rng.random(12)
        r = pearson(x, y)
        assert r == pytest.approx(oracles.direct_pearson(list(x), list(y)), abs=1e-12)
        assert pearson(a * x + b, y) == pytest.approx(r, abs=1e-9)


class TestConfusionMetrics:
    def test_strict_threshold(self):
        c = confusion_at_threshold([0.5, 0.6, 0.4, 0.5], [1, 1, 0, 0], 0.5)
        assert c == ConfusionCounts(tp=1, tn=2, fp=0, fn=1)

    def test_accuracy(self):
        assert accuracy(ConfusionCounts(tp=3, tn=4, fp=2, fn=1)) == 0.7
        with pytest.raises(UndefinedMetric):
            accuracy(ConfusionCounts())

    def test_f1(self):
        assert f_score(ConfusionCounts(tp=2, tn=0, fp=1, fn=1)) == pytest.approx(2 / 3)
        assert f_score(ConfusionCounts(tp=0, tn=1, fp=1, fn=1)) == 0.0

    def test_f1_incalculable(self):
        with pytest.raises(UndefinedMetric):
            f_score(ConfusionCounts(tp=0, tn=3, fp=0, fn=2))  # nothing predicted similar
        with pytest.raises(UndefinedMetric):
            f_score(ConfusionCounts(tp=0, tn=3, fp=2, fn=0))  # nothing actually similar

    def test_f_beta(self):
        c = ConfusionCounts(tp=6, tn=0, fp=2, fn=4)
        p, r = 6 / 8, 6 / 10
        assert f_score(c, beta=2) == pytest.approx(5 * p * r / (4 * p + r), abs=1e-12)
        assert f_score(c, beta=0.5) == pytest.approx(1.25 * p * r / (0.25 * p + r), abs=1e-12)

    @given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.integers(0, 50))
    def test_random_tables(self, tp, tn, fp, fn):
        c = ConfusionCounts(tp, tn, fp, fn)
        if c.total:
            assert accuracy(c) == pytest.approx((tp + tn) / (tp + tn + fp + fn), abs=1e-12)
        expected = oracles.direct_f1(tp, fp, fn)
        if expected is None:
            with pytest.raises(UndefinedMetric):
                f_score(c)
        else:
            assert f_score(c) == pytest.approx(expected, abs=1e-12)


class TestSweep:
    def test_default_grid(self):
        grid = default_thresholds()
        assert len(grid) == 19
        assert grid[0] == 0.05 and grid[-1] == 0.95

    def test_matches_recount(self):
        rng = np.random.default_rng(2024)
        scores = list(rng.random(100))
        labels = [int(v) for v in rng.integers(0, 2, 100)]
        sweep = threshold_sweep(scores, labels)
        assert len(sweep.rows) == 19
        for row in sweep.rows:
            tp, tn, fp, fn = oracles.recount(scores, labels, row.threshold)
            assert row.counts == ConfusionCounts(tp, tn, fp, fn)
            assert row.accuracy == pytest.approx((tp + tn) / 100, abs=1e-12)
            assert row.f1 == pytest.approx(oracles.direct_f1(tp, fp, fn), abs=1e-12)

    def test_unsorted_rejected(self):
        with pytest.raises(ValueError):
            threshold_sweep([0.5], [1], [0.6, 0.2])

    def test_best_rows(self):
        sweep = threshold_sweep([0.9, 0.2], [1, 0], [0.1, 0.5, 0.95])
        assert sweep.best_accuracy().threshold == 0.5
        assert sweep.best_f1().threshold == 0.5


def test_report_by_hand():
    pairs = [AnnotatedPair("a", "b", 1, 5), AnnotatedPair("c", "d", 1, 3),
             AnnotatedPair("e", "f", 0, 2), AnnotatedPair("g", "h", 0, 1)]
    scores = [0.9, 0.7, 0.5, 0.2]
    p5 = oracles.direct_pearson(scores, [5, 3, 2, 1])
    p2 = oracles.direct_pearson(scores, [1, 1, 0, 0])
    expected = (
        "threshold,accuracy,f1\n"
        "0.10,0.5000,0.6667\n"  # everything predicted similar: P=1/2, R=1
        "0.30,0.7500,0.8000\n"  # tp=2 fp=1
        "0.60,1.0000,1.0000\n"
        "0.95,0.5000,incalculable\n"  # nothing predicted similar
        "best_accuracy=1.0000\n"
        "best_f1=1.0000\n"
        f"pearson_5level={p5:.4f}\n"
        f"pearson_2level={p2:.4f}\n"
    )
    assert evaluation_report(scores, pairs, [0.1, 0.3, 0.6, 0.95]) == expected
