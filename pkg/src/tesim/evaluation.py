"""Evaluation against annotated document pairs: Pearson, accuracy, F-score."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "AnnotatedPair",
    "ConfusionCounts",
    "SweepRow",
    "Sweep",
    "PairFileError",
    "UndefinedMetric",
    "load_pairs",
    "pearson",
    "confusion_at_threshold",
    "accuracy",
    "f_score",
    "threshold_sweep",
    "default_thresholds",
    "evaluation_report",
]


class PairFileError(ValueError):
    pass


class UndefinedMetric(ArithmeticError):
    """The metric has no value for this input (e.g. incalculable F1)."""


@dataclass(frozen=True)
class AnnotatedPair:
    did_a: str
    did_b: str
    label2: int
    label5: int

    def __post_init__(self) -> None:
        if self.label2 not in (0, 1):
            raise ValueError(f"label2 must be 0 or 1, got {self.label2}")
        if not 1 <= self.label5 <= 5:
            raise ValueError(f"label5 must be in 1..5, got {self.label5}")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


def load_pairs(source: bytes | str) -> list[AnnotatedPair]:
    """Parse ``did_a <TAB> did_b <TAB> label2 <TAB> label5`` rows.

    Duplicate pairs (in either order) raise a warning; the first is kept.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    pairs: list[AnnotatedPair] = []
    seen: set[frozenset[str]] = set()
    for lineno, line in enumerate(source.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split("\t")]
        if len(parts) != 4:
            raise PairFileError(f"line {lineno}: expected 4 tab-separated fields")
        try:
            pair = AnnotatedPair(parts[0], parts[1], int(parts[2]), int(parts[3]))
        except ValueError as exc:
            raise PairFileError(f"line {lineno}: {exc}") from None
        key = frozenset((pair.did_a, pair.did_b))
        if key in seen:
            warnings.warn(f"line {lineno}: duplicate pair {pair.did_a}/{pair.did_b} ignored")
            continue
        seen.add(key)
        pairs.append(pair)
    return pairs


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Population covariance over the product of standard deviations."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    dx, dy = xa - xa.mean(), ya - ya.mean()
    sx, sy = math.sqrt(np.mean(dx * dx)), math.sqrt(np.mean(dy * dy))
    if sx == 0 or sy == 0:
        raise UndefinedMetric("correlation undefined for a constant sequence")
    r = float(np.mean(dx * dy)) / (sx * sy)
    return max(-1.0, min(1.0, r))


def confusion_at_threshold(
    scores: Sequence[float], labels2: Sequence[int], threshold: float
) -> ConfusionCounts:
    """Predict similar iff score > threshold and tally against the labels."""
    if len(scores) != len(labels2):
        raise ValueError(f"length mismatch: {len(scores)} vs {len(labels2)}")
    tp = tn = fp = fn = 0
    for s, y in zip(scores, labels2):
        predicted = s > threshold
        if predicted and y:
            tp += 1
        elif predicted:
            fp += 1
        elif y:
            fn += 1
        else:
            tn += 1
    return ConfusionCounts(tp, tn, fp, fn)


def accuracy(c: ConfusionCounts) -> float:
    if c.total == 0:
        raise UndefinedMetric("accuracy of an empty confusion table")
    return (c.tp + c.tn) / c.total


def f_score(c: ConfusionCounts, beta: float = 1.0) -> float:
    """F-beta from precision and recall; 0.0 when both are zero.

    Raises :class:`UndefinedMetric` ("incalculable") when nothing was
    predicted similar or nothing is actually similar.
    """
    if c.tp + c.fp == 0 or c.tp + c.fn == 0:
        raise UndefinedMetric("F-score incalculable: precision or recall undefined")
    p = c.tp / (c.tp + c.fp)
    r = c.tp / (c.tp + c.fn)
    if p + r == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * p * r / (b2 * p + r)


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    counts: ConfusionCounts
    accuracy: float | None
    f1: float | None  # None means incalculable


@dataclass(frozen=True)
class Sweep:
    rows: tuple[SweepRow, ...]

    def best_accuracy(self) -> SweepRow | None:
        rows = [r for r in self.rows if r.accuracy is not None]
        return max(rows, key=lambda r: r.accuracy) if rows else None  # type: ignore[arg-type,return-value]

    def best_f1(self) -> SweepRow | None:
        rows = [r for r in self.rows if r.f1 is not None]
        return max(rows, key=lambda r: r.f1) if rows else None  # type: ignore[arg-type,return-value]


def default_thresholds() -> list[float]:
    """0.05, 0.10, ..., 0.95."""
    return [round(0.05 * i, 2) for i in range(1, 20)]


def threshold_sweep(
    scores: Sequence[float], labels2: Sequence[int], thresholds: Sequence[float] | None = None
) -> Sweep:
    """Accuracy and F1 at every threshold; undefined values are kept as None."""
    if thresholds is None:
        thresholds = default_thresholds()
    if list(thresholds) != sorted(thresholds):
        raise ValueError("thresholds must be sorted ascending")
    rows = []
    for t in thresholds:
        c = confusion_at_threshold(scores, labels2, t)
        try:
            acc: float | None = accuracy(c)
        except UndefinedMetric:
            acc = None
        try:
            f1: float | None = f_score(c)
        except UndefinedMetric:
            f1 = None
        rows.append(SweepRow(t, c, acc, f1))
    return Sweep(tuple(rows))


def _fmt(value: float | None, undefined: str) -> str:
    return undefined if value is None else f"{value:.4f}"


def evaluation_report(
    scores: Sequence[float],
    pairs: Sequence[AnnotatedPair],
    thresholds: Sequence[float] | None = None,
) -> str:
    """CSV sweep table followed by ``key=value`` summary lines."""
    labels2 = [p.label2 for p in pairs]
    labels5 = [p.label5 for p in pairs]
    sweep = threshold_sweep(scores, labels2, thresholds)
    lines = ["threshold,accuracy,f1"]
    for row in sweep.rows:
        lines.append(
            f"{row.threshold:.2f},{_fmt(row.accuracy, 'undefined')},{_fmt(row.f1, 'incalculable')}"
        )
    best_acc, best_f1 = sweep.best_accuracy(), sweep.best_f1()
    lines.append(f"best_accuracy={_fmt(best_acc and best_acc.accuracy, 'undefined')}")
    lines.append(f"best_f1={_fmt(best_f1 and best_f1.f1, 'incalculable')}")
    for name, labels in (("pearson_5level", labels5), ("pearson_2level", labels2)):
        try:
            value: float | None = pearson(scores, labels)
        except (UndefinedMetric, ValueError):
            value = None
        lines.append(f"{name}={_fmt(value, 'undefined')}")
    return "\n".join(lines) + "\n"
