"""Precision, recall and F-measure for PP chunking and role labelling."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .ingest import GoldSpan
from .roles import CATEGORIES, RoleCategory


class UndefinedMetric(ZeroDivisionError):
    """A ratio whose denominator is zero; reports render it as n/a."""


@dataclass(frozen=True)
class MatchCounts:
    correct: int = 0
    predicted: int = 0
    gold_total: int = 0

    def __post_init__(self):
        if min(self.correct, self.predicted, self.gold_total) < 0:
            raise ValueError("counts must be non-negative")
        if self.correct > self.predicted or self.correct > self.gold_total:
            raise ValueError(f"correct={self.correct} exceeds predicted or gold total")

    def __add__(self, other: "MatchCounts") -> "MatchCounts":
        return MatchCounts(
            self.correct + other.correct,
            self.predicted + other.predicted,
            self.gold_total + other.gold_total,
        )


def precision(c: MatchCounts) -> float:
    if c.predicted == 0:
        raise UndefinedMetric("precision undefined: nothing predicted")
    return c.correct / c.predicted


def recall(c: MatchCounts) -> float:
    if c.gold_total == 0:
        raise UndefinedMetric("recall undefined: no gold answers")
    return c.correct / c.gold_total


def f_measure(p: float, r: float, beta: float = 1.0) -> float:
    """Weighted harmonic mean ``(b^2 + 1) P R / (b^2 P + R)``."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    b2 = beta * beta
    denom = b2 * p + r
    if denom == 0:
        raise UndefinedMetric("F-measure undefined: P and R are both zero")
    return (b2 + 1) * p * r / denom


def _maybe(fn, *args):
    try:
        return fn(*args)
    except UndefinedMetric:
        return None


def scores(c: MatchCounts, beta: float = 1.0) -> tuple[float | None, float | None, float | None]:
    """(P, R, F) with None for undefined values."""
    p, r = _maybe(precision, c), _maybe(recall, c)
    f = _maybe(f_measure, p, r, beta) if p is not None and r is not None else None
    return p, r, f


def percent(value: float) -> str:
    """Percentage with one decimal, rounding halves up as printed tables do."""
    return str(Decimal(repr(100 * value)).quantize(Decimal("0.1"), ROUND_HALF_UP)) + "%"


def _as_keys(spans) -> Counter:
    keys = Counter()
    for span in spans:
        if isinstance(span, GoldSpan):
            keys[(span.sent_ref, span.start, span.end)] += 1
        else:
            keys[tuple(span)] += 1
    return keys


def evaluate_chunks(pred: Iterable, gold: Iterable) -> MatchCounts:
    """Exact-span matching, one-to-one.

    Spans are :class:`GoldSpan` objects or hashable tuples such as
    ``(start, end)``; categories are ignored.
    """
    p, g = _as_keys(pred), _as_keys(gold)
    correct = sum((p & g).values())
    return MatchCounts(correct, sum(p.values()), sum(g.values()))


@dataclass
class EvalReport:
    rows: dict[RoleCategory, MatchCounts] = field(default_factory=dict)
    total: MatchCounts = field(default_factory=MatchCounts)
    chunks: MatchCounts | None = None

    def row(self, cat: RoleCategory) -> MatchCounts:
        return self.rows.get(cat, MatchCounts())

    def __add__(self, other: "EvalReport") -> "EvalReport":
        rows = {c: self.row(c) + other.row(c) for c in CATEGORIES}
        chunks = None
        if self.chunks is not None or other.chunks is not None:
            chunks = (self.chunks or MatchCounts()) + (other.chunks or MatchCounts())
        return EvalReport(rows, self.total + other.total, chunks)

    def lines(self) -> list[tuple[str, MatchCounts]]:
        out = [(c.value, self.row(c)) for c in CATEGORIES]
        out.append(("total", self.total))
        if self.chunks is not None:
            out.append(("chunks", self.chunks))
        return out

    def key_values(self, beta: float = 1.0) -> list[str]:
        kv = []
        for name, c in self.lines():
            key = name.lower()
            p, r, f = scores(c, beta)
            kv.append(f"{key}.correct={c.correct}")
            kv.append(f"{key}.predicted={c.predicted}")
            kv.append(f"{key}.gold={c.gold_total}")
            for metric, value in (("precision", p), ("recall", r), ("f", f)):
                kv.append(f"{key}.{metric}={'n/a' if value is None else round(value, 3)}")
        return kv

    def table(self, beta: float = 1.0) -> str:
        def frac(num, den, value):
            return "n/a" if value is None else f"{num}/{den}={percent(value)}"

        header = ("", "Recall", "Precision", "F-measure")
        body = []
        for name, c in self.lines():
            p, r, f = scores(c, beta)
            label = {"total": "Total", "chunks": "Chunks"}.get(name, f"PP-{name}")
            body.append((
                label,
                frac(c.correct, c.gold_total, r),
                frac(c.correct, c.predicted, p),
                "n/a" if f is None else percent(f),
            ))
        widths = [max(len(r[i]) for r in [header, *body]) for i in range(4)]
        fmt = lambda r: "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
        rule = "-" * len(fmt(tuple("-" * w for w in widths)))
        return "\n".join([fmt(header), rule, *map(fmt, body)])

    @classmethod
    def from_counts(cls, rows: dict, total, chunks=None) -> "EvalReport":
        """Build a report from ``(correct, predicted, gold_total)`` triples."""
        return cls(
            {RoleCategory.parse(str(getattr(k, "value", k))): MatchCounts(*v) for k, v in rows.items()},
            MatchCounts(*total),
            MatchCounts(*chunks) if chunks is not None else None,
        )


def evaluate_roles(pred: Iterable[GoldSpan], gold: Iterable[GoldSpan]) -> EvalReport:
    """Per-category and total scores for labelled spans.

    Per category, a prediction is correct when its span and category both
    match a gold span.  The total row also credits a plain-PP prediction on
    a plain-PP gold span; any other prediction (wrong role, plain PP where
    the gold has a role, or a span the gold lacks) counts against precision.
    """
    pred, gold = list(pred), list(gold)
    p_lab = Counter((s.sent_ref, s.start, s.end, s.category) for s in pred)
    g_lab = Counter((s.sent_ref, s.start, s.end, s.category) for s in gold)
    matched = p_lab & g_lab
    rows = {}
    for cat in CATEGORIES:
        rows[cat] = MatchCounts(
            sum(n for k, n in matched.items() if k[3] is cat),
            sum(n for k, n in p_lab.items() if k[3] is cat),
            sum(n for k, n in g_lab.items() if k[3] is cat),
        )
    total = MatchCounts(sum(matched.values()), len(pred), len(gold))
    return EvalReport(rows, total, evaluate_chunks(pred, gold))
