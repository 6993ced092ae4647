"""End-to-end run over a bracketed gold corpus: strip, re-annotate, score."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .classifier import Classifier, LabeledPP
from .evaluation import EvalReport, evaluate_roles
from .grammar import Grammar, default_pp_grammar
from .ingest import (
    DEFAULT_HEADER_PATTERNS,
    AnnotatedSentence,
    GoldSpan,
    Sentence,
    parse_tagged_text,
    preprocess,
    read_bracketed,
)

SPLITS = ("train", "test")


def bundled_path(split: str = "test") -> Path:
    if split not in SPLITS:
        raise ValueError(f"unknown split {split!r}; expected one of {SPLITS}")
    return Path(str(resources.files("ppcat") / "data" / "minicorpus" / f"{split}.gold"))


def labeled_spans(sentence: Sentence, labeled: list[LabeledPP]) -> list[GoldSpan]:
    return [GoldSpan(sentence.ref, lp.span[0], lp.span[1], lp.category) for lp in labeled]


def strip_annotation(annotated: list[AnnotatedSentence]) -> dict[str, str]:
    """Raw tagged text per document, one sentence per line."""
    docs: dict[str, list[str]] = {}
    for ann in annotated:
        docs.setdefault(ann.sentence.doc_id, []).append(ann.sentence.text())
    return {doc: "\n".join(lines) + "\n" for doc, lines in docs.items()}


def run(
    gold_text: str,
    classifier: Classifier,
    grammar: Grammar | None = None,
    header_patterns=DEFAULT_HEADER_PATTERNS,
) -> tuple[EvalReport, list[tuple[Sentence, list[LabeledPP]]]]:
    grammar = grammar or default_pp_grammar()
    gold = read_bracketed(gold_text)
    results = []
    for doc, raw in strip_annotation(gold).items():
        for sent in parse_tagged_text(preprocess(raw, header_patterns), doc):
            results.append((sent, classifier.annotate(sent, grammar)[1]))
    pred = [span for sent, labeled in results for span in labeled_spans(sent, labeled)]
    report = evaluate_roles(pred, [span for ann in gold for span in ann.spans])
    return report, results
