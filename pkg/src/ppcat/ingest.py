"""Reading POS-tagged text, WSJ cleanup, and the bracketed annotation format.

Tagged text is whitespace-separated ``word/TAG`` items.  Bracketed text is
the same with inline constituents, e.g.::

    a/DT grand/JJ jury/NN (PP-LOC in/IN (NP Newark/NNP)) ./.

One bracketed sentence per line; ``#`` starts a comment line, and a
``# doc: <id>`` comment starts a new document.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .roles import PP_LABELS, RoleCategory

SENTENCE_END_TAG = "."
SENTENCE_END_WORDS = frozenset({".", "!", "?"})
DEFAULT_HEADER_PATTERNS = (".START", "*x*", "@", "=====")

_DOC_RE = re.compile(r"#\s*doc:\s*(\S+)")
_TRAILING_QUOTE_RE = re.compile(r"^(.+/[^/]+?)((?:''|``|\")+)$")
_LEADING_QUOTE_RE = re.compile(r"^((?:``|\")+)(.+/.+)$")


class IngestError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class Token:
    surface: str
    tag: str
    index: int

    def __str__(self):
        return f"{self.surface}/{self.tag}"


@dataclass
class Sentence:
    tokens: list[Token]
    doc_id: str = "doc"
    sent_index: int = 0

    def __len__(self):
        return len(self.tokens)

    @property
    def tags(self) -> list[str]:
        return [t.tag for t in self.tokens]

    @property
    def words(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def ref(self) -> tuple[str, int]:
        return (self.doc_id, self.sent_index)

    def text(self) -> str:
        return " ".join(map(str, self.tokens))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], doc_id="doc", sent_index=0):
        tokens = [Token(w, t, i) for i, (w, t) in enumerate(pairs)]
        return cls(tokens, doc_id, sent_index)

    @classmethod
    def from_tagged(cls, text: str, doc_id="doc", sent_index=0):
        return cls.from_pairs((split_item(item) for item in text.split()), doc_id, sent_index)


@dataclass(frozen=True)
class GoldSpan:
    sent_ref: tuple[str, int]
    start: int
    end: int
    category: RoleCategory = RoleCategory.NONE

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


@dataclass
class AnnotatedSentence:
    """A sentence read from bracketed text together with its PP spans."""

    sentence: Sentence
    spans: list[GoldSpan] = field(default_factory=list)


def split_item(item: str, line: int | None = None) -> tuple[str, str]:
    word, sep, tag = item.rpartition("/")
    if not sep or not word or not tag:
        raise IngestError(f"item {item!r} is not of the form word/TAG", line)
    return word, tag


def _is_sentence_end(word: str, tag: str) -> bool:
    return tag == SENTENCE_END_TAG and word in SENTENCE_END_WORDS


def parse_tagged_text(raw: str, doc_id: str = "doc") -> list[Sentence]:
    """Split tagged text into sentences at ``./.``, ``!/.``, ``?/.`` or blank lines."""
    sentences: list[Sentence] = []
    current: list[tuple[str, str]] = []

    def flush():
        if current:
            sentences.append(Sentence.from_pairs(current, doc_id, len(sentences)))
            current.clear()

    for lineno, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            flush()
            continue
        for item in line.split():
            word, tag = split_item(item, lineno)
            current.append((word, tag))
            if _is_sentence_end(word, tag):
                flush()
    flush()
    return sentences


def _is_header_line(line: str, patterns) -> bool:
    stripped = line.strip()
    return any(stripped.startswith(p) for p in patterns)


def _is_tagged_line(line: str) -> bool:
    return all(w and t for w, _, t in (item.rpartition("/") for item in line.split()))


def _split_quotes(item: str) -> list[str]:
    """Split quote marks glued onto a tagged item into separate items."""
    out = []
    m = _LEADING_QUOTE_RE.match(item)
    if m:
        out.append("``/``")
        item = m.group(2)
    m = _TRAILING_QUOTE_RE.match(item)
    if m:
        out.extend([m.group(1), "''/''"])
    else:
        out.append(item)
    return out


def preprocess(raw: str, header_patterns=DEFAULT_HEADER_PATTERNS) -> str:
    """Clean WSJ-style tagged text before parsing.

    * header lines before the first sentence are dropped, as are later
      header lines that are not tagged text;
    * quote marks glued onto a tagged item are split off as their own items;
    * a preposition stranded right before sentence-final punctuation (possibly
      with closing quotes in between) is retagged as a particle, ``RB``.
    """
    lines = raw.splitlines()
    out_lines = []
    in_body = False
    for line in lines:
        if not in_body:
            if not line.strip():
                out_lines.append(line)
                continue
            if _is_header_line(line, header_patterns):
                continue
            in_body = True
        elif _is_header_line(line, header_patterns) and not _is_tagged_line(line):
            # a later header, e.g. from concatenated documents
            continue
        out_lines.append(line)

    items_by_line = [[piece for item in line.split() for piece in _split_quotes(item)] for line in out_lines]
    flat = [(li, k) for li, items in enumerate(items_by_line) for k in range(len(items))]
    for pos, (li, k) in enumerate(flat):
        item = items_by_line[li][k]
        word, sep, tag = item.rpartition("/")
        if not sep or tag != "IN":
            continue
        nxt = pos + 1
        while nxt < len(flat):
            w2, _, t2 = items_by_line[flat[nxt][0]][flat[nxt][1]].rpartition("/")
            if t2 in ("''", "``"):
                nxt += 1
                continue
            break
        if nxt < len(flat):
            w2, _, t2 = items_by_line[flat[nxt][0]][flat[nxt][1]].rpartition("/")
            if _is_sentence_end(w2, t2):
                items_by_line[li][k] = f"{word}/RB"

    result = []
    for line, items in zip(out_lines, items_by_line):
        result.append(" ".join(items) if items else line)
    text = "\n".join(result)
    if raw.endswith("\n"):
        text += "\n"
    return text


def read_header_patterns(text: str) -> tuple[str, ...]:
    return tuple(line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#"))


# -- bracketed format ---------------------------------------------------------

_BRACKET_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


def category_for_label(label: str) -> RoleCategory | None:
    """Role for a PP bracket label, or None when the label is not a PP."""
    if label == "PP":
        return RoleCategory.NONE
    if label.startswith("PP-"):
        if label not in PP_LABELS:
            raise KeyError(label)
        return PP_LABELS[label]
    return None


def parse_bracketed_line(line: str, doc_id: str = "doc", sent_index: int = 0, lineno: int | None = None):
    """Read one bracketed sentence; returns an :class:`AnnotatedSentence`."""
    pairs: list[tuple[str, str]] = []
    stack: list[tuple[str, int]] = []
    raw_spans: list[tuple[int, int, RoleCategory]] = []
    toks = _BRACKET_TOKEN_RE.findall(line)
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok == "(":
            if i + 1 >= len(toks) or toks[i + 1] in "()" or "/" in toks[i + 1]:
                raise IngestError("'(' must be followed by a constituent label", lineno)
            stack.append((toks[i + 1], len(pairs)))
            i += 2
            continue
        if tok == ")":
            if not stack:
                raise IngestError("unbalanced brackets: unexpected ')'", lineno)
            label, start = stack.pop()
            try:
                cat = category_for_label(label)
            except KeyError:
                raise IngestError(f"unknown PP label {label!r}", lineno) from None
            if cat is not None:
                if start == len(pairs):
                    raise IngestError(f"empty {label} bracket", lineno)
                raw_spans.append((start, len(pairs), cat))
            i += 1
            continue
        pairs.append(split_item(tok, lineno))
        i += 1
    if stack:
        raise IngestError(f"unbalanced brackets: {len(stack)} unclosed", lineno)
    sentence = Sentence.from_pairs(pairs, doc_id, sent_index)
    raw_spans.sort(key=lambda s: (s[0], -s[1]))
    spans = [GoldSpan(sentence.ref, s, e, c) for s, e, c in raw_spans]
    return AnnotatedSentence(sentence, spans)


def read_bracketed(raw: str, doc_id: str = "doc") -> list[AnnotatedSentence]:
    """Read a bracketed file: one sentence per line, ``#`` comments."""
    out: list[AnnotatedSentence] = []
    counters: dict[str, int] = {}
    for lineno, line in enumerate(raw.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            m = _DOC_RE.match(stripped)
            if m:
                doc_id = m.group(1)
            continue
        index = counters.get(doc_id, 0)
        counters[doc_id] = index + 1
        out.append(parse_bracketed_line(stripped, doc_id, index, lineno))
    return out


def parse_gold(raw: str, doc_id: str = "doc") -> list[GoldSpan]:
    return [span for ann in read_bracketed(raw, doc_id) for span in ann.spans]


def serialize_gold(annotated: Iterable[AnnotatedSentence]) -> str:
    """Write sentences with their PP spans in the bracketed format.

    Spans must nest properly (no crossing brackets).
    """
    lines = []
    doc = None
    for ann in annotated:
        if ann.sentence.doc_id != doc:
            doc = ann.sentence.doc_id
            lines.append(f"# doc: {doc}")
        opens: dict[int, list[GoldSpan]] = {}
        closes: dict[int, int] = {}
        for span in sorted(ann.spans, key=lambda s: (s.start, -s.end)):
            opens.setdefault(span.start, []).append(span)
            closes[span.end] = closes.get(span.end, 0) + 1
        parts = []
        for tok in ann.sentence.tokens:
            for span in opens.get(tok.index, ()):
                parts.append(f"({span.category.pp_label}")
            parts.append(str(tok))
            n = closes.get(tok.index + 1, 0)
            if n:
                parts[-1] += ")" * n
        lines.append(" ".join(parts))
    return "\n".join(lines) + ("\n" if lines else "")
