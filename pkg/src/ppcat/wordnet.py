"""Reader for the WordNet noun database (WNDB format) and hypernym queries.

Only ``index.noun`` and ``data.noun`` are read.  Either file may be gzipped;
a bundled copy of the WordNet 3.0 noun files ships with the package.
"""

from __future__ import annotations

import gzip
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

HYPERNYM_POINTERS = ("@", "@i")

# (suffix, replacement) pairs, tried in this order after the word itself
NOUN_DETACHMENTS = (
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
)

MAX_DEPTH = 64


class WordNetError(Exception):
    """Raised for unreadable or inconsistent WNDB files."""


@dataclass(frozen=True)
class Synset:
    offset: int
    lemmas: tuple[str, ...]
    hypernyms: tuple[int, ...]
    gloss: str = ""

    @property
    def names(self) -> tuple[str, ...]:
        """Lemmas with underscores turned back into spaces."""
        return tuple(lemma.replace("_", " ") for lemma in self.lemmas)


@dataclass(frozen=True)
class HypernymTree:
    lemma: str
    sense_number: int
    levels: tuple[tuple[int, ...], ...]
    chain: tuple[frozenset[str], ...]

    def __len__(self):
        return len(self.chain)


def normalize_lemma(word: str) -> str:
    return "_".join(word.strip().lower().split())


def _open_text(path):
    path = Path(path)
    if not path.exists():
        gz = path.with_name(path.name + ".gz")
        if gz.exists():
            path = gz
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, encoding="utf-8")


def _is_header(line: str) -> bool:
    return line.startswith("  ")


def parse_index_line(line: str, lineno: int = 0) -> tuple[str, tuple[int, ...]]:
    parts = line.split()
    try:
        lemma = parts[0]
        synset_cnt = int(parts[2])
        p_cnt = int(parts[3])
        # lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt offsets...
        start = 4 + p_cnt + 2
        offsets = tuple(int(tok) for tok in parts[start:start + synset_cnt])
    except (IndexError, ValueError) as exc:
        raise WordNetError(f"index.noun line {lineno}: malformed entry") from exc
    if len(offsets) != synset_cnt or not offsets:
        raise WordNetError(f"index.noun line {lineno}: expected {synset_cnt} offsets")
    return lemma, offsets


def parse_data_line(line: str, lineno: int = 0) -> Synset:
    body, _, gloss = line.partition("|")
    parts = body.split()
    try:
        offset = int(parts[0])
        w_cnt = int(parts[3], 16)
        lemmas = tuple(parts[4 + 2 * i].lower() for i in range(w_cnt))
        pos = 4 + 2 * w_cnt
        p_cnt = int(parts[pos])
        hypernyms = []
        for i in range(p_cnt):
            symbol, target, target_pos = parts[pos + 1 + 4 * i: pos + 4 + 4 * i]
            if symbol in HYPERNYM_POINTERS and target_pos == "n":
                hypernyms.append(int(target))
    except (IndexError, ValueError) as exc:
        raise WordNetError(f"data.noun line {lineno}: malformed synset") from exc
    # adjective markers such as "(a)" are not part of the lemma
    lemmas = tuple(lemma.split("(")[0] for lemma in lemmas)
    return Synset(offset, lemmas, tuple(hypernyms), gloss.strip())


@dataclass
class WordNetIndex:
    """Sense-ordered noun lemma index plus the synsets it points into."""

    lemma_index: dict[str, tuple[int, ...]] = field(default_factory=dict)
    synsets: dict[int, Synset] = field(default_factory=dict)

    def __contains__(self, lemma: str) -> bool:
        return normalize_lemma(lemma) in self.lemma_index

    def senses(self, lemma: str) -> list[Synset]:
        offsets = self.lemma_index.get(normalize_lemma(lemma), ())
        return [self.synsets[off] for off in offsets]

    def morphy_noun(self, word: str) -> list[str]:
        """Indexed base forms for an inflected noun, the word itself first."""
        form = normalize_lemma(word)
        if not form:
            return []
        candidates = [form]
        for suffix, repl in NOUN_DETACHMENTS:
            if form.endswith(suffix) and len(form) > len(suffix):
                candidates.append(form[: -len(suffix)] + repl)
        found = []
        for cand in candidates:
            if cand in self.lemma_index and cand not in found:
                found.append(cand)
        return found

    def hypernym_levels(self, offset: int) -> list[tuple[int, ...]]:
        """Breadth-first hypernym closure of one synset, level by level.

        Level 0 is the synset itself; level k+1 holds the parents of every
        synset at level k.
        """
        levels = [(offset,)]
        while True:
            parents: list[int] = []
            for off in levels[-1]:
                for parent in self.synsets[off].hypernyms:
                    if parent not in parents:
                        parents.append(parent)
            if not parents:
                return levels
            if len(levels) >= MAX_DEPTH:
                raise WordNetError(f"hypernym chain from {offset:08d} exceeds {MAX_DEPTH} levels")
            levels.append(tuple(parents))

    def hypernym_trees(self, lemma: str, sense_threshold: int = 4) -> list[HypernymTree]:
        if sense_threshold < 1:
            raise ValueError("sense_threshold must be >= 1")
        key = normalize_lemma(lemma)
        trees = []
        for number, offset in enumerate(self.lemma_index.get(key, ())[:sense_threshold], 1):
            levels = self.hypernym_levels(offset)
            chain = tuple(
                frozenset(name for off in level for name in self.synsets[off].names)
                for level in levels
            )
            trees.append(HypernymTree(key, number, tuple(levels), chain))
        return trees


def load(index_noun, data_noun) -> WordNetIndex:
    """Read ``index.noun`` and ``data.noun`` into a :class:`WordNetIndex`."""
    synsets: dict[int, Synset] = {}
    with _open_text(data_noun) as fh:
        for lineno, line in enumerate(fh, 1):
            if _is_header(line) or not line.strip():
                continue
            syn = parse_data_line(line, lineno)
            synsets[syn.offset] = syn
    if not synsets:
        raise WordNetError(f"{data_noun}: no synsets found")

    lemma_index: dict[str, tuple[int, ...]] = {}
    with _open_text(index_noun) as fh:
        for lineno, line in enumerate(fh, 1):
            if _is_header(line) or not line.strip():
                continue
            lemma, offsets = parse_index_line(line, lineno)
            lemma_index[lemma] = offsets
    if not lemma_index:
        raise WordNetError(f"{index_noun}: no lemmas found")

    dangling = sorted(
        {off for offs in lemma_index.values() for off in offs if off not in synsets}
        | {h for syn in synsets.values() for h in syn.hypernyms if h not in synsets}
    )
    if dangling:
        shown = " ".join(f"{off:08d}" for off in dangling[:10])
        raise WordNetError(f"dangling synset offsets: {shown}")
    return WordNetIndex(lemma_index, synsets)


def load_dir(directory) -> WordNetIndex:
    directory = Path(directory)
    return load(directory / "index.noun", directory / "data.noun")


def bundled_dir() -> Path:
    return Path(str(resources.files("ppcat") / "data" / "wordnet"))


_default: WordNetIndex | None = None


def default_index() -> WordNetIndex:
    """WordNet from ``$PPCAT_WORDNET`` if set, else the bundled 3.0 noun files."""
    global _default
    if _default is None:
        _default = load_dir(os.environ.get("PPCAT_WORDNET") or bundled_dir())
    return _default
