"""Earley chart parser used as a PP chunker.

The target nonterminal is predicted at every token position, so any span
of the sentence can complete a PP.  Terminals match on POS tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .grammar import Grammar, Production
from .ingest import Sentence, Token


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class ChartItem:
    production: Production
    dot: int
    origin: int

    @property
    def complete(self) -> bool:
        return self.dot == len(self.production.rhs)

    @property
    def next_symbol(self) -> str | None:
        rhs = self.production.rhs
        return rhs[self.dot] if self.dot < len(rhs) else None

    def __str__(self):
        rhs = list(self.production.rhs)
        rhs.insert(self.dot, "•")
        return f"[{self.production.lhs} -> {' '.join(rhs)}, {self.origin}]"


class Chart:
    """Earley item sets for one sentence.

    ``completed`` holds every ``(lhs, start, end)`` with a completed item,
    which is all the back-pointer information tree building needs.
    """

    def __init__(self, sentence: Sentence, grammar: Grammar):
        self.sentence = sentence
        self.grammar = grammar
        n = len(sentence)
        # items are (production index, dot, origin) tuples internally
        self._sets: list[list[tuple[int, int, int]]] = [[] for _ in range(n + 1)]
        self._seen: list[set[tuple[int, int, int]]] = [set() for _ in range(n + 1)]
        self.completed: set[tuple[str, int, int]] = set()

    def __len__(self):
        return sum(len(s) for s in self._sets)

    def items(self, position: int) -> Iterator[ChartItem]:
        prods = self.grammar.productions
        for p, dot, origin in self._sets[position]:
            yield ChartItem(prods[p], dot, origin)

    def spans(self, label: str) -> set[tuple[int, int]]:
        return {(i, j) for lhs, i, j in self.completed if lhs == label}


def recognize(sentence: Sentence, g: Grammar) -> Chart:
    chart = Chart(sentence, g)
    prods = g.productions
    index = {p: i for i, p in enumerate(prods)}
    by_lhs = {lhs: [index[p] for p in g.productions_for(lhs)] for lhs in g.nonterminals}
    rhs_of = [p.rhs for p in prods]
    lhs_of = [p.lhs for p in prods]
    terminal = {name: g.is_terminal(name) for p in prods for name in p.rhs}
    tags = sentence.tags
    n = len(tags)
    sets, seen = chart._sets, chart._seen
    # waiting[k][B]: items in set k whose next symbol is nonterminal B
    waiting: list[dict[str, list[tuple[int, int, int]]]] = [{} for _ in range(n + 1)]

    def add(k, item):
        if item not in seen[k]:
            seen[k].add(item)
            sets[k].append(item)

    for k in range(n + 1):
        if k < n:
            for p in by_lhs.get(g.target, ()):
                add(k, (p, 0, k))
        predicted: set[str] = set()
        current = sets[k]
        i = 0
        while i < len(current):
            p, dot, origin = current[i]
            i += 1
            rhs = rhs_of[p]
            if dot == len(rhs):
                lhs = lhs_of[p]
                chart.completed.add((lhs, origin, k))
                for wp, wdot, worigin in waiting[origin].get(lhs, ()):
                    add(k, (wp, wdot + 1, worigin))
                continue
            sym = rhs[dot]
            if terminal[sym]:
                if k < n and tags[k] == sym:
                    add(k + 1, (p, dot + 1, origin))
                continue
            waiting[k].setdefault(sym, []).append((p, dot, origin))
            if sym not in predicted:
                predicted.add(sym)
                for q in by_lhs.get(sym, ()):
                    add(k, (q, 0, k))
            # no epsilon rules, so a completion of sym at k cannot already exist
    return chart


def pp_spans(chart: Chart) -> set[tuple[int, int]]:
    return chart.spans(chart.grammar.target)


def select_chunks(spans) -> list[tuple[int, int]]:
    """Greedy maximal-leftmost choice of non-overlapping spans."""
    longest: dict[int, int] = {}
    for start, end in spans:
        if end > longest.get(start, start):
            longest[start] = end
    chunks = []
    pos = 0
    for start in sorted(longest):
        if start >= pos:
            chunks.append((start, longest[start]))
            pos = longest[start]
    return chunks


Child = Union["ParseTree", Token]


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple[Child, ...]
    span: tuple[int, int]

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]

    def leaves(self) -> list[Token]:
        out = []
        for child in self.children:
            if isinstance(child, Token):
                out.append(child)
            else:
                out.extend(child.leaves())
        return out

    def subtrees(self, label: str | None = None) -> Iterator["ParseTree"]:
        """Pre-order walk over this tree and its descendants."""
        if label is None or self.label == label:
            yield self
        for child in self.children:
            if isinstance(child, ParseTree):
                yield from child.subtrees(label)

    def child_trees(self) -> list["ParseTree"]:
        return [c for c in self.children if isinstance(c, ParseTree)]

    def surface(self) -> str:
        return " ".join(t.surface for t in self.leaves())

    def bracketed(self, relabel=None) -> str:
        """Bracketed text; ``relabel(tree)`` may return a replacement label."""
        label = (relabel(self) if relabel else None) or self.label
        parts = [label]
        for child in self.children:
            parts.append(str(child) if isinstance(child, Token) else child.bracketed(relabel))
        return "(" + " ".join(parts) + ")"

    def __str__(self):
        return self.bracketed()


def build_tree(chart: Chart, span: tuple[int, int], label: str | None = None) -> ParseTree:
    """One derivation of ``span``, preferring earlier-listed productions.

    Among splits of a production's right-hand side, longer leading
    constituents are tried first, which keeps right recursion shallow.
    """
    g = chart.grammar
    label = label or g.target
    tokens = chart.sentence.tokens
    completed = chart.completed
    memo: dict[tuple[str, int, int], ParseTree | None] = {}
    active: set[tuple[str, int, int]] = set()

    def derive(sym, i, j):
        key = (sym, i, j)
        if key in memo:
            return memo[key]
        if key in active:
            return None
        active.add(key)
        result = None
        for prod in g.productions_for(sym):
            kids = match(prod.rhs, 0, i, j)
            if kids is not None:
                result = ParseTree(sym, tuple(kids), (i, j))
                break
        active.discard(key)
        memo[key] = result
        return result

    def match(rhs, k, i, j):
        if k == len(rhs):
            return [] if i == j else None
        remaining = len(rhs) - k - 1
        if j - i < remaining + 1:
            return None
        sym = rhs[k]
        if g.is_terminal(sym):
            if tokens[i].tag != sym:
                return None
            rest = match(rhs, k + 1, i + 1, j)
            return None if rest is None else [tokens[i], *rest]
        for m in range(j - remaining, i, -1):
            if (sym, i, m) not in completed:
                continue
            sub = derive(sym, i, m)
            if sub is None:
                continue
            rest = match(rhs, k + 1, m, j)
            if rest is not None:
                return [sub, *rest]
        return None

    start, end = span
    if (label, start, end) not in completed:
        raise ParseError(f"no {label} spans tokens {start}..{end}")
    tree = derive(label, start, end)
    if tree is None:
        raise ParseError(f"no {label} derivation for tokens {start}..{end}")
    return tree


def chunk_sentence(sentence: Sentence, g: Grammar) -> list[ParseTree]:
    """Parse trees for the selected PP chunks of one sentence, left to right."""
    if not sentence.tokens:
        return []
    chart = recognize(sentence, g)
    return [build_tree(chart, span) for span in select_chunks(pp_spans(chart))]


def render_chunked(sentence: Sentence, trees, relabel=None) -> str:
    """Sentence text with chunks bracketed and other tokens left bare."""
    parts = []
    pos = 0
    for tree in sorted(trees, key=lambda t: t.start):
        parts.extend(str(t) for t in sentence.tokens[pos:tree.start])
        parts.append(tree.bracketed(relabel))
        pos = tree.end
    parts.extend(str(t) for t in sentence.tokens[pos:])
    return " ".join(parts)
