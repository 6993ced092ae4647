"""Context-free grammar over Penn Treebank POS tags, and its rule-file format.

A rule file is a sequence of blocks::

    (PP (IN NP)      ; "for him"
        (IN IN NP))  ; "because of the rain"

The first symbol of a block is the left-hand side, each following
parenthesized group is one right-hand side.  ``;`` comments run to the end
of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, NamedTuple

PENN_TAGS = frozenset(
    """CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ RB RBR
    RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB $ #""".split()
)

SYMBOL_RE = re.compile(r"[A-Z$#][A-Z$#]*\Z")
_TOKEN_RE = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s();]+")


class GrammarError(ValueError):
    pass


class GrammarSyntaxError(GrammarError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class GrammarSymbol(NamedTuple):
    kind: str  # "terminal" or "nonterminal"
    name: str


def is_terminal(name: str) -> bool:
    return name in PENN_TAGS


def symbol(name: str) -> GrammarSymbol:
    if not SYMBOL_RE.match(name):
        raise GrammarError(f"invalid grammar symbol {name!r}")
    return GrammarSymbol("terminal" if is_terminal(name) else "nonterminal", name)


@dataclass(frozen=True)
class Production:
    lhs: str
    rhs: tuple[str, ...]

    def __post_init__(self):
        if not self.rhs:
            raise GrammarError(f"empty right-hand side for {self.lhs}")

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs)}"


class Grammar:
    """An ordered, immutable collection of productions with a target symbol.

    Listing order is significant: it breaks ties between derivations.
    """

    def __init__(self, productions: Iterable[Production], target: str = "PP"):
        self.productions = tuple(productions)
        self.target = target
        by_lhs: dict[str, list[Production]] = {}
        for prod in self.productions:
            by_lhs.setdefault(prod.lhs, []).append(prod)
        self._by_lhs = {lhs: tuple(prods) for lhs, prods in by_lhs.items()}

    def __eq__(self, other):
        if not isinstance(other, Grammar):
            return NotImplemented
        return self.target == other.target and self.productions == other.productions

    def __hash__(self):
        return hash((self.target, self.productions))

    def __repr__(self):
        return f"Grammar({len(self.productions)} productions, target={self.target!r})"

    def __contains__(self, prod) -> bool:
        return prod in self.productions

    def __iter__(self):
        return iter(self.productions)

    def __len__(self):
        return len(self.productions)

    def productions_for(self, lhs: str) -> tuple[Production, ...]:
        return self._by_lhs.get(lhs, ())

    @property
    def nonterminals(self) -> frozenset[str]:
        names = set(self._by_lhs)
        names.update(s for p in self.productions for s in p.rhs if not is_terminal(s))
        return frozenset(names)

    @property
    def symbols(self) -> list[GrammarSymbol]:
        seen = []
        for prod in self.productions:
            for name in (prod.lhs, *prod.rhs):
                if name not in seen:
                    seen.append(name)
        return [symbol(name) for name in seen]

    def is_terminal(self, name: str) -> bool:
        return is_terminal(name)

    def has_rule(self, lhs: str, *rhs: str) -> bool:
        return Production(lhs, tuple(rhs)) in self.productions


def _tokens(text: str):
    line, line_start = 1, 0
    for m in _TOKEN_RE.finditer(text):
        tok = m.group()
        col = m.start() - line_start + 1
        if tok[0].isspace() or tok[0] == ";":
            newlines = tok.count("\n")
            if newlines:
                line += newlines
                line_start = m.start() + tok.rindex("\n") + 1
            continue
        yield tok, line, col


def load_grammar(rule_text: str, target: str = "PP") -> Grammar:
    """Parse rule-file text into a :class:`Grammar`, dropping duplicate rules."""
    productions: list[Production] = []
    seen: set[Production] = set()
    toks = list(_tokens(rule_text))
    end_line = rule_text.count("\n") + 1
    end_col = len(rule_text) - rule_text.rfind("\n")
    pos = 0

    def expect_symbol():
        nonlocal pos
        if pos >= len(toks):
            raise GrammarSyntaxError("unexpected end of input, unbalanced parenthesis", end_line, end_col)
        tok, ln, col = toks[pos]
        if tok in "()":
            raise GrammarSyntaxError(f"expected a symbol, found {tok!r}", ln, col)
        if not SYMBOL_RE.match(tok):
            raise GrammarSyntaxError(f"invalid symbol {tok!r}", ln, col)
        pos += 1
        return tok, ln, col

    def peek():
        if pos >= len(toks):
            raise GrammarSyntaxError("unexpected end of input, unbalanced parenthesis", end_line, end_col)
        return toks[pos]

    while pos < len(toks):
        tok, ln, col = toks[pos]
        if tok != "(":
            raise GrammarSyntaxError(f"expected '(' to open a rule block, found {tok!r}", ln, col)
        pos += 1
        lhs, ln, col = expect_symbol()
        if is_terminal(lhs):
            raise GrammarSyntaxError(f"terminal {lhs} used as left-hand side", ln, col)
        alternatives = 0
        while True:
            tok, ln, col = peek()
            if tok == ")":
                pos += 1
                break
            if tok != "(":
                raise GrammarSyntaxError(f"expected '(' to open a right-hand side, found {tok!r}", ln, col)
            pos += 1
            rhs = []
            while peek()[0] != ")":
                rhs.append(expect_symbol()[0])
            pos += 1
            if not rhs:
                raise GrammarSyntaxError(f"empty right-hand side for {lhs}", ln, col)
            prod = Production(lhs, tuple(rhs))
            if prod not in seen:
                seen.add(prod)
                productions.append(prod)
            alternatives += 1
        if not alternatives:
            raise GrammarSyntaxError(f"rule block for {lhs} has no right-hand sides", ln, col)
    return Grammar(productions, target)


def serialize(g: Grammar) -> str:
    """Inverse of :func:`load_grammar`; consecutive rules with one lhs share a block."""
    blocks: list[tuple[str, list[tuple[str, ...]]]] = []
    for prod in g.productions:
        if blocks and blocks[-1][0] == prod.lhs:
            blocks[-1][1].append(prod.rhs)
        else:
            blocks.append((prod.lhs, [prod.rhs]))
    lines = []
    for lhs, alts in blocks:
        body = ("\n" + " " * (len(lhs) + 2)).join(f"({' '.join(rhs)})" for rhs in alts)
        lines.append(f"({lhs} {body})")
    return "\n".join(lines) + "\n"


def validate(g: Grammar) -> list[str]:
    diagnostics = []
    defined = {p.lhs for p in g.productions}

    if g.target not in defined:
        diagnostics.append(f"target {g.target} has no productions")
    for prod in g.productions:
        if is_terminal(prod.lhs):
            diagnostics.append(f"terminal {prod.lhs} used as left-hand side")
    undefined = []
    for prod in g.productions:
        for name in prod.rhs:
            if not is_terminal(name) and name not in defined and name not in undefined:
                undefined.append(name)
    diagnostics.extend(f"undefined nonterminal {name}" for name in undefined)

    seen = set()
    for prod in g.productions:
        if prod in seen:
            diagnostics.append(f"duplicate production {prod}")
        seen.add(prod)

    reachable = {g.target}
    frontier = [g.target]
    while frontier:
        for prod in g.productions_for(frontier.pop()):
            for name in prod.rhs:
                if not is_terminal(name) and name not in reachable:
                    reachable.add(name)
                    frontier.append(name)
    unreachable = []
    for prod in g.productions:
        if prod.lhs not in reachable and prod not in unreachable:
            unreachable.append(prod)
    diagnostics.extend(f"unreachable production {prod}" for prod in unreachable)

    # unit cycles (A -> B -> ... -> A) make derivations unbounded
    units: dict[str, set[str]] = {}
    for prod in g.productions:
        if len(prod.rhs) == 1 and not is_terminal(prod.rhs[0]):
            units.setdefault(prod.lhs, set()).add(prod.rhs[0])
    for start in sorted(units):
        stack, visited = list(units[start]), set()
        while stack:
            name = stack.pop()
            if name == start:
                diagnostics.append(f"unit cycle through {start}")
                break
            if name not in visited:
                visited.add(name)
                stack.extend(units.get(name, ()))
    return diagnostics


def default_rules_text() -> str:
    return (resources.files("ppcat") / "data" / "pp-chunker.rules").read_text(encoding="utf-8")


_default_grammar: Grammar | None = None


def default_pp_grammar() -> Grammar:
    global _default_grammar
    if _default_grammar is None:
        _default_grammar = load_grammar(default_rules_text())
    return _default_grammar
