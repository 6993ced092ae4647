"""Two-layer semantic role labelling of PP chunks.

Layer 1 guesses a role from the head preposition alone.  Layer 2 looks up
the head of the PP's object NP in WordNet and searches the hypernym trees of
its first few senses for configured keywords; any keyword hit overrides the
layer-1 guess.  Among several hits the most frequent role wins
(LOC > TMP > DIR > MNR > PRP > EXT > BNF).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

from .earley import ParseTree, chunk_sentence, render_chunked
from .grammar import Grammar
from .ingest import Sentence, Token
from .roles import RoleCategory, highest_priority
from .wordnet import WordNetIndex

DEFAULT_SENSE_THRESHOLD = 4

PRONOUN_TAGS = frozenset({"PRP"})
PROPER_TAGS = frozenset({"NNP", "NNPS"})

# WordNet lemmas looked up in place of symbols and pronouns
SYMBOL_LEMMAS = {"$": "dollar", "us$": "dollar", "#": "pound", "%": "percent"}
PRONOUN_LEMMAS = {
    p: "person"
    for p in "i me you he him she her we us they them myself yourself himself herself ourselves themselves".split()
}
PARTITIVE_NOUNS = frozenset(
    "couple lot lots number pair handful bunch dozen series variety majority minority host total".split()
)
DEFAULT_PROPER_FALLBACK = "person"


class ConfigError(ValueError):
    pass


# -- configuration -------------------------------------------------------------

class PrepLexicon(dict):
    """Preposition (lowercase, multiword keys space-joined) to role guess."""

    def __setitem__(self, key, value):
        if value is RoleCategory.NONE:
            raise ConfigError(f"lexicon entry {key!r} cannot map to NONE")
        super().__setitem__(" ".join(key.lower().split()), value)

    def guess(self, prep: str) -> RoleCategory:
        return self.get(" ".join(prep.lower().split()), RoleCategory.NONE)


@dataclass(frozen=True)
class KeywordRule:
    keyword: str
    category: RoleCategory
    preps: frozenset[str] = frozenset()
    negated: bool = False

    def applies_to(self, prep: str | None) -> bool:
        if not self.preps:
            return True
        inside = prep is not None and prep in self.preps
        return not inside if self.negated else inside


@dataclass
class KeywordMap:
    rules: list[KeywordRule] = field(default_factory=list)

    def add(self, keyword: str, category: RoleCategory, preps=(), negated=False):
        if category is RoleCategory.NONE:
            raise ConfigError(f"keyword {keyword!r} cannot map to NONE")
        keyword = " ".join(keyword.lower().replace("_", " ").split())
        self.rules.append(KeywordRule(keyword, category, frozenset(p.lower() for p in preps), negated))

    def matches(self, lemmas: Iterable[str], prep: str | None) -> list[KeywordRule]:
        names = {" ".join(lemma.lower().replace("_", " ").split()) for lemma in lemmas}
        return [r for r in self.rules if r.keyword in names and r.applies_to(prep)]


def _config_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, [f.strip() for f in line.split("\t")]


def _category(value: str, lineno: int) -> RoleCategory:
    try:
        return RoleCategory.parse(value)
    except ValueError:
        raise ConfigError(f"line {lineno}: unknown category {value!r}") from None


def load_lexicon(text: str) -> PrepLexicon:
    lex = PrepLexicon()
    for lineno, fields in _config_lines(text):
        if len(fields) != 2 or not fields[0]:
            raise ConfigError(f"line {lineno}: expected 'preposition<TAB>CATEGORY'")
        lex[fields[0]] = _category(fields[1], lineno)
    return lex


def load_keywords(text: str) -> KeywordMap:
    """Parse ``keyword<TAB>CATEGORY[<TAB>prep=a,b]`` lines; ``prep=!a`` excludes."""
    km = KeywordMap()
    for lineno, fields in _config_lines(text):
        if len(fields) not in (2, 3) or not fields[0]:
            raise ConfigError(f"line {lineno}: expected 'keyword<TAB>CATEGORY[<TAB>prep=WORD]'")
        preps: list[str] = []
        negated = False
        if len(fields) == 3:
            gate = fields[2]
            if not gate.startswith("prep="):
                raise ConfigError(f"line {lineno}: third field must be prep=WORD")
            gate = gate[len("prep="):]
            if gate.startswith("!"):
                negated, gate = True, gate[1:]
            preps = [p.strip() for p in gate.split(",") if p.strip()]
            if not preps:
                raise ConfigError(f"line {lineno}: empty prep gate")
        km.add(fields[0], _category(fields[1], lineno), preps, negated)
    return km


def default_lexicon() -> PrepLexicon:
    return load_lexicon((resources.files("ppcat") / "data" / "lexicon.tsv").read_text(encoding="utf-8"))


def default_keywords() -> KeywordMap:
    return load_keywords((resources.files("ppcat") / "data" / "keywords.tsv").read_text(encoding="utf-8"))


# -- tree inspection -------------------------------------------------------------

def is_merged(tree: ParseTree) -> bool:
    kids = tree.child_trees()
    return len(tree.children) == 2 and len(kids) == 2 and all(k.label == tree.label for k in kids)


def head_preposition(tree: ParseTree) -> str:
    """Lowercased head preposition; two-word heads are space-joined."""
    if is_merged(tree):
        return head_preposition(tree.child_trees()[0])
    words = []
    for child in tree.children:
        if not isinstance(child, Token):
            break
        words.append(child.surface.lower())
    return " ".join(words)


def _object_np(tree: ParseTree) -> ParseTree | None:
    nps = [c for c in tree.child_trees() if c.label == "NP"]
    return nps[-1] if nps else None


def _np_core_leaves(np: ParseTree) -> list[Token]:
    leaves = []
    for child in np.children:
        if isinstance(child, Token):
            leaves.append(child)
        elif child.label not in ("DET", "PP", "VP"):
            leaves.extend(child.leaves())
    return leaves


@dataclass(frozen=True)
class NPHead:
    word: str
    kind: str  # "pronoun", "proper", "symbol" or "common"


def np_head(np: ParseTree) -> NPHead | None:
    kids = np.child_trees()
    if len(kids) >= 2 and kids[0].label == "NP" and any(
        isinstance(c, Token) and c.tag == "CC" for c in np.children
    ):
        return np_head(kids[0])
    core = _np_core_leaves(np)
    if core and all(t.tag in PRONOUN_TAGS for t in core):
        return NPHead(" ".join(t.surface for t in core), "pronoun")
    if core and all(t.tag in PROPER_TAGS for t in core):
        return NPHead(" ".join(t.surface for t in core), "proper")
    for kid in kids:
        if kid.label == "CUR":
            return NPHead(kid.surface(), "symbol")
    for kid in kids:
        if kid.label == "HEAD":
            return NPHead(kid.surface(), "common")
    return None


def _pp_head(tree: ParseTree, following: ParseTree | None) -> NPHead | None:
    if is_merged(tree):
        first, second = tree.child_trees()
        return _pp_head(first, second)
    np = _object_np(tree)
    if np is None:
        return None
    head = np_head(np)
    if head is not None and head.kind == "common" and head.word.lower() in PARTITIVE_NOUNS:
        # "a couple of weeks": the complement of "of" carries the meaning
        inner = [c for c in np.child_trees() if c.label == "PP"]
        if following is not None:
            inner.append(following)
        for pp in inner:
            if head_preposition(pp) == "of":
                return _pp_head(pp, None) or head
    return head


def extract_np_head(tree: ParseTree, following: ParseTree | None = None) -> str | None:
    """Relevant head of the PP's object NP.

    Pronoun and proper-noun NPs give their whole surface string; otherwise
    the HEAD constituent (or the currency symbol of a money NP).  For a
    merged PP the first PP supplies the head.
    """
    head = _pp_head(tree, following)
    return head.word if head else None


# -- the two layers ---------------------------------------------------------------

def layer1_guess(prep: str, lex: PrepLexicon) -> RoleCategory:
    return lex.guess(prep)


@dataclass(frozen=True)
class KeywordHit:
    keyword: str
    category: RoleCategory
    sense: int
    level: int


@dataclass(frozen=True)
class Layer2Result:
    category: RoleCategory
    lemma: str | None
    hit: KeywordHit | None
    hits: tuple[KeywordHit, ...] = ()


def lookup_lemma(head: str, wn: WordNetIndex, kind: str = "common", proper_fallback=DEFAULT_PROPER_FALLBACK):
    """WordNet lemma to query for an NP head, or None."""
    word = head.lower()
    if kind == "pronoun":
        return PRONOUN_LEMMAS.get(word)
    if word in SYMBOL_LEMMAS:
        word = SYMBOL_LEMMAS[word]
    candidates = wn.morphy_noun(word)
    if candidates:
        return candidates[0]
    if kind == "proper" and len(word.split()) > 1:
        candidates = wn.morphy_noun(word.split()[-1])
        if candidates:
            return candidates[0]
    if kind == "proper" and proper_fallback:
        return proper_fallback
    return None


def keyword_hits(lemma: str, wn: WordNetIndex, km: KeywordMap, threshold: int, prep: str | None = None):
    hits = []
    for tree in wn.hypernym_trees(lemma, threshold):
        for level, names in enumerate(tree.chain):
            for rule in km.matches(names, prep):
                hits.append(KeywordHit(rule.keyword, rule.category, tree.sense_number, level))
    return hits


def best_hit(hits: Sequence[KeywordHit]) -> KeywordHit | None:
    """Highest-priority hit; ties go to the lowest sense, then the nearest level."""
    if not hits:
        return None
    return min(hits, key=lambda h: (h.category.priority, h.sense, h.level, h.keyword))


def layer2_classify(
    head: str | None,
    wn: WordNetIndex,
    km: KeywordMap,
    threshold: int = DEFAULT_SENSE_THRESHOLD,
    prep: str | None = None,
    kind: str = "common",
    proper_fallback: str | None = DEFAULT_PROPER_FALLBACK,
) -> Layer2Result:
    if threshold < 1:
        raise ValueError("sense threshold must be >= 1")
    if not head:
        return Layer2Result(RoleCategory.NONE, None, None)
    lemma = lookup_lemma(head, wn, kind, proper_fallback)
    if lemma is None:
        return Layer2Result(RoleCategory.NONE, None, None)
    hits = keyword_hits(lemma, wn, km, threshold, prep)
    hit = best_hit(hits)
    category = highest_priority(h.category for h in hits)
    return Layer2Result(category, lemma, hit, tuple(hits))


@dataclass(frozen=True)
class Evidence:
    preposition: str
    layer1: RoleCategory
    head: str | None
    lemma: str | None
    layer2: KeywordHit | None

    @property
    def sense(self) -> int | None:
        return self.layer2.sense if self.layer2 else None

    def replay(self) -> RoleCategory:
        return self.layer2.category if self.layer2 else self.layer1

    def __str__(self):
        l2 = (
            f"{self.layer2.category.value} via {self.layer2.keyword!r} (sense {self.layer2.sense}, level {self.layer2.level})"
            if self.layer2 else "NONE"
        )
        return f"prep={self.preposition!r} layer1={self.layer1.value} head={self.head!r} lemma={self.lemma!r} layer2={l2}"


@dataclass(frozen=True)
class LabeledPP:
    tree: ParseTree
    category: RoleCategory
    evidence: Evidence

    @property
    def span(self) -> tuple[int, int]:
        return self.tree.span


@dataclass
class Classifier:
    """Bundles the configuration the two layers need."""

    wordnet: WordNetIndex
    lexicon: PrepLexicon = field(default_factory=default_lexicon)
    keywords: KeywordMap = field(default_factory=default_keywords)
    sense_threshold: int = DEFAULT_SENSE_THRESHOLD
    proper_fallback: str | None = DEFAULT_PROPER_FALLBACK

    def __post_init__(self):
        if self.sense_threshold < 1:
            raise ValueError("sense threshold must be >= 1")

    def classify(self, tree: ParseTree, following: ParseTree | None = None) -> LabeledPP:
        prep = head_preposition(tree)
        guess = layer1_guess(prep, self.lexicon)
        head = _pp_head(tree, following)
        result = layer2_classify(
            head.word if head else None, self.wordnet, self.keywords, self.sense_threshold,
            prep, head.kind if head else "common", self.proper_fallback,
        )
        category = result.category if result.category is not RoleCategory.NONE else guess
        evidence = Evidence(prep, guess, head.word if head else None, result.lemma, result.hit)
        return LabeledPP(tree, category, evidence)

    def label_chunk(self, tree: ParseTree) -> list[LabeledPP]:
        """Label a chunk and every PP nested in it, in pre-order."""
        out: list[LabeledPP] = []
        target = tree.label

        def visit(node: ParseTree, following: ParseTree | None):
            if node.label == target:
                out.append(self.classify(node, following))
            if node.label == target and is_merged(node):
                first, second = node.child_trees()
                visit(first, second)
                visit(second, following)
                return
            for child in node.child_trees():
                visit(child, None)

        visit(tree, None)
        return out

    def annotate(self, sentence: Sentence, grammar: Grammar) -> tuple[list[ParseTree], list[LabeledPP]]:
        chunks = chunk_sentence(sentence, grammar)
        labeled = [lp for chunk in chunks for lp in self.label_chunk(chunk)]
        return chunks, labeled


def classify_pp(tree, lex, wn, km, threshold=DEFAULT_SENSE_THRESHOLD, following=None) -> LabeledPP:
    return Classifier(wn, lex, km, threshold).classify(tree, following)


def annotate_document(sentences, grammar, lex, wn, km, threshold=DEFAULT_SENSE_THRESHOLD, **kwargs):
    """Chunk and label every sentence; returns ``(sentence, labeled PPs)`` pairs."""
    clf = Classifier(wn, lex, km, threshold, **kwargs)
    return [(s, clf.annotate(s, grammar)[1]) for s in sentences]


def render_labeled(sentence: Sentence, chunks: list[ParseTree], labeled: list[LabeledPP]) -> str:
    labels = {(lp.tree.label, lp.tree.span): lp.category.pp_label for lp in labeled}

    def relabel(node):
        return labels.get((node.label, node.span))

    return render_chunked(sentence, chunks, relabel)
