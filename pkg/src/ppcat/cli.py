"""Command-line front end: ``ppcat {chunk,classify,eval,wn}``."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import minicorpus
from .classifier import (
    DEFAULT_PROPER_FALLBACK,
    DEFAULT_SENSE_THRESHOLD,
    Classifier,
    ConfigError,
    default_keywords,
    default_lexicon,
    load_keywords,
    load_lexicon,
    render_labeled,
)
from .earley import ParseError, chunk_sentence, render_chunked
from .evaluation import EvalReport, evaluate_roles
from .grammar import Grammar, GrammarError, default_pp_grammar, load_grammar, validate
from .ingest import (
    DEFAULT_HEADER_PATTERNS,
    IngestError,
    parse_tagged_text,
    preprocess,
    read_bracketed,
    read_header_patterns,
)
from .roles import RoleCategory
from .wordnet import WordNetError, WordNetIndex, bundled_dir, load_dir

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    grammar: Path | None = None
    wordnet: Path | None = None
    lexicon: Path | None = None
    keywords: Path | None = None
    sense_threshold: int = DEFAULT_SENSE_THRESHOLD
    header_patterns: Path | None = None
    proper_fallback: str | None = DEFAULT_PROPER_FALLBACK
    output: Path | None = None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        cfg = cls(
            grammar=getattr(args, "grammar", None),
            wordnet=getattr(args, "wordnet", None),
            lexicon=getattr(args, "lexicon", None),
            keywords=getattr(args, "keywords", None),
            sense_threshold=getattr(args, "sense_threshold", DEFAULT_SENSE_THRESHOLD),
            header_patterns=getattr(args, "header_patterns", None),
            proper_fallback=getattr(args, "proper_fallback", DEFAULT_PROPER_FALLBACK) or None,
            output=getattr(args, "output", None),
        )
        cfg.check()
        return cfg

    def check(self):
        if self.sense_threshold < 1:
            raise CliError("--sense-threshold must be >= 1", EXIT_USAGE)
        for name in ("grammar", "lexicon", "keywords", "header_patterns"):
            path = getattr(self, name)
            if path is not None and not path.is_file():
                code = EXIT_INPUT if name == "header_patterns" else EXIT_RESOURCE
                raise CliError(f"{path}: no such file (--{name.replace('_', '-')})", code)
        wn_dir = self.wordnet_dir()
        if not wn_dir.is_dir():
            raise CliError(f"{wn_dir}: WordNet directory not found", EXIT_RESOURCE)

    def wordnet_dir(self) -> Path:
        if self.wordnet is not None:
            return self.wordnet
        env = os.environ.get("PPCAT_WORDNET")
        return Path(env) if env else bundled_dir()

    def load_grammar(self) -> Grammar:
        if self.grammar is None:
            return default_pp_grammar()
        try:
            g = load_grammar(self.grammar.read_text(encoding="utf-8"))
        except GrammarError as exc:
            raise CliError(f"{self.grammar}: {exc}", EXIT_RESOURCE) from None
        problems = [d for d in validate(g) if not d.startswith("unreachable")]
        if problems:
            raise CliError(f"{self.grammar}: " + "; ".join(problems), EXIT_RESOURCE)
        return g

    def load_wordnet(self) -> WordNetIndex:
        wn_dir = self.wordnet_dir()
        for name in ("index.noun", "data.noun"):
            if not (wn_dir / name).exists() and not (wn_dir / f"{name}.gz").exists():
                raise CliError(f"{wn_dir}: missing WordNet file {name}", EXIT_RESOURCE)
        try:
            return load_dir(wn_dir)
        except (WordNetError, OSError, ValueError) as exc:
            raise CliError(f"{wn_dir}: {exc}", EXIT_RESOURCE) from None

    def load_classifier(self) -> Classifier:
        try:
            lex = load_lexicon(self.lexicon.read_text(encoding="utf-8")) if self.lexicon else default_lexicon()
            km = load_keywords(self.keywords.read_text(encoding="utf-8")) if self.keywords else default_keywords()
        except ConfigError as exc:
            raise CliError(str(exc), EXIT_RESOURCE) from None
        return Classifier(self.load_wordnet(), lex, km, self.sense_threshold, self.proper_fallback)

    def patterns(self) -> tuple[str, ...]:
        if self.header_patterns is None:
            return DEFAULT_HEADER_PATTERNS
        return read_header_patterns(self.header_patterns.read_text(encoding="utf-8"))


def _read_input(path: str) -> tuple[str, str]:
    """Return ``(doc_id, text)`` for a path or ``-`` (stdin)."""
    if path == "-":
        return "stdin", sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise CliError(f"{path}: no such file", EXIT_INPUT)
    try:
        return p.stem, p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def _read_documents(paths, cfg: RunConfig):
    docs = [_read_input(p) for p in paths]
    patterns = cfg.patterns()
    for (doc_id, text), path in zip(docs, paths):
        try:
            yield doc_id, parse_tagged_text(preprocess(text, patterns), doc_id)
        except IngestError as exc:
            raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def _emit(lines: list[str], cfg: RunConfig):
    text = "".join(line + "\n" for line in lines)
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text, encoding="utf-8")


def cmd_chunk(args) -> int:
    cfg = RunConfig.from_args(args)
    g = cfg.load_grammar()
    lines = []
    for doc_id, sentences in _read_documents(args.inputs, cfg):
        if sentences:
            lines.append(f"# doc: {doc_id}")
        for sent in sentences:
            try:
                lines.append(render_chunked(sent, chunk_sentence(sent, g)))
            except ParseError as exc:
                raise CliError(f"{doc_id} sentence {sent.sent_index}: {exc}", EXIT_RESOURCE) from None
    _emit(lines, cfg)
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = RunConfig.from_args(args)
    g = cfg.load_grammar()
    clf = cfg.load_classifier()
    lines = []
    for doc_id, sentences in _read_documents(args.inputs, cfg):
        if sentences:
            lines.append(f"# doc: {doc_id}")
        for sent in sentences:
            chunks, labeled = clf.annotate(sent, g)
            lines.append(render_labeled(sent, chunks, labeled))
            if args.evidence:
                for lp in labeled:
                    lines.append(f"#   {lp.tree.start}-{lp.tree.end} {lp.category.pp_label}: {lp.evidence}")
    _emit(lines, cfg)
    return EXIT_OK


def _read_bracketed_file(path: str):
    doc_id, text = _read_input(path)
    try:
        return read_bracketed(text, doc_id)
    except IngestError as exc:
        raise CliError(f"{path}: {exc}", EXIT_INPUT) from None


def read_counts(text: str) -> EvalReport:
    """Counts file: ``ROW<TAB>correct<TAB>predicted<TAB>gold`` lines, ROW a category or TOTAL."""
    rows, total = {}, None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            if len(fields) != 4:
                raise ValueError("expected 4 fields")
            counts = tuple(int(x) for x in fields[1:])
            if fields[0].upper() == "TOTAL":
                total = counts
            else:
                rows[RoleCategory.parse(fields[0])] = counts
        except ValueError as exc:
            raise IngestError(f"bad counts line: {exc}", lineno) from None
    if total is None:
        raise IngestError("counts file has no TOTAL row")
    return EvalReport.from_counts(rows, total)


def _print_report(report: EvalReport, cfg: RunConfig, beta: float):
    _emit([report.table(beta), "", *report.key_values(beta)], cfg)


def cmd_eval(args) -> int:
    cfg = RunConfig.from_args(args)
    if args.mini_corpus:
        clf = cfg.load_classifier()
        text = minicorpus.bundled_path(args.split).read_text(encoding="utf-8")
        report, _ = minicorpus.run(text, clf, cfg.load_grammar(), cfg.patterns())
        _print_report(report, cfg, args.beta)
        return EXIT_OK
    if args.counts:
        _, text = _read_input(args.counts)
        try:
            report = read_counts(text)
        except (IngestError, ValueError) as exc:
            raise CliError(f"{args.counts}: {exc}", EXIT_INPUT) from None
        _print_report(report, cfg, args.beta)
        return EXIT_OK
    if args.pred is None or args.gold is None:
        raise CliError("eval needs PRED and GOLD files (or --counts / --mini-corpus)", EXIT_USAGE)
    pred = _read_bracketed_file(args.pred)
    gold = _read_bracketed_file(args.gold)
    pred_refs = {a.sentence.ref for a in pred}
    gold_refs = {a.sentence.ref for a in gold}
    if pred_refs != gold_refs:
        fmt = lambda refs: ", ".join(f"{d}:{i}" for d, i in sorted(refs)) or "-"
        raise CliError(
            "prediction and gold cover different sentences; "
            f"missing from prediction: {fmt(gold_refs - pred_refs)}; "
            f"missing from gold: {fmt(pred_refs - gold_refs)}",
            EXIT_INPUT,
        )
    report = evaluate_roles(
        [s for a in pred for s in a.spans], [s for a in gold for s in a.spans]
    )
    _print_report(report, cfg, args.beta)
    return EXIT_OK


def format_hypernyms(wn: WordNetIndex, word: str, threshold: int) -> list[str]:
    candidates = wn.morphy_noun(word)
    if not candidates:
        return [f"{word}: not indexed"]
    lemma = candidates[0]
    trees = wn.hypernym_trees(lemma, threshold)
    total = len(wn.senses(lemma))
    lines = [f"Hypernyms of noun {lemma.replace('_', ' ')} ({total} senses, showing {len(trees)})"]
    for tree in trees:
        first = wn.senses(lemma)[tree.sense_number - 1]
        lines.append("")
        lines.append(f"Sense {tree.sense_number}")
        lines.append(", ".join(first.names))
        for depth, level in enumerate(tree.levels[1:], 1):
            for off in level:
                lines.append("    " * depth + "=> " + ", ".join(wn.synsets[off].names))
    return lines


def cmd_wn(args) -> int:
    cfg = RunConfig.from_args(args)
    wn = cfg.load_wordnet()
    _emit(format_hypernyms(wn, args.lemma, cfg.sense_threshold), cfg)
    return EXIT_OK


def _path(value: str) -> Path:
    return Path(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", type=_path, help="write here instead of stdout")

    grammar = argparse.ArgumentParser(add_help=False)
    grammar.add_argument("--grammar", type=_path, help="rule file (default: built-in PP grammar)")
    grammar.add_argument("--header-patterns", type=_path,
                         help="file of line prefixes marking document headers")

    wordnet = argparse.ArgumentParser(add_help=False)
    wordnet.add_argument("--wordnet", type=_path,
                         help="directory with index.noun and data.noun (default: $PPCAT_WORDNET or bundled)")
    wordnet.add_argument("--sense-threshold", type=int, default=DEFAULT_SENSE_THRESHOLD,
                         help="number of senses searched per noun (default: %(default)s)")

    classify = argparse.ArgumentParser(add_help=False, parents=[wordnet])
    classify.add_argument("--lexicon", type=_path, help="preposition lexicon (TSV)")
    classify.add_argument("--keywords", type=_path, help="hypernym keyword map (TSV)")
    classify.add_argument("--proper-fallback", default=DEFAULT_PROPER_FALLBACK,
                          help="lemma used for proper names missing from WordNet ('' disables)")

    parser = _Parser(prog="ppcat", description="Chunk prepositional phrases and label their semantic roles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("chunk", parents=[common, grammar], help="bracket PP chunks in tagged text")
    p.add_argument("inputs", nargs="+", metavar="INPUT", help="word/TAG files, '-' for stdin")
    p.set_defaults(func=cmd_chunk)

    p = sub.add_parser("classify", parents=[common, grammar, classify], help="chunk and label PPs as PP-XXX")
    p.add_argument("inputs", nargs="+", metavar="INPUT", help="word/TAG files, '-' for stdin")
    p.add_argument("--evidence", action="store_true", help="append per-PP evidence as comment lines")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("eval", parents=[common, grammar, classify], help="score predictions against gold")
    p.add_argument("pred", nargs="?", help="predicted bracketed file")
    p.add_argument("gold", nargs="?", help="gold bracketed file")
    p.add_argument("--beta", type=float, default=1.0, help="F-measure weight (default: 1)")
    p.add_argument("--counts", help="report from raw counts instead of files")
    p.add_argument("--mini-corpus", action="store_true", help="run the bundled gold mini-corpus end to end")
    p.add_argument("--split", choices=minicorpus.SPLITS, default="test", help="mini-corpus split (default: test)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("wn", parents=[common, wordnet], help="show hypernym trees for a noun")
    p.add_argument("lemma")
    p.set_defaults(func=cmd_wn)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "beta", 1.0) <= 0:
        print("ppcat: --beta must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ppcat: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
