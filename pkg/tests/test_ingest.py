import pytest
from hypothesis import given, strategies as st

from ppcat import minicorpus
from ppcat.ingest import (
    AnnotatedSentence,
    GoldSpan,
    IngestError,
    Sentence,
    Token,
    parse_bracketed_line,
    parse_gold,
    parse_tagged_text,
    preprocess,
    read_bracketed,
    read_header_patterns,
    serialize_gold,
)
from ppcat.roles import CATEGORIES, RoleCategory


def test_single_sentence():
    (s,) = parse_tagged_text("the/DT dog/NN ./.")
    assert len(s) == 3
    assert s.tokens[1] == Token("dog", "NN", 1)
    assert s.tokens[-1].tag == "."


def test_blank_line_and_stop_split_sentences():
    sents = parse_tagged_text("in/IN the/DT house/NN ./.\n\nhe/PRP left/VBD ./.")
    assert len(sents) == 2
    assert [s.sent_index for s in sents] == [0, 1]


def test_blank_line_without_stop_splits():
    sents = parse_tagged_text("a/DT b/NN\n\nc/NN", "d1")
    assert [len(s) for s in sents] == [2, 1]
    assert sents[1].ref == ("d1", 1)


def test_question_and_exclamation_end_sentences():
    assert len(parse_tagged_text("why/WRB ?/. go/VB !/.")) == 2


def test_missing_tag_separator():
    with pytest.raises(IngestError) as exc:
        parse_tagged_text("the/DT dog/NN\nhello world")
    assert "hello" in str(exc.value)
    assert exc.value.line == 2


def test_slash_inside_word_uses_last_separator():
    (s,) = parse_tagged_text("1/2/CD")
    assert s.tokens[0] == Token("1/2", "CD", 0)


def test_header_lines_removed():
    raw = ".START 001\n\nThe/DT dog/NN barked/VBD ./.\n"
    out = preprocess(raw)
    assert ".START" not in out
    assert parse_tagged_text(out)[0].words == ["The", "dog", "barked", "."]


def test_header_like_line_after_body_kept():
    raw = "a/DT b/NN ./.\n@/IN x/NN ./.\n"
    assert "@/IN" in preprocess(raw)


def test_custom_header_patterns():
    patterns = read_header_patterns("# comment\nHDR\n")
    assert patterns == ("HDR",)
    assert preprocess("HDR line\nx/NN ./.\n", patterns) == "x/NN ./.\n"


def test_stranded_preposition_retagged():
    (s,) = parse_tagged_text(preprocess("turn/VB it/PRP off/IN ./."))
    assert s.tags == ["VB", "PRP", "RB", "."]


def test_stranded_preposition_before_quote():
    (s,) = parse_tagged_text(preprocess("he/PRP said/VBD ``/`` give/VB up/IN ''/'' ./."))
    assert s.tags[4] == "RB"


def test_glued_quotes_split_off():
    (s,) = parse_tagged_text(preprocess('"turn/VB it/PRP off/IN" ./.'))
    assert s.words == ["``", "turn", "it", "off", "''", "."]
    assert s.tags == ["``", "VB", "PRP", "RB", "''", "."]


def test_preposition_not_at_end_untouched():
    (s,) = parse_tagged_text(preprocess("in/IN the/DT house/NN ./."))
    assert s.tags[0] == "IN"


def test_clean_text_unchanged():
    raw = "The/DT jury/NN met/VBD in/IN Newark/NNP ./.\n"
    assert preprocess(raw) == raw


def test_stranded_preposition_yields_no_chunk(grammar):
    from ppcat.earley import chunk_sentence

    raw = "He/PRP turned/VBD the/DT lights/NNS off/IN ./."
    (before,) = parse_tagged_text(raw)
    (after,) = parse_tagged_text(preprocess(raw))
    assert before.tags[4] == "IN" and after.tags[4] == "RB"
    assert chunk_sentence(after, grammar) == []


def test_gold_span_for_locative():
    spans = parse_gold("a/DT federal/JJ grand/JJ jury/NN (PP-LOC in/IN (NP Newark/NNP)) ./.")
    assert spans == [GoldSpan(("doc", 0), 4, 6, RoleCategory.LOC)]


def test_bare_pp_is_none():
    (span,) = parse_gold("(PP for/IN (NP it/PRP))")
    assert span.category is RoleCategory.NONE


def test_bnf_label():
    (span,) = parse_gold("I/PRP baked/VBD a/DT cake/NN (PP-BNF for/IN (NP Doug/NNP))")
    assert span.category is RoleCategory.BNF
    assert span.span == (4, 6)


def test_nested_pps_are_spans():
    line = "sat/VBD (PP-LOC (PP-LOC on/IN the/DT hill/NN) (PP with/IN a/DT telescope/NN))"
    spans = parse_gold(line)
    assert [(s.start, s.end, s.category.value) for s in spans] == [
        (1, 7, "LOC"), (1, 4, "LOC"), (4, 7, "NONE"),
    ]


@pytest.mark.parametrize("bad, fragment", [
    ("(PP-LOC in/IN Newark/NNP", "unbalanced"),
    ("in/IN Newark/NNP)", "unbalanced"),
    ("(PP-XYZ in/IN Newark/NNP)", "unknown"),
    ("(PP-LOC )", "empty"),
    ("(PP-LOC in Newark/NNP)", "word/TAG"),
])
def test_malformed_gold(bad, fragment):
    with pytest.raises(IngestError) as exc:
        parse_gold(bad)
    assert fragment in str(exc.value)


def test_gold_error_has_line_number():
    with pytest.raises(IngestError) as exc:
        read_bracketed("# doc: a\nx/NN ./.\n(PP in/IN x/NN\n")
    assert exc.value.line == 3


def test_doc_comments_set_refs():
    anns = read_bracketed("# doc: a\nx/NN ./.\ny/NN ./.\n# doc: b\nz/NN ./.\n")
    assert [a.sentence.ref for a in anns] == [("a", 0), ("a", 1), ("b", 0)]


@pytest.mark.parametrize("split", minicorpus.SPLITS)
def test_bundled_gold_spans_start_with_preposition(split):
    anns = read_bracketed(minicorpus.bundled_path(split).read_text())
    for ann in anns:
        for span in ann.spans:
            assert 0 <= span.start < span.end <= len(ann.sentence)
            assert ann.sentence.tokens[span.start].tag in ("IN", "TO"), ann.sentence.text()


@pytest.mark.parametrize("split", minicorpus.SPLITS)
def test_bundled_gold_round_trips(split):
    anns = read_bracketed(minicorpus.bundled_path(split).read_text())
    again = read_bracketed(serialize_gold(anns))
    assert [(a.sentence, a.spans) for a in again] == [(a.sentence, a.spans) for a in anns]


WORDS = st.sampled_from(["the", "dog", "in", "off", "Newark", "$", "3.5", "1/2", "'s", "U.S.", "."])
TAGS = st.sampled_from(["DT", "NN", "IN", "NNP", "$", "CD", "POS", "RB", ".", "''", "``"])
items = st.tuples(WORDS, TAGS).map(lambda wt: f"{wt[0]}/{wt[1]}")
quoted = st.tuples(st.sampled_from(["", '"', "``"]), items, st.sampled_from(["", '"', "''"])).map("".join)
lines = st.lists(quoted, max_size=8).map(" ".join)


@given(st.lists(st.one_of(lines, st.sampled_from([".START x", "@ header", "", "=====" ])), max_size=6).map("\n".join))
def test_preprocess_output_always_parses(raw):
    out = preprocess(raw)
    sentences = parse_tagged_text(out)
    for s in sentences:
        assert [t.index for t in s.tokens] == list(range(len(s)))
        assert all(t.surface and t.tag for t in s.tokens)
    assert preprocess(out) == out


@st.composite
def annotated_sentences(draw):
    n = draw(st.integers(1, 10))
    pairs = [("w%d" % i, draw(st.sampled_from(["IN", "TO", "DT", "NN"]))) for i in range(n)]
    sent = Sentence.from_pairs(pairs, draw(st.sampled_from(["a", "b"])), 0)
    # properly nested spans: a random binary bracketing
    spans = set()

    def bracket(lo, hi):
        if hi - lo < 1:
            return
        if draw(st.booleans()):
            spans.add((lo, hi, draw(st.sampled_from(CATEGORIES))))
        if hi - lo >= 2 and draw(st.booleans()):
            mid = draw(st.integers(lo + 1, hi - 1))
            bracket(lo, mid)
            bracket(mid, hi)

    bracket(0, n)
    gold = sorted(
        (GoldSpan(sent.ref, s, e, c) for s, e, c in spans), key=lambda g: (g.start, -g.end)
    )
    return AnnotatedSentence(sent, gold)


@given(st.lists(annotated_sentences(), min_size=1, max_size=4))
def test_gold_round_trip_property(anns):
    # renumber so refs are unique per document, as read_bracketed assigns them
    counters = {}
    fixed = []
    for a in anns:
        idx = counters.get(a.sentence.doc_id, 0)
        counters[a.sentence.doc_id] = idx + 1
        sent = Sentence(a.sentence.tokens, a.sentence.doc_id, idx)
        fixed.append(AnnotatedSentence(sent, [GoldSpan(sent.ref, s.start, s.end, s.category) for s in a.spans]))
    again = read_bracketed(serialize_gold(fixed))
    assert [g.spans for g in again] == [a.spans for a in fixed]
    assert [g.sentence.text() for g in again] == [a.sentence.text() for a in fixed]
