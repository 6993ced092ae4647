import pytest
from hypothesis import assume, given, strategies as st

from ppcat.evaluation import (
    EvalReport,
    MatchCounts,
    UndefinedMetric,
    evaluate_chunks,
    evaluate_roles,
    f_measure,
    precision,
    recall,
    scores,
)
from ppcat.ingest import GoldSpan
from ppcat.roles import CATEGORIES, RoleCategory

R = RoleCategory
TOL = 0.001  # one tenth of a percentage point


def test_precision_examples():
    assert precision(MatchCounts(302, 409, 369)) == pytest.approx(0.738, abs=TOL)
    assert precision(MatchCounts(324, 381, 369)) == pytest.approx(0.850, abs=TOL)
    assert precision(MatchCounts(0, 5, 10)) == 0.0


def test_recall_examples():
    assert recall(MatchCounts(324, 381, 369)) == pytest.approx(0.878, abs=TOL)
    assert recall(MatchCounts(293, 351, 369)) == pytest.approx(0.794, abs=TOL)
    assert recall(MatchCounts(10, 10, 10)) == 1.0


def test_f_examples():
    assert f_measure(0.850, 0.878) == pytest.approx(0.864, abs=TOL)
    assert f_measure(0.895, 0.871) == pytest.approx(0.883, abs=TOL)
    assert f_measure(0.4, 0.4) == pytest.approx(0.4)


def test_f_beta_weights_recall():
    assert f_measure(0.5, 1.0, beta=2) > f_measure(0.5, 1.0)
    assert f_measure(0.5, 1.0, beta=2) == pytest.approx(5 * 0.5 / (4 * 0.5 + 1))


def test_undefined_metrics():
    with pytest.raises(UndefinedMetric):
        precision(MatchCounts(0, 0, 3))
    with pytest.raises(UndefinedMetric):
        recall(MatchCounts(0, 3, 0))
    with pytest.raises(UndefinedMetric):
        f_measure(0.0, 0.0)
    with pytest.raises(ValueError):
        f_measure(0.5, 0.5, beta=0)
    assert scores(MatchCounts(0, 0, 0)) == (None, None, None)


def test_counts_invariants():
    with pytest.raises(ValueError):
        MatchCounts(3, 2, 5)
    with pytest.raises(ValueError):
        MatchCounts(-1, 2, 5)
    assert MatchCounts(1, 2, 3) + MatchCounts(1, 1, 1) == MatchCounts(2, 3, 4)


def test_evaluate_chunks_examples():
    spans = [(0, 3), (4, 6)]
    assert evaluate_chunks(spans, spans) == MatchCounts(2, 2, 2)
    assert evaluate_chunks([], [(0, 3)]) == MatchCounts(0, 0, 1)
    assert evaluate_chunks([(0, 3), (5, 7)], [(0, 3)]) == MatchCounts(1, 2, 1)


def test_evaluate_chunks_one_to_one():
    assert evaluate_chunks([(0, 3), (0, 3)], [(0, 3)]) == MatchCounts(1, 2, 1)


def span(s, e, cat, ref=("d", 0)):
    return GoldSpan(ref, s, e, cat)


def test_roles_all_correct():
    gold = [span(0, 2, R.LOC), span(3, 5, R.TMP), span(6, 8, R.NONE)]
    report = evaluate_roles(gold, gold)
    assert scores(report.total)[:2] == (1.0, 1.0)


def test_roles_none_matches_none_counts_in_total_only():
    report = evaluate_roles([span(0, 2, R.NONE)], [span(0, 2, R.NONE)])
    assert report.total == MatchCounts(1, 1, 1)
    assert all(report.row(c) == MatchCounts() for c in CATEGORIES if c is not R.NONE)


def test_roles_none_against_category_is_wrong():
    report = evaluate_roles([span(0, 2, R.NONE)], [span(0, 2, R.LOC)])
    assert report.total == MatchCounts(0, 1, 1)
    assert report.row(R.LOC) == MatchCounts(0, 0, 1)


def test_roles_spurious_span_counts_once():
    report = evaluate_roles([span(0, 2, R.LOC), span(4, 6, R.TMP)], [span(0, 2, R.LOC)])
    assert report.total == MatchCounts(1, 2, 1)
    assert report.row(R.TMP) == MatchCounts(0, 1, 0)
    assert report.chunks == MatchCounts(1, 2, 1)


def test_roles_sentences_kept_apart():
    report = evaluate_roles([span(0, 2, R.LOC, ("d", 1))], [span(0, 2, R.LOC, ("d", 0))])
    assert report.total.correct == 0


TABLE3 = {R.LOC: (128, 143, 147), R.TMP: (78, 96, 98), R.DIR: (68, 74, 79), R.MNR: (17, 28, 26)}
TABLE3_PR = {R.LOC: (87.1, 89.5), R.TMP: (79.6, 81.3), R.DIR: (86.1, 91.9), R.MNR: (65.4, 60.7)}


@pytest.mark.parametrize("cat", list(TABLE3))
def test_table3_rows(cat):
    report = EvalReport.from_counts(TABLE3, (293, 351, 369))
    p, r, _ = scores(report.row(cat))
    want_r, want_p = TABLE3_PR[cat]
    assert 100 * r == pytest.approx(want_r, abs=0.1)
    assert 100 * p == pytest.approx(want_p, abs=0.1)


def test_table3_harmonic_f_values():
    # harmonic-mean F computed from the exact counts
    report = EvalReport.from_counts(TABLE3, (293, 351, 369))
    want = {R.LOC: 0.8828, R.TMP: 0.8041, R.DIR: 0.8889, R.MNR: 0.6296}
    for cat, value in want.items():
        assert scores(report.row(cat))[2] == pytest.approx(value, abs=1e-4)
    assert scores(report.total)[2] == pytest.approx(0.8139, abs=1e-4)


def test_report_rendering():
    report = EvalReport.from_counts(TABLE3, (293, 351, 369))
    table = report.table()
    assert "128/147=87.1%" in table and "293/351=83.5%" in table
    assert "PP-PRP" in table and "n/a" in table
    kv = report.key_values()
    assert "total.precision=0.835" in kv
    assert "prp.precision=n/a" in kv


def test_reports_add():
    a = evaluate_roles([span(0, 2, R.LOC)], [span(0, 2, R.LOC)])
    b = evaluate_roles([span(0, 2, R.TMP, ("e", 0))], [span(0, 2, R.LOC, ("e", 0))])
    both = a + b
    assert both.total == MatchCounts(1, 2, 2)
    assert both.row(R.LOC) == MatchCounts(1, 1, 2)


# -- properties --------------------------------------------------------------------

unit = st.floats(0, 1, allow_nan=False)


@given(unit, unit)
def test_f_between_p_and_r(p, r):
    assume(p + r > 0)
    f = f_measure(p, r)
    assert 0 <= f <= 1
    assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


grid = st.integers(0, 1000).map(lambda k: k / 1000)


@given(grid, grid)
def test_f_is_one_only_when_perfect(p, r):
    assume(p + r > 0)
    assert (f_measure(p, r) == pytest.approx(1.0, abs=1e-9)) == (p == 1.0 and r == 1.0)


spans_st = st.lists(st.tuples(st.integers(0, 8), st.integers(1, 4)).map(lambda t: (t[0], t[0] + t[1])), max_size=12)


@given(spans_st, spans_st, st.randoms(use_true_random=False))
def test_chunks_order_independent(pred, gold, rnd):
    a = evaluate_chunks(pred, gold)
    p2, g2 = list(pred), list(gold)
    rnd.shuffle(p2)
    rnd.shuffle(g2)
    assert evaluate_chunks(p2, g2) == a
    assert a.correct <= min(a.predicted, a.gold_total)


@given(spans_st, st.sets(st.tuples(st.integers(0, 8), st.integers(1, 4)).map(lambda t: (t[0], t[0] + t[1])), min_size=1, max_size=12))
def test_monotonicity(pred, gold_set):
    gold = sorted(gold_set)
    base = evaluate_chunks(pred, gold)
    # a correct span not yet matched
    unmatched = [g for g in gold if pred.count(g) < gold.count(g)]
    if unmatched:
        better = evaluate_chunks(pred + [unmatched[0]], gold)
        assert recall(better) >= recall(base)
    spurious = evaluate_chunks(pred + [(50, 51)], gold)
    if base.predicted:
        assert precision(spurious) <= precision(base)
