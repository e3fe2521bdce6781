import csv
import io
import json
import math
from fractions import Fraction as F

import pytest

from wellsum import DomainError, ExactSum, ExactValue, PrecisionContext, formulas, golden, verifier
from wellsum.formulas import EvenBesselProd, EvenBesselSq, HyperSq, OddBesselProd, OddBesselSq
from wellsum.verifier import Verdict

H = F(1, 2)


def test_sum_unpacks(ctx):
    partial, bound = verifier.sum_series(OddBesselSq(1, 2), 50, ctx)
    assert 0 < partial < ctx.mp.mpf(1) / 3
    assert 0 < bound < math.inf


def test_small_n_rejected(ctx):
    with pytest.raises(DomainError):
        verifier.sum_series(OddBesselSq(1, 2), 7, ctx)


def test_determinism_across_threads(ctx):
    fam = OddBesselProd(2, 3, 5)
    ns = fam.indices(300)
    one = verifier.deterministic_sum(verifier.compute_terms(fam, ns, ctx, workers=1), ctx)
    for w in (2, 3, 5):
        many = verifier.deterministic_sum(verifier.compute_terms(fam, ns, ctx, workers=w), ctx)
        assert many._mpf_ == one._mpf_


def test_determinism_across_processes():
    ctx = PrecisionContext(192)
    fam = EvenBesselSq(2, 4)
    ns = fam.indices(64)
    one = verifier.deterministic_sum(verifier.compute_terms(fam, ns, ctx), ctx)
    two = verifier.deterministic_sum(verifier.compute_terms(fam, ns, ctx, workers=2, processes=True), ctx)
    assert one._mpf_ == two._mpf_


def test_block_tree_order(ctx):
    vals = [ctx.mp.mpf(i) for i in range(1, 200)]
    assert verifier.deterministic_sum(vals, ctx) == 199 * 200 // 2
    assert verifier.deterministic_sum([], ctx) == 0


@pytest.mark.parametrize("table,row", [(1, 1), (1, 4), (2, 2), (3, 2), (4, 3), (5, 2), (6, 5)])
def test_table_rows_pass(ctx, table, row):
    fam = formulas.table_family(table, row)
    res = verifier.certify(fam, None, 200, ctx)
    assert res.verdict == Verdict.PASS
    assert res.bound_kind == "rigorous"
    assert res.difference <= res.tail_bound + res.rounding_bound
    assert res.doubling_ok


def test_hyper_rows_pass(ctx):
    res = verifier.certify(HyperSq(1, H, 2), None, 120, ctx)
    assert res.verdict == Verdict.PASS and res.bound_kind == "heuristic"
    res = verifier.certify(HyperSq(F(3, 2), F(3, 2), 2), None, 120, ctx)
    assert res.verdict == Verdict.PASS and res.bound_kind == "rigorous"


def test_negative_control_small_perturbation(ctx):
    fam = OddBesselSq(2, 4)
    exact = formulas.family_closed(fam) + ExactValue(F(1, 10**6))
    assert verifier.certify(fam, exact, 200, ctx).verdict == Verdict.FAIL


@pytest.mark.parametrize("fam", [OddBesselSq(1, 2), EvenBesselSq(3, 4), OddBesselProd(2, 3, 5), HyperSq(1, H, 2)])
def test_negative_control_ten_bounds(ctx, fam):
    good = verifier.certify(fam, None, 100, ctx, doubling_sample=0)
    assert good.verdict == Verdict.PASS
    delta = F(20 * (good.tail_bound + good.rounding_bound)).limit_denominator(10**30) or F(1, 10**80)
    for sign in (1, -1):
        bad = verifier.certify(fam, good.exact + ExactValue(sign * delta), 100, ctx, doubling_sample=0)
        assert bad.verdict == Verdict.FAIL


def test_printed_2043_is_rejected(ctx):
    fam = formulas.table_family(5, 7)
    printed = golden.printed_value(5, 7)
    assert verifier.certify(fam, printed, 200, ctx).verdict == Verdict.FAIL
    assert verifier.certify(fam, None, 200, ctx).verdict == Verdict.PASS


def test_no_exact(ctx):
    res = verifier.certify(OddBesselSq(1, 7), None, 50, ctx)
    assert res.verdict == Verdict.NO_EXACT
    assert res.to_dict()["exact"] is None


@pytest.mark.parametrize("fam", [OddBesselSq(1, 2), EvenBesselProd(3, 4, 7), OddBesselSq(5, 8),
                                 HyperSq(F(5, 2), F(5, 2), 6), HyperSq(2, H, 2)])
def test_monotone_tightening(ctx, fam):
    _, b1 = verifier.sum_series(fam, 64, ctx)
    _, b2 = verifier.sum_series(fam, 128, ctx)
    assert b2 < b1


def test_pass_survives_doubling():
    lo = verifier.certify(OddBesselSq(3, 6), None, 100, PrecisionContext(160))
    hi = verifier.certify(OddBesselSq(3, 6), None, 200, PrecisionContext(320))
    assert lo.verdict == hi.verdict == Verdict.PASS


def test_identity24(ctx):
    res = verifier.identity24_check(300, ctx)
    assert res.verdict == Verdict.PASS
    assert res.deviation <= res.bound


def test_identity24_tiny_n_consistent(ctx):
    res = verifier.identity24_check(8, ctx)
    assert res.verdict == Verdict.PASS
    assert res.bound > 1e-3


def test_identity24_negative_control(ctx):
    terms = list(formulas.EQ24_TERMS)
    c, fam = terms[1]
    terms[1] = (c * ExactValue(F(11, 10)), fam)
    assert verifier.identity24_check(300, ctx, terms=terms).verdict == Verdict.FAIL


def test_parseval_certify(ctx):
    assert verifier.parseval_certify((H, H), 200, ctx).verdict == Verdict.PASS
    res = verifier.parseval_certify((1, H), 80, ctx)
    assert res.verdict == Verdict.PASS and res.parts[0]["bound_kind"] == "heuristic"


def test_report_json_fields(ctx):
    res = verifier.certify(OddBesselSq(2, 4), None, 60, ctx)
    d = json.loads(verifier.report_json([res]))[0]
    for key in ("family", "exact", "numeric", "terms", "tail_bound", "verdict", "bound_kind"):
        assert key in d
    assert d["terms"] == 60
    assert isinstance(d["numeric"], str) and isinstance(d["tail_bound"], str)
    assert ExactSum.from_dict(d["exact"]) == formulas.family_closed(OddBesselSq(2, 4))


def test_report_md_and_csv(ctx):
    res = [verifier.certify(OddBesselSq(2, 4), None, 60, ctx), verifier.identity24_check(16, ctx)]
    md = verifier.report_markdown(res)
    assert md.startswith("| family |") and "OddBesselSq(2, 4)" in md and "eq24" in md
    rows = list(csv.reader(io.StringIO(verifier.report_csv(res))))
    assert rows[0][0] == "family" and len(rows) == 3


def test_reports_reproducible(ctx):
    a = verifier.report_json([verifier.certify(EvenBesselSq(2, 2), None, 80, ctx)])
    verifier.CACHE.clear()
    b = verifier.report_json([verifier.certify(EvenBesselSq(2, 2), None, 80, ctx)])
    assert a == b
