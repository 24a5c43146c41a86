from mwcr.datasets import (
    FOLLICULAR_SHA256,
    follicular_sha256,
    load_follicular,
)
from mwcr.ingest import CauseLabel, compute_cause, prepare_case1, prepare_case2


def test_bundled_table_digest():
    assert follicular_sha256() == FOLLICULAR_SHA256


def test_cause_tabulation():
    rows = load_follicular()
    labels = [compute_cause(r) for r in rows]
    assert len(rows) == 541
    assert labels.count(CauseLabel.CENSORED) == 193
    assert labels.count(CauseLabel.DISEASE) == 272
    assert labels.count(CauseLabel.DEATH) == 76


def test_case_shapes():
    rows = load_follicular()
    case1 = prepare_case1(rows)
    case2 = prepare_case2(rows)
    assert case1.n == case1.m == 348
    assert case2.n == 541
    assert case2.m == 348
    assert case2.m1 == 272
