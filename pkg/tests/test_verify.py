import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from luequiv.states import LocalUnitary2, random_sc, sc_embed, conjugate_by_locals
from luequiv.verify import (
    CHECKS,
    CheckRecord,
    VerifyReport,
    check_realign,
    check_reconciliation,
    compare,
    prop,
    run_verify_suite,
    transformed_entries,
)

FAST = (check_realign, check_reconciliation)


@pytest.fixture(scope="module")
def report():
    return run_verify_suite(7, checks=FAST)


def test_status_rule():
    assert compare("a", "r", 1.0, 1.0, 0.0, 1e-9).status == "MATCH"
    assert compare("a", "r", 1.0, 2.0, 1.0, 1e-9).status == "MISMATCH"
    assert prop("p", "r", 0.1, 0.1, 0.1).status == "PROPERTY_FAIL"
    assert prop("p", "r", 0.0, 0.0, 0.1).status == "PROPERTY_PASS"


def test_failure_semantics():
    expected = compare("a", "r", 0, 1, 1.0, 1e-9, expected="MISMATCH")
    unexpected = compare("a", "r", 0, 1, 1.0, 1e-9)
    assert not expected.failed and unexpected.failed
    assert VerifyReport(0, "x", (expected,)).exit_code == 0
    assert VerifyReport(0, "x", (expected, unexpected)).exit_code == 1
    assert VerifyReport(0, "x", (prop("p", "r", 1, 1, 0.5),)).exit_code == 1


def test_records_round_to_12_digits():
    rec = compare("a", "r", np.float64(1 / 3), [np.pi, 2], 1 / 7, 1.0)
    assert rec.paper_value == 0.333333333333
    assert rec.oracle_value == [3.14159265359, 2]
    assert rec.delta == 0.142857142857


def test_report_json_round_trip(report):
    text = report.to_json()
    back = VerifyReport.from_json(text)
    assert back == report
    assert back.to_json() == text
    doc = json.loads(text)
    assert list(doc) == ["seed", "version", "summary", "checks"]
    assert list(doc["checks"][0]) == ["name", "paper_ref", "paper_value", "oracle_value", "delta", "tolerance", "status", "expected", "detail"]


def test_report_contents(report):
    s = report.summary()
    assert s["failed"] == 0 and s["expected_mismatch"] == 4
    by_name = {c.name: c for c in report.checks}
    rec = by_name["reconcile.measured_discord_bell"]
    assert rec.status == "MISMATCH" and rec.expected == "MISMATCH"
    assert rec.delta == pytest.approx(1.0, abs=1e-4)
    assert all(c.paper_ref for c in report.checks)


def test_same_seed_is_deterministic(report):
    assert run_verify_suite(7, "json", checks=FAST) == report.to_json()


def test_table_is_aligned(report):
    lines = report.to_table().splitlines()
    header, rule = lines[1], lines[2]
    assert header.split()[:3] == ["status", "name", "delta"]
    starts = [i for i, ch in enumerate(rule) if ch == "-" and (i == 0 or rule[i - 1] == " ")]
    for row in lines[3:-1]:
        for pos in starts[1:]:
            assert row[pos - 1] == " " and row[pos] != " "
    assert lines[-1].startswith(f"{len(report.checks)} checks")


def test_bad_format():
    with pytest.raises(ValueError):
        run_verify_suite(0, "xml", checks=(check_realign,))


def test_suite_size():
    # every check generator yields at least one record; the full suite has well over 30
    assert len(CHECKS) >= 20
    assert CheckRecord.__dataclass_fields__.keys() >= {"name", "paper_ref", "paper_value", "oracle_value", "delta", "status"}


def test_transformed_entries_reference(rng):
    for _ in range(20):
        sc = random_sc(rng)
        u = LocalUnitary2.random(rng)
        assert_allclose(
            transformed_entries(sc.c1, sc.c2, sc.c4, u.a1, u.a2, u.b1, u.b2),
            conjugate_by_locals(sc_embed(sc), u).mat,
            atol=1e-13,
        )
