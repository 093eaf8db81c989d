"""The eleven acceptance criteria, one test each; every run prints a PASS/FAIL line."""

import io

import pytest

from fusionforge.acceptance import CRITERIA, Criterion, CriterionResult, run_criterion, run_suite


def test_registry_covers_all_criteria():
    assert [c.number for c in CRITERIA] == list(range(1, 12))
    assert {c.number for c in CRITERIA if c.fuzz} == {6, 9, 11}


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion-{c.number}")
def test_criterion(criterion, capsys):
    res = run_criterion(criterion)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail


def test_crash_counts_as_failure():
    def boom():
        raise RuntimeError("broken")

    res = run_criterion(Criterion(99, "crashes", boom))
    assert not res.passed and "RuntimeError" in res.detail
    assert res.line().startswith("FAIL")


def test_result_line_and_json():
    res = CriterionResult(3, "title", True, "ok", 0.25)
    assert res.line().startswith("PASS") and "title" in res.line()
    assert res.to_json()["passed"] is True


def test_suite_filtering_streams_lines():
    buf = io.StringIO()
    results = run_suite(only=[1, 4], stream=buf)
    assert [r.number for r in results] == [1, 4]
    assert len(buf.getvalue().splitlines()) == 2
