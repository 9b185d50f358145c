"""Acceptance criteria, one PASS/FAIL line each.

The lines are collected here and printed in the terminal summary (see
conftest.py), so they show up even when pytest captures output.
"""
import json

import pytest

from ffincidence.cli import run
from ffincidence.suite import CRITERIA, CriterionResult

SEED = 1
LINES = []


def _record(res):
    LINES.append(res.line())
    print(res.line())
    return res


@pytest.mark.parametrize("crit", CRITERIA, ids=lambda c: c.__name__)
def test_criterion(crit):
    res = _record(crit(SEED))
    assert res.passed, json.dumps(res.details, sort_keys=True, default=str)[:2000]


def test_criterion_14_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = [run(["suite", "--seed", str(SEED), "--keep-going", "--out", str(p)]) for p in (a, b)]
    same = a.read_bytes() == b.read_bytes()
    res = _record(CriterionResult(14, "byte-identical suite reports", same,
                                  {"exit_codes": codes}))
    assert res.passed
