"""Acceptance criteria 1-10 at their stated tolerances; one PASS/FAIL line per criterion.

``QUATLIFT_PROFILE=fast`` shrinks the sample sizes (tolerances unchanged).
"""
import os

import pytest

from quatlift.acceptance import CRITERIA

PROFILE = os.environ.get("QUATLIFT_PROFILE", "full")


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{k}" for k in range(1, 11)])
def test_criterion(criterion, capsys):
    result = criterion(PROFILE)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.summary
