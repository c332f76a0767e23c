"""The acceptance gate: one test per criterion, each printing a PASS line
with the detail string.  All tolerances are exact (integer equalities); any
cross-pipeline disagreement raises inside the checks themselves.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines,
or `ess selftest` for the same table from the CLI.
"""

import pytest

from ess import selftest


@pytest.mark.parametrize("name,check", selftest.CRITERIA, ids=[n for n, _ in selftest.CRITERIA])
def test_criterion(name, check):
    detail = check()
    print(f"PASS {name}: {detail}")
