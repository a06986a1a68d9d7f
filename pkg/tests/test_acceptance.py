"""The ten acceptance criteria, one test each, at their stated tolerances and time budgets.

Each test prints a PASS/FAIL line.  Running this file as a script prints the
ten lines and exits nonzero if any criterion fails.
"""

import sys

import pytest

from wazewski import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: c.__name__)
def test_criterion(criterion, capsys):
    result = criterion()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = acceptance.run_all()
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
