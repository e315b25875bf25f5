"""The ten acceptance criteria, each run at its stated tolerance.

Every criterion prints one PASS/FAIL line (visible with or without ``-s``).
"""

import pytest

from legendrian.verify import CRITERIA, run_check


@pytest.mark.parametrize("name, fn", CRITERIA, ids=[name.split()[0] for name, _ in CRITERIA])
def test_criterion(name, fn, capsys):
    check = run_check(name, fn, seed=0)
    with capsys.disabled():
        print("\n" + check.line())
    assert check.passed, check.line()
