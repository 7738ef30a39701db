"""Release gate: every acceptance criterion, one test each.

Run with ``pytest tests/test_acceptance.py -s`` to see the one-line
pass/fail summary per criterion (the same lines the command-line
``toeplitz-spectra selftest`` prints).
"""

import pytest

from toeplitz_spectra.acceptance import CRITERIA


@pytest.mark.parametrize("name,check", CRITERIA, ids=[name for name, _ in CRITERIA])
def test_acceptance_criterion(name, check):
    passed, detail = check()
    status = "PASS" if passed else "FAIL"
    print(f"[{status}] {name}: {detail}")
    assert passed, f"{name}: {detail}"
