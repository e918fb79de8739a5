"""Acceptance gate: one pass/fail line per criterion (run with ``-s`` to see them live)."""

import pytest

from trispectrum.acceptance import CRITERIA, format_line, run_one


@pytest.mark.slow
@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA], ids=[f"{n}-{name.replace(' ', '_')}" for n, name, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_one(number)
    with capsys.disabled():
        print("\n" + format_line(result))
    assert result.passed, result.detail
