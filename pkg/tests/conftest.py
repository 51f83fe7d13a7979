import itertools

import pytest

from ovltest.samples import RankSequence


def all_words(m, n):
    """Every rank sequence with m zeros and n ones, lexicographic."""
    size = m + n
    for ones in itertools.combinations(range(size), n):
        bits = [0] * size
        for i in ones:
            bits[i] = 1
        yield RankSequence(bits)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
