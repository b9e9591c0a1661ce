import itertools

import pytest

# Spread distributions from a plain double loop over all n! permutations,
# run once outside the package and frozen here.
ORACLE_COUNTS = {
    2: {2: 2},
    3: {2: 6},
    4: {2: 24},
    5: {2: 110, 3: 10},
    6: {2: 684, 3: 36},
    7: {2: 4718, 3: 322},
    8: {2: 37488, 3: 2816, 4: 16},
    9: {2: 334926, 3: 27954},
}


def brute_circ(a, b, n):
    d = abs(a - b)
    return min(d, n - d)


def brute_spread(p):
    n = len(p)
    return min(
        brute_circ(i, j, n) + brute_circ(p[i], p[j], n)
        for i in range(n)
        for j in range(i + 1, n)
    )


def brute_distribution(n):
    counts = {}
    for p in itertools.permutations(range(n)):
        s = brute_spread(p)
        counts[s] = counts.get(s, 0) + 1
    return counts


_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
