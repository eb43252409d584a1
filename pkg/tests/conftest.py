import itertools

import pytest
from hypothesis import strategies as st

from edgesched.model import Instance


@pytest.fixture
def e2():
    return Instance([0.5, 1.0], [[0.6, 0.6], [0.6, 0.6]], 0.9)


def brute_force(instance):
    """Best (value, assignment) over all (m+1)^n assignments, straight from the definitions.

    Deliberately shares no code with the package: loads are recomputed here.
    Returns (None, None) when nothing meets the deadline.
    """
    m, n, T = instance.m, instance.n, instance.deadline
    a, p = instance.accuracies, instance.times
    best = (None, None)
    for assign in itertools.product(range(1, m + 2), repeat=n):
        ed = sum(p[i - 1][j] for j, i in enumerate(assign) if i <= m)
        es = sum(p[m][j] for j, i in enumerate(assign) if i == m + 1)
        if ed <= T + 1e-9 and es <= T + 1e-9:
            value = sum(a[i - 1] for i in assign)
            if best[0] is None or value > best[0] + 1e-9:
                best = (value, assign)
    return best


@st.composite
def instances(draw, max_n=5, max_m=3, min_n=1, t_lo=0.05, t_hi=1.0, T_lo=0.05, T_hi=3.0):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(1, max_m))
    acc = sorted(draw(st.lists(st.floats(0.0, 1.0), min_size=m + 1, max_size=m + 1)))
    times = [draw(st.lists(st.floats(t_lo, t_hi), min_size=n, max_size=n)) for _ in range(m + 1)]
    T = draw(st.floats(T_lo, T_hi))
    return Instance(acc, times, T)


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line per acceptance criterion; printed in the terminal summary."""
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def report(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
