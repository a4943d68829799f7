import pytest

from misinfonet.graph import Graph, from_edge_list


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star5():
    # node 0 is the center
    return Graph.from_edges(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def k4():
    return Graph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def triangle_pendant():
    # triangle a=0, b=1, c=2 with pendant d=3 hanging off a
    return Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)])


@pytest.fixture
def two_edges():
    return from_edge_list("a b\nc d\n")


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: ``criterion(number, title, ok, detail)``."""

    def record(number, title, ok, detail=""):
        request.config.stash[_ACCEPTANCE_KEY].append((number, title, bool(ok), detail))
        assert ok, f"criterion {number} ({title}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_ACCEPTANCE_KEY, [])
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(rows):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}: {detail}")
