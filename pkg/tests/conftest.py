import itertools

import pytest

from graphsurface.motif import make_builtin

BUILTIN_NAMES = ["edge", "two_star", "triangle", "square"]


@pytest.fixture(params=BUILTIN_NAMES)
def builtin(request):
    return make_builtin(request.param)


def all_graphs(n):
    """Every labelled graph on n vertices as a list of edges."""
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield [e for t, e in enumerate(pairs) if bits >> t & 1]


def brute_count(n, edges, motif):
    """Copies of ``motif`` among the edges, by trying every injective vertex map."""
    es = {tuple(sorted(e)) for e in edges}
    found = set()
    for image in itertools.permutations(range(n), motif.v):
        mapped = frozenset(tuple(sorted((image[a], image[b]))) for a, b in motif.edges)
        if mapped <= es:
            found.add(mapped)
    return len(found)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Log one acceptance verdict for the end-of-run summary, then assert it."""
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
