import itertools
from importlib import resources

import numpy as np
import pytest
from hypothesis import settings

from digraph_bounds.graph import Digraph, load_digraph, scc

# Adjacency matrix of the order-5 example digraph, vertices 1..5.
G1_MATRIX = np.array(
    [
        [0, 0, 0, 1, 1],
        [1, 0, 1, 1, 0],
        [1, 1, 0, 0, 0],
        [0, 0, 1, 0, 1],
        [0, 1, 1, 0, 0],
    ]
)
G1_RHO = 2.193399638


def g1_path():
    return resources.files("digraph_bounds") / "data" / "g1.edges"


@pytest.fixture
def g1():
    with g1_path().open(encoding="utf-8") as fh:
        return load_digraph(fh)


@pytest.fixture
def g1_file(tmp_path):
    path = tmp_path / "g1.edges"
    path.write_text(g1_path().read_text(encoding="utf-8"), encoding="utf-8")
    return str(path)


def cycle(n):
    return Digraph.from_arcs([(i, (i % n) + 1) for i in range(1, n + 1)])


def two_vertex_multiarc():
    return Digraph.from_arcs([(1, 2, 2), (2, 1)])


def bipartite4():
    return Digraph.from_arcs([(1, 3), (1, 4), (2, 3), (2, 4), (3, 1), (4, 2)])


def de_bruijn(d, m):
    """d-regular de Bruijn digraph on words of length m (with self-loops)."""
    words = ["".join(w) for w in itertools.product("0123456789"[:d], repeat=m)]
    return Digraph.from_arcs((w, w[1:] + a) for w in words for a in "0123456789"[:d])


def random_digraph(rng, n=None, max_mult=3, density=None, sink_free=True):
    n = n or int(rng.integers(1, 13))
    density = density if density is not None else rng.uniform(0.1, 0.6)
    a = rng.integers(1, max_mult + 1, (n, n)) * (rng.random((n, n)) < density)
    if sink_free:
        for i in range(n):
            if not a[i].any():
                a[i, rng.integers(n)] = rng.integers(1, max_mult + 1)
    return Digraph.from_matrix(a)


def random_strong(rng, n=None, **kw):
    while True:
        g = random_digraph(rng, n, **kw)
        if scc(g).is_strongly_connected and g.arcs:
            return g


def random_r_cyclic(rng, r, n_max=10, max_mult=3):
    """Strongly connected digraph whose arcs all advance one of r blocks."""
    while True:
        n = int(rng.integers(r, n_max + 1))
        block = np.sort(np.concatenate([np.arange(r), rng.integers(0, r, n - r)]))
        a = np.zeros((n, n), dtype=int)
        for i in range(n):
            targets = np.flatnonzero(block == (block[i] + 1) % r)
            chosen = targets[rng.random(len(targets)) < 0.6]
            if not len(chosen):
                chosen = [rng.choice(targets)]
            for j in chosen:
                a[i, j] = rng.integers(1, max_mult + 1)
        g = Digraph.from_matrix(a)
        if scc(g).is_strongly_connected:
            return g, block


# --- acceptance summary ---------------------------------------------------

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


# keep property tests reproducible between runs
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")
