"""Exact walk counting.

``walk_table`` counts length-k walks out of every vertex (the k-outdegrees)
with Python integers, so nothing overflows however large the counts get.
``reach_pattern`` tracks only *which* vertex pairs are joined by a walk of
a given length.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Digraph

__all__ = [
    "WalkTable",
    "ReachPattern",
    "walk_table",
    "reach_pattern",
    "ratio_compare",
    "power_digraph",
]


@dataclass(frozen=True)
class WalkTable:
    """``counts[k][i]`` is the number of length-k walks starting at vertex i."""

    counts: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.counts[0])

    @property
    def kmax(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, k: int) -> tuple[int, ...]:
        return self.counts[k]

    def has_zero(self, k: int) -> bool:
        return any(c == 0 for c in self.counts[k])


def walk_table(g: Digraph, kmax: int) -> WalkTable:
    """k-outdegrees for ``k = 0..kmax`` via ``x_{k+1} = A x_k``, ``x_0 = 1``."""
    if g.n == 0:
        raise ValueError("walk table of an empty digraph")
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    rows = [tuple([1] * g.n)]
    succ = [g.successors(i) for i in range(g.n)]
    for _ in range(kmax):
        prev = rows[-1]
        rows.append(tuple(sum(m * prev[j] for j, m in s) for s in succ))
    return WalkTable(tuple(rows))


@dataclass(frozen=True)
class ReachPattern:
    """Support of ``A^M``: ``rows[i]`` lists every j reachable by a length-M walk."""

    M: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def present(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, row in enumerate(self.rows) for j in row)

    def pairs(self):
        for i, row in enumerate(self.rows):
            for j in row:
                yield i, j

    def __len__(self) -> int:
        return sum(len(r) for r in self.rows)


def reach_pattern(g: Digraph, M: int) -> ReachPattern:
    """Nonzero positions of ``A^M`` by repeated boolean products (no counting)."""
    if M < 0:
        raise ValueError("M must be nonnegative")
    succ = [frozenset(j for j, _ in g.successors(i)) for i in range(g.n)]
    current = [frozenset([i]) for i in range(g.n)]
    for _ in range(M):
        current = [frozenset().union(*(succ[j] for j in row)) for row in current]
    return ReachPattern(M, tuple(tuple(sorted(row)) for row in current))


def ratio_compare(a: int, b: int, c: int, d: int) -> int:
    """Sign of ``a/b - c/d`` for nonnegative integers, by cross-multiplication."""
    if b <= 0 or d <= 0:
        raise ZeroDivisionError("ratio_compare needs positive denominators")
    lhs, rhs = a * d, c * b
    return (lhs > rhs) - (lhs < rhs)


def power_digraph(g: Digraph, L: int) -> Digraph:
    """Digraph whose adjacency matrix is ``A^L`` (walk counts as multiplicities)."""
    if L < 0:
        raise ValueError("L must be nonnegative")
    rows = [{i: 1} for i in range(g.n)]
    for _ in range(L):
        nxt = []
        for row in rows:
            acc: dict[int, int] = {}
            for j, w in row.items():
                for t, m in g.successors(j):
                    acc[t] = acc.get(t, 0) + w * m
            nxt.append(acc)
        rows = nxt
    arcs = {(i, j): w for i, row in enumerate(rows) for j, w in row.items()}
    return Digraph(g.labels, arcs)
