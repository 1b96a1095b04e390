"""Digraphs with multiarcs and self-loops, plus the structural algorithms
the bounds rely on: sink/source trimming, strongly connected components,
the index of imprimitivity and cyclic r-partitions.

Vertices are addressed by 0-based index internally; every user-facing
report goes through ``Digraph.labels``.
"""

from __future__ import annotations

import io
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, TextIO

import numpy as np

__all__ = [
    "Digraph",
    "DigraphFormatError",
    "NotStronglyConnectedError",
    "TrimReport",
    "SccDecomposition",
    "CyclicStructure",
    "load_digraph",
    "parse_digraph",
    "trim",
    "scc",
    "index_of_imprimitivity",
    "cyclic_structure",
    "cyclic_partition",
    "verify_cyclic_blocks",
    "transpose",
]


class DigraphFormatError(ValueError):
    """Raised for malformed graph files; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NotStronglyConnectedError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Vertex-labelled digraph with nonnegative integer arc multiplicities.

    ``arcs`` maps ``(i, j)`` to the number of arcs from vertex ``i`` to
    vertex ``j``; absent pairs have multiplicity zero.
    """

    labels: tuple[str, ...]
    arcs: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("vertex labels must be distinct")
        clean = {}
        for (i, j), m in self.arcs.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"arc ({i}, {j}) has an endpoint outside 0..{n - 1}")
            m = int(m)
            if m < 0:
                raise ValueError(f"negative multiplicity on arc ({i}, {j})")
            if m:
                clean[(int(i), int(j))] = m
        object.__setattr__(self, "arcs", clean)
        succ: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        pred: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (i, j), m in sorted(clean.items()):
            succ[i].append((j, m))
            pred[j].append((i, m))
        object.__setattr__(self, "_succ", tuple(tuple(s) for s in succ))
        object.__setattr__(self, "_pred", tuple(tuple(p) for p in pred))

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple], labels: Iterable | None = None) -> Digraph:
        """Build from ``(u, v)`` or ``(u, v, mult)`` tuples of labels.

        Labels are stringified and numbered in first-appearance order unless
        ``labels`` fixes the vertex order up front. Repeated arcs accumulate.
        """
        order: dict[str, int] = {}
        if labels is not None:
            for lab in labels:
                order.setdefault(str(lab), len(order))
        counts: dict[tuple[int, int], int] = {}
        for arc in arcs:
            u, v, *rest = arc
            m = int(rest[0]) if rest else 1
            iu = order.setdefault(str(u), len(order))
            iv = order.setdefault(str(v), len(order))
            counts[(iu, iv)] = counts.get((iu, iv), 0) + m
        return cls(tuple(order), counts)

    @classmethod
    def from_matrix(cls, matrix, labels: Iterable | None = None) -> Digraph:
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        n = a.shape[0]
        labs = tuple(str(x) for x in labels) if labels is not None else tuple(
            str(i + 1) for i in range(n)
        )
        arcs = {(i, j): int(a[i, j]) for i, j in zip(*np.nonzero(a))}
        return cls(labs, arcs)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def num_arcs(self) -> int:
        return sum(self.arcs.values())

    def successors(self, i: int) -> tuple[tuple[int, int], ...]:
        """``(j, multiplicity)`` pairs for arcs leaving ``i``, sorted by ``j``."""
        return self._succ[i]

    def predecessors(self, i: int) -> tuple[tuple[int, int], ...]:
        return self._pred[i]

    def outdegrees(self) -> list[int]:
        return [sum(m for _, m in s) for s in self._succ]

    def indegrees(self) -> list[int]:
        return [sum(m for _, m in p) for p in self._pred]

    def sinks(self) -> list[int]:
        return [i for i, s in enumerate(self._succ) if not s]

    def sources(self) -> list[int]:
        return [i for i, p in enumerate(self._pred) if not p]

    def index(self, label) -> int:
        return self.labels.index(str(label))

    def adjacency(self, dtype=np.int64) -> np.ndarray:
        """Dense adjacency matrix. Use ``dtype=object`` for exact powers."""
        a = np.zeros((self.n, self.n), dtype=dtype)
        for (i, j), m in self.arcs.items():
            a[i, j] = m
        return a

    def subgraph(self, vertices: Iterable[int]) -> Digraph:
        keep = sorted(set(vertices))
        new = {v: k for k, v in enumerate(keep)}
        arcs = {
            (new[i], new[j]): m
            for (i, j), m in self.arcs.items()
            if i in new and j in new
        }
        return Digraph(tuple(self.labels[v] for v in keep), arcs)

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.labels == other.labels and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.labels, frozenset(self.arcs.items())))

    def __repr__(self):
        return f"Digraph(n={self.n}, arcs={self.num_arcs})"


def _data_lines(stream: TextIO) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse_count(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise DigraphFormatError(f"{what} {token!r} is not a decimal integer", lineno) from None
    if value < 0:
        raise DigraphFormatError(f"negative {what} {value}", lineno)
    return value


def _load_edge_list(stream: TextIO) -> Digraph:
    arcs = []
    for lineno, tokens in _data_lines(stream):
        if len(tokens) not in (2, 3):
            raise DigraphFormatError(
                f"expected 'src dst [mult]', got {len(tokens)} fields", lineno
            )
        mult = 1
        if len(tokens) == 3:
            mult = _parse_count(tokens[2], lineno, "multiplicity")
            if mult == 0:
                raise DigraphFormatError("multiplicity must be positive", lineno)
        arcs.append((tokens[0], tokens[1], mult))
    return Digraph.from_arcs(arcs)


def _load_dense(stream: TextIO) -> Digraph:
    lines = _data_lines(stream)
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        return Digraph(())
    if len(tokens) != 1:
        raise DigraphFormatError("first line must hold the dimension n", lineno)
    n = _parse_count(tokens[0], lineno, "dimension")
    rows = []
    for lineno, tokens in lines:
        if len(rows) == n:
            raise DigraphFormatError(f"more than {n} matrix rows", lineno)
        if len(tokens) != n:
            raise DigraphFormatError(f"expected {n} entries, got {len(tokens)}", lineno)
        rows.append([_parse_count(t, lineno, "entry") for t in tokens])
    if len(rows) != n:
        raise DigraphFormatError(f"expected {n} matrix rows, got {len(rows)}")
    arcs = {(i, j): m for i, row in enumerate(rows) for j, m in enumerate(row) if m}
    return Digraph(tuple(str(i + 1) for i in range(n)), arcs)


def load_digraph(source: TextIO, format: str = "edge-list") -> Digraph:
    """Read a digraph from a text stream.

    ``format`` is ``"edge-list"`` (lines ``src dst [mult]``, labels kept in
    first-appearance order) or ``"dense"`` (``n`` then ``n`` rows of
    ``n`` integers, labels ``"1".."n"``). ``#`` starts a comment.
    """
    if format == "edge-list":
        return _load_edge_list(source)
    if format == "dense":
        return _load_dense(source)
    raise ValueError(f"unknown graph format {format!r}")


def parse_digraph(text: str, format: str = "edge-list") -> Digraph:
    return load_digraph(io.StringIO(text), format)


@dataclass(frozen=True)
class TrimReport:
    removed_sinks: tuple[tuple[int, str], ...]
    removed_sources: tuple[tuple[int, str], ...]
    rounds: int
    became_empty: bool

    @property
    def removed(self) -> int:
        return len(self.removed_sinks) + len(self.removed_sources)


def trim(g: Digraph, drop_sources: bool = False) -> tuple[Digraph, TrimReport]:
    """Repeatedly delete sinks (and optionally sources) until none remain.

    Each round removes every current sink (and source) at once; a vertex
    that is both is reported as a sink. The nonzero spectrum is unchanged.
    """
    alive = set(range(g.n))
    outdeg = [len(g.successors(i)) for i in range(g.n)]
    indeg = [len(g.predecessors(i)) for i in range(g.n)]
    sinks_log: list[tuple[int, str]] = []
    sources_log: list[tuple[int, str]] = []
    rounds = 0
    while True:
        sinks = sorted(v for v in alive if outdeg[v] == 0)
        sources = []
        if drop_sources:
            sources = sorted(v for v in alive if indeg[v] == 0 and outdeg[v] > 0)
        if not sinks and not sources:
            break
        rounds += 1
        sinks_log.extend((rounds, g.labels[v]) for v in sinks)
        sources_log.extend((rounds, g.labels[v]) for v in sources)
        for v in sinks + sources:
            alive.discard(v)
        for v in sinks + sources:
            # distinct-neighbour degrees; self-loops never leave a vertex alive alone
            for u, _ in g.predecessors(v):
                if u in alive:
                    outdeg[u] -= 1
            for w, _ in g.successors(v):
                if w in alive:
                    indeg[w] -= 1
    trimmed = g.subgraph(alive) if rounds else g
    report = TrimReport(tuple(sinks_log), tuple(sources_log), rounds, not alive and g.n > 0)
    return trimmed, report


@dataclass(frozen=True)
class SccDecomposition:
    component_of: tuple[int, ...]
    components: tuple[frozenset[int], ...]

    @property
    def is_strongly_connected(self) -> bool:
        return len(self.components) == 1

    def is_trivial(self, g: Digraph, c: int) -> bool:
        """Single vertex without a self-loop: contributes nothing to the spectrum."""
        comp = self.components[c]
        if len(comp) > 1:
            return False
        (v,) = comp
        return (v, v) not in g.arcs


def scc(g: Digraph) -> SccDecomposition:
    """Strongly connected components by an iterative Tarjan search.

    Components are numbered in the order Tarjan completes them, which is a
    reverse topological order of the condensation.
    """
    if g.n == 0:
        raise ValueError("scc of an empty digraph is undefined")
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp_of = [-1] * n
    stack: list[int] = []
    components: list[frozenset[int]] = []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            succ = g.successors(v)
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos][0]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                members = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_of[w] = len(components)
                    members.append(w)
                    if w == v:
                        break
                components.append(frozenset(members))
    return SccDecomposition(tuple(comp_of), tuple(components))


def _bfs_levels(g: Digraph, root: int = 0) -> list[int]:
    levels = [-1] * g.n
    levels[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, _ in g.successors(u):
            if levels[v] < 0:
                levels[v] = levels[u] + 1
                queue.append(v)
    return levels


def _require_strong(g: Digraph) -> None:
    if g.n == 0 or not scc(g).is_strongly_connected:
        raise NotStronglyConnectedError("digraph is not strongly connected")


@dataclass(frozen=True)
class CyclicStructure:
    """BFS layering of a strongly connected digraph and its period ``h``.

    Block ``b`` of the r-partition holds the vertices whose level is
    congruent to ``b`` modulo ``r``; blocks are 0-based here and block 0
    contains the BFS root. Partitions are only defined up to rotation.
    """

    h: int
    levels: tuple[int, ...]

    def partition_for(self, r: int) -> tuple[int, ...]:
        if r < 1 or self.h % r:
            raise ValueError(f"r={r} does not divide the index of imprimitivity h={self.h}")
        return tuple(lev % r for lev in self.levels)


def cyclic_structure(g: Digraph) -> CyclicStructure:
    _require_strong(g)
    if not g.arcs:
        raise ValueError("index of imprimitivity needs at least one arc")
    levels = _bfs_levels(g)
    h = 0
    for (u, v) in g.arcs:
        h = math.gcd(h, abs(levels[u] + 1 - levels[v]))
    return CyclicStructure(h, tuple(levels))


def index_of_imprimitivity(g: Digraph) -> int:
    """Period of a strongly connected digraph: gcd of all closed-walk lengths."""
    return cyclic_structure(g).h


def cyclic_partition(g: Digraph, r: int) -> tuple[int, ...]:
    """Block index (``0..r-1``) of every vertex in a cyclic r-partition.

    Every arc leaving block ``b`` ends in block ``(b + 1) % r``.
    """
    cs = cyclic_structure(g)
    m = cs.partition_for(r)
    for (u, v) in g.arcs:
        if m[v] != (m[u] + 1) % r:
            raise RuntimeError(
                f"arc {g.labels[u]}->{g.labels[v]} breaks the cyclic {r}-partition"
            )
    return m


def _irreducible(block: np.ndarray) -> bool:
    if block.shape[0] == 1:
        return block[0, 0] != 0
    return scc(Digraph.from_matrix(block)).is_strongly_connected


def verify_cyclic_blocks(g: Digraph, r: int | None, L: int) -> list[np.ndarray]:
    """Diagonal blocks ``C_1..C_r`` of ``A^L`` under the cyclic r-partition.

    ``r`` must equal ``gcd(h, L)`` (pass ``None`` to compute it). Checks that
    ``A^L`` is block diagonal with irreducible blocks and returns the blocks
    as exact integer (object dtype) arrays, block 0 first, vertices in index
    order within each block.

    For ``L = r = h`` block ``s`` is the cyclic product
    ``A_{s,s+1} A_{s+1,s+2} ... A_{s-1,s}`` of the superdiagonal blocks; some
    printed statements garble the last factor, and this reading is the one
    consistent with ``A^h``.
    """
    if L < 1:
        raise ValueError("L must be positive")
    h = index_of_imprimitivity(g)
    expected = math.gcd(h, L)
    if r is None:
        r = expected
    if r != expected:
        raise ValueError(f"r={r} but gcd(h={h}, L={L}) = {expected}")
    m = cyclic_partition(g, r)
    a = g.adjacency(dtype=object)
    power = np.linalg.matrix_power(a, L) if L > 1 else a
    blocks = [[v for v in range(g.n) if m[v] == b] for b in range(r)]
    for i in range(g.n):
        for j in range(g.n):
            if power[i, j] and m[i] != m[j]:
                raise RuntimeError("A^L is not block diagonal under the cyclic partition")
    result = []
    for members in blocks:
        c = power[np.ix_(members, members)]
        if not _irreducible(c):
            raise RuntimeError("diagonal block of A^L is reducible")
        result.append(c)
    return result


def transpose(g: Digraph) -> Digraph:
    """Reverse every arc; column sums become row sums."""
    return Digraph(g.labels, {(j, i): m for (i, j), m in g.arcs.items()})
