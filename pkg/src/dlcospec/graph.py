"""Simple undirected graphs stored as adjacency bit rows.

A :class:`Graph` is immutable: every operator returns a new value.  Vertex
labels are the integers ``0..n-1`` and row ``i`` is an ``int`` whose bit ``j``
is set when ``i`` and ``j`` are adjacent.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 128


class GraphError(ValueError):
    """Invalid graph construction or operator arguments."""


class Graph6Error(ValueError):
    """Malformed graph6 text.  ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class DisconnectedGraphError(ValueError):
    """A distance operation received a disconnected graph.

    ``pair`` holds one unreachable vertex pair, ``(u, v)`` with ``u < v``.
    """

    def __init__(self, pair: tuple[int, int]):
        super().__init__(f"graph is disconnected: no path between {pair[0]} and {pair[1]}")
        self.pair = pair


@dataclass(frozen=True)
class Graph:
    order: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.order
        if not 1 <= n <= MAX_ORDER:
            raise GraphError(f"order must be in [1, {MAX_ORDER}], got {n}")
        if len(self.rows) != n:
            raise GraphError("need exactly one adjacency row per vertex")
        full = (1 << n) - 1
        for i, row in enumerate(self.rows):
            if row & ~full or row < 0:
                raise GraphError(f"row {i} references a vertex outside 0..{n - 1}")
            if row >> i & 1:
                raise GraphError(f"loop at vertex {i}")
            r = row
            while r:
                low = r & -r
                j = low.bit_length() - 1
                if not self.rows[j] >> i & 1:
                    raise GraphError(f"adjacency is not symmetric at ({i}, {j})")
                r ^= low

    # -- construction -----------------------------------------------------
    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise GraphError(f"edge ({u}, {v}) out of range for order {order}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, tuple(rows))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]] | np.ndarray) -> "Graph":
        a = np.asarray(matrix)
        n = a.shape[0]
        return cls.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n) if a[i, j]))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    @classmethod
    def complete_bipartite(cls, a: int, b: int) -> "Graph":
        return cls.from_edges(a + b, ((i, a + j) for i in range(a) for j in range(b)))

    # -- queries ----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return bits(self.rows[v])

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.order) for j in bits(self.rows[i]) if i < j]

    def adjacency_matrix(self) -> np.ndarray:
        n = self.order
        a = np.zeros((n, n), dtype=np.int64)
        for i, j in self.edges():
            a[i, j] = a[j, i] = 1
        return a

    def is_connected(self) -> bool:
        return components_count(self) == 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        n = self.order
        if sorted(perm) != list(range(n)):
            raise GraphError("relabeling must be a permutation of 0..n-1")
        rows = [0] * n
        for v in range(n):
            r = 0
            for w in bits(self.rows[v]):
                r |= 1 << perm[w]
            rows[perm[v]] = r
        return Graph(n, tuple(rows))

    def __repr__(self) -> str:
        return f"Graph(order={self.order}, g6={encode_graph6(self)!r})"


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# -- graph6 ---------------------------------------------------------------

def _size_header(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    raise GraphError(f"order {n} exceeds the graph6 codec limit")


def encode_graph6(g: Graph) -> str:
    """Encode ``g`` under its current labeling (no canonical relabeling)."""
    n = g.order
    out = [_size_header(n)]
    acc = nbits = 0
    for j in range(1, n):
        rj = g.rows[j]
        for i in range(j):
            acc = acc << 1 | (rj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.rstrip("\r\n")
    if not s:
        raise Graph6Error("empty graph6 string", 0)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range", pos)
    if s[0] == "~":
        if len(s) >= 2 and s[1] == "~":
            raise Graph6Error("8-byte length headers are not supported", 1)
        if len(s) < 4:
            raise Graph6Error("truncated length header", len(s))
        n = 0
        for ch in s[1:4]:
            n = n << 6 | (ord(ch) - 63)
        if n <= 62:
            raise Graph6Error("non-canonical long length header", 0)
        body_start = 4
    else:
        n = ord(s[0]) - 63
        if n > 62:
            raise Graph6Error("bad length header", 0)
        body_start = 1
    if n < 1:
        raise Graph6Error("graphs must have at least one vertex", 0)
    if n > MAX_ORDER:
        raise Graph6Error(f"order {n} exceeds the supported maximum {MAX_ORDER}", 0)
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = s[body_start:]
    if len(body) < nchars:
        raise Graph6Error(f"expected {nchars} edge characters, found {len(body)}", len(s))
    if len(body) > nchars:
        raise Graph6Error("trailing characters after edge data", body_start + nchars)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            c = ord(body[k // 6]) - 63
            if c >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    pad = 6 * nchars - nbits
    if pad and (ord(body[-1]) - 63) & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", body_start + nchars - 1)
    return Graph(n, tuple(rows))


# -- edge-list fixture format: "n; u v; u v; ..." ----------------------------

def parse_edge_list(text: str) -> Graph:
    parts = [p.strip() for p in text.strip().split(";")]
    if not parts or not parts[0]:
        raise GraphError("edge list must start with the order")
    try:
        n = int(parts[0])
        edges = []
        for p in parts[1:]:
            if not p:
                continue
            u, v = (int(x) for x in p.split())
            edges.append((u, v))
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {text!r}") from exc
    return Graph.from_edges(n, edges)


def format_edge_list(g: Graph) -> str:
    return "; ".join([str(g.order)] + [f"{u} {v}" for u, v in g.edges()])


# -- distances ------------------------------------------------------------

def bfs_layers(g: Graph, source: int) -> list[int]:
    """Distances from ``source``; unreachable vertices get -1."""
    dist = [-1] * g.order
    dist[source] = 0
    seen = frontier = 1 << source
    d = 0
    while frontier:
        d += 1
        nxt = 0
        for v in bits(frontier):
            nxt |= g.rows[v]
        nxt &= ~seen
        seen |= nxt
        for v in bits(nxt):
            dist[v] = d
        frontier = nxt
    return dist


def all_pairs_distances(g: Graph) -> np.ndarray:
    """Shortest-path lengths as a read-only ``n x n`` int64 array."""
    n = g.order
    d = np.empty((n, n), dtype=np.int64)
    for s in range(n):
        row = bfs_layers(g, s)
        if -1 in row:
            t = row.index(-1)
            raise DisconnectedGraphError((min(s, t), max(s, t)))
        d[s] = row
    d.setflags(write=False)
    return d


def components(g: Graph) -> list[list[int]]:
    left = (1 << g.order) - 1
    out = []
    while left:
        low = left & -left
        comp = frontier = low
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= frontier
        out.append(bits(comp))
        left &= ~comp
    return out


def components_count(g: Graph) -> int:
    return len(components(g))


# -- operators ------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.order) - 1
    return Graph(g.order, tuple(full ^ r ^ (1 << i) for i, r in enumerate(g.rows)))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """Subgraph on ``vertices``; the i-th smallest vertex becomes label i."""
    vs = sorted(set(vertices))
    if not vs:
        raise GraphError("induced subgraph needs at least one vertex")
    for v in vs:
        if not 0 <= v < g.order:
            raise GraphError(f"vertex {v} out of range")
    index = {v: i for i, v in enumerate(vs)}
    return Graph.from_edges(
        len(vs), ((index[u], index[v]) for u, v in combinations(vs, 2) if g.has_edge(u, v))
    )


def add_edge(g: Graph, u: int, v: int) -> Graph:
    if not (0 <= u < g.order and 0 <= v < g.order):
        raise GraphError(f"vertex out of range: ({u}, {v})")
    if u == v:
        raise GraphError("cannot add a loop")
    if g.has_edge(u, v):
        raise GraphError(f"edge ({u}, {v}) already present")
    rows = list(g.rows)
    rows[u] |= 1 << v
    rows[v] |= 1 << u
    return Graph(g.order, tuple(rows))


def remove_vertex(g: Graph, v: int) -> Graph:
    return induced_subgraph(g, (w for w in range(g.order) if w != v))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex ``(a, b)`` is labeled ``a * h.order + b``."""
    m = h.order
    edges = []
    for a in range(g.order):
        for b, c in h.edges():
            edges.append((a * m + b, a * m + c))
    for a, c in g.edges():
        for b in range(m):
            edges.append((a * m + b, c * m + b))
    return Graph.from_edges(g.order * m, edges)


def line_graph(g: Graph) -> Graph:
    """Vertices are the edges of ``g`` in :meth:`Graph.edges` order."""
    es = g.edges()
    if not es:
        raise GraphError("line graph of an edgeless graph is empty")
    edges = [(i, j) for i, j in combinations(range(len(es)), 2) if set(es[i]) & set(es[j])]
    return Graph.from_edges(len(es), edges)
