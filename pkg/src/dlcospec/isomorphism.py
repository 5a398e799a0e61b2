"""Isomorphism testing and canonical forms.

Color refinement produces an ordered equitable partition; a depth-first
individualization search over that partition visits labelings (leaves), and
the canonical form is the smallest graph6 string among the leaves.  Leaves
with identical certificates yield automorphisms, which prune sibling branches
lying in one orbit of the stabilizer of the current prefix.
"""
from __future__ import annotations

from itertools import permutations

from .graph import MAX_ORDER, Graph, GraphError, bits, encode_graph6

CANONICAL_ORDER_LIMIT = MAX_ORDER


class OrderLimitError(GraphError):
    pass


def _vertex_invariant(g: Graph, v: int) -> tuple[int, int, int]:
    """(degree, edges inside N(v), components of G[N(v)])."""
    nb = g.rows[v]
    inner = 0
    for w in bits(nb):
        inner += (g.rows[w] & nb).bit_count()
    comps = 0
    left = nb
    while left:
        low = left & -left
        comp = frontier = low
        while frontier:
            nxt = 0
            for w in bits(frontier):
                nxt |= g.rows[w]
            frontier = nxt & nb & ~comp
            comp |= frontier
        left &= ~comp
        comps += 1
    return nb.bit_count(), inner // 2, comps


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    Each round splits every cell by the vector of neighbor counts into all
    cells; fragments are ordered by that vector, so the result depends only on
    the isomorphism type of (graph, ordered partition).
    """
    rows = g.rows
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new_cells: list[list[int]] = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                r = rows[v]
                groups.setdefault(tuple((r & m).bit_count() for m in masks), []).append(v)
            for key in sorted(groups):
                new_cells.append(groups[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _initial_partition(g: Graph) -> list[list[int]]:
    groups: dict[tuple[int, int, int], list[int]] = {}
    for v in range(g.order):
        groups.setdefault(_vertex_invariant(g, v), []).append(v)
    return _refine(g, [groups[k] for k in sorted(groups)])


def _quotient_signature(g: Graph, cells: list[list[int]]) -> tuple:
    masks = []
    for cell in cells:
        m = 0
        for v in cell:
            m |= 1 << v
        masks.append(m)
    return tuple(
        (len(cell), tuple((g.rows[cell[0]] & m).bit_count() for m in masks)) for cell in cells
    )


def _individualize(cells: list[list[int]], index: int, v: int) -> list[list[int]]:
    cell = cells[index]
    rest = [w for w in cell if w != v]
    return cells[:index] + [[v], rest] + cells[index + 1:]


def _leaf_certificate(g: Graph, cells: list[list[int]]) -> tuple[bytes, list[int]]:
    order = [cell[0] for cell in cells]
    perm = [0] * g.order
    for pos, v in enumerate(order):
        perm[v] = pos
    return encode_graph6(g.relabel(perm)).encode("ascii"), perm


class _Orbits:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _Search:
    """One canonical-labeling search over ``g``."""

    def __init__(self, g: Graph, stop_at_automorphism: bool = False):
        self.g = g
        self.best: bytes | None = None
        self.best_perm: list[int] | None = None
        self.leaves: dict[bytes, list[int]] = {}
        self.generators: list[list[int]] = []
        self.stop_at_automorphism = stop_at_automorphism
        self.done = False

    def run(self) -> None:
        self._visit(_initial_partition(self.g), [])

    def _stabilizer_orbits(self, prefix: list[int]) -> _Orbits:
        orbits = _Orbits(self.g.order)
        for gen in self.generators:
            if all(gen[p] == p for p in prefix):
                for v, w in enumerate(gen):
                    orbits.union(v, w)
        return orbits

    def _visit(self, cells: list[list[int]], prefix: list[int]) -> None:
        if self.done:
            return
        if len(cells) == self.g.order:
            self._leaf(cells)
            return
        target = next(i for i, c in enumerate(cells) if len(c) > 1)
        explored: list[int] = []
        known = -1
        orbits = None
        for v in sorted(cells[target]):
            if explored:
                if orbits is None or known != len(self.generators):
                    orbits = self._stabilizer_orbits(prefix)
                    known = len(self.generators)
                if any(orbits.find(v) == orbits.find(w) for w in explored):
                    continue
            self._visit(_refine(self.g, _individualize(cells, target, v)), prefix + [v])
            if self.done:
                return
            explored.append(v)

    def _leaf(self, cells: list[list[int]]) -> None:
        cert, perm = _leaf_certificate(self.g, cells)
        other = self.leaves.get(cert)
        if other is not None:
            # perm and other both map g onto the same labeled graph
            inv = [0] * len(other)
            for v, p in enumerate(other):
                inv[p] = v
            gen = [inv[perm[v]] for v in range(len(perm))]
            if any(gen[v] != v for v in range(len(gen))):
                self.generators.append(gen)
                if self.stop_at_automorphism:
                    self.done = True
            return
        self.leaves[cert] = perm
        if self.best is None or cert < self.best:
            self.best, self.best_perm = cert, perm


def _check_order(g: Graph) -> None:
    if g.order > CANONICAL_ORDER_LIMIT:
        raise OrderLimitError(f"order {g.order} exceeds canonical-form limit {CANONICAL_ORDER_LIMIT}")


def canonical_labeling(g: Graph) -> tuple[bytes, list[int]]:
    """Return ``(form, perm)`` with ``g.relabel(perm)`` encoding to ``form``."""
    _check_order(g)
    s = _Search(g)
    s.run()
    assert s.best is not None and s.best_perm is not None
    return s.best, s.best_perm


def canonical_form(g: Graph) -> bytes:
    """graph6 bytes of the canonical relabeling; equal iff isomorphic."""
    return canonical_labeling(g)[0]


def canonical_graph(g: Graph) -> Graph:
    _, perm = canonical_labeling(g)
    return g.relabel(perm)


def automorphism_generators(g: Graph) -> list[list[int]]:
    """Automorphisms found by the canonical search (they generate Aut(g))."""
    _check_order(g)
    s = _Search(g)
    s.run()
    return s.generators


def has_nontrivial_automorphism(g: Graph) -> bool:
    _check_order(g)
    if len(_initial_partition(g)) == g.order:
        return False
    s = _Search(g, stop_at_automorphism=True)
    s.run()
    return bool(s.generators)


def find_isomorphism(g: Graph, h: Graph) -> dict[int, int] | None:
    """A bijection ``f`` with ``uv in E(g) <=> f(u)f(v) in E(h)``, or None."""
    if g.order != h.order or g.edge_count != h.edge_count:
        return None
    if sorted(g.degrees()) != sorted(h.degrees()):
        return None
    pg, ph = _initial_partition(g), _initial_partition(h)
    ig = [_vertex_invariant(g, c[0]) for c in pg]
    ih = [_vertex_invariant(h, c[0]) for c in ph]
    if ig != ih or _quotient_signature(g, pg) != _quotient_signature(h, ph):
        return None
    fg, perm_g = canonical_labeling(g)
    fh, perm_h = canonical_labeling(h)
    if fg != fh:
        return None
    inv_h = [0] * h.order
    for v, p in enumerate(perm_h):
        inv_h[p] = v
    return {v: inv_h[perm_g[v]] for v in range(g.order)}


def are_isomorphic(g: Graph, h: Graph) -> bool:
    return find_isomorphism(g, h) is not None


def is_isomorphism(g: Graph, h: Graph, f: dict[int, int] | list[int]) -> bool:
    n = g.order
    if h.order != n or sorted(f[v] for v in range(n)) != list(range(n)):
        return False
    return all(g.has_edge(u, v) == h.has_edge(f[u], f[v]) for u in range(n) for v in range(u + 1, n))


def brute_force_isomorphism(g: Graph, h: Graph) -> list[int] | None:
    """Exhaustive permutation search; only sensible for small orders."""
    if g.order != h.order or g.edge_count != h.edge_count:
        return None
    for p in permutations(range(g.order)):
        if is_isomorphism(g, h, p):
            return list(p)
    return None
