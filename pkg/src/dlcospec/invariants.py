"""Graph parameters compared across cospectral graphs."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import networkx as nx

from .constructions import srg_parameters
from .graph import Graph, GraphError, all_pairs_distances, complement, components_count, remove_vertex
from .isomorphism import has_nontrivial_automorphism
from .spectra import is_transmission_regular, transmissions

PLANARITY_LIMIT = 16
CIRCULANT_LIMIT = 10


class OrderLimitExceeded(GraphError):
    pass


# -- cliques -----------------------------------------------------------------

def _max_clique(rows: tuple[int, ...], candidates: int) -> int:
    """Branch and bound over bitmasks with a greedy-coloring upper bound."""
    best = 0

    def color_bound(p: int) -> int:
        colors = 0
        left = p
        while left:
            colors += 1
            avail = left
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~rows[v] & ~(1 << v)
                left &= ~(1 << v)
        return colors

    def expand(size: int, p: int) -> None:
        nonlocal best
        if not p:
            best = max(best, size)
            return
        if size + color_bound(p) <= best:
            return
        while p:
            if size + p.bit_count() <= best:
                return
            v = (p & -p).bit_length() - 1
            expand(size + 1, p & rows[v])
            p &= ~(1 << v)

    expand(0, candidates)
    return best


def clique_number(g: Graph) -> int:
    return _max_clique(g.rows, (1 << g.order) - 1)


def independence_number(g: Graph) -> int:
    return clique_number(complement(g))


# -- cycles and cuts ---------------------------------------------------------------

def girth(g: Graph) -> int:
    """Length of a shortest cycle; 0 for forests."""
    best = 0
    for s in range(g.order):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for u in queue:
            if best and 2 * dist[u] + 1 >= best:
                break
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    cycle = dist[u] + dist[w] + 1
                    if not best or cycle < best:
                        best = cycle
    return best


def has_cut_vertex(g: Graph) -> bool:
    """Some vertex whose removal increases the number of components."""
    if g.order <= 2:
        return False
    base = components_count(g)
    return any(components_count(remove_vertex(g, v)) > base for v in range(g.order))


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.order
    for s in range(g.order):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = [s]
        for u in queue:
            for w in g.neighbors(u):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


# -- planarity and circulant recognition ----------------------------------------------

def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.order))
    h.add_edges_from(g.edges())
    return h


def is_planar(g: Graph, limit: int = PLANARITY_LIMIT) -> bool:
    if g.order > limit:
        raise OrderLimitExceeded(f"planarity limited to order {limit}")
    if g.order >= 3 and g.edge_count > 3 * g.order - 6:
        return False
    planar, _ = nx.check_planarity(to_networkx(g))
    return bool(planar)


def is_circulant(g: Graph, limit: int = CIRCULANT_LIMIT) -> bool:
    """Search for an ordering x_0..x_{n-1} with adjacency depending only on j - i mod n."""
    n = g.order
    if n > limit:
        raise OrderLimitExceeded(f"circulant recognition limited to order {limit}")
    if n <= 2:
        return True
    degs = g.degrees()
    if any(d != degs[0] for d in degs):
        return False
    seq = [0]
    used = 1

    def consistent(j: int) -> bool:
        xj = seq[j]
        for i in range(j):
            if g.has_edge(seq[i], xj) != g.has_edge(seq[0], seq[j - i]):
                return False
            k = n - (j - i)
            if k < len(seq) and g.has_edge(seq[i], xj) != g.has_edge(seq[0], seq[k]):
                return False
        return True

    def extend() -> bool:
        nonlocal used
        if len(seq) == n:
            return True
        for v in range(n):
            if used >> v & 1:
                continue
            seq.append(v)
            used |= 1 << v
            if consistent(len(seq) - 1) and extend():
                return True
            seq.pop()
            used &= ~(1 << v)
        return False

    # circulants are vertex transitive, so x_0 = 0 loses nothing
    return extend()


# -- profile -------------------------------------------------------------------------

@dataclass(frozen=True)
class ParameterProfile:
    order: int
    edge_count: int
    degree_sequence: tuple[int, ...]
    transmission_sequence: tuple[int, ...]
    diameter: int
    girth: int
    distance_multiset: tuple[tuple[int, int], ...]
    wiener_index: int
    average_transmission: Fraction
    complement_components: int
    has_leaf: bool
    has_dominating_vertex: bool
    has_cut_vertex: bool
    has_nontrivial_automorphism: bool
    clique_number: int
    independence_number: int
    is_bipartite: bool
    is_tree: bool
    is_regular: bool
    is_transmission_regular: bool
    srg_parameters: tuple[int, int, int, int] | None
    is_planar: bool | None
    is_circulant: bool | None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["average_transmission"] = _fraction_text(self.average_transmission)
        d["degree_sequence"] = list(self.degree_sequence)
        d["transmission_sequence"] = list(self.transmission_sequence)
        d["distance_multiset"] = [list(p) for p in self.distance_multiset]
        d["srg_parameters"] = list(self.srg_parameters) if self.srg_parameters else None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterProfile":
        d = dict(d)
        d["average_transmission"] = Fraction(d["average_transmission"])
        d["degree_sequence"] = tuple(d["degree_sequence"])
        d["transmission_sequence"] = tuple(d["transmission_sequence"])
        d["distance_multiset"] = tuple(tuple(p) for p in d["distance_multiset"])
        d["srg_parameters"] = tuple(d["srg_parameters"]) if d["srg_parameters"] else None
        return cls(**d)


PROFILE_FIELDS = tuple(f.name for f in fields(ParameterProfile))
# fields that are None when the order exceeds a configured limit
LIMITED_FIELDS = ("is_planar", "is_circulant")


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def profile(g: Graph, planarity_limit: int = PLANARITY_LIMIT, circulant_limit: int = CIRCULANT_LIMIT) -> ParameterProfile:
    d = all_pairs_distances(g)
    n = g.order
    t = transmissions(d)
    degs = g.degrees()
    iu = [(i, j) for i in range(n) for j in range(i + 1, n)]
    counts = Counter(int(d[i, j]) for i, j in iu)
    srg = srg_parameters(g)
    return ParameterProfile(
        order=n,
        edge_count=g.edge_count,
        degree_sequence=tuple(sorted(degs)),
        transmission_sequence=tuple(sorted(int(x) for x in t)),
        diameter=int(d.max()),
        girth=girth(g),
        distance_multiset=tuple(sorted(counts.items())),
        wiener_index=int(t.sum()) // 2,
        average_transmission=Fraction(int(t.sum()), n),
        complement_components=components_count(complement(g)),
        has_leaf=1 in degs,
        has_dominating_vertex=n - 1 in degs,
        has_cut_vertex=has_cut_vertex(g),
        has_nontrivial_automorphism=has_nontrivial_automorphism(g),
        clique_number=clique_number(g),
        independence_number=independence_number(g),
        is_bipartite=is_bipartite(g),
        is_tree=g.edge_count == n - 1,
        is_regular=all(x == degs[0] for x in degs),
        is_transmission_regular=is_transmission_regular(g),
        srg_parameters=srg.as_tuple() if srg else None,
        is_planar=is_planar(g, planarity_limit) if n <= planarity_limit else None,
        is_circulant=is_circulant(g, circulant_limit) if n <= circulant_limit else None,
    )


def compare_profiles(a: ParameterProfile, b: ParameterProfile) -> list[str]:
    """Names of fields that differ, in declaration order; unevaluated fields are skipped."""
    out = []
    for name in PROFILE_FIELDS:
        x, y = getattr(a, name), getattr(b, name)
        if name in LIMITED_FIELDS and (x is None or y is None):
            continue
        if x != y:
            out.append(name)
    return out
