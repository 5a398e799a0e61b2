"""Graph families and distance Laplacian cospectral constructions.

The pair constructions check their hypotheses, build both graphs, and then
compare exact characteristic polynomials; a mismatch raises
:class:`ConstructionError` instead of returning a wrong pair.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import gcd, isqrt

import numpy as np

from .graph import (
    Graph,
    GraphError,
    add_edge,
    all_pairs_distances,
    bfs_layers,
    bits,
    cartesian_product,
    induced_subgraph,
    line_graph,
)
from .isomorphism import are_isomorphic
from .spectra import Spectrum, dl_char_poly, dl_matrix, transmissions


class ConstructionError(AssertionError):
    """A construction produced graphs that are not cospectral."""


class HypothesisError(ValueError):
    """The hypotheses of a construction or check do not hold."""


# -- twins -------------------------------------------------------------------

@dataclass(frozen=True)
class TwinSet:
    host: Graph = field(repr=False)
    pairs: tuple[tuple[int, int], tuple[int, int]]
    transmission: int


def find_independent_twins(g: Graph) -> list[tuple[int, int]]:
    """All ``(u, v)``, ``u < v``, nonadjacent with ``N(u) == N(v)``."""
    return [
        (u, v)
        for u, v in combinations(range(g.order), 2)
        if g.rows[u] == g.rows[v] and not g.has_edge(u, v)
    ]


def find_co_transmission_twin_sets(g: Graph) -> list[TwinSet]:
    t = transmissions(all_pairs_distances(g))
    twins = find_independent_twins(g)
    out = []
    for p, q in combinations(twins, 2):
        if set(p) & set(q) or t[p[0]] != t[q[0]]:
            continue
        out.append(TwinSet(g, (p, q), int(t[p[0]])))
    return out


def twin_vertex(g: Graph, v: int) -> Graph:
    """Add vertex ``n`` with the same neighborhood as ``v``."""
    if not 0 <= v < g.order:
        raise GraphError(f"vertex {v} out of range")
    n = g.order
    return Graph.from_edges(n + 1, g.edges() + [(w, n) for w in g.neighbors(v)])


def co_transmission_example() -> TwinSet:
    """Order-8 host with two twin pairs of transmission 15.

    Built by twinning a pendant leaf and the far corner of a 4-cycle in the
    6-vertex graph made of a 4-cycle 0-1-3-2-0 with two leaves 4, 5 on vertex 0.
    Both twinned vertices have transmission 10 and lie at distance 3, so both
    end at 10 + 3 + 2 = 15.
    """
    base = Graph.from_edges(6, [(0, 1), (0, 2), (1, 3), (2, 3), (0, 4), (0, 5)])
    host = twin_vertex(twin_vertex(base, 4), 3)
    t = transmissions(all_pairs_distances(host))
    return TwinSet(host, ((4, 6), (3, 7)), int(t[4]))


# -- cousins -----------------------------------------------------------------

@dataclass(frozen=True)
class CousinSet:
    host: Graph = field(repr=False)
    pairs: tuple[tuple[int, int], tuple[int, int]]

    @property
    def vertices(self) -> tuple[int, int, int, int]:
        (a, b), (c, d) = self.pairs
        return a, b, c, d

    @property
    def u_set(self) -> list[int]:
        vs = set(self.vertices)
        return [u for u in range(self.host.order) if u not in vs]

    def alignments(self) -> list["CousinSet"]:
        """The two labelings that toggle different cross edges."""
        (a, b), (c, d) = self.pairs
        return [self, CousinSet(self.host, ((a, b), (d, c)))]


def is_cousin_set(g: Graph, v1: int, v2: int, v3: int, v4: int, dist: np.ndarray | None = None) -> bool:
    if g.order < 5 or len({v1, v2, v3, v4}) != 4:
        return False
    d = all_pairs_distances(g) if dist is None else dist
    outside = [u for u in range(g.order) if u not in (v1, v2, v3, v4)]
    for u in outside:
        if d[u, v1] != d[u, v2] or d[u, v3] != d[u, v4]:
            return False
    return sum(int(d[u, v1]) for u in outside) == sum(int(d[u, v3]) for u in outside)


def make_cousin_set(g: Graph, v1: int, v2: int, v3: int, v4: int) -> CousinSet:
    if not is_cousin_set(g, v1, v2, v3, v4):
        raise HypothesisError(f"{{{{{v1},{v2}}},{{{v3},{v4}}}}} is not a set of cousins")
    return CousinSet(g, ((v1, v2), (v3, v4)))


def find_cousin_sets(g: Graph) -> list[CousinSet]:
    """Every set of cousins, one entry per unordered pair of unordered pairs.

    Entries are normalized to ``v1 < v2``, ``v3 < v4`` and ``v1 < v3``.
    """
    n = g.order
    if n < 5:
        raise HypothesisError("sets of cousins need at least five vertices")
    d = all_pairs_distances(g)
    pair_ok: dict[tuple[int, int], int] = {}
    for a, b in combinations(range(n), 2):
        mism = 0
        for u in range(n):
            if u != a and u != b and d[u, a] != d[u, b]:
                mism |= 1 << u
        if mism.bit_count() <= 2:
            pair_ok[(a, b)] = mism
    candidates = sorted(pair_ok)
    out = []
    for i, p in enumerate(candidates):
        for q in candidates[i + 1:]:
            if q[0] < p[0] or set(p) & set(q):
                continue
            four = (1 << p[0]) | (1 << p[1]) | (1 << q[0]) | (1 << q[1])
            if (pair_ok[p] | pair_ok[q]) & ~four:
                continue
            outside = bits(((1 << n) - 1) & ~four)
            if sum(int(d[u, p[0]]) for u in outside) == sum(int(d[u, q[0]]) for u in outside):
                out.append(CousinSet(g, (p, q)))
    return out


def _check_cousins(g: Graph, c: CousinSet) -> None:
    if c.host != g or not is_cousin_set(g, *c.vertices):
        raise HypothesisError("not a valid set of cousins for this graph")


def _induced_on(g: Graph, vs: tuple[int, ...]) -> Graph:
    """Induced subgraph with position i holding vs[i] (order preserved)."""
    return Graph.from_edges(
        len(vs), ((i, j) for i, j in combinations(range(len(vs)), 2) if g.has_edge(vs[i], vs[j]))
    )


def _maps_by(h1: Graph, h2: Graph, perm: tuple[int, ...]) -> bool:
    n = h1.order
    return all(h1.has_edge(a, b) == h2.has_edge(perm[a], perm[b]) for a, b in combinations(range(n), 2))


def _verified(g1: Graph, g2: Graph) -> tuple[Graph, Graph] | None:
    if are_isomorphic(g1, g2):
        return None
    if dl_char_poly(g1) != dl_char_poly(g2):
        raise ConstructionError("construction hypotheses held but the polynomials differ")
    return g1, g2


def cousin_edge_pair(g: Graph, c: CousinSet) -> tuple[Graph, Graph] | None:
    """``(g + v1v2, g + v3v4)`` when that pair is cospectral by construction.

    Needs ``v1v2, v3v4`` absent and isomorphic induced subgraphs on the four
    cousins after adding the respective edge.  Returns None when hypotheses
    fail or the two graphs are isomorphic.
    """
    _check_cousins(g, c)
    v1, v2, v3, v4 = c.vertices
    if g.has_edge(v1, v2) or g.has_edge(v3, v4):
        return None
    g1, g2 = add_edge(g, v1, v2), add_edge(g, v3, v4)
    s = c.vertices
    h1, h2 = _induced_on(g1, s), _induced_on(g2, s)
    if not any(_maps_by(h1, h2, p) for p in permutations(range(4))):
        return None
    return _verified(g1, g2)


def cross_cover_condition(g: Graph, c: CousinSet) -> bool:
    """Every common neighbor of one pair touches a common neighbor of the other."""
    v1, v2, v3, v4 = c.vertices
    a = g.rows[v1] & g.rows[v2]
    b = g.rows[v3] & g.rows[v4]
    return all(g.rows[x] & b for x in bits(a)) and all(g.rows[y] & a for y in bits(b))


_SIGMA1 = (3, 2, 1, 0)  # (v1 v4)(v2 v3) on positions 0..3
_SIGMA2 = (2, 3, 0, 1)  # (v1 v3)(v2 v4)


def cousin_cross_pair(g: Graph, c: CousinSet) -> tuple[Graph, Graph] | None:
    """``(g + v1v3, g + v2v4)`` when that pair is cospectral by construction.

    Requires both edges absent, the (v1 v4)(v2 v3) swap to map the induced
    four-vertex subgraph of the first graph onto that of the second, and the
    common-neighbor cover condition.
    """
    _check_cousins(g, c)
    v1, v2, v3, v4 = c.vertices
    if g.has_edge(v1, v3) or g.has_edge(v2, v4):
        return None
    g1, g2 = add_edge(g, v1, v3), add_edge(g, v2, v4)
    if not _maps_by(_induced_on(g1, c.vertices), _induced_on(g2, c.vertices), _SIGMA1):
        return None
    if not cross_cover_condition(g, c):
        return None
    return _verified(g1, g2)


def cospectral_pairs_from_cousins(g: Graph) -> list[tuple[Graph, Graph]]:
    """Every pair either cousin construction yields on ``g``."""
    out = []
    for c in find_cousin_sets(g):
        pair = cousin_edge_pair(g, c)
        if pair:
            out.append(pair)
        for a in c.alignments():
            pair = cousin_cross_pair(g, a)
            if pair:
                out.append(pair)
    return out


# -- similarity matrices -------------------------------------------------------

# Hadamard sign patterns; the similarity matrices are these divided by 2.
_H1 = np.array([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]])
_H2 = np.array([[1, 1, -1, 1], [1, 1, 1, -1], [-1, 1, 1, 1], [1, -1, 1, 1]])


def similarity_matrix(which: int, n: int) -> np.ndarray:
    """``S_which (+) I_{n-4}`` as an object array of Fractions."""
    h = {1: _H1, 2: _H2}[which]
    s = np.zeros((n, n), dtype=object)
    s[:, :] = Fraction(0)
    for i in range(4):
        for j in range(4):
            s[i, j] = Fraction(int(h[i, j]), 2)
    for i in range(4, n):
        s[i, i] = Fraction(1)
    return s


def verify_cousin_similarity(g1: Graph, g2: Graph, c: CousinSet, which: int) -> bool:
    """Check ``S . DL(g1) . S == DL(g2)`` exactly, cousins ordered first.

    Works for both constructions: for the cross-edge pair the four cousins are
    ordered (v1, v3, v2, v4), which turns it into the joined-pair layout.
    """
    if g1.order != g2.order or g1.order != c.host.order:
        raise ValueError("dimension mismatch between graphs and cousin host")
    v1, v2, v3, v4 = c.vertices
    host = c.host
    if not host.has_edge(v1, v2) and g1.has_edge(v1, v2) and not host.has_edge(v3, v4) and g2.has_edge(v3, v4):
        head = [v1, v2, v3, v4]
    elif not host.has_edge(v1, v3) and g1.has_edge(v1, v3) and not host.has_edge(v2, v4) and g2.has_edge(v2, v4):
        head = [v1, v3, v2, v4]
    else:
        raise ValueError("graphs do not arise from the cousin set by a single added edge each")
    order = head + [u for u in range(g1.order) if u not in head]
    m1 = dl_matrix(g1)[np.ix_(order, order)]
    m2 = dl_matrix(g2)[np.ix_(order, order)]
    s = similarity_matrix(which, g1.order)
    lhs = s.dot(m1.astype(object)).dot(s)
    return bool(all(lhs[i, j] == int(m2[i, j]) for i in range(g1.order) for j in range(g1.order)))


# -- four-vertex swaps ----------------------------------------------------------

@dataclass(frozen=True)
class SwapCase:
    edges: tuple[tuple[int, int], ...]
    isomorphic: bool
    sigma1: bool
    sigma2: bool

    @property
    def ok(self) -> bool:
        return not self.isomorphic or self.sigma1 or self.sigma2


def four_vertex_swap_cases() -> list[SwapCase]:
    """All labeled H on {0,1,2,3} with 01 and 23 absent, and which swaps work."""
    free = [(0, 2), (0, 3), (1, 2), (1, 3)]
    cases = []
    for mask in range(64):
        edges = [e for i, e in enumerate(combinations(range(4), 2)) if mask >> i & 1]
        if (0, 1) in edges or (2, 3) in edges:
            continue
        assert all(e in free for e in edges)
        h = Graph.from_edges(4, edges)
        a, b = add_edge(h, 0, 1), add_edge(h, 2, 3)
        iso = any(_maps_by(a, b, p) for p in permutations(range(4)))
        cases.append(SwapCase(tuple(edges), iso, _maps_by(a, b, _SIGMA1), _maps_by(a, b, _SIGMA2)))
    return cases


def four_vertex_swap_check() -> bool:
    cases = four_vertex_swap_cases()
    return len(cases) == 16 and all(c.ok for c in cases)


# -- distance preservation -------------------------------------------------------

_MODES = {"pair-edges": "pair", "lemma3_7": "pair", "cross-edges": "cross", "lemma3_10": "cross"}


def verify_distance_preservation(g: Graph, c: CousinSet, mode: str) -> bool:
    """Recompute distances from every outside vertex in g and both modified graphs.

    ``mode`` is ``"pair-edges"`` (add v1v2 / v3v4) or ``"cross-edges"``
    (add v1v3 / v2v4).
    """
    kind = _MODES.get(mode)
    if kind is None:
        raise ValueError(f"unknown mode {mode!r}")
    _check_cousins(g, c)
    v1, v2, v3, v4 = c.vertices
    if kind == "pair":
        if g.has_edge(v1, v2) or g.has_edge(v3, v4):
            raise HypothesisError("v1v2 and v3v4 must be non-edges")
        g1, g2 = add_edge(g, v1, v2), add_edge(g, v3, v4)
    else:
        if g.has_edge(v1, v3) or g.has_edge(v2, v4):
            raise HypothesisError("v1v3 and v2v4 must be non-edges")
        if not cross_cover_condition(g, c):
            raise HypothesisError("common-neighbor cover condition fails")
        g1, g2 = add_edge(g, v1, v3), add_edge(g, v2, v4)
    for u in c.u_set:
        if not bfs_layers(g, u) == bfs_layers(g1, u) == bfs_layers(g2, u):
            return False
    return True


# -- bipartite family --------------------------------------------------------------

def bipartite_family_graph(k: int) -> Graph:
    """Order 2k+6: v0..v4 are 0..4, the k leaves on v0 follow, then the k+1
    vertices joined to v0, v3 and v4."""
    if k < 1:
        raise ValueError("k must be at least 1")
    leaves = range(5, 5 + k)
    right = range(5 + k, 6 + 2 * k)
    edges = [(0, 1), (0, 2), (2, 3)]
    edges += [(0, x) for x in leaves]
    edges += [(r, y) for r in right for y in (0, 3, 4)]
    return Graph.from_edges(2 * k + 6, edges)


def bipartite_family_cousins(k: int) -> CousinSet:
    return CousinSet(bipartite_family_graph(k), ((1, 2), (3, 4)))


def bipartite_family_pair(k: int) -> tuple[Graph, Graph]:
    g = bipartite_family_graph(k)
    pair = cousin_cross_pair(g, bipartite_family_cousins(k))
    if pair is None:
        raise ConstructionError(f"bipartite family member k={k} failed its hypotheses")
    return pair


# -- transmission regular, non-regular family ------------------------------------------

def transmission_regular_family(n: int) -> Graph:
    """2n-cycle v_1..v_2n (labels 0..2n-1) plus u_1..u_n (labels 2n..3n-1),
    u_i joined to v_{2i-1}, v_{2i}, v_{2i+1} with v_{2n+1} = v_1."""
    if n < 2:
        raise ValueError("n must be at least 2")
    m = 2 * n
    edges = [(i, (i + 1) % m) for i in range(m)]
    for i in range(n):
        u = m + i
        edges += [(u, 2 * i), (u, 2 * i + 1), (u, (2 * i + 2) % m)]
    return Graph.from_edges(3 * n, edges)


# -- circulants --------------------------------------------------------------------

class DisconnectedCirculantWarning(UserWarning):
    pass


def normalize_connection_set(n: int, s) -> tuple[int, ...]:
    out = set()
    for x in s:
        r = int(x) % n
        if r == 0:
            raise ValueError(f"connection set element {x} is 0 mod {n}")
        out.add(min(r, n - r))
    if not out:
        raise ValueError("connection set must be nonempty")
    return tuple(sorted(out))


def circulant(n: int, s) -> Graph:
    if n < 3:
        raise ValueError("circulants need n >= 3")
    conn = normalize_connection_set(n, s)
    g = 0
    for x in conn:
        g = gcd(g, x)
    if gcd(g, n) != 1:
        warnings.warn(f"Circ({n}, {set(conn)}) is disconnected", DisconnectedCirculantWarning, stacklevel=2)
    edges = {(min(i, (i + x) % n), max(i, (i + x) % n)) for i in range(n) for x in conn}
    return Graph.from_edges(n, sorted(edges))


def consecutive_circulant(n: int, r: int) -> Graph:
    if not 1 <= r <= n // 2:
        raise ValueError(f"r must be in [1, {n // 2}]")
    return circulant(n, range(1, r + 1))


def consecutive_transmission(n: int, r: int) -> int:
    """Closed-form transmission of the consecutive circulant on n vertices."""
    if n < 3 or not 1 <= r <= n // 2:
        raise ValueError(f"need n >= 3 and 1 <= r <= {n // 2}")
    q = (n - 1) // (2 * r)
    return (q + 1) * ((n - 1) - r * q)


def consecutive_wiener(n: int, r: int) -> Fraction:
    return Fraction(n, 2) * consecutive_transmission(n, r)


# -- strongly regular graphs -------------------------------------------------------------

@dataclass(frozen=True)
class SrgParameters:
    n: int
    k: int
    lam: int
    mu: int

    def __post_init__(self) -> None:
        n, k, lam, mu = self.n, self.k, self.lam, self.mu
        if min(n, k, lam, mu) < 0 or not 0 < k < n - 1 or mu < 1:
            raise ValueError(f"infeasible parameters {self.as_tuple()} (need 0 < k < n-1, mu >= 1)")
        if k * (k - lam - 1) != (n - k - 1) * mu:
            raise ValueError(f"infeasible parameters {self.as_tuple()}: k(k-lam-1) != (n-k-1)mu")
        self.multiplicities()

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.n, self.k, self.lam, self.mu

    @property
    def discriminant(self) -> int:
        return (self.lam - self.mu) ** 2 + 4 * (self.k - self.mu)

    def multiplicities(self) -> tuple[int, int]:
        """(multiplicity of the + root, multiplicity of the - root)."""
        n, k, lam, mu = self.as_tuple()
        disc = self.discriminant
        num = 2 * k + (n - 1) * (lam - mu)
        root = isqrt(disc)
        if root * root == disc:
            plus = Fraction(n - 1, 2) - Fraction(num, 2 * root)
            minus = Fraction(n - 1, 2) + Fraction(num, 2 * root)
        elif num == 0:
            plus = minus = Fraction(n - 1, 2)
        else:
            raise ValueError(f"infeasible parameters {self.as_tuple()}: irrational multiplicities")
        if plus.denominator != 1 or minus.denominator != 1 or plus < 0 or minus < 0:
            raise ValueError(f"infeasible parameters {self.as_tuple()}: bad multiplicities {plus}, {minus}")
        return int(plus), int(minus)

    @property
    def transmission(self) -> int:
        return 2 * self.n - self.k - 2


def srg_dl_spectrum(p: SrgParameters) -> tuple[Spectrum, list[tuple[float, int]]]:
    """Distance Laplacian spectrum of any SRG with these parameters.

    Returns the spectrum and its exact (value, multiplicity) grouping.
    """
    n, k, lam, mu = p.as_tuple()
    sq = float(np.sqrt(p.discriminant))
    hi = 2 * n - k + 0.5 * (lam - mu + sq)
    lo = 2 * n - k + 0.5 * (lam - mu - sq)
    m_hi, m_lo = p.multiplicities()
    groups = [(0.0, 1), (lo, m_lo), (hi, m_hi)]
    values = [0.0] + [lo] * m_lo + [hi] * m_hi
    return Spectrum(tuple(values)), [(v, m) for v, m in groups if m]


def srg_parameters(g: Graph) -> SrgParameters | None:
    """Parameters if ``g`` is a connected, non-complete strongly regular graph."""
    n = g.order
    degs = g.degrees()
    k = degs[0]
    if any(d != k for d in degs) or not 0 < k < n - 1:
        return None
    lam = mu = None
    for u, v in combinations(range(n), 2):
        common = (g.rows[u] & g.rows[v]).bit_count()
        if g.has_edge(u, v):
            if lam is None:
                lam = common
            elif common != lam:
                return None
        else:
            if mu is None:
                mu = common
            elif common != mu:
                return None
    if lam is None or not mu:
        return None
    try:
        return SrgParameters(n, k, lam, mu)
    except ValueError:
        return None


# -- named graphs -------------------------------------------------------------------------

def shrikhande() -> Graph:
    """Z4 x Z4, (a, b) labeled 4a + b, adjacent on differences ±(0,1), ±(1,0), ±(1,1)."""
    diffs = [(0, 1), (1, 0), (1, 1)]
    edges = set()
    for a in range(4):
        for b in range(4):
            for da, db in diffs:
                u, v = 4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(16, sorted(edges))


def hamming(d: int, q: int) -> Graph:
    if d < 1 or q < 2:
        raise ValueError("hamming graphs need d >= 1 and q >= 2")
    g = Graph.complete(q)
    for _ in range(d - 1):
        g = cartesian_product(g, Graph.complete(q))
    return g


def doob(m: int, n: int) -> Graph:
    """m Shrikhande factors times hamming(n, 4)."""
    if m < 1 or n < 0:
        raise ValueError("doob graphs need m >= 1 and n >= 0")
    g = shrikhande()
    for _ in range(m - 1):
        g = cartesian_product(g, shrikhande())
    if n:
        g = cartesian_product(g, hamming(n, 4))
    return g


def triangular(m: int) -> Graph:
    if m < 3:
        raise ValueError("triangular graphs need m >= 3")
    return line_graph(Graph.complete(m))


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, isqrt(p) + 1))


def paley(p: int) -> Graph:
    if not _is_prime(p) or p % 4 != 1:
        raise ValueError("paley graphs need a prime p = 1 mod 4")
    squares = {x * x % p for x in range(1, p)}
    return circulant(p, squares)


# spec-facing names
thm39_pair = cousin_edge_pair
thm311_pair = cousin_cross_pair
lemma38_exhaustive_check = four_vertex_swap_check
bk_graph = bipartite_family_graph
bk_pair = bipartite_family_pair
hn_graph = transmission_regular_family
