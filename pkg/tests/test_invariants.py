from __future__ import annotations

import json
import random
from fractions import Fraction

import networkx as nx
import pytest

from conftest import G7, G8, random_connected_graph
from dlcospec.census import enumerate_connected
from dlcospec.constructions import bipartite_family_pair, circulant, hamming, shrikhande
from dlcospec.graph import Graph, complement, parse_graph6
from dlcospec.invariants import (
    LIMITED_FIELDS,
    PROFILE_FIELDS,
    OrderLimitExceeded,
    ParameterProfile,
    clique_number,
    compare_profiles,
    girth,
    has_cut_vertex,
    independence_number,
    is_bipartite,
    is_circulant,
    is_planar,
    profile,
    to_networkx,
)
from dlcospec.isomorphism import canonical_form

EX22_POLY = (0, 4446151812, -2237203064, 491069091, -61411718, 4785415, -237912, 7369, -130, 1)


def _corpus(path):
    return [parse_graph6(s) for s in path.read_text().split()]


def test_k4_profile():
    p = profile(Graph.complete(4))
    assert p.degree_sequence == (3, 3, 3, 3)
    assert p.diameter == 1 and p.girth == 3
    assert p.clique_number == 4 and p.independence_number == 1
    assert p.has_dominating_vertex and not p.has_leaf and not p.has_cut_vertex
    assert p.is_regular and p.is_transmission_regular and p.is_circulant and p.is_planar
    assert p.srg_parameters is None  # complete graphs are excluded
    assert p.complement_components == 4
    assert p.wiener_index == 6 and p.average_transmission == 3


def test_profile_invariants_random():
    rng = random.Random(4)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randrange(1, 12), rng.random() * 0.3)
        p = profile(g)
        assert len(p.degree_sequence) == len(p.transmission_sequence) == p.order
        assert 2 * p.wiener_index == sum(p.transmission_sequence)
        assert p.average_transmission == Fraction(sum(p.transmission_sequence), p.order)
        if p.is_tree:
            assert p.edge_count == p.order - 1 and p.girth == 0
        assert sum(c for _, c in p.distance_multiset) == p.order * (p.order - 1) // 2


def test_tree_and_path_profile():
    p = profile(Graph.path(6))
    assert p.is_tree and p.girth == 0 and p.has_leaf and p.has_cut_vertex and p.is_bipartite
    assert p.diameter == 5 and p.independence_number == 3


def test_strongly_regular_profiles():
    assert profile(shrikhande()).clique_number == 3
    assert profile(hamming(2, 4)).clique_number == 4
    assert profile(shrikhande()).srg_parameters == (16, 6, 2, 2)


def test_bipartite_family_planarity():
    a, b = bipartite_family_pair(1)
    assert is_planar(a) and not is_planar(b)
    assert [profile(x).is_planar for x in (a, b)].count(True) == 1


# -- planarity ------------------------------------------------------------------------

def test_kuratowski_graphs():
    assert is_planar(Graph.complete(4))
    assert not is_planar(Graph.complete(5))
    assert not is_planar(Graph.complete_bipartite(3, 3))


def test_planar_counts_match_reference():
    # planar connected graphs: 646 on seven vertices, 5974 on eight
    assert sum(is_planar(g) for g in _corpus(G7)) == 646
    assert sum(is_planar(g) for g in _corpus(G8)) == 5974


def test_planarity_limit():
    with pytest.raises(OrderLimitExceeded):
        is_planar(Graph.cycle(17))
    assert profile(Graph.cycle(17)).is_planar is None
    assert is_planar(Graph.cycle(17), limit=20)


# -- circulants ---------------------------------------------------------------------------

def test_circulant_recognition_exhaustive():
    import warnings

    from dlcospec.constructions import DisconnectedCirculantWarning

    for g in [*enumerate_connected(1), *enumerate_connected(2)]:
        assert is_circulant(g)
    for n in range(3, 8):
        forms = set()
        for mask in range(1, 1 << (n // 2)):
            conn = [s + 1 for s in range(n // 2) if mask >> s & 1]
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DisconnectedCirculantWarning)
                forms.add(canonical_form(circulant(n, conn)))
        for g in enumerate_connected(n):
            assert is_circulant(g) == (canonical_form(g) in forms)


def test_circulant_examples():
    assert is_circulant(Graph.cycle(9))
    assert not is_circulant(Graph.star(3))
    assert is_circulant(circulant(16, [1, 2, 8]), limit=16)
    with pytest.raises(OrderLimitExceeded):
        is_circulant(circulant(16, [1, 2, 8]))
    # regular but not circulant: the Petersen graph
    petersen = Graph.from_edges(10, [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)]
                                + [(5 + i, 5 + (i + 2) % 5) for i in range(5)])
    assert not is_circulant(petersen)


# -- other parameters against networkx --------------------------------------------------------

def test_girth_and_diameter_match_networkx():
    for g in _corpus(G7):
        h = to_networkx(g)
        expected = nx.girth(h)
        assert girth(g) == (0 if expected == float("inf") else expected)
        assert profile(g).diameter == nx.diameter(h)


def test_cut_vertices_and_bipartiteness_match_networkx():
    for g in _corpus(G7)[::3]:
        h = to_networkx(g)
        assert has_cut_vertex(g) == bool(list(nx.articulation_points(h)))
        assert is_bipartite(g) == nx.is_bipartite(h)


def test_clique_number_matches_networkx():
    rng = random.Random(9)
    graphs = _corpus(G7)[::11] + [random_connected_graph(rng, rng.randrange(5, 30), rng.random() * 0.6) for _ in range(25)]
    for g in graphs:
        omega = max(len(c) for c in nx.find_cliques(to_networkx(g)))
        assert clique_number(g) == omega
        assert independence_number(g) == clique_number(complement(g))


# -- profiles -----------------------------------------------------------------------------------

def test_profile_json_round_trip():
    for g in [Graph.complete(4), shrikhande(), Graph.path(5), Graph.cycle(20)]:
        p = profile(g)
        assert ParameterProfile.from_dict(json.loads(p.to_json())) == p


def test_average_transmission_is_exact_fraction():
    p = profile(Graph.path(4))
    assert p.average_transmission == Fraction(20, 4)
    p = profile(Graph.path(3))
    assert p.average_transmission == Fraction(8, 3)
    assert p.to_dict()["average_transmission"] == "8/3"


def test_compare_identical():
    p = profile(shrikhande())
    assert compare_profiles(p, p) == []
    assert set(LIMITED_FIELDS) <= set(PROFILE_FIELDS)


def test_compare_skips_unevaluated_limits_only():
    a = profile(Graph.cycle(17))
    b = profile(Graph.cycle(17), planarity_limit=20)
    assert compare_profiles(a, b) == []


def test_example_pair_with_different_degree_sequences(census_7):
    wanted = {(3, 3, 3, 3, 4, 4, 6), (2, 3, 3, 4, 4, 5, 5)}
    for c in census_7:
        profs = [profile(g) for g in c.graphs()]
        if {p.degree_sequence for p in profs} == wanted:
            a, b = profs
            diff = compare_profiles(a, b)
            assert "degree_sequence" in diff and "transmission_sequence" in diff
            assert "wiener_index" not in diff
            assert {a.transmission_sequence, b.transmission_sequence} == {
                (6, 8, 8, 9, 9, 9, 9),
                (7, 7, 8, 8, 9, 9, 10),
            }
            return
    pytest.fail("no class with the expected degree sequences")


@pytest.mark.slow
def test_example_pair_with_different_edge_counts(census_9):
    cls = [c for c in census_9 if c.poly.coeffs == EX22_POLY]
    assert len(cls) == 1 and len(cls[0].members) == 2
    a, b = sorted((profile(g) for g in cls[0].graphs()), key=lambda p: -p.edge_count)
    assert (a.edge_count, b.edge_count) == (13, 12)
    assert (a.girth, b.girth) == (3, 4)
    # equal Wiener index forces 6 distance-3 pairs for the 13-edge member and 5 for the 12-edge one
    assert a.distance_multiset == ((1, 13), (2, 17), (3, 6))
    assert b.distance_multiset == ((1, 12), (2, 19), (3, 5))
    assert a.wiener_index == b.wiener_index == 65
    assert {"edge_count", "girth", "distance_multiset"} <= set(compare_profiles(a, b))


# found by filtering every connected order-10 graph with 24-32 edges on Wiener index 66
# (the value forced by the printed polynomial), then matching the exact polynomial
DIAMETER_PAIR = ("I?BvUq}^g", "ICQRFTzZw")
DIAMETER_POLY = (0, -28066657350, 17658758885, -4922528058, 797942816, -82891102, 5722578, -262558, 7720, -132, 1)


def test_order_ten_pair_with_different_diameters():
    from dlcospec.isomorphism import are_isomorphic
    from dlcospec.spectra import dl_char_poly

    a, b = (parse_graph6(s) for s in DIAMETER_PAIR)
    assert dl_char_poly(a).coeffs == dl_char_poly(b).coeffs == DIAMETER_POLY
    assert not are_isomorphic(a, b)
    pa, pb = profile(a), profile(b)
    assert (pa.diameter, pb.diameter) == (3, 2)
    assert (pa.edge_count, pb.edge_count) == (25, 24)
    assert "diameter" in compare_profiles(pa, pb)
