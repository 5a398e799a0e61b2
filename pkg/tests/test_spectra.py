from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import G7, random_connected_graph
from dlcospec.constructions import (
    bipartite_family_pair,
    circulant,
    hamming,
    paley,
    shrikhande,
    transmission_regular_family,
    triangular,
    twin_vertex,
)
from dlcospec.graph import DisconnectedGraphError, Graph, all_pairs_distances, parse_graph6
from dlcospec.spectra import (
    CharPoly,
    Spectrum,
    are_dl_cospectral,
    average_transmission,
    char_poly,
    coefficient_report,
    distance_laplacian,
    dl_char_poly,
    dl_matrix,
    dl_second_eigenvalue_bound,
    dl_spectrum,
    eigenvalues_float,
    is_transmission_regular,
    normalized_tree_coefficients,
    transmissions,
    verify_twin_eigenstructure,
    wiener_index,
)

FIG8 = (0, -90671880, 47349497, -10517842, 1288463, -94020, 4087, -98, 1)


# -- oracles -------------------------------------------------------------------

def _pmul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def leibniz_char_poly(m) -> tuple[int, ...]:
    """det(xI - m) by summing over all permutations, entries as polynomials."""
    n = len(m)
    total = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = [1]
        for i in range(n):
            entry = [-int(m[i][perm[i]]), 1 if i == perm[i] else 0]
            term = _pmul(term, entry)
        sign = -1 if inversions % 2 else 1
        for k, c in enumerate(term):
            total[k] += sign * c
    return tuple(total)


# -- matrices ----------------------------------------------------------------------

def test_transmissions():
    assert transmissions(all_pairs_distances(Graph.complete(4))).tolist() == [3, 3, 3, 3]
    assert transmissions(all_pairs_distances(Graph.path(3))).tolist() == [3, 2, 3]
    assert set(transmissions(all_pairs_distances(transmission_regular_family(3))).tolist()) == {14}


def test_distance_laplacians():
    assert dl_matrix(Graph.complete(3)).tolist() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert dl_matrix(Graph.path(3)).tolist() == [[3, -1, -2], [-1, 2, -1], [-2, -1, 3]]
    rng = random.Random(4)
    for _ in range(100):
        m = dl_matrix(random_connected_graph(rng, rng.randrange(1, 15), 0.3))
        assert (m.sum(axis=1) == 0).all()
        assert (m == m.T).all()
        off = m - np.diag(np.diag(m))
        assert (off <= 0).all()


def test_distance_laplacian_rejects_disconnected():
    with pytest.raises(DisconnectedGraphError):
        dl_matrix(Graph.empty(2))


# -- characteristic polynomials ----------------------------------------------------

def test_small_polynomials():
    assert dl_char_poly(Graph.complete(3)).coeffs == (0, 9, -6, 1)
    assert dl_char_poly(Graph.path(3)).coeffs == (0, 15, -8, 1)
    assert str(dl_char_poly(Graph.path(3))) == "x^3 - 8x^2 + 15x"


def test_complete_graph_polynomial_is_x_times_power():
    for n in range(1, 9):
        p = dl_char_poly(Graph.complete(n))
        q = CharPoly((0, 1))
        for _ in range(n - 1):
            q = CharPoly(tuple(_pmul(list(q.coeffs), [-n, 1])))
        assert p == q


def test_fig8_polynomial():
    a, b = bipartite_family_pair(1)
    assert dl_char_poly(a).coeffs == FIG8
    assert dl_char_poly(b).coeffs == FIG8


def test_char_poly_matches_leibniz_oracle():
    rng = random.Random(9)
    for _ in range(200):
        n = rng.randrange(1, 6)
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                a[i][j] = a[j][i] = rng.randrange(-9, 10)
        assert char_poly(a).coeffs == leibniz_char_poly(a)


def test_char_poly_handles_large_entries():
    # entries far beyond 64-bit products
    a = [[10**12, 3], [3, -(10**12)]]
    assert char_poly(a).coeffs == (-(10**24) - 9, 0, 1)


def test_charpoly_helpers():
    p = CharPoly((0, 15, -8, 1))
    assert p(3) == 0 and p(5) == 0
    q, r = p.divide_linear(3)
    assert r == 0 and q.coeffs == (0, -5, 1)
    assert CharPoly.parse(p.serialize()) == p
    assert p.serialize() == "0,15,-8,1"
    with pytest.raises(ValueError):
        CharPoly((1, 2))


def test_divide_linear_exact():
    p = dl_char_poly(Graph.path(3))
    q, r = p.divide_linear(5)
    assert r == 0
    assert q.coeffs == (0, -3, 1)


# -- floating spectra ---------------------------------------------------------------

def test_spectra_of_named_graphs():
    assert dl_spectrum(Graph.complete(5)).matches([0, 5, 5, 5, 5], 1e-9)
    assert dl_spectrum(shrikhande()).matches([0] + [24] * 9 + [28] * 6, 1e-9)
    lo, hi = (87 - 29**0.5) / 2, (87 + 29**0.5) / 2
    assert dl_spectrum(paley(29)).matches([0] + [lo] * 14 + [hi] * 14, 1e-9)


def test_eigen_residuals():
    for g in [shrikhande(), triangular(8), circulant(20, [1, 2, 3, 8])]:
        m = dl_matrix(g).astype(float)
        vals, vecs = np.linalg.eigh(m)
        norm = np.linalg.norm(m, 2)
        for k in range(len(vals)):
            assert np.linalg.norm(m @ vecs[:, k] - vals[k] * vecs[:, k]) <= 1e-9 * norm


def test_spectrum_grouping_and_json():
    s = Spectrum((0.0, 3.0, 3.0 + 1e-9, 5.0))
    assert s.groups() == [(0.0, 1), (pytest.approx(3.0), 2), (5.0, 1)]
    data = json.loads(s.to_json())
    assert data[1]["multiplicity"] == 2
    assert eigenvalues_float([[2, 0], [0, 1]]).values == (1.0, 2.0)


# -- cospectrality ---------------------------------------------------------------------

def test_are_dl_cospectral():
    assert are_dl_cospectral(circulant(16, [1, 2, 8]), circulant(16, [1, 6, 8]))
    g = Graph.cycle(6)
    assert not are_dl_cospectral(g, g)
    assert are_dl_cospectral(g, g, strict=False)
    assert are_dl_cospectral(*bipartite_family_pair(2))
    assert not are_dl_cospectral(Graph.path(3), Graph.path(4))


# -- transmission parameters --------------------------------------------------------------

def test_wiener_and_average():
    p3 = Graph.path(3)
    assert wiener_index(p3) == 4
    assert average_transmission(p3) == Fraction(8, 3)
    assert is_transmission_regular(transmission_regular_family(5))
    h2 = transmission_regular_family(2)
    t = transmissions(all_pairs_distances(h2))
    assert is_transmission_regular(h2) == bool((t == t[0]).all())


# -- coefficients ------------------------------------------------------------------------

def test_coefficient_report_k3():
    rep = coefficient_report(CharPoly((0, 9, -6, 1)))
    assert rep.alternating_signs and rep.decreasing_abs and rep.unimodal_abs and rep.log_concave
    assert rep.peak_index == 1


def test_coefficient_report_fig8():
    rep = coefficient_report(CharPoly(FIG8))
    assert rep.decreasing_abs and rep.alternating_signs and rep.log_concave


def test_coefficient_report_detects_non_monotone():
    rep = coefficient_report(CharPoly((0, 1, -5, 1)))
    assert not rep.decreasing_abs and rep.unimodal_abs and rep.peak_index == 2
    assert not coefficient_report(CharPoly((0, 5, 1, 1))).alternating_signs


def test_decreasing_implies_unimodal_over_order_seven():
    for s in G7.read_text().split():
        rep = coefficient_report(dl_char_poly(parse_graph6(s)))
        assert rep.decreasing_abs and rep.unimodal_abs


def test_second_eigenvalue_bound():
    assert dl_second_eigenvalue_bound(Graph.complete(4))
    assert dl_second_eigenvalue_bound(Graph.path(3))
    assert dl_spectrum(Graph.path(3)).matches([0, 3, 5], 1e-9)


# -- trees ---------------------------------------------------------------------------------

def test_normalized_coefficients_p2():
    assert normalized_tree_coefficients(Graph.path(2)) == (Fraction(1),)


def test_normalized_coefficients_p4_against_leibniz():
    t = Graph.path(4)
    d = all_pairs_distances(t)
    p = leibniz_char_poly(d.tolist())
    n = 4
    delta = [(-1) ** n * c for c in p]
    expected = tuple(Fraction((-1) ** (n - 1) * delta[k], 2 ** (n - k - 2)) for k in range(n - 1))
    got = normalized_tree_coefficients(t)
    assert got == expected
    assert all(x > 0 for x in got)


def test_normalized_coefficients_reject_non_trees():
    with pytest.raises(ValueError):
        normalized_tree_coefficients(Graph.cycle(4))


def test_path_20_peak():
    d = normalized_tree_coefficients(Graph.path(20))
    assert max(range(len(d)), key=lambda k: d[k]) > 10


# -- twins ----------------------------------------------------------------------------------

def test_twin_eigenstructure_k4_minus_edge():
    g = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    rec = verify_twin_eigenstructure(g, 0, 1)
    assert rec.transmission == 4 and rec.ok
    assert 6 in [round(v) for v in dl_spectrum(g).values]


def test_twin_eigenstructure_star():
    rec = verify_twin_eigenstructure(Graph.star(3), 1, 2)
    assert rec.ok
    assert any(abs(v - (rec.transmission + 2)) < 1e-9 for v in dl_spectrum(Graph.star(3)).values)


def test_twin_eigenstructure_rejects_non_twins():
    with pytest.raises(ValueError):
        verify_twin_eigenstructure(Graph.path(4), 0, 3)


def test_twin_eigenstructure_random_planted():
    rng = random.Random(21)
    for _ in range(40):
        g = random_connected_graph(rng, rng.randrange(2, 12), 0.3)
        v = rng.randrange(g.order)
        h = twin_vertex(g, v)
        assert verify_twin_eigenstructure(h, v, g.order).ok


# -- structural properties -----------------------------------------------------------------------

def test_constant_and_linear_coefficients():
    rng = random.Random(8)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randrange(2, 14), 0.25)
        p = dl_char_poly(g)
        assert p[0] == 0 and p[1] != 0


def test_eigenvalue_sum_is_twice_wiener():
    rng = random.Random(10)
    for _ in range(60):
        g = random_connected_graph(rng, rng.randrange(2, 20), 0.2)
        vals = dl_spectrum(g).values
        w = wiener_index(g)
        assert abs(sum(vals) - 2 * w) <= 1e-6 * max(1, 2 * w)
        assert abs(vals[0]) <= 1e-9 * max(1, w) and min(vals) >= -1e-9 * max(1, w)


def test_transmission_regular_spectra_relation():
    for g in [shrikhande(), hamming(2, 4), triangular(6), circulant(16, [1, 2, 8]), transmission_regular_family(5)]:
        d = all_pairs_distances(g)
        t = int(transmissions(d)[0])
        dist_vals = sorted(np.linalg.eigvalsh(d.astype(float)), reverse=True)
        dl_vals = dl_spectrum(g).values
        for k in range(1, g.order):
            assert abs(dl_vals[k] - (t - dist_vals[k])) <= 1e-8


def test_coefficients_are_signed_elementary_symmetric_functions():
    rng = random.Random(12)
    for _ in range(30):
        g = random_connected_graph(rng, rng.randrange(2, 11), 0.3)
        n = g.order
        p = dl_char_poly(g)
        nonzero = np.array(dl_spectrum(g).values[1:])
        # e_j of the nonzero eigenvalues via the polynomial prod (x - lambda)
        e = np.poly(nonzero)  # leading 1, then -e1, e2, ...
        for k in range(1, n + 1):
            j = n - k
            approx = e[j]  # coefficient of x^(n-1-j) in prod, i.e. x^k in p after multiplying by x
            exact = p[k]
            assert abs(approx - exact) <= 1e-4 * max(1, abs(exact))


def test_distance_laplacian_from_matrix_directly():
    d = np.array([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert distance_laplacian(d).tolist() == [[3, -1, -2], [-1, 2, -1], [-2, -1, 3]]
