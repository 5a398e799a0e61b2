"""Distance Laplacian matrices, exact characteristic polynomials and spectra."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import Graph, add_edge, all_pairs_distances
from .isomorphism import are_isomorphic

EIGEN_TOL = 1e-9
GROUP_TOL = 1e-6


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial ``sum(coeffs[k] * x**k)``; ``coeffs[0]`` first."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("characteristic polynomials are monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divide_linear(self, root: int) -> tuple["CharPoly", int]:
        """Synthetic division by ``x - root``: returns (quotient, remainder)."""
        out = []
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * root + c
            out.append(acc)
        remainder = out.pop()
        return CharPoly(tuple(reversed(out))), remainder

    def serialize(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    @classmethod
    def parse(cls, text: str) -> "CharPoly":
        return cls(tuple(int(c) for c in text.split(",")))

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "x" if k == 1 else f"x^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending."""

    values: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.values)

    def groups(self, tol: float = GROUP_TOL) -> list[tuple[float, int]]:
        """(value, multiplicity) pairs; consecutive values within ``tol`` merge."""
        out: list[list] = []
        for v in self.values:
            if out and abs(v - out[-1][2]) <= tol:
                out[-1][1] += 1
                out[-1][2] = v
                out[-1][0] += (v - out[-1][0]) / out[-1][1]
            else:
                out.append([v, 1, v])
        return [(mean, m) for mean, m, _ in out]

    def to_json(self, tol: float = GROUP_TOL) -> str:
        return json.dumps([{"value": v, "multiplicity": m} for v, m in self.groups(tol)])

    def matches(self, expected: Sequence[float], tol: float) -> bool:
        exp = sorted(expected)
        return len(exp) == len(self.values) and all(abs(a - b) <= tol for a, b in zip(self.values, exp))


# -- matrices ---------------------------------------------------------------

def transmissions(d: np.ndarray) -> np.ndarray:
    t = np.asarray(d, dtype=np.int64).sum(axis=1)
    t.setflags(write=False)
    return t


def distance_laplacian(d: np.ndarray) -> np.ndarray:
    d = np.asarray(d, dtype=np.int64)
    m = np.diag(d.sum(axis=1)) - d
    m.setflags(write=False)
    return m


def dl_matrix(g: Graph) -> np.ndarray:
    return distance_laplacian(all_pairs_distances(g))


# -- characteristic polynomials ---------------------------------------------

def char_poly(m) -> CharPoly:
    """Exact ``det(xI - m)`` for an integer matrix by Faddeev-LeVerrier.

    Arithmetic uses Python integers, so there is no overflow; each division by
    the step index is checked to be exact.
    """
    a = np.array([[int(x) for x in row] for row in np.asarray(m)], dtype=object)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ident = np.zeros((n, n), dtype=object)
    for i in range(n):
        ident[i, i] = 1
    mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        mk = a.dot(mk) + coeffs[n - k + 1] * ident
        tr = sum(int(x) for x in np.diag(a.dot(mk)))
        q, r = divmod(-tr, k)
        if r:
            raise ArithmeticError(f"inexact Faddeev-LeVerrier step {k}; matrix is not integral")
        coeffs[n - k] = q
    return CharPoly(tuple(int(c) for c in coeffs))


def dl_char_poly(g: Graph) -> CharPoly:
    return char_poly(dl_matrix(g))


def eigenvalues_float(m) -> Spectrum:
    vals = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    return Spectrum(tuple(float(v) for v in np.sort(vals)))


def dl_spectrum(g: Graph) -> Spectrum:
    return eigenvalues_float(dl_matrix(g))


def are_dl_cospectral(g: Graph, h: Graph, strict: bool = True) -> bool:
    """Equal exact distance Laplacian polynomials and, if ``strict``, non-isomorphic."""
    if g.order != h.order:
        return False
    if dl_char_poly(g) != dl_char_poly(h):
        return False
    return not (strict and are_isomorphic(g, h))


# -- transmission parameters ------------------------------------------------

def wiener_index(g: Graph) -> int:
    return int(all_pairs_distances(g).sum()) // 2


def average_transmission(g: Graph) -> Fraction:
    return Fraction(int(np.trace(dl_matrix(g))), g.order)


def is_transmission_regular(g: Graph) -> bool:
    t = transmissions(all_pairs_distances(g))
    return bool((t == t[0]).all())


# -- coefficient analysis ---------------------------------------------------

@dataclass(frozen=True)
class CoefficientReport:
    alternating_signs: bool
    log_concave: bool
    unimodal_abs: bool
    decreasing_abs: bool
    peak_index: int


def _is_unimodal(seq: Sequence) -> bool:
    i = 0
    while i + 1 < len(seq) and seq[i] <= seq[i + 1]:
        i += 1
    while i + 1 < len(seq) and seq[i] >= seq[i + 1]:
        i += 1
    return i == len(seq) - 1


def coefficient_report(p: CharPoly) -> CoefficientReport:
    """Sign, log-concavity and monotonicity of the coefficients.

    The absolute-value checks run over ``k = lo..n`` where ``lo`` is the first
    nonzero coefficient (``lo = 1`` for the distance Laplacian of a connected
    graph).
    """
    c = p.coeffs
    n = p.degree
    nonzero = [x for x in c if x]
    alternating = all((a > 0) != (b > 0) for a, b in zip(nonzero, nonzero[1:]))
    log_concave = all(c[j] * c[j] >= c[j - 1] * c[j + 1] for j in range(1, n))
    lo = next(k for k, x in enumerate(c) if x)
    mags = [abs(x) for x in c[lo:]]
    decreasing = all(a >= b for a, b in zip(mags, mags[1:]))
    peak = lo + mags.index(max(mags))
    return CoefficientReport(alternating, log_concave, _is_unimodal(mags), decreasing, peak)


def dl_second_eigenvalue_bound(g: Graph, tol: float = EIGEN_TOL) -> bool:
    """Whether the second-smallest distance Laplacian eigenvalue is at least n."""
    return dl_spectrum(g).values[1] >= g.order - tol if g.order > 1 else True


def normalized_tree_coefficients(t: Graph) -> tuple[Fraction, ...]:
    """``d_k = (-1)**(n-1) * delta_k / 2**(n-k-2)`` for ``k = 0..n-2``.

    ``delta_k`` is the coefficient of ``x**k`` in ``det(D - xI)`` where ``D`` is
    the distance matrix (not the Laplacian) of the tree.
    """
    n = t.order
    if n < 2 or t.edge_count != n - 1 or not t.is_connected():
        raise ValueError("normalized coefficients need a tree on at least two vertices")
    p = char_poly(all_pairs_distances(t))
    # det(D - xI) = (-1)^n det(xI - D)
    delta = [(-1) ** n * c for c in p.coeffs]
    return tuple(Fraction((-1) ** (n - 1) * delta[k], 2 ** (n - k - 2)) for k in range(n - 1))


# -- twins -------------------------------------------------------------------

@dataclass(frozen=True)
class TwinEigenCheck:
    transmission: int
    eigvec_before: bool
    eigvec_after: bool
    quotients_equal: bool

    @property
    def ok(self) -> bool:
        return self.eigvec_before and self.eigvec_after and self.quotients_equal


def verify_twin_eigenstructure(g: Graph, v1: int, v2: int) -> TwinEigenCheck:
    """Exact checks of the twin eigenvector before and after joining the twins."""
    if v1 == v2 or g.has_edge(v1, v2) or g.rows[v1] != g.rows[v2]:
        raise ValueError(f"vertices {v1} and {v2} are not independent twins")
    before = dl_matrix(g)
    g2 = add_edge(g, v1, v2)
    after = dl_matrix(g2)
    t = int(before[v1, v1])
    x = np.zeros(g.order, dtype=np.int64)
    x[v1], x[v2] = 1, -1
    ok_before = bool((before @ x == (t + 2) * x).all())
    ok_after = bool((after @ x == t * x).all())
    q1, r1 = char_poly(before).divide_linear(t + 2)
    q2, r2 = char_poly(after).divide_linear(t)
    return TwinEigenCheck(t, ok_before, ok_after, r1 == 0 and r2 == 0 and q1 == q2)
