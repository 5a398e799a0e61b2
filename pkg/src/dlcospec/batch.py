"""Vectorized graph6 decoding, distances and exact polynomials for census work.

Everything here processes a stack of same-order graphs at once.  The
polynomial routine runs Faddeev-LeVerrier in int64 only for matrices whose
a-priori bound on every intermediate value fits in 62 bits; the rest go
through the arbitrary-precision :func:`dlcospec.spectra.char_poly`.
"""
from __future__ import annotations

from math import log2
from typing import Sequence

import numpy as np

from .graph import Graph6Error, parse_graph6
from .spectra import char_poly

_INT64_BITS = 62


def _triu_order(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the upper triangle in graph6 bit order."""
    ii, jj = [], []
    for j in range(1, n):
        for i in range(j):
            ii.append(i)
            jj.append(j)
    return np.array(ii, dtype=np.intp), np.array(jj, dtype=np.intp)


def decode_graph6_batch(lines: Sequence[str], n: int) -> np.ndarray:
    """Adjacency stack ``(N, n, n)`` of uint8 for short-header graph6 lines of order n."""
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    width = 1 + nchars
    if not lines:
        return np.zeros((0, n, n), dtype=np.uint8)
    raw = np.frombuffer("".join(lines).encode("ascii"), dtype=np.uint8)
    if raw.size != width * len(lines):
        # fall back to the checked scalar decoder to locate the problem
        for s in lines:
            parse_graph6(s)
        raise Graph6Error("inconsistent line lengths in batch", 0)
    raw = raw.reshape(len(lines), width)
    if (raw[:, 0] != n + 63).any() or (raw < 63).any() or (raw > 126).any():
        for s in lines:
            parse_graph6(s)
        raise Graph6Error("bad header in batch", 0)
    body = raw[:, 1:] - 63
    bitstream = np.unpackbits(body[:, :, None], axis=2)[:, :, 2:].reshape(len(lines), 6 * nchars)
    ii, jj = _triu_order(n)
    adj = np.zeros((len(lines), n, n), dtype=np.uint8)
    adj[:, ii, jj] = bitstream[:, :nbits]
    adj[:, jj, ii] = bitstream[:, :nbits]
    return adj


def distances_batch(adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs distances by breadth-first layering on the whole stack.

    Returns ``(dist, connected)``; rows of disconnected graphs are meaningless.
    """
    count, n, _ = adj.shape
    a = adj.astype(np.int32)
    dist = np.zeros((count, n, n), dtype=np.int64)
    reach = np.broadcast_to(np.eye(n, dtype=bool), (count, n, n)).copy()
    frontier = reach.astype(np.int32)
    for d in range(1, n):
        nxt = (frontier @ a > 0) & ~reach
        if not nxt.any():
            break
        dist[nxt] = d
        reach |= nxt
        frontier = nxt.astype(np.int32)
    connected = reach.all(axis=(1, 2))
    return dist, connected


def distance_laplacian_batch(dist: np.ndarray) -> np.ndarray:
    lap = -dist.copy()
    idx = np.arange(dist.shape[1])
    lap[:, idx, idx] = dist.sum(axis=2)
    return lap


def _fits_int64(lap: np.ndarray) -> np.ndarray:
    """Per-matrix guard for the int64 Faddeev-LeVerrier path.

    With ``R`` the max absolute row sum (>= spectral radius of a symmetric
    matrix) every intermediate is bounded by ``n * 2**n * R**n``.
    """
    n = lap.shape[1]
    r = np.abs(lap).sum(axis=2).max(axis=1).astype(float)
    r = np.maximum(r, 1.0)
    bound_bits = log2(n) + n + n * np.log2(r)
    return bound_bits < _INT64_BITS


def char_poly_batch(mats: np.ndarray) -> list[tuple[int, ...]]:
    """Exact characteristic polynomials (coefficients c0..cn) of a matrix stack."""
    count, n, _ = mats.shape
    out: list[tuple[int, ...] | None] = [None] * count
    if count == 0:
        return []
    safe = _fits_int64(mats)
    idx = np.nonzero(safe)[0]
    if idx.size:
        a = mats[idx].astype(np.int64)
        coeffs = np.zeros((idx.size, n + 1), dtype=np.int64)
        coeffs[:, n] = 1
        eye = np.eye(n, dtype=np.int64)
        mk = np.zeros_like(a)
        for k in range(1, n + 1):
            mk = a @ mk + coeffs[:, n - k + 1, None, None] * eye
            tr = np.einsum("bij,bji->b", a, mk)
            if (tr % k).any():
                raise ArithmeticError(f"inexact Faddeev-LeVerrier step {k}")
            coeffs[:, n - k] = -tr // k
        for pos, row in zip(idx.tolist(), coeffs.tolist()):
            out[pos] = tuple(row)
    for pos in np.nonzero(~safe)[0].tolist():
        out[pos] = char_poly(mats[pos]).coeffs
    return out  # type: ignore[return-value]

