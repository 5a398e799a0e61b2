"""Cospectral-class discovery over graph collections.

Graphs are keyed by ``(order, exact distance Laplacian polynomial)``.  Keys
live in a dict, so the hash only pre-filters and full tuple equality decides.
Buckets with two or more graphs are split into isomorphism classes by
canonical form; classes with at least two members are reported.
"""
from __future__ import annotations

import gzip
import heapq
import itertools
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .batch import char_poly_batch, decode_graph6_batch, distance_laplacian_batch, distances_batch
from .graph import Graph, Graph6Error, encode_graph6, parse_graph6
from .invariants import LIMITED_FIELDS, PROFILE_FIELDS, ParameterProfile, profile
from .isomorphism import canonical_form
from .spectra import CharPoly, dl_char_poly

log = logging.getLogger(__name__)

ENUMERATION_LIMIT = 7
SPILL_ENV = "DLCOSPEC_SPILL_DIR"
DEFAULT_CHUNK = 4096
DEFAULT_SPILL_RECORDS = 2_000_000


class CensusError(ValueError):
    pass


class CorpusError(CensusError):
    """Too many unreadable lines in a corpus file."""


class ClassFileError(CensusError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# -- enumeration ---------------------------------------------------------------

def enumerate_connected(n: int, limit: int = ENUMERATION_LIMIT) -> Iterator[Graph]:
    """One graph per isomorphism class of connected graphs of order ``n``.

    Built by vertex augmentation: every connected graph has a vertex whose
    removal leaves it connected, so attaching a new vertex to every nonempty
    neighbor set of every smaller representative reaches all classes;
    canonical forms remove duplicates.  Output is sorted by canonical form.
    """
    if n < 1:
        raise ValueError("order must be positive")
    if n > limit:
        raise CensusError(f"built-in enumeration stops at order {limit}; ingest an external graph6 corpus instead")
    level = {canonical_form(Graph.empty(1)): Graph.empty(1)}
    for m in range(2, n + 1):
        nxt: dict[bytes, Graph] = {}
        for g in level.values():
            for mask in range(1, 1 << (m - 1)):
                h = Graph(m, tuple(r | ((mask >> i & 1) << (m - 1)) for i, r in enumerate(g.rows)) + (mask,))
                key = canonical_form(h)
                if key not in nxt:
                    nxt[key] = h
        level = nxt
    for key in sorted(level):
        yield parse_graph6(key.decode("ascii"))


# -- corpus ingestion --------------------------------------------------------------

@dataclass
class IngestStats:
    lines: int = 0
    graphs: int = 0
    disconnected: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)


def _open_text(path: str | os.PathLike):
    p = Path(path)
    with open(p, "rb") as fh:
        magic = fh.read(2)
    if magic == b"\x1f\x8b":
        return gzip.open(p, "rt", encoding="ascii", errors="replace")
    return open(p, "rt", encoding="ascii", errors="replace")


def ingest_corpus(
    path: str | os.PathLike,
    max_errors: int = 100,
    stats: IngestStats | None = None,
) -> Iterator[Graph]:
    """Stream connected graphs from a graph6 file (optionally gzip-compressed).

    Blank lines and ``>>graph6<<`` headers are ignored.  Malformed lines are
    logged with their line number and counted in ``stats``; more than
    ``max_errors`` of them raises :class:`CorpusError`.  Disconnected graphs
    are skipped and counted.
    """
    st = stats if stats is not None else IngestStats()
    with _open_text(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            st.lines += 1
            text = raw.strip()
            if text.startswith(">>graph6<<"):
                text = text[len(">>graph6<<"):]
            if not text:
                continue
            try:
                g = parse_graph6(text)
            except (Graph6Error, ValueError) as exc:
                st.errors.append((lineno, str(exc)))
                log.warning("%s:%d: %s", path, lineno, exc)
                if len(st.errors) > max_errors:
                    raise CorpusError(f"{path}: more than {max_errors} malformed lines (last at line {lineno})") from exc
                continue
            if not g.is_connected():
                st.disconnected += 1
                continue
            st.graphs += 1
            yield g
    if st.disconnected:
        log.warning("%s: skipped %d disconnected graphs", path, st.disconnected)


# -- census ------------------------------------------------------------------------

@dataclass(frozen=True)
class CospectralClass:
    order: int
    poly: CharPoly
    members: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.members) < 2:
            raise CensusError("a cospectral class needs at least two members")
        if len(set(self.members)) != len(self.members):
            raise CensusError("duplicate members in a cospectral class")
        if self.poly.degree != self.order:
            raise CensusError("polynomial degree differs from the order")

    def graphs(self) -> list[Graph]:
        return [parse_graph6(m) for m in self.members]

    def to_json(self) -> str:
        return json.dumps(
            {"order": self.order, "poly": [str(c) for c in self.poly.coeffs], "members": list(self.members)}
        )


def _keys_for_chunk(lines: Sequence[str]) -> list[tuple[int, tuple[int, ...], str]]:
    """(order, coefficients, graph6) for every connected graph in the chunk."""
    out = []
    by_order: dict[int, list[str]] = {}
    for s in lines:
        c = ord(s[0]) - 63 if s else -1
        if 1 <= c <= 62:
            by_order.setdefault(c, []).append(s)
        else:
            g = parse_graph6(s)
            if g.is_connected():
                out.append((g.order, dl_char_poly(g).coeffs, s))
    for n in sorted(by_order):
        group = by_order[n]
        adj = decode_graph6_batch(group, n)
        dist, connected = distances_batch(adj)
        keep = np.nonzero(connected)[0]
        polys = char_poly_batch(distance_laplacian_batch(dist[keep]))
        out.extend((n, p, group[i]) for i, p in zip(keep.tolist(), polys))
    return out


def _as_graph6(item: Graph | str) -> str:
    return encode_graph6(item) if isinstance(item, Graph) else item.strip()


def _chunks(items: Iterable[Graph | str], size: int) -> Iterator[list[str]]:
    it = iter(items)
    while True:
        chunk = [_as_graph6(x) for x in itertools.islice(it, size)]
        if not chunk:
            return
        yield chunk


def _key_text(order: int, coeffs: tuple[int, ...]) -> str:
    return f"{order}|{','.join(map(str, coeffs))}"


def _parse_key_text(text: str) -> tuple[int, tuple[int, ...]]:
    order, coeffs = text.split("|")
    return int(order), tuple(int(c) for c in coeffs.split(","))


class _Reducer:
    """Collects (key, graph6) records; optionally spills sorted runs to disk."""

    def __init__(self, spill_dir: str | None, spill_records: int):
        self.buckets: dict[tuple[int, tuple[int, ...]], list[str]] = {}
        self.spill_dir = spill_dir
        self.spill_records = spill_records
        self.buffered = 0
        self.runs: list[str] = []

    def add(self, records: list[tuple[int, tuple[int, ...], str]]) -> None:
        for n, coeffs, g6 in records:
            self.buckets.setdefault((n, coeffs), []).append(g6)
        self.buffered += len(records)
        if self.spill_dir is not None and self.buffered >= self.spill_records:
            self._spill()

    def _spill(self) -> None:
        fd, path = tempfile.mkstemp(prefix="census-run-", suffix=".txt", dir=self.spill_dir)
        lines = sorted(f"{_key_text(*k)}\t{g6}\n" for k, members in self.buckets.items() for g6 in members)
        with os.fdopen(fd, "w") as fh:
            fh.writelines(lines)
        self.runs.append(path)
        self.buckets.clear()
        self.buffered = 0

    def groups(self) -> Iterator[tuple[tuple[int, tuple[int, ...]], list[str]]]:
        if not self.runs:
            for k, members in self.buckets.items():
                if len(members) > 1:
                    yield k, members
            return
        if self.buckets:
            self._spill()
        handles = [open(p) for p in self.runs]
        try:
            merged = heapq.merge(*handles)
            for key, grp in itertools.groupby(merged, key=lambda line: line.split("\t", 1)[0]):
                members = [line.rstrip("\n").split("\t", 1)[1] for line in grp]
                if len(members) > 1:
                    yield _parse_key_text(key), members
        finally:
            for h in handles:
                h.close()
            for p in self.runs:
                os.unlink(p)
            self.runs = []


def _split_bucket(members: list[str]) -> list[str]:
    forms = {canonical_form(parse_graph6(m)).decode("ascii") for m in members}
    return sorted(forms)


def run_census(
    graphs: Iterable[Graph | str],
    shards: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
    spill_dir: str | None = None,
    spill_records: int = DEFAULT_SPILL_RECORDS,
) -> list[CospectralClass]:
    """Every set of two or more non-isomorphic graphs sharing an exact polynomial.

    ``graphs`` may hold :class:`Graph` values or graph6 strings of any orders;
    disconnected graphs are ignored.  Members are reported as canonical graph6
    strings and classes are sorted by (order, coefficients), so the result does
    not depend on ``shards`` or on input order.  When ``spill_dir`` (or the
    ``DLCOSPEC_SPILL_DIR`` environment variable) is set, buffered records are
    written as sorted runs every ``spill_records`` graphs and merged at the end.
    """
    if shards < 1:
        raise ValueError("shards must be at least 1")
    spill = spill_dir if spill_dir is not None else os.environ.get(SPILL_ENV)
    reducer = _Reducer(spill, spill_records)
    chunks = _chunks(graphs, chunk_size)
    if shards == 1:
        for chunk in chunks:
            reducer.add(_keys_for_chunk(chunk))
    else:
        with ProcessPoolExecutor(max_workers=shards) as pool:
            for records in pool.map(_keys_for_chunk, chunks):
                reducer.add(records)
    classes = []
    for (n, coeffs), members in reducer.groups():
        forms = _split_bucket(members)
        if len(forms) > 1:
            classes.append(CospectralClass(n, CharPoly(coeffs), tuple(forms)))
    classes.sort(key=lambda c: (c.order, c.poly.coeffs))
    return classes


# -- persistence -------------------------------------------------------------------------

def save_classes(classes: Iterable[CospectralClass], path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        for c in classes:
            fh.write(c.to_json() + "\n")


def _class_from_record(rec, lineno: int) -> CospectralClass:
    if not isinstance(rec, dict) or set(rec) != {"order", "poly", "members"}:
        raise ClassFileError("record must have exactly the keys order, poly, members", lineno)
    order, poly, members = rec["order"], rec["poly"], rec["members"]
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise ClassFileError("order must be a positive integer", lineno)
    if not isinstance(poly, list) or not all(isinstance(c, str) for c in poly):
        raise ClassFileError("poly must be a list of decimal strings", lineno)
    try:
        coeffs = tuple(int(c) for c in poly)
        cp = CharPoly(coeffs)
    except ValueError as exc:
        raise ClassFileError(f"bad polynomial: {exc}", lineno) from exc
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise ClassFileError("members must be a list of graph6 strings", lineno)
    for m in members:
        try:
            g = parse_graph6(m)
        except Graph6Error as exc:
            raise ClassFileError(f"bad member {m!r}: {exc}", lineno) from exc
        if g.order != order:
            raise ClassFileError(f"member {m!r} has order {g.order}, expected {order}", lineno)
    try:
        return CospectralClass(order, cp, tuple(members))
    except CensusError as exc:
        raise ClassFileError(str(exc), lineno) from exc


def load_classes(path: str | os.PathLike) -> list[CospectralClass]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ClassFileError(f"invalid JSON: {exc.msg}", lineno) from exc
            out.append(_class_from_record(rec, lineno))
    return out


# -- preservation report ---------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    class_index: int
    members: tuple[str, str]
    values: tuple[object, object]


@dataclass
class ParameterStatus:
    name: str
    pairs_compared: int = 0
    differing_pairs: int = 0
    witnesses: list[Witness] = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.differing_pairs:
            return "witness-of-difference"
        return "always-equal-in-sample" if self.pairs_compared else "not-evaluated"


@dataclass
class PreservationReport:
    classes: int
    parameters: dict[str, ParameterStatus]

    def status(self, name: str) -> str:
        return self.parameters[name].status

    def to_markdown(self) -> str:
        lines = [
            f"Classes examined: {self.classes}",
            "",
            "| parameter | status | differing pairs | pairs compared | example |",
            "|---|---|---|---|---|",
        ]
        for name in PROFILE_FIELDS:
            p = self.parameters[name]
            example = ""
            if p.witnesses:
                w = p.witnesses[0]
                example = f"`{w.members[0]}` {_show(w.values[0])} vs `{w.members[1]}` {_show(w.values[1])}"
            lines.append(f"| {name} | {p.status} | {p.differing_pairs} | {p.pairs_compared} | {example} |")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "classes": self.classes,
            "parameters": {
                name: {
                    "status": p.status,
                    "pairs_compared": p.pairs_compared,
                    "differing_pairs": p.differing_pairs,
                    "witnesses": [
                        {"class": w.class_index, "members": list(w.members), "values": [_show(v) for v in w.values]}
                        for w in p.witnesses
                    ],
                }
                for name, p in self.parameters.items()
            },
        }


def _show(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(_show(x) for x in v) + ")"
    return str(v)


def preservation_report(
    classes: Sequence[CospectralClass],
    max_witnesses: int = 3,
    profiles: dict[str, ParameterProfile] | None = None,
) -> PreservationReport:
    """Compare every parameter over every pair of members inside each class."""
    if not classes:
        raise CensusError("preservation report needs at least one class")
    cache = profiles if profiles is not None else {}
    stats = {name: ParameterStatus(name) for name in PROFILE_FIELDS}
    for idx, c in enumerate(classes):
        profs = []
        for m in c.members:
            if m not in cache:
                cache[m] = profile(parse_graph6(m))
            profs.append(cache[m])
        for (ma, pa), (mb, pb) in itertools.combinations(zip(c.members, profs), 2):
            for name in PROFILE_FIELDS:
                va, vb = getattr(pa, name), getattr(pb, name)
                if name in LIMITED_FIELDS and (va is None or vb is None):
                    continue
                st = stats[name]
                st.pairs_compared += 1
                if va != vb:
                    st.differing_pairs += 1
                    if len(st.witnesses) < max_witnesses:
                        st.witnesses.append(Witness(idx, (ma, mb), (va, vb)))
    return PreservationReport(len(classes), stats)
