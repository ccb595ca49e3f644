"""Ground types: vertex sets, graphs, uniform hypergraphs, set systems, partitions.

Vertex sets are Python integers used as bit vectors, so unions, intersections
and symmetric differences are word-parallel and ``int.bit_count`` gives
cardinalities.  Densities are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

log = logging.getLogger(__name__)

__all__ = [
    "VertexSet",
    "Graph",
    "Hypergraph",
    "SetSystem",
    "Partition",
    "InputError",
    "Refusal",
    "BudgetExceeded",
    "VerificationError",
    "as_fraction",
    "parse_rational",
    "parse_graph",
    "parse_hypergraph",
    "format_graph",
    "tuple_neighborhood",
    "cross_edge_count",
    "density",
    "is_epsilon_homogeneous",
    "symmetric_difference_size",
    "iter_bits",
    "rank_subset",
    "unrank_subset",
]


class InputError(ValueError):
    """Malformed input or violated precondition on user-supplied data."""


class Refusal(Exception):
    """A precondition of the procedure does not hold for this instance.

    Refusals are answers, not failures: the CLI maps them to exit code 2.
    """

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


class BudgetExceeded(ValueError):
    """An exhaustive enumeration would exceed its configured budget."""


class VerificationError(RuntimeError):
    """An internal re-verification failed.  Always a bug."""


def as_fraction(x) -> Fraction:
    """Exact rational from Fraction, int, ``"a/b"`` string, or float literal.

    Floats go through ``repr`` so ``0.2`` means 1/5, not the nearest double.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def parse_rational(text: str) -> Fraction:
    """Parse ``a/b`` or an integer; decimals are rejected."""
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise InputError(f"rational must be written a/b, got {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# ---------------------------------------------------------------------------
# VertexSet


@dataclass(frozen=True, slots=True)
class VertexSet:
    universe_size: int
    bits: int = 0

    def __post_init__(self):
        if self.universe_size < 0:
            raise ValueError("negative universe size")
        if self.bits < 0 or self.bits >> self.universe_size:
            raise ValueError("member index outside universe")

    @classmethod
    def of(cls, universe_size: int, members: Iterable[int]) -> "VertexSet":
        bits = 0
        for v in members:
            if not 0 <= v < universe_size:
                raise ValueError(f"vertex {v} outside universe of size {universe_size}")
            bits |= 1 << v
        return cls(universe_size, bits)

    @classmethod
    def full(cls, universe_size: int) -> "VertexSet":
        return cls(universe_size, (1 << universe_size) - 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __contains__(self, v: int) -> bool:
        return 0 <= v < self.universe_size and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.bits))

    def _check(self, other: "VertexSet") -> None:
        if self.universe_size != other.universe_size:
            raise ValueError(
                f"universe mismatch: {self.universe_size} vs {other.universe_size}"
            )

    def __and__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.universe_size, self.bits & other.bits)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.universe_size, self.bits | other.bits)

    def __xor__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.universe_size, self.bits ^ other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        self._check(other)
        return VertexSet(self.universe_size, self.bits & ~other.bits)

    def issubset(self, other: "VertexSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    def __repr__(self) -> str:
        return f"VertexSet({self.universe_size}, {set(self.members())})"


def symmetric_difference_size(a: VertexSet, b: VertexSet) -> int:
    if a.universe_size != b.universe_size:
        raise ValueError(f"universe mismatch: {a.universe_size} vs {b.universe_size}")
    return (a.bits ^ b.bits).bit_count()


# ---------------------------------------------------------------------------
# (k-1)-subset ranking (colex), used as the ground set of hypergraph links


def rank_subset(t: Sequence[int]) -> int:
    """Colex rank of a sorted tuple of distinct non-negative integers."""
    return sum(comb(c, i + 1) for i, c in enumerate(t))


def unrank_subset(r: int, size: int) -> tuple[int, ...]:
    out = []
    for i in range(size, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= r:
            c += 1
        out.append(c)
        r -= comb(c, i)
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# Graph


def _bitsets_from_matrix(a: np.ndarray) -> tuple[int, ...]:
    if a.shape[0] == 0:
        return ()
    packed = np.packbits(a, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def _matrix_from_bitsets(n: int, rows: Sequence[int]) -> np.ndarray:
    nbytes = (n + 7) // 8
    if n == 0:
        return np.zeros((0, 0), dtype=bool)
    buf = b"".join(r.to_bytes(nbytes, "little") for r in rows)
    packed = np.frombuffer(buf, dtype=np.uint8).reshape(len(rows), nbytes)
    return np.unpackbits(packed, axis=1, bitorder="little", count=n).astype(bool)


class Graph:
    """Simple undirected graph with adjacency stored as bitsets.

    Immutable after construction.  ``matrix`` is a lazily built boolean
    adjacency matrix used by the vectorised kernels.
    """

    k = 2

    def __init__(self, n: int, adj: Sequence[int], *, _trusted: bool = False):
        self.n = n
        self.adj: tuple[int, ...] = tuple(adj)
        if not _trusted:
            self._validate()

    def _validate(self) -> None:
        if len(self.adj) != self.n:
            raise ValueError("adjacency length differs from n")
        top = 1 << self.n
        for v, row in enumerate(self.adj):
            if row < 0 or row >= top:
                raise ValueError(f"neighbour of {v} outside vertex range")
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for u in iter_bits(row):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u},{v}) outside range n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, _trusted=True)

    @classmethod
    def from_matrix(cls, a) -> "Graph":
        a = np.asarray(a, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if a.diagonal().any():
            raise ValueError("adjacency matrix has self-loops")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix is not symmetric")
        g = cls(a.shape[0], _bitsets_from_matrix(a), _trusted=True)
        g.__dict__["matrix"] = a
        return g

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, _trusted=True)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << v) for v in range(n)], _trusted=True)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = _matrix_from_bitsets(self.n, self.adj)
        m.flags.writeable = False
        return m

    @cached_property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.adj) // 2

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))
        )

    def edge_array(self) -> np.ndarray:
        iu = np.triu_indices(self.n, 1)
        mask = self.matrix[iu]
        return np.stack([iu[0][mask], iu[1][mask]], axis=1).astype(np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighborhood(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def links(self) -> tuple[int, ...]:
        """Per-vertex neighbourhoods as bitsets (the k=2 link)."""
        return self.adj

    @property
    def link_universe(self) -> int:
        return self.n

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full ^ r ^ (1 << v) for v, r in enumerate(self.adj)], _trusted=True)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled 0..len-1 in the given order."""
        idx = list(vertices)
        if len(idx) > 64:
            sub = self.matrix[np.ix_(idx, idx)]
            g = Graph(len(idx), _bitsets_from_matrix(sub), _trusted=True)
            g.__dict__["matrix"] = sub
            return g
        pos = {v: i for i, v in enumerate(idx)}
        adj = []
        for v in idx:
            row = 0
            for u in iter_bits(self.adj[v]):
                i = pos.get(u)
                if i is not None:
                    row |= 1 << i
            adj.append(row)
        return Graph(len(idx), adj, _trusted=True)

    def to_hypergraph(self) -> "Hypergraph":
        return Hypergraph(self.n, 2, self.edge_array())

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


# ---------------------------------------------------------------------------
# Hypergraph


class Hypergraph:
    """k-uniform hypergraph; edges held as a lexicographically sorted (m, k) array."""

    def __init__(self, n: int, k: int, edges):
        if k < 2:
            raise ValueError("uniformity must be at least 2")
        arr = np.asarray(edges, dtype=np.int64).reshape(-1, k)
        if arr.size:
            arr = np.sort(arr, axis=1)
            if (arr[:, 1:] == arr[:, :-1]).any():
                raise InputError("edge with a repeated vertex")
            if arr.min() < 0 or arr.max() >= n:
                raise InputError(f"edge vertex outside range n={n}")
            uniq = np.unique(arr, axis=0)
            if len(uniq) < len(arr):
                log.debug("collapsed %d duplicate edges", len(arr) - len(uniq))
            arr = uniq
        self.n = n
        self.k = k
        self._edges = arr
        self._edges.flags.writeable = False

    def edge_array(self) -> np.ndarray:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @cached_property
    def edges(self) -> frozenset[tuple[int, ...]]:
        return frozenset(tuple(int(x) for x in row) for row in self._edges)

    @cached_property
    def _tuple_index(self) -> dict[tuple[int, ...], int]:
        index: dict[tuple[int, ...], int] = {}
        k = self.k
        for row in self._edges.tolist():
            for j in range(k):
                key = tuple(row[:j] + row[j + 1:])
                index[key] = index.get(key, 0) | 1 << row[j]
        return index

    def tuple_neighborhood(self, t: Sequence[int]) -> VertexSet:
        key = tuple(sorted(t))
        if len(key) != self.k - 1:
            raise InputError(f"expected a {self.k - 1}-tuple, got {len(key)} vertices")
        if len(set(key)) != len(key):
            raise InputError("tuple has a repeated vertex")
        if any(not 0 <= v < self.n for v in key):
            raise InputError("tuple vertex outside range")
        return VertexSet(self.n, self._tuple_index.get(key, 0))

    @property
    def link_universe(self) -> int:
        return comb(self.n, self.k - 1)

    @cached_property
    def _links(self) -> tuple[int, ...]:
        links = [0] * self.n
        k = self.k
        for row in self._edges.tolist():
            for j in range(k):
                links[row[j]] |= 1 << rank_subset(row[:j] + row[j + 1:])
        return tuple(links)

    def links(self) -> tuple[int, ...]:
        """Per-vertex link: bitset over colex-ranked (k-1)-subsets completing an edge."""
        return self._links

    def to_graph(self) -> Graph:
        if self.k != 2:
            raise ValueError("only 2-uniform hypergraphs convert to graphs")
        return Graph.from_edges(self.n, map(tuple, self._edges.tolist()))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, k={self.k}, m={self.edge_count})"


def tuple_neighborhood(h, t: Sequence[int]) -> VertexSet:
    if isinstance(h, Graph):
        if len(t) != 1:
            raise InputError("graph tuples have exactly one vertex")
        v = t[0]
        if not 0 <= v < h.n:
            raise InputError("vertex outside range")
        return h.neighborhood(v)
    return h.tuple_neighborhood(t)


# ---------------------------------------------------------------------------
# SetSystem


@dataclass(frozen=True)
class SetSystem:
    universe_size: int
    family: tuple[VertexSet, ...]
    deduplicated: bool = False

    def __post_init__(self):
        for a in self.family:
            if a.universe_size != self.universe_size:
                raise ValueError("family member over a different universe")

    @classmethod
    def from_bitsets(cls, universe_size: int, rows: Iterable[int], deduplicated: bool = False):
        return cls(universe_size, tuple(VertexSet(universe_size, r) for r in rows), deduplicated)

    @classmethod
    def from_sets(cls, universe_size: int, sets: Iterable[Iterable[int]]):
        return cls(universe_size, tuple(VertexSet.of(universe_size, s) for s in sets))

    @property
    def bitsets(self) -> tuple[int, ...]:
        return tuple(a.bits for a in self.family)

    def dedup(self) -> "SetSystem":
        seen: dict[int, None] = {}
        for a in self.family:
            seen.setdefault(a.bits, None)
        return SetSystem.from_bitsets(self.universe_size, seen, deduplicated=True)

    def __len__(self) -> int:
        return len(self.family)


# ---------------------------------------------------------------------------
# Partition


@dataclass(frozen=True)
class Partition:
    n: int
    K: int
    assignment: tuple[int, ...]
    pure: tuple[bool, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.assignment) != self.n:
            raise ValueError("assignment length differs from n")
        for v, p in enumerate(self.assignment):
            if not 0 <= p < self.K:
                raise ValueError(f"vertex {v} assigned to part {p} outside 0..{self.K - 1}")
        if self.pure is not None and len(self.pure) != self.K:
            raise ValueError("pure flags must have one entry per part")

    @classmethod
    def from_parts(cls, n: int, parts: Sequence[Iterable[int]], pure=None) -> "Partition":
        assignment = [-1] * n
        for i, part in enumerate(parts):
            for v in part:
                if assignment[v] != -1:
                    raise ValueError(f"vertex {v} in two parts")
                assignment[v] = i
        if -1 in assignment:
            raise ValueError(f"vertex {assignment.index(-1)} unassigned")
        return cls(n, len(parts), tuple(assignment), None if pure is None else tuple(pure))

    @cached_property
    def part_sizes(self) -> tuple[int, ...]:
        sizes = [0] * self.K
        for p in self.assignment:
            sizes[p] += 1
        return tuple(sizes)

    @property
    def equitable(self) -> bool:
        s = self.part_sizes
        return not s or max(s) - min(s) <= 1

    def parts(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.K)]
        for v, p in enumerate(self.assignment):
            out[p].append(v)
        return out

    def part_set(self, i: int) -> VertexSet:
        return VertexSet.of(self.n, (v for v, p in enumerate(self.assignment) if p == i))

    def assignment_array(self) -> np.ndarray:
        return np.asarray(self.assignment, dtype=np.int64)


# ---------------------------------------------------------------------------
# Parsing


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read_header(lines) -> int:
    for lineno, line in lines:
        key, sep, value = line.partition("=")
        if not sep or key.strip() != "n":
            raise InputError(f"line {lineno}: expected header 'n=<int>', got {line!r}")
        try:
            n = int(value.strip())
        except ValueError:
            raise InputError(f"line {lineno}: bad vertex count {value.strip()!r}") from None
        if n < 0:
            raise InputError(f"line {lineno}: negative vertex count")
        return n
    raise InputError("missing header 'n=<int>'")


def _read_tuples(lines, n: int, k: int):
    for lineno, line in lines:
        fields = line.split()
        if len(fields) != k:
            raise InputError(f"line {lineno}: expected {k} vertices, got {len(fields)}")
        try:
            vs = [int(f) for f in fields]
        except ValueError:
            raise InputError(f"line {lineno}: non-integer vertex in {line!r}") from None
        for v in vs:
            if not 0 <= v < n:
                raise InputError(f"line {lineno}: vertex {v} outside 0..{n - 1}")
        if len(set(vs)) != k:
            what = "self-loop" if k == 2 else "repeated vertex"
            raise InputError(f"line {lineno}: {what} in {line!r}")
        yield vs


def parse_graph(text: str) -> Graph:
    lines = _content_lines(text)
    n = _read_header(lines)
    adj = [0] * n
    dup = 0
    for u, v in _read_tuples(lines, n, 2):
        if adj[u] >> v & 1:
            dup += 1
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if dup:
        log.debug("collapsed %d duplicate edges", dup)
    return Graph(n, adj, _trusted=True)


def parse_hypergraph(text: str, k: int) -> Hypergraph:
    lines = _content_lines(text)
    n = _read_header(lines)
    rows = list(_read_tuples(lines, n, k))
    return Hypergraph(n, k, rows)


def format_graph(h) -> str:
    """Serialise a Graph or Hypergraph in the line format (sorted edges)."""
    out = [f"n={h.n}"]
    for row in h.edge_array().tolist():
        out.append(" ".join(map(str, row)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Densities


def _check_parts(h, parts: Sequence[VertexSet]) -> None:
    if len(parts) != h.k:
        raise InputError(f"need exactly {h.k} parts, got {len(parts)}")
    seen = 0
    for p in parts:
        if p.universe_size != h.n:
            raise InputError("part over a different vertex set")
        if not p:
            raise InputError("empty part")
        if seen & p.bits:
            raise InputError("parts overlap")
        seen |= p.bits


def cross_edge_count(h, parts: Sequence[VertexSet]) -> int:
    """Number of edges with exactly one vertex in each part."""
    _check_parts(h, parts)
    if isinstance(h, Graph):
        b = parts[1].bits
        return sum((h.adj[u] & b).bit_count() for u in parts[0])
    label = np.full(h.n, -1, dtype=np.int64)
    for i, p in enumerate(parts):
        label[list(p)] = i
    e = h.edge_array()
    if not len(e):
        return 0
    lab = np.sort(label[e], axis=1)
    return int((lab == np.arange(h.k)).all(axis=1).sum())


def density(h, parts: Sequence[VertexSet]) -> Fraction:
    count = cross_edge_count(h, parts)
    denom = 1
    for p in parts:
        denom *= len(p)
    return Fraction(count, denom)


def is_epsilon_homogeneous(h, parts: Sequence[VertexSet], epsilon) -> bool:
    eps = as_fraction(epsilon)
    d = density(h, parts)
    return d < eps or d > 1 - eps
