"""Seeded generators for structured graph families of bounded VC-dimension."""

from __future__ import annotations

import numpy as np

from .core import Graph, InputError

__all__ = [
    "rng",
    "blow_up",
    "threshold_graph",
    "interval_incidence",
    "clique_union",
    "chain_graph",
    "complete_multipartite",
    "multipartite_block_noise",
    "multipartite_edge_noise",
    "random_cograph",
]


def rng(seed: int) -> np.random.Generator:
    """The package-wide generator: numpy PCG64 seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(seed))


def _split(n: int, parts: int, gen: np.random.Generator, min_size: int = 1) -> list[int]:
    """Random composition of n into ``parts`` sizes, each at least ``min_size``."""
    if parts * min_size > n:
        raise InputError(f"cannot split {n} into {parts} parts of size >= {min_size}")
    cuts = np.sort(gen.choice(n - parts * min_size + parts - 1, size=parts - 1, replace=False))
    sizes = np.diff(np.concatenate([[-1], cuts, [n - parts * min_size + parts - 1]])) - 1
    return [int(s) + min_size for s in sizes]


def blow_up(pattern, sizes, cliques=None) -> Graph:
    """Replace vertex i of ``pattern`` (boolean matrix) by a class of ``sizes[i]`` twins.

    Classes are independent sets, or cliques where ``cliques[i]`` is set.
    """
    pattern = np.asarray(pattern, dtype=bool)
    lab = np.repeat(np.arange(len(sizes)), sizes)
    a = pattern[np.ix_(lab, lab)].copy()
    if cliques is not None:
        same = lab[:, None] == lab[None, :]
        a |= same & np.asarray(cliques, dtype=bool)[lab][:, None]
    np.fill_diagonal(a, False)
    return Graph.from_matrix(a)


def threshold_graph(n: int, blocks: int, seed: int) -> Graph:
    """Threshold graph built by alternately adding an isolated block and a
    single dominating vertex, ``blocks`` times.

    Isolated blocks are false-twin classes, so neighbourhoods take only
    2*blocks values.
    """
    gen = rng(seed)
    sizes = _split(n - blocks, blocks, gen)
    order = []
    for s in sizes:
        order += [False] * s + [True]
    a = np.zeros((n, n), dtype=bool)
    dominating = np.asarray(order)
    idx = np.arange(n)
    # a later dominating vertex is adjacent to everything before it
    later = idx[None, :] > idx[:, None]
    a |= later & dominating[None, :]
    a |= a.T
    return Graph.from_matrix(a)


def interval_incidence(n: int, points: int, intervals: int, seed: int) -> Graph:
    """Bipartite incidence between points on a line and random intervals,
    each point and interval blown up to a class of false twins."""
    gen = rng(seed)
    lo = gen.integers(0, points, size=intervals)
    hi = gen.integers(0, points, size=intervals)
    lo, hi = np.minimum(lo, hi), np.maximum(lo, hi)
    inc = (np.arange(points)[:, None] >= lo[None, :]) & (np.arange(points)[:, None] <= hi[None, :])
    m = points + intervals
    pattern = np.zeros((m, m), dtype=bool)
    pattern[:points, points:] = inc
    pattern |= pattern.T
    return blow_up(pattern, _split(n, m, gen))


def clique_union(n: int, d: int, seed: int) -> Graph:
    """Disjoint union of d cliques of random sizes."""
    gen = rng(seed)
    return blow_up(np.zeros((d, d), dtype=bool), _split(n, d, gen), cliques=[True] * d)


def chain_graph(n: int, seed: int) -> Graph:
    """Bipartite half-graph with random weights: left i ~ right j iff a_i + b_j > 1.

    Neighbourhoods on each side are nested, so the VC-dimension is at most 1.
    """
    gen = rng(seed)
    half = n // 2
    a = gen.random(half)
    b = gen.random(n - half)
    inc = a[:, None] + b[None, :] > 1
    m = np.zeros((n, n), dtype=bool)
    m[:half, half:] = inc
    m |= m.T
    return Graph.from_matrix(m)


def complete_multipartite(r: int, m: int) -> Graph:
    lab = np.repeat(np.arange(r), m)
    return Graph.from_matrix(lab[:, None] != lab[None, :])


def multipartite_block_noise(r: int, m: int, blocks: int, noise: float, seed: int) -> Graph:
    """Complete r-partite graph with parts of size m, each cut into ``blocks``
    equal blocks; each cross block pair is deleted with probability ``noise``.

    Deleting whole block pairs keeps every block a false-twin class, so the
    VC-dimension stays bounded, and deletion keeps the graph K_{r+1}-free.
    """
    if m % blocks:
        raise InputError("blocks must divide the part size")
    gen = rng(seed)
    nb = r * blocks
    part_of = np.repeat(np.arange(r), blocks)
    keep = gen.random((nb, nb)) >= noise
    keep = np.triu(keep, 1)
    keep |= keep.T
    pattern = (part_of[:, None] != part_of[None, :]) & keep
    return blow_up(pattern, [m // blocks] * nb)


def multipartite_edge_noise(r: int, m: int, noise: float, seed: int) -> Graph:
    """Complete r-partite graph with parts of size m, each cross edge
    deleted independently with probability ``noise``; stays K_{r+1}-free."""
    gen = rng(seed)
    n = r * m
    lab = np.repeat(np.arange(r), m)
    keep = np.triu(gen.random((n, n)) >= noise, 1)
    keep |= keep.T
    return Graph.from_matrix((lab[:, None] != lab[None, :]) & keep)


def random_cograph(n: int, seed: int) -> Graph:
    """Random cograph: split the vertex range recursively, joining or not at random."""
    gen = rng(seed)
    a = np.zeros((n, n), dtype=bool)
    stack = [(0, n)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        cut = int(gen.integers(lo + 1, hi))
        if gen.random() < 0.5:
            a[lo:cut, cut:hi] = True
            a[cut:hi, lo:cut] = True
        stack += [(lo, cut), (cut, hi)]
    perm = gen.permutation(n)
    return Graph.from_matrix(a[np.ix_(perm, perm)])
