"""Ultra-strong regularity partitions for hypergraphs of bounded dual VC-dimension.

Pipeline: separation threshold -> greedy maximal separated packing of vertex
links -> nearest-centre partition -> equitable refinement.  The returned
report always comes from :func:`homogeneity_report`, an exhaustive exact
verifier that never looks at the packing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .core import (
    Graph,
    InputError,
    Partition,
    Refusal,
    VerificationError,
    VertexSet,
    as_fraction,
)

__all__ = [
    "InstanceTooSmall",
    "PackingResult",
    "RegularityReport",
    "separation_delta",
    "greedy_packing",
    "voronoi_partition",
    "equitable_refinement",
    "ultra_strong_partition",
    "homogeneity_report",
    "part_edge_counts",
    "count_flip_pairs",
    "link_distance",
]


class InstanceTooSmall(Refusal):
    """The instance is too small for the part count the construction needs."""


def _ceil(q: Fraction) -> int:
    return -(-q.numerator // q.denominator)


def _check_epsilon(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if not 0 < eps < Fraction(1, 4):
        raise InputError(f"epsilon must lie in (0, 1/4), got {eps}")
    return eps


def separation_delta(n: int, k: int, epsilon) -> Fraction:
    """Exact separation threshold eps^2 / (4 k^2) * C(n, k-1)."""
    eps = _check_epsilon(epsilon)
    if k < 2:
        raise InputError("k must be at least 2")
    return eps * eps / (4 * k * k) * comb(n, k - 1)


@dataclass(frozen=True)
class PackingResult:
    delta: Fraction
    centers: tuple[int, ...]
    neighborhoods: tuple[VertexSet, ...]

    def to_dict(self) -> dict:
        return {"delta": str(self.delta), "centers": list(self.centers)}


def link_distance(links, sizes, u: int, v: int) -> int:
    return sizes[u] + sizes[v] - 2 * (links[u] & links[v]).bit_count()


def greedy_packing(h, delta, max_centers: int | None = None) -> PackingResult:
    """Scan vertices in index order, admitting v when its link is at distance
    >= delta from every centre admitted so far.

    ``max_centers`` aborts with :class:`InstanceTooSmall` as soon as the packing
    grows past it, so hopeless instances fail in O(n * max_centers).
    """
    delta = as_fraction(delta)
    if delta <= 0:
        raise InputError("delta must be positive")
    links = h.links()
    sizes = [x.bit_count() for x in links]
    thr = _ceil(delta)
    centers: list[int] = []
    for v in range(h.n):
        lv, sv = links[v], sizes[v]
        for s in centers:
            if sv + sizes[s] - 2 * (lv & links[s]).bit_count() < thr:
                break
        else:
            centers.append(v)
            if max_centers is not None and len(centers) > max_centers:
                raise InstanceTooSmall(
                    f"packing exceeded {max_centers} centres at vertex {v}",
                    {"centers_so_far": len(centers), "delta": str(delta)},
                )
    universe = h.link_universe
    return PackingResult(
        delta, tuple(centers), tuple(VertexSet(universe, links[s]) for s in centers)
    )


def voronoi_partition(h, packing: PackingResult) -> Partition:
    """Assign each vertex to the least-index centre at distance < delta."""
    links = h.links()
    sizes = [x.bit_count() for x in links]
    thr = _ceil(packing.delta)
    centers = packing.centers
    assignment = []
    for v in range(h.n):
        lv, sv = links[v], sizes[v]
        for i, s in enumerate(centers):
            if sv + sizes[s] - 2 * (lv & links[s]).bit_count() < thr:
                assignment.append(i)
                break
        else:
            raise VerificationError(f"vertex {v} is far from every centre; packing not maximal")
    return Partition(h.n, len(centers), tuple(assignment))


def equitable_refinement(q: Partition, K: int, n: int | None = None) -> Partition:
    """Cut each part of ``q`` into chunks of size floor(n/K), then re-cut the
    concatenated leftovers so that exactly K parts remain, sized floor(n/K)
    or ceil(n/K) with the larger ones last.

    Parts lying inside a single part of ``q`` are flagged pure.
    """
    n = q.n if n is None else n
    if n != q.n:
        raise InputError("n differs from the partition's vertex count")
    if not 1 <= K <= n:
        raise InputError(f"K = {K} must lie in 1..{n}")
    base, extra = divmod(n, K)
    n_small = K - extra
    chunks: list[list[int]] = []
    leftovers: list[int] = []
    for part in q.parts():
        i = 0
        while len(part) - i >= base and len(chunks) < n_small:
            chunks.append(part[i:i + base])
            i += base
        leftovers.extend(part[i:])
    i = 0
    while len(chunks) < n_small:
        chunks.append(leftovers[i:i + base])
        i += base
    while i < len(leftovers):
        chunks.append(leftovers[i:i + base + 1])
        i += base + 1
    if len(chunks) != K:
        raise VerificationError(f"refinement produced {len(chunks)} parts, expected {K}")
    owner = q.assignment
    pure = tuple(len({owner[v] for v in c}) == 1 for c in chunks)
    return Partition.from_parts(n, chunks, pure)


# ---------------------------------------------------------------------------
# Verification


@dataclass(frozen=True)
class RegularityReport:
    K: int
    k: int
    epsilon: Fraction
    tuple_count: int
    non_homogeneous: int
    witnesses: tuple[tuple[int, ...], ...]
    witness_densities: tuple[Fraction, ...]
    fraction: Fraction
    mixed_tuple_count: int | None = None
    non_homogeneous_mixed: int | None = None
    densities: tuple[tuple[tuple[int, ...], Fraction], ...] | None = None

    def to_dict(self) -> dict:
        out = {
            "K": self.K,
            "k": self.k,
            "epsilon": str(self.epsilon),
            "tuple_count": self.tuple_count,
            "non_homogeneous": self.non_homogeneous,
            "non_homogeneous_fraction": str(self.fraction),
            "witnesses": [
                {"parts": list(t), "density": str(d)}
                for t, d in zip(self.witnesses, self.witness_densities)
            ],
            "mixed_tuple_count": self.mixed_tuple_count,
            "non_homogeneous_mixed": self.non_homogeneous_mixed,
        }
        if self.densities is not None:
            out["densities"] = [[*t, str(d)] for t, d in self.densities]
        return out


def part_edge_counts(h, p: Partition) -> tuple[np.ndarray, np.ndarray]:
    """Edge counts for k-tuples of distinct parts that carry at least one edge.

    Returns ``(tuples, counts)`` with ``tuples`` an (r, k) array of sorted part
    indices in lexicographic order.
    """
    assign = p.assignment_array()
    K, k = p.K, h.k
    if isinstance(h, Graph) and h.n:
        order = np.argsort(assign, kind="stable")
        sizes = np.bincount(assign, minlength=K)
        starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        nonempty = sizes > 0
        a = h.matrix[np.ix_(order, order)].view(np.uint8)
        rows = np.add.reduceat(a, starts[nonempty], axis=0, dtype=np.int64)
        blocks = np.add.reduceat(rows, starts[nonempty], axis=1, dtype=np.int64)
        full = np.zeros((K, K), dtype=np.int64)
        idx = np.nonzero(nonempty)[0]
        full[np.ix_(idx, idx)] = blocks
        ii, jj = np.nonzero(np.triu(full, 1))
        return np.stack([ii, jj], axis=1), full[ii, jj]
    e = h.edge_array()
    if not len(e):
        return np.zeros((0, k), dtype=np.int64), np.zeros(0, dtype=np.int64)
    lab = np.sort(assign[e], axis=1)
    distinct = (lab[:, 1:] != lab[:, :-1]).all(axis=1)
    lab = lab[distinct]
    if not len(lab):
        return np.zeros((0, k), dtype=np.int64), np.zeros(0, dtype=np.int64)
    tuples, counts = np.unique(lab, axis=0, return_counts=True)
    return tuples, counts.astype(np.int64)


def homogeneity_report(h, p: Partition, epsilon, with_densities: bool = False) -> RegularityReport:
    """Classify every unordered k-tuple of distinct parts by exact density."""
    eps = as_fraction(epsilon)
    if p.n != h.n:
        raise InputError("partition and hypergraph have different vertex counts")
    K, k = p.K, h.k
    total = comb(K, k)
    sizes = np.asarray(p.part_sizes, dtype=np.int64)
    tuples, counts = part_edge_counts(h, p)
    prods = np.prod(sizes[tuples], axis=1) if len(tuples) else np.zeros(0, dtype=np.int64)
    a, b = eps.numerator, eps.denominator
    # density in [eps, 1 - eps]  <=>  a*P <= b*c <= (b-a)*P
    if len(prods) and b * int(prods.max()) < 2**62:
        bc = b * counts
        nonhom = (bc >= a * prods) & (bc <= (b - a) * prods)
    else:
        nonhom = np.array(
            [a * int(P) <= b * int(c) <= (b - a) * int(P) for c, P in zip(counts, prods)],
            dtype=bool,
        )
    sel = np.nonzero(nonhom)[0]
    witnesses = tuple(tuple(int(x) for x in tuples[i]) for i in sel)
    wd = tuple(Fraction(int(counts[i]), int(prods[i])) for i in sel)
    mixed = nonhom_mixed = None
    if p.pure is not None:
        n_pure = sum(p.pure)
        mixed = total - comb(n_pure, k)
        nonhom_mixed = sum(1 for t in witnesses if not all(p.pure[i] for i in t))
    densities = None
    if with_densities:
        dens = {tuple(int(x) for x in t): Fraction(int(c), int(P))
                for t, c, P in zip(tuples, counts, prods)}
        from itertools import combinations

        densities = tuple(
            (t, dens.get(t, Fraction(0))) for t in combinations(range(K), k)
        )
    frac = Fraction(len(sel), total) if total else Fraction(0)
    return RegularityReport(
        K=K,
        k=k,
        epsilon=eps,
        tuple_count=total,
        non_homogeneous=len(sel),
        witnesses=witnesses,
        witness_densities=wd,
        fraction=frac,
        mixed_tuple_count=mixed,
        non_homogeneous_mixed=nonhom_mixed,
        densities=densities,
    )


def ultra_strong_partition(h, epsilon, clamp: bool = False, with_densities: bool = False):
    """Equitable partition with all but an epsilon-fraction of part tuples
    epsilon-homogeneous (guaranteed for bounded dual VC-dimension and large n).

    Returns ``(partition, report, packing)``.  K = ceil(8k|S|/eps).  When K
    exceeds n the call raises :class:`InstanceTooSmall` unless ``clamp`` is
    set, in which case K = n and the report is marked by ``K < target``.
    """
    eps = _check_epsilon(epsilon)
    n, k = h.n, h.k
    floor_k = _ceil(8 * k / eps)
    if n < floor_k:
        raise InstanceTooSmall(
            f"instance too small for target K: n = {n} < ceil(8k/eps) = {floor_k}",
            {"n": n, "min_K": floor_k},
        )
    delta = separation_delta(n, k, eps)
    # K = ceil(8k|S|/eps) <= n  <=>  |S| <= n*eps/(8k)
    max_centers = None if clamp else math.floor(n * eps / (8 * k))
    try:
        packing = greedy_packing(h, delta, max_centers=max_centers)
    except InstanceTooSmall as exc:
        raise InstanceTooSmall(
            f"instance too small for target K: packing needs more than {max_centers} centres,"
            f" so ceil(8k|S|/eps) > n = {n}",
            {"n": n, "delta": str(delta), **exc.report},
        ) from None
    target = _ceil(8 * k * len(packing.centers) / eps)
    if target > n and not clamp:
        raise InstanceTooSmall(
            f"instance too small for target K: ceil(8k|S|/eps) = {target} > n = {n}",
            {"n": n, "target_K": target, "centers": len(packing.centers)},
        )
    K = min(target, n)
    q = voronoi_partition(h, packing)
    p = equitable_refinement(q, K, n)
    report = homogeneity_report(h, p, eps, with_densities=with_densities)
    return p, report, packing


# ---------------------------------------------------------------------------
# Flip pairs


def _transversal_tensor(h, parts) -> np.ndarray:
    m = len(parts[0])
    k = h.k
    members = [list(p) for p in parts]
    if isinstance(h, Graph):
        return h.matrix[np.ix_(members[0], members[1])]
    where = {}
    for i, mem in enumerate(members):
        for pos, v in enumerate(mem):
            where[v] = (i, pos)
    t = np.zeros((m,) * k, dtype=bool)
    for row in h.edge_array().tolist():
        locs = [where.get(v) for v in row]
        if None in locs:
            continue
        if len({loc[0] for loc in locs}) != k:
            continue
        idx = [0] * k
        for part, pos in locs:
            idx[part] = pos
        t[tuple(idx)] = True
    return t


def count_flip_pairs(h, parts) -> int:
    """Ordered pairs (e, e') of transversal k-tuples agreeing in all parts but
    one, with e an edge and e' a non-edge."""
    if len(parts) != h.k:
        raise InputError(f"need exactly {h.k} parts")
    m = len(parts[0])
    if any(len(p) != m for p in parts):
        raise InputError("parts must have equal size")
    seen = 0
    for p in parts:
        if seen & p.bits:
            raise InputError("parts overlap")
        seen |= p.bits
    if m == 0:
        return 0
    t = _transversal_tensor(h, parts).astype(np.int64)
    total = 0
    for axis in range(h.k):
        a = t.sum(axis=axis)
        total += int((a * (m - a)).sum())
    return total
