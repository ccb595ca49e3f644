"""Shattering, shatter functions and exact VC-dimension of set systems."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    BudgetExceeded,
    Graph,
    SetSystem,
    VertexSet,
    _matrix_from_bitsets,
    iter_bits,
)

MAX_SHATTER_SIZE = 30
DEFAULT_CAP = 12
DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class VCResult:
    dimension: int
    witness: tuple[int, ...]
    capped: bool

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "witness": list(self.witness),
            "capped": self.capped,
        }


@dataclass(frozen=True)
class ShatterProfile:
    z_max: int
    values: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "z_max": self.z_max,
            "values": list(self.values),
            "witnesses": [list(w) for w in self.witnesses],
        }


# ---------------------------------------------------------------------------
# Set systems derived from hypergraphs


def neighborhood_system(h) -> SetSystem:
    """One member per vertex (graphs) or per unordered (k-1)-set of distinct vertices."""
    if isinstance(h, Graph):
        return SetSystem.from_bitsets(h.n, h.adj)
    return SetSystem.from_bitsets(
        h.n, (h.tuple_neighborhood(t).bits for t in combinations(range(h.n), h.k - 1))
    )


def dual_system(s: SetSystem) -> SetSystem:
    """Swap points and members.  Duplicate members are collapsed first.

    The ground set of the result is the index set of the deduplicated family;
    member ``v`` is the set of indices of members containing point ``v``.
    """
    fam = s.dedup().bitsets
    cols = [0] * s.universe_size
    for i, a in enumerate(fam):
        for v in iter_bits(a):
            cols[v] |= 1 << i
    return SetSystem.from_bitsets(len(fam), cols)


# ---------------------------------------------------------------------------
# Shattering


def trace_count(s: SetSystem, t: VertexSet) -> int:
    mask = t.bits
    return len({a & mask for a in s.bitsets})


def is_shattered(s: SetSystem, t: VertexSet) -> bool:
    if t.universe_size != s.universe_size:
        raise ValueError("set and system over different universes")
    size = len(t)
    if size > MAX_SHATTER_SIZE:
        raise BudgetExceeded(f"|T| = {size} exceeds the enumeration bound {MAX_SHATTER_SIZE}")
    if len(s.family) < 1 << size:
        return False
    return trace_count(s, t) == 1 << size


def _reduce(s: SetSystem):
    """Collapse duplicate members and equivalent points.

    Points lying in every member or in none cannot belong to a nonempty
    shattered set; points with identical incidence cannot share one.  Returns
    the reduced member bitsets (over compact point indices) and the original
    index of each kept point.  The lowest index of each class is kept, so the
    compact order agrees with the original order.
    """
    fam = list(dict.fromkeys(s.bitsets))
    m = len(fam)
    cols = [0] * s.universe_size
    for i, a in enumerate(fam):
        for v in iter_bits(a):
            cols[v] |= 1 << i
    full = (1 << m) - 1
    reps: dict[int, int] = {}
    for v, c in enumerate(cols):
        if c and c != full and c not in reps:
            reps[c] = v
    kept = sorted(reps.values())
    rows = [0] * m
    for j, v in enumerate(kept):
        for i in iter_bits(cols[v]):
            rows[i] |= 1 << j
    return rows, kept


def _shattered_pairs(rows: list[int], r: int) -> list[tuple[int, int]]:
    m = len(rows)
    if m < 4 or r < 2:
        return []
    if r <= 48:
        out = []
        for i, j in combinations(range(r), 2):
            mask = 1 << i | 1 << j
            if len({a & mask for a in rows}) == 4:
                out.append((i, j))
        return out
    mat = _matrix_from_bitsets(r, rows).astype(np.float32)
    inv = 1.0 - mat
    ok = (mat.T @ mat > 0) & (mat.T @ inv > 0) & (inv.T @ mat > 0) & (inv.T @ inv > 0)
    ii, jj = np.nonzero(np.triu(ok, 1))
    return list(zip(ii.tolist(), jj.tolist()))


def _next_candidates(level: list[tuple[int, ...]]):
    present = set(level)
    by_prefix: dict[tuple[int, ...], list[int]] = {}
    for t in level:
        by_prefix.setdefault(t[:-1], []).append(t[-1])
    for prefix, tails in by_prefix.items():
        for a, b in combinations(tails, 2):
            cand = prefix + (a, b)
            if all(cand[:i] + cand[i + 1:] in present for i in range(len(cand) - 2)):
                yield cand


def vc_search(s: SetSystem, cap: int = DEFAULT_CAP) -> VCResult:
    """Exact VC-dimension by levelwise search with downward-heredity pruning.

    Reports the lexicographically least shattered set of maximum size.  If a
    shattered set of size ``cap`` exists the search stops there and
    ``capped`` is set: a larger dimension is not ruled out.  The empty family
    shatters nothing and gets dimension -1.
    """
    if cap > MAX_SHATTER_SIZE:
        raise BudgetExceeded(f"cap {cap} exceeds {MAX_SHATTER_SIZE}")
    if not s.family:
        return VCResult(-1, (), False)
    if cap <= 0:
        return VCResult(0, (), True)
    rows, kept = _reduce(s)
    r = len(kept)
    if r == 0:
        return VCResult(0, (), False)
    # every kept point is a shattered singleton
    best: tuple[int, ...] = (0,)
    if cap == 1:
        return VCResult(1, (kept[0],), True)
    level = [tuple(p) for p in _shattered_pairs(rows, r)]
    size = 2
    while level:
        best = level[0]
        if size == cap:
            return VCResult(size, tuple(kept[i] for i in best), True)
        size += 1
        if len(rows) < 1 << size:
            break
        nxt = []
        for cand in _next_candidates(level):
            mask = 0
            for i in cand:
                mask |= 1 << i
            if len({a & mask for a in rows}) == 1 << size:
                nxt.append(cand)
        level = sorted(nxt)
    return VCResult(len(best), tuple(kept[i] for i in best), False)


def vc_dimension(s: SetSystem, cap: int = DEFAULT_CAP) -> int:
    return vc_search(s, cap).dimension


# ---------------------------------------------------------------------------
# Graphs: twin-class truncation


def twin_classes(g: Graph) -> list[list[int]]:
    """Classes of false twins (equal open neighbourhoods) and true twins (equal closed ones).

    A vertex never has both a nontrivial false-twin class and a nontrivial
    true-twin class, so together with singletons these partition V.
    """
    false_groups: dict[int, list[int]] = {}
    true_groups: dict[int, list[int]] = {}
    for v, row in enumerate(g.adj):
        false_groups.setdefault(row, []).append(v)
        true_groups.setdefault(row | 1 << v, []).append(v)
    classes = []
    placed = [False] * g.n
    for groups in (false_groups, true_groups):
        for members in groups.values():
            if len(members) >= 2:
                classes.append(members)
                for v in members:
                    placed[v] = True
    classes.extend([v] for v in range(g.n) if not placed[v])
    classes.sort()
    return classes


def twin_reduced_vertices(g: Graph, keep: int = 3) -> list[int]:
    """The lowest ``keep`` vertices of every twin class, sorted.

    Twins are exchanged by graph automorphisms, a shattered set of size at
    least 3 meets each class at most once, and two of a class plus one
    realiser suffice for every trace, so three per class preserve the
    VC-dimension of the neighbourhood system exactly.
    """
    out = []
    for cls in twin_classes(g):
        out.extend(cls[:keep])
    return sorted(out)


def graph_vc_search(g: Graph, cap: int = DEFAULT_CAP) -> VCResult:
    """VC-dimension of a graph's neighbourhood system via twin-class truncation."""
    kept = twin_reduced_vertices(g)
    if len(kept) == g.n:
        return vc_search(SetSystem.from_bitsets(g.n, g.adj), cap)
    sub = g.induced(kept)
    res = vc_search(SetSystem.from_bitsets(sub.n, sub.adj), cap)
    return VCResult(res.dimension, tuple(kept[i] for i in res.witness), res.capped)


# ---------------------------------------------------------------------------
# Shatter functions


def _combination_masks(universe: int, z: int) -> np.ndarray:
    if z == 0:
        return np.zeros(1, dtype=np.int64)
    return np.fromiter(
        (sum(1 << v for v in c) for c in combinations(range(universe), z)),
        dtype=np.int64,
        count=comb(universe, z),
    )


def primal_shatter_value(
    s: SetSystem, z: int, budget: int = DEFAULT_BUDGET
) -> tuple[int, tuple[int, ...]]:
    """Maximum number of distinct traces on a z-subset, with the lex-least maximiser."""
    u = s.universe_size
    if z < 0 or z > u:
        raise ValueError(f"z must lie in 0..{u}")
    if z > 20:
        raise BudgetExceeded("z above 20 is not enumerated")
    total = comb(u, z)
    if total > budget:
        raise BudgetExceeded(f"C({u},{z}) = {total} subsets exceeds budget {budget}")
    fam = list(dict.fromkeys(s.bitsets))
    if not fam:
        return 0, tuple(range(z))
    if u <= 62:
        members = np.asarray(fam, dtype=np.int64)
        masks = _combination_masks(u, z)
        best_val, best_idx = -1, 0
        chunk = max(1, 4_000_000 // len(members))
        for start in range(0, len(masks), chunk):
            tr = np.sort(masks[start:start + chunk, None] & members[None, :], axis=1)
            counts = 1 + (np.diff(tr, axis=1) != 0).sum(axis=1)
            j = int(np.argmax(counts))
            if counts[j] > best_val:
                best_val, best_idx = int(counts[j]), start + j
        witness = tuple(iter_bits(int(masks[best_idx])))
        return best_val, witness
    best_val, best_w = -1, ()
    for c in combinations(range(u), z):
        mask = sum(1 << v for v in c)
        val = len({a & mask for a in fam})
        if val > best_val:
            best_val, best_w = val, c
            if val == 1 << z:
                break
    return best_val, best_w


def shatter_profile(s: SetSystem, z_max: int, budget: int = DEFAULT_BUDGET) -> ShatterProfile:
    values, witnesses = [], []
    for z in range(z_max + 1):
        v, w = primal_shatter_value(s, z, budget)
        values.append(v)
        witnesses.append(w)
    return ShatterProfile(z_max, tuple(values), tuple(witnesses))


def sauer_bound(d: int, z: int) -> int:
    if d < 0 or z < 0:
        raise ValueError("d and z must be non-negative")
    return sum(comb(z, i) for i in range(d + 1))
