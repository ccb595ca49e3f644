"""Cographs, clique/independent-set extraction and Ramsey-Turan independent sets."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .core import (
    BudgetExceeded,
    Graph,
    InputError,
    Partition,
    Refusal,
    VerificationError,
    VertexSet,
    as_fraction,
    iter_bits,
)
from .regularity import InstanceTooSmall, part_edge_counts, ultra_strong_partition

log = logging.getLogger(__name__)

__all__ = [
    "Cotree",
    "CographVerdict",
    "is_cograph",
    "cotree_clique_stable",
    "max_clique",
    "max_independent_set",
    "max_induced_cograph",
    "brute_force_extremes",
    "schedule_epsilon",
    "ExtractionTrace",
    "extract_cograph",
    "RtResult",
    "rt_independent_set",
]

UNION, JOIN, LEAF = "union", "join", "leaf"


# ---------------------------------------------------------------------------
# Recognition


@dataclass(frozen=True)
class Cotree:
    label: str
    members: int
    universe_size: int
    children: tuple["Cotree", ...] = ()

    @property
    def vertex(self) -> int | None:
        return self.members.bit_length() - 1 if self.label == LEAF else None

    def vertices(self) -> VertexSet:
        return VertexSet(self.universe_size, self.members)

    def to_dict(self) -> dict:
        if self.label == LEAF:
            return {"leaf": self.vertex}
        return {self.label: [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class CographVerdict:
    cotree: Cotree | None
    witness: tuple[int, int, int, int] | None

    def __bool__(self) -> bool:
        return self.cotree is not None

    def to_dict(self) -> dict:
        if self.cotree is None:
            return {"cograph": False, "p4": list(self.witness)}
        return {"cograph": True, "cotree": self.cotree.to_dict()}


def _components(members: int, nbr) -> list[int]:
    comps = []
    rest = members
    while rest:
        seed = rest & -rest
        comp = frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbr(low.bit_length() - 1) & rest & ~comp
            comp |= new
            frontier |= new
        rest &= ~comp
        comps.append(comp)
    return comps


def _twin_representatives(adj, members: int) -> int:
    """Lowest vertex of each false-twin class, then of each true-twin class
    among those; an induced P4 never holds two twins, so one survives here."""
    reps = 0
    seen: set[int] = set()
    for v in iter_bits(members):
        key = adj[v] & members
        if key not in seen:
            seen.add(key)
            reps |= 1 << v
    out = 0
    seen.clear()
    for v in iter_bits(reps):
        key = (adj[v] | 1 << v) & reps
        if key not in seen:
            seen.add(key)
            out |= 1 << v
    return out


def _find_p4(adj, members: int) -> tuple[int, int, int, int]:
    members = _twin_representatives(adj, members)
    # every induced path a-b-c-d has middle edge bc with a in N(b)-N[c], d in N(c)-N[b]
    for b in iter_bits(members):
        for c in iter_bits(adj[b] & members):
            a_side = adj[b] & members & ~adj[c] & ~(1 << c)
            d_side = adj[c] & members & ~adj[b] & ~(1 << b)
            if not (a_side and d_side):
                continue
            for a in iter_bits(a_side):
                rest = d_side & ~adj[a]
                if rest:
                    return (a, b, c, (rest & -rest).bit_length() - 1)
    raise VerificationError("prime subgraph without an induced P4")


def is_cograph(g: Graph, members: int | None = None) -> CographVerdict:
    """Decompose by components and co-components; a subgraph where both the
    graph and its complement are connected contains an induced P4.

    ``members`` restricts to an induced subgraph given as a bitset.
    """
    adj = g.adj
    n = g.n
    root = (1 << n) - 1 if members is None else members
    if not root:
        return CographVerdict(Cotree(UNION, 0, n), None)

    # explicit stack: build children before parents
    built: dict[tuple[int, int], Cotree] = {}
    stack: list[tuple[int, int, str | None, list[int] | None]] = [(root, 0, None, None)]
    # entries: (members, depth-key, pending label, child member list)
    while stack:
        mem, key, label, kids = stack.pop()
        if label is not None:
            node = Cotree(label, mem, n, tuple(built.pop((c, key + 1)) for c in kids))
            built[(mem, key)] = node
            continue
        if mem & (mem - 1) == 0:
            built[(mem, key)] = Cotree(LEAF, mem, n)
            continue
        comps = _components(mem, lambda v: adj[v])
        if len(comps) > 1:
            label = UNION
        else:
            comps = _components(mem, lambda v: mem & ~adj[v] & ~(1 << v))
            if len(comps) == 1:
                return CographVerdict(None, _find_p4(adj, mem))
            label = JOIN
        comps.sort(key=lambda c: c & -c)
        stack.append((mem, key, label, comps))
        for c in reversed(comps):
            stack.append((c, key + 1, None, None))
    return CographVerdict(built[(root, 0)], None)


def cotree_clique_stable(t: Cotree) -> tuple[VertexSet, VertexSet]:
    """Maximum clique and maximum independent set of a cograph from its cotree.

    Ties prefer the earliest child, i.e. the one with the lowest vertex.
    """
    best: dict[int, tuple[int, int]] = {}
    order: list[Cotree] = []
    stack = [t]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(node.children)
    for node in reversed(order):
        if node.label == LEAF:
            best[id(node)] = (node.members, node.members)
            continue
        parts = [best.pop(id(c)) for c in node.children]
        if node.label == JOIN:
            clique = 0
            for c, _ in parts:
                clique |= c
            stable = max((s for _, s in parts), key=int.bit_count)
        else:
            stable = 0
            for _, s in parts:
                stable |= s
            clique = max((c for c, _ in parts), key=int.bit_count)
        best[id(node)] = (clique, stable)
    clique, stable = best[id(t)]
    return VertexSet(t.universe_size, clique), VertexSet(t.universe_size, stable)


# ---------------------------------------------------------------------------
# Exact oracles


def _bron_kerbosch(adj, candidates: int) -> int:
    best = 0

    def expand(r: int, p: int, x: int) -> None:
        nonlocal best
        if not p and not x:
            size = r.bit_count()
            if size > best.bit_count() or (size == best.bit_count() and _lex_less(r, best)):
                best = r
            return
        if r.bit_count() + p.bit_count() < best.bit_count():
            return
        px = p | x
        pivot = max(iter_bits(px), key=lambda u: (adj[u] & p).bit_count())
        for v in iter_bits(p & ~adj[pivot]):
            expand(r | 1 << v, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    expand(0, candidates, 0)
    return best


def _lex_less(a: int, b: int) -> bool:
    return sorted(iter_bits(a)) < sorted(iter_bits(b))


def max_clique(g: Graph, limit: int = 20) -> VertexSet:
    """Maximum clique by Bron-Kerbosch with pivoting; lexicographically least among optima."""
    if g.n > limit:
        raise BudgetExceeded(f"exact clique search limited to n <= {limit}, got {g.n}")
    return VertexSet(g.n, _bron_kerbosch(g.adj, (1 << g.n) - 1))


def max_independent_set(g: Graph, limit: int = 20) -> VertexSet:
    if g.n > limit:
        raise BudgetExceeded(f"exact independent-set search limited to n <= {limit}, got {g.n}")
    return VertexSet(g.n, _bron_kerbosch(g.complement().adj, (1 << g.n) - 1))


def _induced_p4_masks(g: Graph) -> list[int]:
    out = []
    for quad in combinations(range(g.n), 4):
        degs = sorted(sum(g.has_edge(u, v) for v in quad if v != u) for u in quad)
        if degs == [1, 1, 2, 2]:
            edges = sum(degs) // 2
            if edges == 3:
                out.append(sum(1 << v for v in quad))
    return out


def max_induced_cograph(g: Graph, limit: int = 14) -> VertexSet:
    """Largest P4-free vertex subset by enumerating all 2^n subsets."""
    if g.n > limit:
        raise BudgetExceeded(f"exact induced-cograph search limited to n <= {limit}, got {g.n}")
    subsets = np.arange(1 << g.n, dtype=np.int64)
    ok = np.ones(len(subsets), dtype=bool)
    for m in _induced_p4_masks(g):
        ok &= (subsets & m) != m
    sizes = np.zeros(len(subsets), dtype=np.int64)
    for v in range(g.n):
        sizes += (subsets >> v) & 1
    sizes[~ok] = -1
    top = sizes.max()
    cands = [int(s) for s in subsets[sizes == top]]
    return VertexSet(g.n, min(cands, key=lambda s: sorted(iter_bits(s))))


def brute_force_extremes(g: Graph) -> tuple[VertexSet, VertexSet, VertexSet]:
    """Exact (max clique, max independent set, max induced cograph)."""
    return max_clique(g), max_independent_set(g), max_induced_cograph(g)


# ---------------------------------------------------------------------------
# Extraction


def schedule_epsilon(n: int, c=Fraction(1, 8), delta_exp=Fraction(1, 2)) -> Fraction:
    """(1/32) exp(-3c (ln n)^(1-delta)) as an exact rational (1e-9 resolution)."""
    if n < 2:
        return Fraction(1, 32)
    value = math.exp(-3 * float(c) * math.log(n) ** (1 - float(delta_exp))) / 32
    return Fraction(value).limit_denominator(10**9)


@dataclass
class ExtractionTrace:
    levels: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"levels": self.levels}


def _erdos_szekeres_chain(g: Graph, members: int) -> int:
    """Pick v, keep the larger of N(v) and its complement, repeat.

    The picked vertices form a threshold graph: each is adjacent to all later
    ones or to none, so the chain is a cograph of size >= log2(n+1).
    """
    adj = g.adj
    chain = 0
    rest = members
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        chain |= low
        rest ^= low
        inside = rest & adj[v]
        outside = rest & ~adj[v]
        rest = inside if inside.bit_count() >= outside.bit_count() else outside
    return chain


def _greedy_pick(a: np.ndarray, idx: np.ndarray, clique: bool) -> int:
    """Greedy independent set (min degree first) or clique (max degree first)
    in the subgraph with adjacency ``a`` on original labels ``idx``."""
    if clique:
        a = ~a
        np.fill_diagonal(a, False)
    alive = np.ones(len(idx), dtype=bool)
    deg = a.sum(axis=1).astype(np.int64)
    big = np.iinfo(np.int64).max
    out = 0
    while alive.any():
        v = int(np.argmin(np.where(alive, deg, big)))
        out |= 1 << int(idx[v])
        removed = alive & a[v]
        removed[v] = True
        alive &= ~removed
        deg -= a[:, removed].sum(axis=1)
    return out


def _greedy_independent(g: Graph, members: int) -> int:
    idx = np.fromiter(iter_bits(members), dtype=np.int64)
    return _greedy_pick(g.matrix[np.ix_(idx, idx)], idx, clique=False)


def _greedy_clique(g: Graph, members: int) -> int:
    idx = np.fromiter(iter_bits(members), dtype=np.int64)
    return _greedy_pick(g.matrix[np.ix_(idx, idx)], idx, clique=True)


def _extend_cograph(g: Graph, members: int, base: int) -> int:
    cur = base
    for v in iter_bits(members & ~base):
        if is_cograph(g, cur | 1 << v):
            cur |= 1 << v
    return cur


def _base_case(g: Graph, members: int) -> tuple[int, str]:
    """Exact search up to 14 vertices; otherwise the best of an Erdos-Szekeres
    chain, a greedy clique and a greedy independent set, extended greedily
    to a maximal induced cograph when at most 64 vertices are involved."""
    size = members.bit_count()
    if size <= 14:
        idx = list(iter_bits(members))
        sub = g.induced(idx)
        best = max_induced_cograph(sub)
        return sum(1 << idx[i] for i in best), "exact"
    candidates = [
        _erdos_szekeres_chain(g, members),
        _greedy_clique(g, members),
        _greedy_independent(g, members),
    ]
    start = max(candidates, key=int.bit_count)
    if size <= 64:
        return _extend_cograph(g, members, start), "greedy-extended"
    return start, "greedy"


def _classify_pairs(g: Graph, p: Partition, eps: Fraction) -> np.ndarray:
    """K x K codes: 0 sparse, 1 dense, 2 non-homogeneous or same part."""
    K = p.K
    sizes = np.asarray(p.part_sizes, dtype=np.int64)
    counts = np.zeros((K, K), dtype=np.int64)
    tuples, c = part_edge_counts(g, p)
    if len(tuples):
        counts[tuples[:, 0], tuples[:, 1]] = c
        counts[tuples[:, 1], tuples[:, 0]] = c
    prods = np.outer(sizes, sizes)
    a, b = eps.numerator, eps.denominator
    sparse = b * counts < a * prods
    dense = b * counts > (b - a) * prods
    code = np.full((K, K), 2, dtype=np.int8)
    code[sparse] = 0
    code[dense] = 1
    np.fill_diagonal(code, 2)
    return code


def _bad_pair_matrix(g: Graph, p: Partition, eps: Fraction) -> np.ndarray:
    code = _classify_pairs(g, p, eps)
    lab = p.assignment_array()
    c = code[np.ix_(lab, lab)]
    a = g.matrix
    bad = (c == 2) | ((c == 0) & a) | ((c == 1) & ~a)
    np.fill_diagonal(bad, False)
    return bad


def _min_degree_independent(bad: np.ndarray, limit: int | None = None) -> list[int]:
    """Greedy Turan step: repeatedly take a min-degree vertex, drop its
    neighbours; stop after ``limit`` picks."""
    alive = np.ones(len(bad), dtype=bool)
    deg = bad.sum(axis=1).astype(np.int64)
    out = []
    while alive.any() and (limit is None or len(out) < limit):
        cand = np.where(alive, deg, np.iinfo(np.int64).max)
        v = int(np.argmin(cand))
        out.append(v)
        removed = alive & (bad[v] | (np.arange(len(bad)) == v))
        alive &= ~removed
        deg -= bad[:, removed].sum(axis=1)
    return sorted(out)


def _extract(g: Graph, members: int, c, delta_exp, n0: int, trace: ExtractionTrace, depth: int) -> int:
    size = members.bit_count()
    entry: dict = {"depth": depth, "n": size}
    trace.levels.append(entry)
    if size == 0:
        entry["branch"] = "empty"
        return 0
    if is_cograph(g, members):
        entry["branch"] = "whole"
        return members
    base, how = _base_case(g, members)
    entry["base"] = how
    entry["base_size"] = base.bit_count()
    if size <= n0:
        entry["branch"] = "base"
        return base
    eps = schedule_epsilon(size, c, delta_exp)
    entry["epsilon"] = str(eps)
    idx = list(iter_bits(members))
    pos = {v: i for i, v in enumerate(idx)}
    sub = g.induced(idx)
    try:
        part, report, packing = ultra_strong_partition(sub, eps)
    except InstanceTooSmall as exc:
        entry["branch"] = "base"
        entry["refused"] = str(exc)
        return base
    K = part.K
    entry["K"] = K
    entry["fraction"] = str(report.fraction)
    bad = _bad_pair_matrix(sub, part, eps)
    n_bad = int(bad.sum()) // 2
    bound = 2 * eps * comb(size, 2)
    entry["bad_pairs"] = n_bad
    entry["bad_pair_bound"] = str(bound)
    if report.fraction <= eps and n_bad > bound:
        raise VerificationError(f"bad pairs {n_bad} exceed 2*eps*C(n,2) = {bound}")
    R = _min_degree_independent(bad, limit=math.ceil(1 / (4 * eps)))
    entry["R"] = len(R)
    if len(R) >= size:
        # singleton parts with no bad pairs: regularity adds nothing
        entry["branch"] = "base"
        return base
    r_bits = sum(1 << idx[v] for v in R)
    u0 = _extract(g, r_bits, c, delta_exp, n0, trace, depth + 1)
    skeleton = [part.assignment[pos[v]] for v in iter_bits(u0)]
    t = len(skeleton)
    lab = part.assignment_array()
    threshold = 8 * t * eps * Fraction(size, K)
    in_skeleton = np.isin(lab, skeleton)
    alive = in_skeleton.copy()
    to_skeleton = bad[:, in_skeleton].sum(axis=1)
    union = 0
    survivors_log = []
    for i in skeleton:
        rows = np.nonzero(lab == i)[0]
        # bad partners in the other skeleton parts
        d_b = to_skeleton[rows] - bad[np.ix_(rows, rows)].sum(axis=1)
        keep = alive[rows] & (d_b * threshold.denominator < threshold.numerator)
        survivors = rows[keep]
        survivors_log.append(int(len(survivors)))
        u_bits = sum(1 << idx[v] for v in survivors.tolist())
        ui = _extract(g, u_bits, c, delta_exp, n0, trace, depth + 1) if u_bits else 0
        union |= ui
        local = [pos[v] for v in iter_bits(ui)]
        if local:
            alive &= ~bad[local].any(axis=0)
    entry["skeleton"] = t
    entry["survivors"] = survivors_log
    entry["union_size"] = union.bit_count()
    if not is_cograph(g, union):
        raise VerificationError("assembled union is not a cograph")
    if union.bit_count() > base.bit_count():
        entry["branch"] = "regularity"
        return union
    entry["branch"] = "regularity-base"
    return base


def extract_cograph(
    g: Graph, c=Fraction(1, 8), delta_exp=Fraction(1, 2), n0: int = 64
) -> tuple[VertexSet, ExtractionTrace]:
    """Vertex set inducing a cograph, via recursive regularity-based extraction.

    A member set that already induces a cograph is returned whole.  Otherwise
    each level tries the regularity partition with the scheduled epsilon and
    falls back to a base case (exact search up to 14 vertices, Erdos-Szekeres
    chain plus greedy extension above) when the partition is refused.  The
    larger of the two candidates is returned, always re-verified.
    """
    if g.n == 0:
        raise InputError("graph must be nonempty")
    c, delta_exp = as_fraction(c), as_fraction(delta_exp)
    trace = ExtractionTrace()
    bits = _extract(g, (1 << g.n) - 1, c, delta_exp, n0, trace, 0)
    if not is_cograph(g, bits):
        raise VerificationError("extracted set is not a cograph")
    return VertexSet(g.n, bits), trace


# ---------------------------------------------------------------------------
# Ramsey-Turan


@dataclass(frozen=True)
class RtResult:
    independent_set: VertexSet
    K: int
    parts: tuple[int, ...]
    steps: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {
            "independent_set": list(self.independent_set),
            "size": len(self.independent_set),
            "K": self.K,
            "parts": list(self.parts),
            "steps": list(self.steps),
        }


def _find_clique(adj: list[int], size: int) -> list[int] | None:
    def grow(chosen: list[int], cand: int):
        if len(chosen) == size:
            return chosen
        for v in iter_bits(cand):
            if len(chosen) + 1 + (cand >> (v + 1)).bit_count() < size:
                return None
            found = grow(chosen + [v], cand & adj[v] & ~((1 << (v + 1)) - 1))
            if found:
                return found
        return None

    return grow([], (1 << len(adj)) - 1)


def rt_independent_set(g: Graph, p: int, eps_rt, delta_sup) -> RtResult:
    """Independent set in a dense K_{2p}-free graph of bounded VC-dimension.

    Refuses when the edge-density precondition fails, when the partition
    cannot be built, when no p parts are pairwise dense, or when the
    iteration uncovers a K_{2p} (returned as the refusal witness).
    """
    if p < 3:
        raise InputError("p must be at least 3")
    eps_rt, delta_sup = as_fraction(eps_rt), as_fraction(delta_sup)
    n = g.n
    need = Fraction(1, 2) * (1 - Fraction(1, p - 1) + eps_rt) * n * n
    if not g.edge_count > need:
        raise Refusal(
            "density precondition unmet",
            {"edges": g.edge_count, "required_more_than": str(need)},
        )
    eps = delta_sup / 4
    part, report, _ = ultra_strong_partition(g, eps)
    K = part.K
    code = _classify_pairs(g, part, eps)
    # dense pairs: density > 1 - delta/4 (homogeneous on the dense side)
    dense = code == 1
    part_adj = [sum(1 << j for j in np.nonzero(dense[i])[0].tolist()) for i in range(K)]
    chosen = _find_clique(part_adj, p)
    if chosen is None:
        raise Refusal(
            "no p parts are pairwise dense",
            {"K": K, "non_homogeneous_fraction": str(report.fraction)},
        )
    members = part.parts()
    current = [set(members[i]) for i in chosen]
    adj = g.adj
    delta_j = eps
    steps = []
    clique: list[int] = []
    while current:
        first, later = current[0], current[1:]
        in_play = len(current)
        factor = 1 - 4 * delta_j * in_play
        later_bits = [sum(1 << v for v in w) for w in later]
        survivors = sorted(
            v for v in first
            if all(
                (adj[v] & wb).bit_count() >= factor * len(w)
                for w, wb in zip(later, later_bits)
            )
        )
        step = {"delta": str(delta_j), "first_part": len(first), "survivors": len(survivors)}
        steps.append(step)
        if not survivors:
            raise Refusal("no survivors in the current part", {"K": K, "steps": steps})
        sbits = sum(1 << v for v in survivors)
        edge = next(((u, (adj[u] & sbits & ~((1 << (u + 1)) - 1)))
                     for u in survivors if adj[u] & sbits >> (u + 1) << (u + 1)), None)
        if edge is None:
            for u in survivors:
                if adj[u] & sbits:
                    raise VerificationError("independent set check failed")
            return RtResult(VertexSet(n, sbits), K, tuple(chosen), tuple(steps))
        u, rest = edge
        v = (rest & -rest).bit_length() - 1
        step["edge"] = [u, v]
        clique += [u, v]
        common = adj[u] & adj[v]
        current = [{x for x in w if common >> x & 1} for w in later]
        if any(not w for w in current):
            raise Refusal("common neighbourhood emptied a part", {"K": K, "steps": steps})
        delta_j = delta_j + 16 * delta_j * p
    for a, b in combinations(clique, 2):
        if not adj[a] >> b & 1:
            raise VerificationError("K_2p witness is not a clique")
    raise Refusal(
        f"graph contains K_{2 * p}",
        {"K": K, "witness": sorted(clique), "steps": steps},
    )
