"""Seeded random graphs, certified K_s-free samples, homogeneous-pair audits
and a log-space checker for the local-lemma inequality system.

Randomness comes from numpy's PCG64 bit generator; every sampler is a pure
function of its parameters and integer seed.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb

import mpmath
import numpy as np

from .core import BudgetExceeded, Graph, InputError, iter_bits
from .families import rng
from .ramsey import max_independent_set, _greedy_independent
from .vc import graph_vc_search

log = logging.getLogger(__name__)

PRNG = "numpy.PCG64"
mpmath.mp.dps = 50

__all__ = [
    "PRNG",
    "sample_gnp",
    "LllInstance",
    "LllVerdict",
    "lll_feasibility",
    "scaled_instance",
    "grid_search",
    "find_clique",
    "KsFreeCertificate",
    "ks_free_bounded_vc",
    "AuditResult",
    "homogeneous_pair_audit",
    "vc_event_bound",
]


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p): the upper triangle is filled row by row from one PCG64 stream."""
    if not 0 <= p <= 1:
        raise InputError("p must lie in [0, 1]")
    gen = rng(seed)
    iu = np.triu_indices(n, 1)
    keep = gen.random(len(iu[0])) < p
    a = np.zeros((n, n), dtype=bool)
    a[iu[0][keep], iu[1][keep]] = True
    a |= a.T
    return Graph.from_matrix(a)


# ---------------------------------------------------------------------------
# Local lemma system


@dataclass(frozen=True)
class LllInstance:
    n: int
    s: int
    d: int
    t: int
    x: mpmath.mpf
    y: mpmath.mpf
    z: mpmath.mpf
    p: mpmath.mpf

    def __post_init__(self):
        for name in ("x", "y", "z", "p"):
            v = mpmath.mpf(getattr(self, name))
            if not 0 < v < 1:
                raise InputError(f"{name} must lie in (0, 1), got {mpmath.nstr(v, 6)}")
            object.__setattr__(self, name, v)
        if self.n < 2 or self.s < 2 or self.t < 2 or self.d < 1:
            raise InputError("n, s, t must be at least 2 and d at least 1")


@dataclass(frozen=True)
class LllVerdict:
    lhs: tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]
    rhs: tuple[mpmath.mpf, mpmath.mpf, mpmath.mpf]

    @property
    def margins(self) -> tuple[mpmath.mpf, ...]:
        return tuple(r - l for l, r in zip(self.lhs, self.rhs))

    @property
    def holds(self) -> tuple[bool, bool, bool]:
        return tuple(l <= r for l, r in zip(self.lhs, self.rhs))

    @property
    def feasible(self) -> bool:
        return all(self.holds)

    def to_dict(self) -> dict:
        fmt = lambda v: mpmath.nstr(v, 17)  # noqa: E731
        return {
            "inequalities": [
                {"log_lhs": fmt(l), "log_rhs": fmt(r), "log_margin": fmt(r - l), "holds": h}
                for l, r, h in zip(self.lhs, self.rhs, self.holds)
            ],
            "feasible": self.feasible,
        }


def _log1m(v) -> mpmath.mpf:
    return mpmath.log1p(-v)


def _finite(name: str, v) -> mpmath.mpf:
    if not mpmath.isfinite(v):
        raise ArithmeticError(f"nonfinite value in term {name}")
    return v


def lll_feasibility(inst: LllInstance, require_gap: bool = True) -> LllVerdict:
    """Evaluate the three local-lemma inequalities for K_s, independent t-sets
    and shattered d-sets in natural-log space."""
    if require_gap and not inst.d > inst.s + 2:
        raise InputError("the system is stated for d > s + 2")
    n = mpmath.mpf(inst.n)
    s, d, t = inst.s, inst.d, inst.t
    lx, ly, lz = _log1m(inst.x), _log1m(inst.y), _log1m(inst.z)
    log_cnt = mpmath.log(mpmath.binomial(n, t))
    common_y = _finite("(1-y)^C(n,t)", mpmath.exp(log_cnt) * ly)

    def side(name, w, coef):
        return _finite(name, mpmath.log(w) + coef * n ** (s - 2) * lx + common_y + coef * n ** (d - 2) * lz)

    lhs1 = _finite("p^C(s,2)", comb(s, 2) * mpmath.log(inst.p))
    lhs2 = _finite("(1-p)^C(t,2)", comb(t, 2) * _log1m(inst.p))
    lhs3 = _finite("n^2^d p^(d 2^(d-1))", 2**d * mpmath.log(n) + d * 2 ** (d - 1) * mpmath.log(inst.p))
    rhs1 = side("rhs1", inst.x, s * s)
    rhs2 = side("rhs2", inst.y, t * t)
    rhs3 = side("rhs3", inst.z, d * d)
    return LllVerdict((lhs1, lhs2, lhs3), (rhs1, rhs2, rhs3))


def scaled_instance(n, s: int, d: int, c1, c2, c3, c4, p_scale=1) -> LllInstance:
    """Parameterisation p = c0 n^(-2/(s+1)), t = c1 n^(2/(s+1)) ln n,
    x = c2 n^(-2 C(s,2)/(s+1)), y = exp(-c3 n^(2/(s+1)) (ln n)^2),
    z = c4 n^(2^d - 2/(s+1) d 2^(d-1)); c0 = ``p_scale`` defaults to 1."""
    n = mpmath.mpf(n)
    a = mpmath.mpf(2) / (s + 1)
    ln = mpmath.log(n)
    p = p_scale * n ** (-a)
    t = int(mpmath.ceil(c1 * n**a * ln))
    x = c2 * n ** (-a * comb(s, 2))
    y = mpmath.exp(-c3 * n**a * ln**2)
    z = c4 * n ** (2**d - a * d * 2 ** (d - 1))
    return LllInstance(int(n), s, d, max(t, 2), x, y, z, p)


def grid_search(n, s: int, d: int, grid: dict, p_scale=1) -> tuple[dict | None, list[dict]]:
    """Try every (c1, c2, c3, c4) in the grid; return the first passing tuple
    (in grid order) and the per-tuple log."""
    rows = []
    found = None
    keys = ("c1", "c2", "c3", "c4")
    for combo in itertools.product(*(grid[k] for k in keys)):
        consts = dict(zip(keys, combo))
        try:
            verdict = lll_feasibility(scaled_instance(n, s, d, *combo, p_scale=p_scale))
        except InputError as exc:
            rows.append({**consts, "status": "domain", "reason": str(exc)})
            continue
        rows.append({**consts, "status": "pass" if verdict.feasible else "fail",
                     "holds": list(verdict.holds)})
        if verdict.feasible and found is None:
            found = consts
    return found, rows


def vc_event_bound(n: int, p, d: int) -> mpmath.mpf:
    """Natural log of n^(2^d) p^(d 2^(d-1)); -inf at p = 0."""
    p = mpmath.mpf(p)
    if p < 0 or p >= 1:
        raise InputError("p must lie in [0, 1)")
    if p == 0:
        return mpmath.ninf if d > 0 else mpmath.log(n)
    return 2**d * mpmath.log(n) + d * 2 ** (d - 1) * mpmath.log(p)


# ---------------------------------------------------------------------------
# Certified K_s-free samples


def find_clique(g: Graph, s: int) -> tuple[int, ...] | None:
    """Lexicographically first K_s, by exhaustive extension over forward neighbours."""
    adj = g.adj

    def grow(chosen: tuple[int, ...], cand: int):
        if len(chosen) == s:
            return chosen
        for v in iter_bits(cand):
            found = grow(chosen + (v,), cand & adj[v] & ~((1 << (v + 1)) - 1))
            if found:
                return found
        return None

    if s <= 0:
        return ()
    return grow((), (1 << g.n) - 1)


@dataclass(frozen=True)
class KsFreeCertificate:
    graph: Graph
    tries: int
    seed: int
    p: float
    vc_dimension: int
    vc_witness: tuple[int, ...]
    independence_number: int
    independence_exact: bool

    def to_dict(self) -> dict:
        return {
            "prng": PRNG,
            "seed": self.seed,
            "p": repr(self.p),
            "tries": self.tries,
            "edges": self.graph.edge_count,
            "vc_dimension": self.vc_dimension,
            "vc_witness": list(self.vc_witness),
            "independence_number": self.independence_number,
            "independence_exact": self.independence_exact,
        }


def _try_seed(seed: int, i: int) -> int:
    return int(np.random.SeedSequence([seed, i]).generate_state(1, np.uint64)[0] >> 1)


def ks_free_bounded_vc(
    n: int, s: int, d: int, seed: int, max_tries: int, p_scale: float = 1.0
) -> KsFreeCertificate:
    """Rejection-sample G(n, c0 n^(-2/(s+1))) until K_s-free with VC-dimension <= d.

    ``p_scale`` is c0 (1 by default).  Try i uses the seed derived from
    (seed, i), so the accepted sample does not depend on how tries are
    scheduled.
    """
    if s < 3:
        raise InputError("s must be at least 3")
    if max_tries < 1:
        raise InputError("max_tries must be positive")
    if n > 60:
        raise BudgetExceeded("exhaustive K_s check limited to n <= 60")
    p = min(1.0, p_scale * float(n) ** (-2 / (s + 1))) if n > 1 else 0.0
    stats = {"clique": 0, "vc": 0}
    for i in range(max_tries):
        g = sample_gnp(n, p, _try_seed(seed, i))
        if find_clique(g, s) is not None:
            stats["clique"] += 1
            continue
        vc = graph_vc_search(g, cap=d + 1)
        if vc.dimension > d:
            stats["vc"] += 1
            continue
        if n <= 20:
            alpha, exact = len(max_independent_set(g)), True
        else:
            alpha, exact = _greedy_independent(g, (1 << n) - 1).bit_count(), False
        return KsFreeCertificate(g, i + 1, seed, p, vc.dimension, vc.witness, alpha, exact)
    raise BudgetExceeded(
        f"no acceptable sample in {max_tries} tries "
        f"(rejected: {stats['clique']} with K_{s}, {stats['vc']} with VC > {d})"
    )


# ---------------------------------------------------------------------------
# Homogeneous pairs


@dataclass(frozen=True)
class AuditResult:
    found: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None
    kind: str | None
    inconclusive: bool
    checked: int

    def to_dict(self) -> dict:
        return {
            "found": self.found,
            "witness": None if self.witness is None else [list(self.witness[0]), list(self.witness[1])],
            "kind": self.kind,
            "inconclusive": self.inconclusive,
            "checked": self.checked,
        }


def _pair_kind(adj, a: tuple[int, ...], b_bits: int) -> str | None:
    if all(adj[u] & b_bits == b_bits for u in a):
        return "complete"
    if all(adj[u] & b_bits == 0 for u in a):
        return "empty"
    return None


def homogeneous_pair_audit(
    g: Graph, size: int, mode: str = "exhaustive", budget: int = 10**6, seed: int | None = None
) -> AuditResult:
    """Search for disjoint A, B with |A| = |B| = size and A x B all edges or all non-edges."""
    if size < 1:
        raise InputError("size must be positive")
    adj = g.adj
    if mode == "exhaustive":
        total = comb(g.n, size) ** 2
        if total > budget:
            raise BudgetExceeded(f"C({g.n},{size})^2 = {total} exceeds budget {budget}")
        checked = 0
        for a in itertools.combinations(range(g.n), size):
            a_bits = sum(1 << v for v in a)
            # B ranges over the common neighbourhood or common non-neighbourhood of A
            common_in = (1 << g.n) - 1 & ~a_bits
            common_out = common_in
            for u in a:
                common_in &= adj[u]
                common_out &= ~adj[u]
            checked += 1
            for bits, kind in ((common_in, "complete"), (common_out, "empty")):
                if bits.bit_count() >= size:
                    b = tuple(itertools.islice(iter_bits(bits), size))
                    return AuditResult(True, (a, b), kind, False, checked)
        return AuditResult(False, None, None, False, checked)
    if mode != "sampled":
        raise InputError(f"unknown mode {mode!r}")
    if seed is None:
        raise InputError("sampled mode needs a seed")
    if 2 * size > g.n:
        return AuditResult(False, None, None, False, 0)
    gen = rng(seed)
    for i in range(budget):
        perm = gen.permutation(g.n)
        a = tuple(sorted(int(v) for v in perm[:size]))
        b = tuple(sorted(int(v) for v in perm[size:2 * size]))
        kind = _pair_kind(adj, a, sum(1 << v for v in b))
        if kind:
            return AuditResult(True, (a, b), kind, False, i + 1)
    return AuditResult(False, None, None, True, budget)
