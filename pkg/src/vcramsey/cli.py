"""Command-line entry point.

Every command prints one JSON document ``{"manifest": ..., "result": ...}``
with sorted keys.  The manifest records the normalised argv, input digests,
seed and tool version, so ``vcramsey replay`` can reproduce the report.
Exit codes: 0 success, 1 error, 2 refusal, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import itertools
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__, families, randgen
from .core import (
    BudgetExceeded,
    InputError,
    Partition,
    Refusal,
    VertexSet,
    format_graph,
    parse_graph,
    parse_hypergraph,
    parse_rational,
)
from .ramsey import cotree_clique_stable, extract_cograph, is_cograph, rt_independent_set
from .regularity import (
    count_flip_pairs,
    homogeneity_report,
    ultra_strong_partition,
)
from .vc import graph_vc_search, is_shattered, neighborhood_system, sauer_bound, shatter_profile, vc_search

log = logging.getLogger("vcramsey")

EXIT_OK, EXIT_ERROR, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 64
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _json_default(o):
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}"
    if isinstance(o, mpmath.mpf):
        return mpmath.nstr(o, 17)
    if isinstance(o, VertexSet):
        return list(o)
    raise TypeError(f"not serialisable: {type(o).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + "\n"


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path: str, k: int):
    text = Path(path).read_text(encoding="utf-8")
    return parse_graph(text) if k == 2 else parse_hypergraph(text, k)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


# ---------------------------------------------------------------------------
# Commands


def cmd_vcdim(a):
    h = _load(a.file, a.k)
    if a.k == 2:
        res = graph_vc_search(h, a.cap)
    else:
        res = vc_search(neighborhood_system(h), a.cap)
    out = res.to_dict()
    out["profile"] = None
    if a.z_max is not None:
        out["profile"] = shatter_profile(neighborhood_system(h), a.z_max, a.budget).to_dict()
    return out


def cmd_shatter(a):
    h = _load(a.file, a.k)
    s = neighborhood_system(h)
    out = {}
    if a.set is not None:
        t = VertexSet.of(s.universe_size, _int_list(a.set))
        out["set"] = list(t)
        out["shattered"] = is_shattered(s, t)
    if a.z_max is not None:
        prof = shatter_profile(s, a.z_max, a.budget)
        d = vc_search(s, a.cap).dimension if a.k != 2 else graph_vc_search(h, a.cap).dimension
        out["profile"] = prof.to_dict()
        out["dimension"] = d
        out["sauer"] = [sauer_bound(max(d, 0), z) for z in range(a.z_max + 1)]
    if not out:
        raise InputError("give --set and/or --z-max")
    return out


def _report_doc(p: Partition, report) -> dict:
    doc = report.to_dict()
    doc["assignment"] = list(p.assignment)
    doc["part_sizes"] = list(p.part_sizes)
    doc["equitable"] = p.equitable
    if p.pure is not None:
        doc["pure"] = list(p.pure)
    return doc


def cmd_partition(a):
    h = _load(a.file, a.k)
    p, report, packing = ultra_strong_partition(h, a.epsilon, clamp=a.clamp, with_densities=a.emit_densities)
    doc = _report_doc(p, report)
    doc["delta"] = packing.delta
    doc["centers"] = list(packing.centers)
    doc["target_K"] = -(-8 * h.k * len(packing.centers) * a.epsilon.denominator // a.epsilon.numerator)
    doc["clamped"] = doc["target_K"] > p.K
    return doc


def _read_assignment(path: str) -> list[int]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        return _int_list(text)
    if isinstance(doc, dict):
        doc = doc.get("result", doc).get("assignment")
    if not isinstance(doc, list):
        raise InputError("assignment JSON must be a list or carry an 'assignment' field")
    return [int(x) for x in doc]


def cmd_verify_partition(a):
    h = _load(a.file, a.k)
    assignment = _read_assignment(a.assignment)
    if len(assignment) != h.n:
        raise InputError(f"assignment has {len(assignment)} entries for {h.n} vertices")
    K = max(assignment) + 1 if assignment else 0
    p = Partition(h.n, K, tuple(assignment))
    return _report_doc(p, homogeneity_report(h, p, a.epsilon, with_densities=a.emit_densities))


def cmd_flip_pairs(a):
    h = _load(a.file, a.k)
    groups = [g for g in a.parts.split(";") if g.strip()]
    parts = [VertexSet.of(h.n, _int_list(g)) for g in groups]
    return {"parts": [list(p) for p in parts], "flip_pairs": count_flip_pairs(h, parts)}


def cmd_cograph(a):
    g = _load(a.file, 2)
    verdict = is_cograph(g)
    out = verdict.to_dict()
    if verdict:
        clique, stable = cotree_clique_stable(verdict.cotree)
        out["clique"] = list(clique)
        out["stable"] = list(stable)
    return out


def cmd_extract(a):
    g = _load(a.file, 2)
    vs, trace = extract_cograph(g, a.c, a.delta_exp, a.n0)
    return {
        "vertices": list(vs),
        "size": len(vs),
        "n": g.n,
        "schedule": {"c": a.c, "delta_exp": a.delta_exp, "n0": a.n0},
        "trace": trace.to_dict(),
    }


def cmd_rt_extract(a):
    g = _load(a.file, 2)
    return rt_independent_set(g, a.p, a.eps, a.delta_sup).to_dict()


def _emit_graph(g, out_path, result: dict) -> dict:
    text = format_graph(g)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        result["graph_sha256"] = hashlib.sha256(text.encode()).hexdigest()
    else:
        result["graph"] = text
    return result


def cmd_gen(a):
    if a.model == "gnp":
        g = randgen.sample_gnp(a.n, float(a.p), a.seed)
        res = {"prng": randgen.PRNG, "seed": a.seed, "n": a.n, "p": a.p, "edges": g.edge_count}
        return _emit_graph(g, a.out, res)
    cert = randgen.ks_free_bounded_vc(a.n, a.s, a.d, a.seed, a.max_tries, float(a.p_scale))
    return _emit_graph(cert.graph, a.out, cert.to_dict())


DEFAULT_GRID = {
    "c1": ["1", "2", "4", "8", "16", "32"],
    "c2": ["1/16", "1/8", "7/50", "1/4", "1/2", "1", "2", "4"],
    "c3": ["1/2", "1", "2", "4", "6", "8", "16"],
    "c4": ["1/2", "1", "101/100", "2"],
}


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def cmd_lll_check(a):
    scale = _mpf(a.p_scale)
    if a.constants:
        consts = [_mpf(parse_rational(c)) for c in a.constants.split(",")]
        if len(consts) != 4:
            raise InputError("--constants takes c1,c2,c3,c4")
        inst = randgen.scaled_instance(a.n, a.s, a.d, *consts, p_scale=scale)
        verdict = randgen.lll_feasibility(inst)
        return {"constants": a.constants.split(","), "t": inst.t, **verdict.to_dict()}
    grid = {k: [_mpf(parse_rational(v)) for v in vals] for k, vals in DEFAULT_GRID.items()}
    found, rows = randgen.grid_search(a.n, a.s, a.d, grid, p_scale=scale)
    out = {"grid": DEFAULT_GRID, "cells": len(rows), "passing": sum(r["status"] == "pass" for r in rows)}
    if found:
        inst = randgen.scaled_instance(a.n, a.s, a.d, *found.values(), p_scale=scale)
        out["found"] = {k: DEFAULT_GRID[k][grid[k].index(v)] for k, v in found.items()}
        out["verdict"] = randgen.lll_feasibility(inst).to_dict()
    else:
        out["found"] = None
    return out


def cmd_audit_homog(a):
    g = _load(a.file, 2)
    if a.mode == "sampled" and a.seed is None:
        raise UsageError("--seed is required for sampled mode")
    return randgen.homogeneous_pair_audit(g, a.size, a.mode, a.budget, a.seed).to_dict()


# ---------------------------------------------------------------------------
# Sweep

FAMILIES = {
    "threshold": lambda n, seed, kw: families.threshold_graph(n, kw.get("blocks", 3), seed),
    "incidence": lambda n, seed, kw: families.interval_incidence(
        n, kw.get("points", 3), kw.get("intervals", 4), seed),
    "cliques": lambda n, seed, kw: families.clique_union(n, kw.get("d", 4), seed),
    "chain": lambda n, seed, kw: families.chain_graph(n, seed),
    "gnp": lambda n, seed, kw: randgen.sample_gnp(n, float(Fraction(kw.get("p", "1/2"))), seed),
}

SWEEP_COLUMNS = ["family", "n", "epsilon", "seed", "status", "K", "S", "fraction", "vc", "runtime"]


def _sweep_cell(cell: dict) -> dict:
    row = {c: "" for c in SWEEP_COLUMNS}
    row.update(family=cell["family"], n=cell["n"], epsilon=cell["epsilon"], seed=cell["seed"])
    start = time.perf_counter()
    try:
        g = FAMILIES[cell["family"]](cell["n"], cell["seed"], cell.get("params", {}))
        if cell.get("vc"):
            row["vc"] = graph_vc_search(g).dimension
        p, report, packing = ultra_strong_partition(g, parse_rational(cell["epsilon"]))
        row.update(status="ok", K=p.K, S=len(packing.centers), fraction=str(report.fraction))
    except Refusal as exc:
        row.update(status="refused", fraction=str(exc))
    except Exception as exc:  # a failing cell must not stop the sweep
        row.update(status="failed", fraction=f"{type(exc).__name__}: {exc}")
    row["runtime"] = f"{time.perf_counter() - start:.4f}"
    return row


def sweep_cells(config: dict) -> list[dict]:
    grid = config["grid"]
    keys = ["family", "n", "epsilon", "seed"]
    for k in keys:
        if k not in grid:
            raise InputError(f"sweep grid lacks {k!r}")
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        cell = dict(zip(keys, combo))
        if cell["family"] not in FAMILIES:
            raise InputError(f"unknown family {cell['family']!r}")
        cell["params"] = config.get("params", {}).get(cell["family"], {})
        cell["vc"] = bool(config.get("vc", False))
        cells.append(cell)
    return cells


def run_sweep(config: dict, jobs: int = 1) -> list[dict]:
    cells = sweep_cells(config)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]


def cmd_sweep(a):
    config = json.loads(Path(a.config).read_text(encoding="utf-8"))
    rows = run_sweep(config, a.jobs)
    if a.out:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        Path(a.out).write_text(buf.getvalue(), encoding="utf-8")
    return {
        "schema": SCHEMA,
        "columns": SWEEP_COLUMNS,
        "rows": [{k: v for k, v in r.items() if k != "runtime"} for r in rows],
    }


# ---------------------------------------------------------------------------
# Parser


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="vcramsey", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text, inputs=("file",)):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func, inputs=inputs)
        p.add_argument("--jobs", type=int, default=1, help="worker bound; never changes output")
        p.add_argument("--log-level", default="WARNING")
        if "file" in inputs:
            p.add_argument("file", help="graph or hypergraph file")
        return p

    def k_opt(p):
        p.add_argument("--k", type=int, default=2, help="uniformity")

    p = command("vcdim", cmd_vcdim, "exact VC-dimension of the neighbourhood system")
    k_opt(p)
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--z-max", type=int)
    p.add_argument("--budget", type=int, default=2_000_000)

    p = command("shatter", cmd_shatter, "shattering test and primal shatter profile")
    k_opt(p)
    p.add_argument("--set", help="comma-separated vertices")
    p.add_argument("--z-max", type=int)
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--budget", type=int, default=2_000_000)

    p = command("partition", cmd_partition, "ultra-strong regularity partition")
    k_opt(p)
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--emit-densities", action="store_true")
    p.add_argument("--clamp", action="store_true", help="clamp K to n instead of refusing")

    p = command("verify-partition", cmd_verify_partition, "exact homogeneity report of an assignment",
                inputs=("file", "assignment"))
    k_opt(p)
    p.add_argument("assignment", help="JSON report or whitespace-separated part indices")
    p.add_argument("--epsilon", type=_rational, required=True)
    p.add_argument("--emit-densities", action="store_true")

    p = command("flip-pairs", cmd_flip_pairs, "count flip pairs across k parts")
    k_opt(p)
    p.add_argument("--parts", required=True, help="parts separated by ';', vertices by ','")

    command("cograph", cmd_cograph, "recognise a cograph and dump its cotree")

    p = command("extract", cmd_extract, "extract an induced cograph")
    p.add_argument("--c", type=_rational, default=Fraction(1, 8))
    p.add_argument("--delta-exp", type=_rational, default=Fraction(1, 2))
    p.add_argument("--n0", type=int, default=64)

    p = command("rt-extract", cmd_rt_extract, "Ramsey-Turan independent set")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--delta-sup", type=_rational, default=Fraction(9, 10))

    p = command("gen", cmd_gen, "seeded random graphs", inputs=())
    gen = p.add_subparsers(dest="model", required=True, parser_class=_Parser)
    for name in ("gnp", "ksfree"):
        q = gen.add_parser(name)
        # accepted after the model too; SUPPRESS keeps the parent's value otherwise
        q.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
        q.add_argument("--log-level", default=argparse.SUPPRESS)
        q.add_argument("--n", type=int, required=True)
        q.add_argument("--seed", type=int, required=True)
        q.add_argument("--out")
        if name == "gnp":
            q.add_argument("--p", type=_rational, required=True)
        else:
            q.add_argument("--s", type=int, required=True)
            q.add_argument("--d", type=int, required=True)
            q.add_argument("--max-tries", type=int, default=10_000)
            q.add_argument("--p-scale", type=_rational, default=Fraction(1))

    p = command("lll-check", cmd_lll_check, "local-lemma inequality feasibility", inputs=())
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--constants", help="c1,c2,c3,c4 as rationals; omit for the grid search")
    p.add_argument("--p-scale", type=_rational, default=Fraction(1))

    p = command("audit-homog", cmd_audit_homog, "search for a homogeneous pair of disjoint sets")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--seed", type=int)

    p = command("sweep", cmd_sweep, "run a parameter grid of partitions", inputs=("config",))
    p.add_argument("config", help="JSON grid configuration")
    p.add_argument("--out", help="CSV destination")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest", help="a report or manifest JSON file")
    p.set_defaults(func=None)
    return top


# ---------------------------------------------------------------------------
# Manifest and dispatch


def _strip_jobs(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--jobs":
            skip = True
            continue
        if tok.startswith("--jobs="):
            continue
        out.append(tok)
    return out


def _manifest(args, argv: list[str], elapsed: float) -> dict:
    inputs = {}
    for name in args.inputs:
        path = getattr(args, name, None)
        if path:
            inputs[path] = _digest(path)
    return {
        "schema": SCHEMA,
        "command": args.command if args.command != "gen" else f"gen {args.model}",
        "argv": argv,
        "inputs": dict(sorted(inputs.items())),
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timing": {"seconds": round(elapsed, 6)},
    }


def _replay_argv(path: str) -> list[str]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    manifest = doc.get("manifest", doc)
    for p, digest in manifest.get("inputs", {}).items():
        if _digest(p) != digest:
            raise InputError(f"input {p} changed since the manifest was written")
    return list(manifest["argv"])


def run(argv: list[str], stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "replay":
            argv = _replay_argv(args.manifest)
            args = parser.parse_args(argv)
            if args.command == "replay":
                raise InputError("a manifest cannot replay another replay")
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    logging.basicConfig(level=getattr(logging, args.log_level.upper(), logging.WARNING), stream=stderr)
    clean = _strip_jobs(argv)
    start = time.perf_counter()
    code = EXIT_OK
    try:
        body = {"result": args.func(args)}
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except Refusal as exc:
        print(f"refused: {exc}", file=stderr)
        body = {"refusal": {"message": str(exc), "report": exc.report}}
        code = EXIT_REFUSED
    except (InputError, BudgetExceeded, OSError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_ERROR
    except Exception as exc:  # unexpected: still exit 1 with a diagnostic
        log.exception("internal error")
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_ERROR
    body["manifest"] = _manifest(args, clean, time.perf_counter() - start)
    stdout.write(dumps(body))
    return code


def main(argv: list[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
