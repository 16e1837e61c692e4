"""Command line front end.

    graphbraid present GRAPH -n N [--output json] [--oracle] [--check]
    graphbraid check   GRAPH -n N
    graphbraid count   GRAPH -n N
    graphbraid oracle  GRAPH -n N

GRAPH is a graph file or one of the built-in names ``@fig1``, ``@htree``,
``@k4``, ``@y``, ``@theta``, ``@figure8``, ``@radial:D`` and ``@path:K``.

Exit status: 0 success, 1 bad input, 2 failed invariant, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys
from dataclasses import dataclass

from . import library
from .config_complex import DEFAULT_CAP, CellCapExceeded, ConfigurationComplex
from .graph_model import GraphError, VertexOrder, load_graph, prepare
from .homology_oracle import homology
from .morse_field import FieldError, MorseField, critical_cells, dimension_bound, validate_field
from .notation import NotationError
from .presentation import (
    CONVENTION,
    Presenter,
    abelianization_rank,
    contains_k33,
    generator_count_formula,
    raag_commutation_graph,
)
from .rewrite_engine import LEFTMOST, RewriteBudgetExceeded, RewriteSystem

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT, EXIT_CAP = 0, 1, 2, 3
STRATEGIES = ("memo", "leftmost", "rightmost")


class InvariantViolation(RuntimeError):
    def __init__(self, clause: str, report: dict):
        super().__init__(clause)
        self.clause = clause
        self.report = report


@dataclass
class RunConfig:
    command: str
    graph: str
    n: int
    root: str | None = None
    pendant_root: bool = False
    subdivide: str = "auto"
    output: str = "text"
    check: bool = False
    oracle: bool = False
    trace_rewrites: bool = False
    cap: int = DEFAULT_CAP
    strategy: str = "memo"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.cap < 1:
            raise ValueError("cap must be at least 1")


_BUILTIN = {
    "fig1": library.fig1_tree,
    "htree": library.h_tree,
    "k4": library.k4_radial,
    "y": library.y_graph,
    "theta": library.theta_graph,
    "figure8": library.figure_eight,
}


def load(spec: str):
    if spec.startswith("@"):
        name, _, arg = spec[1:].partition(":")
        if name == "radial":
            return library.radial_tree(int(arg))
        if name == "path":
            return library.path_graph(int(arg))
        if name in _BUILTIN:
            return _BUILTIN[name]()
        raise GraphError(f"unknown built-in graph {spec!r}")
    return load_graph(spec)


def build(cfg: RunConfig) -> ConfigurationComplex:
    g = load(cfg.graph)
    if cfg.root is not None:
        if cfg.root not in g.rotation:
            raise GraphError(f"root {cfg.root!r} is not a vertex")
        g = dataclasses.replace(g, root=cfg.root)
    g.validate()
    # with forced deleted edges only the degree in the tree matters
    deg = g.degree(g.root) if g.deleted_edges is None else g.tree_degree(g.root)
    if deg != 1 and not cfg.pendant_root:
        raise GraphError(f"root {g.root!r} has degree {deg}; pass --pendant-root")
    order = prepare(g, cfg.n, subdivide=cfg.subdivide == "auto", add_pendant_root=cfg.pendant_root)
    return ConfigurationComplex(order, cfg.n, cfg.cap)


# ---------------------------------------------------------------- reports


def count_report(cx: ConfigurationComplex) -> dict:
    o: VertexOrder = cx.order
    crit = critical_cells(cx)
    counts = crit.counts
    out = {
        "n": cx.n,
        "vertices": len(o),
        "essential": len(o.essential),
        "deleted_edges": len(o.deleted),
        "cells": cx.cell_counts(),
        "critical": counts,
        "euler": cx.euler_characteristic(),
        "critical_euler": crit.euler(),
        "dimension_bound": dimension_bound(o, cx.n),
    }
    try:
        out["formula_m1"] = generator_count_formula(o, cx.n)
    except ValueError:
        out["formula_m1"] = None
    return out


def check_report(cx: ConfigurationComplex, seed: int = 0) -> dict:
    """Field axioms, confluence, generator formula and the Euler identity."""
    field_rep = validate_field(cx)
    rs = RewriteSystem(MorseField(cx))
    words = rs.random_words(200, random.Random(seed))
    words += [rs.word(cx.boundary_word(c)) for c in critical_cells(cx, dims={2}).by_dim.get(2, [])]
    conf = rs.check_local_confluence(words)
    counts = count_report(cx)
    clauses = {name: passed for name, (passed, _) in field_rep.clauses.items()}
    clauses["local_confluence"] = conf.ok
    if counts["formula_m1"] is not None:
        m1 = counts["critical"][1] if len(counts["critical"]) > 1 else 0
        clauses["generator_formula"] = counts["formula_m1"] == m1
    clauses["euler_identity"] = counts["critical_euler"] == counts["euler"]
    return {
        "ok": all(clauses.values()),
        "clauses": clauses,
        "field": field_rep.as_dict(),
        "confluence": {"words": conf.words, "pairs": conf.pairs, "failures": len(conf.failures)},
        "counts": counts,
    }


def oracle_report(cx: ConfigurationComplex, presentation=None) -> dict:
    h = homology(cx)
    out = {"h0": h.h0, "h1_rank": h.h1_rank, "h1_torsion": h.torsion, "method": h.method}
    if presentation is not None:
        ab = abelianization_rank(presentation)
        out["abelianization_rank"] = ab
        out["agrees"] = ab == h.h1_rank and h.h0 == 1 and not h.torsion
    return out


def presentation_report(pres, cx: ConfigurationComplex) -> dict:
    graph = raag_commutation_graph(pres)
    raag = None
    if graph is not None:
        raag = {"edges": sorted(graph.edges()), "contains_k33": contains_k33(graph)}
    return {
        "convention": CONVENTION,
        "n": pres.n,
        "graph_hash": pres.graph_hash,
        "counts": pres.counts,
        "euler": pres.euler,
        "non_optimal": pres.non_optimal,
        "free": len(pres.relators) == 0,
        "generators": [
            {"index": k, "name": name, "cell": cx.format_cell(c)}
            for k, (name, c) in enumerate(zip(pres.names, pres.generators), 1)
        ],
        "relators": [
            {"cell": cx.format_cell(r.cell), "word": list(r.word), "text": pres.format_relator(r)}
            for r in pres.relators
        ],
        "raag": raag,
    }


def format_text(rep: dict) -> str:
    lines = [f"graph {rep['graph_hash']}  n={rep['n']}",
             f"critical cells {rep['counts']}  euler {rep['euler']}"]
    if rep["non_optimal"]:
        lines.append("note: the presentation may not be minimal for a graph with cycles")
    gens = rep["generators"]
    if rep["free"]:
        lines.append(f"free group of rank {len(gens)}")
    lines.append(f"generators ({len(gens)}):")
    lines += [f"  g{g['index']} = {g['name']}" for g in gens]
    if rep["relators"]:
        lines.append(f"relators ({len(rep['relators'])}):")
        lines += [f"  {r['text']}" for r in rep["relators"]]
    if rep["raag"] is not None and rep["relators"]:
        lines.append(f"right-angled Artin group, {len(rep['raag']['edges'])} commuting pairs"
                     + (", commutation graph contains K3,3" if rep["raag"]["contains_k33"] else ""))
    if "oracle" in rep:
        o = rep["oracle"]
        lines.append(f"oracle: h1 rank {o['h1_rank']} torsion {o['h1_torsion']} "
                     f"abelianization {o.get('abelianization_rank')} agrees {o.get('agrees')}")
    if "check" in rep:
        lines.append("check: " + ("pass" if rep["check"]["ok"] else "FAIL"))
        lines += [f"  {k}: {'pass' if v else 'FAIL'}" for k, v in rep["check"]["clauses"].items()]
    return "\n".join(lines)


def _format_mapping(rep: dict, title: str) -> str:
    lines = [title]
    for k, v in rep.items():
        if isinstance(v, dict):
            lines.append(f"  {k}:")
            lines += [f"    {a}: {b}" for a, b in v.items()]
        else:
            lines.append(f"  {k}: {v}")
    return "\n".join(lines)


# ---------------------------------------------------------------- driver


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        cx = build(cfg)
        rep, text = _dispatch(cfg, cx, err)
    except (GraphError, NotationError, OSError, ValueError) as exc:
        print(f"input error: {exc}", file=err)
        return EXIT_INPUT
    except (CellCapExceeded, RewriteBudgetExceeded) as exc:
        print(f"cap exceeded: {exc}", file=err)
        return EXIT_CAP
    except FieldError as exc:
        print(f"invariant violated: {exc}", file=err)
        return EXIT_INVARIANT
    except InvariantViolation as exc:
        _emit(cfg, exc.report, None, out)
        print(f"invariant violated: {exc.clause}", file=err)
        return EXIT_INVARIANT
    _emit(cfg, rep, text, out)
    return EXIT_OK


def _emit(cfg, rep, text, out):
    if cfg.output == "json" or text is None:
        out.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")


def _failed(check: dict) -> str:
    return next(k for k, v in check["clauses"].items() if not v)


def _dispatch(cfg: RunConfig, cx: ConfigurationComplex, err):
    if cfg.command == "count":
        rep = count_report(cx)
        return rep, _format_mapping(rep, "counts")
    if cfg.command == "check":
        rep = check_report(cx)
        if not rep["ok"]:
            raise InvariantViolation(_failed(rep), rep)
        return rep, _format_mapping(rep["clauses"], "check: pass")
    if cfg.command == "oracle":
        pres = Presenter(cx).presentation()
        rep = oracle_report(cx, pres)
        if not rep["agrees"]:
            raise InvariantViolation("oracle_agreement", rep)
        return rep, _format_mapping(rep, "oracle")

    strategy = cfg.strategy
    trace = None
    if cfg.trace_rewrites:
        # only the stepwise strategies report individual rule applications
        strategy = LEFTMOST if strategy == "memo" else strategy
        trace = lambda line: print(line, file=err)  # noqa: E731
    pres = Presenter(cx, strategy=strategy, trace=trace).presentation()
    rep = presentation_report(pres, cx)
    if cfg.oracle:
        rep["oracle"] = oracle_report(cx, pres)
    if cfg.check:
        rep["check"] = check_report(cx)
    text = format_text(rep)
    if cfg.oracle and not rep["oracle"]["agrees"]:
        raise InvariantViolation("oracle_agreement", rep)
    if cfg.check and not rep["check"]["ok"]:
        raise InvariantViolation(_failed(rep["check"]), rep)
    return rep, text


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="graphbraid", description="Presentations of graph braid groups.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("present", "compute a presentation"),
                        ("check", "validate the field, rewriting and counts"),
                        ("count", "cell and critical cell counts"),
                        ("oracle", "compare H1 with the abelianized presentation")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("graph", help="graph file, or a built-in such as @fig1 or @radial:4")
        s.add_argument("-n", type=int, required=True, help="number of strands")
        s.add_argument("--root", help="use this vertex as the basepoint")
        s.add_argument("--pendant-root", action="store_true", help="attach a new leaf to the root and use it")
        s.add_argument("--subdivide", choices=("auto", "off"), default="auto")
        s.add_argument("--output", choices=("text", "json"), default="text")
        s.add_argument("--check", action="store_true")
        s.add_argument("--oracle", action="store_true")
        s.add_argument("--trace-rewrites", action="store_true", help="print each rule application to stderr")
        s.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximal number of cells to enumerate")
        s.add_argument("--strategy", choices=STRATEGIES, default="memo")
    return p


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.graph, args.n, args.root, args.pendant_root, args.subdivide,
                        args.output, args.check, args.oracle, args.trace_rewrites, args.cap, args.strategy)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
