"""``housealloc`` command line.

Result records go to standard output (or ``--out``); wall time goes to
standard error so records stay byte-identical across runs.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import experiments
from .core import (
    BudgetExceeded,
    InputError,
    format_decimal,
    format_rational,
    total_envy,
    total_envy_general,
)
from .dispatch import SOLVERS, classify_graph, solve, solve_general, union_family
from .graphs import (
    Kind,
    bipartite_sides,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    empty_graph,
    path_graph,
    random_binary_tree,
    random_graph,
    star_graph,
)
from .io import Instance, dumps, houses_to_ranks, ranks_to_houses, read_instance
from .oracle import Symmetry, brute_force, brute_force_general, canonicalize, enumerate_optima
from .reductions import BinPackingInput, Family, gen_from_binpacking, gen_from_bisection
from .render import render_interval
from .separability import FIGURES, make_figure_instance
from .validation import check_budget, check_houses, parse_int_list, parse_value_list

RESULT_SCHEMA = "housealloc.result"
RESULT_VERSION = 1


def _write(args, text: str) -> None:
    if not args.out:
        sys.stdout.write(text)
        return
    # write beside the target and rename, so readers never see a partial file
    out = Path(args.out)
    fd, tmp = tempfile.mkstemp(dir=out.parent if str(out.parent) else ".", prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, out)
    except OSError as exc:
        Path(tmp).unlink(missing_ok=True)
        raise InputError(f"cannot write {out}: {exc}") from exc


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _record(command: str, body: dict) -> dict:
    return {"schema": RESULT_SCHEMA, "version": RESULT_VERSION, "command": command, **body}


def _text(body: dict) -> str:
    lines = []
    for k, v in body.items():
        if isinstance(v, (list, tuple)) and all(not isinstance(x, (list, dict)) for x in v):
            v = " ".join(str(x) for x in v)
        elif isinstance(v, (dict, list)):
            v = json.dumps(v)
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def _emit(args, command: str, body: dict) -> None:
    body = _plain(body)
    if args.format == "structured":
        text = json.dumps(_record(command, body), indent=2) + "\n"
    else:
        text = _text(body)
    _write(args, text)


def _envy_fields(envy: Fraction) -> dict:
    return {"envy": format_rational(envy), "envy_decimal": format_decimal(envy)}


def _houses(inst: Instance, alloc) -> list[int]:
    if inst.general:
        return list(alloc)
    return list(ranks_to_houses(alloc, inst.profile))


def _parse_alloc(text: str, inst: Instance) -> tuple[int, ...]:
    return check_houses(parse_int_list(text), inst.n)


def _evaluate(inst: Instance, houses) -> Fraction:
    if inst.general:
        return total_envy_general(houses, inst.graph, inst.matrix)
    return total_envy(houses_to_ranks(houses, inst.profile), inst.graph, inst.profile)


# commands


def cmd_solve(args) -> None:
    inst = read_instance(args.instance)
    if args.evaluate:
        return cmd_evaluate(args, allocation=args.evaluate)
    if inst.general:
        res = solve_general(inst.graph, inst.matrix, args.solver, args.budget)
    else:
        res = solve(inst.graph, inst.profile, args.solver, args.budget)
    body = {
        "n": inst.n,
        "solver": res.solver,
        "guarantee": res.guarantee.value,
        **_envy_fields(res.envy),
        "allocation": _houses(inst, res.allocation),
    }
    if not inst.general:
        body["vertex_values"] = [inst.profile.values[a] for a in res.allocation]
    if "components" in res.info:
        body["components"] = res.info["components"]
    if "family" in res.info:
        body["family"] = res.info["family"]
    _emit(args, "solve", body)


def cmd_evaluate(args, allocation: str | None = None) -> None:
    inst = read_instance(args.instance)
    houses = _parse_alloc(allocation or args.allocation, inst)
    envy = _evaluate(inst, houses)
    _emit(args, "evaluate", {"n": inst.n, **_envy_fields(envy), "allocation": list(houses)})


def cmd_oracle(args) -> None:
    inst = read_instance(args.instance)
    if inst.general:
        res = brute_force_general(inst.graph, inst.matrix, args.budget)
    else:
        res = brute_force(inst.graph, inst.profile, args.budget)
    body = {
        "n": inst.n,
        "solver": res.solver,
        "guarantee": res.guarantee.value,
        **_envy_fields(res.envy),
        "allocation": _houses(inst, res.allocation),
    }
    _emit(args, "oracle", body)


def _canon_keyer(inst: Instance, symmetry: Symmetry):
    if symmetry is Symmetry.NONE:
        return tuple
    if symmetry is Symmetry.CYCLE_DIHEDRAL:
        parts = classify_graph(inst.graph)
        if len(parts) != 1 or parts[0].cls.kind is not Kind.CYCLE:
            raise InputError("--canon cycle needs a cycle graph")
        order = parts[0].layout
        return lambda a: canonicalize(a, symmetry, cycle_order=order)
    # small complete bipartite graphs are classified as paths or cycles, so
    # read the sides off a 2-colouring instead
    sides = bipartite_sides(inst.graph)
    if sides is None:
        raise InputError("--canon bipartite needs a complete bipartite graph")
    a_side, b_side = sides
    layout = a_side + b_side
    return lambda a: canonicalize([a[v] for v in layout], symmetry, sides=(len(a_side), len(b_side)))


def cmd_enumerate(args) -> None:
    inst = read_instance(args.instance)
    if inst.general:
        raise InputError("enumerate supports identical valuations only")
    symmetry = Symmetry(args.canon)
    opt = enumerate_optima(inst.graph, inst.profile, args.budget, args.limit)
    body: dict = {"n": inst.n, **_envy_fields(opt.envy), "optima": len(opt.allocations), "truncated": opt.truncated}
    if symmetry is not Symmetry.NONE:
        key = _canon_keyer(inst, symmetry)
        classes = sorted({key(a) for a in opt.allocations})
        body["canon"] = symmetry.value
        body["classes"] = len(classes)
    shown = opt.allocations[: args.show]
    body["allocations"] = [_houses(inst, a) for a in shown]
    _emit(args, "enumerate", body)


def cmd_classify(args) -> None:
    inst = read_instance(args.instance)
    parts = classify_graph(inst.graph)
    fam = union_family(parts) if len(parts) > 1 else None
    body = {
        "n": inst.n,
        "m": inst.graph.m,
        "components": [{"class": str(p.cls), "vertices": sorted(p.layout), "layout": list(p.layout)} for p in parts],
        "family": fam[0] if fam else None,
    }
    _emit(args, "classify", body)


def _family_instance(kind: str, args, rng) -> Instance:
    n = args.n
    root = None
    if kind == "path":
        g = path_graph(n)
    elif kind == "cycle":
        g = cycle_graph(n)
    elif kind == "star":
        g = star_graph(n - 1)
    elif kind == "clique":
        g = complete_graph(n)
    elif kind == "bipartite":
        if args.r is None or args.s is None:
            raise InputError("bipartite needs --r and --s")
        g = complete_bipartite_graph(args.r, parse_int_list(args.s)[0])
    elif kind == "binary-tree":
        tree = random_binary_tree(n, rng)
        g, root = tree.graph, tree.root
    elif kind == "empty":
        g = empty_graph(n)
    else:
        raise InputError(f"unknown family {kind!r}")
    vals = _values_for(args, g.n, rng)
    return Instance(g, values=vals, root=root, metadata={"generator": "family", "kind": kind})


def _values_for(args, n: int, rng) -> tuple:
    if getattr(args, "values", None):
        vals = parse_value_list(args.values)
        if len(vals) != n:
            raise InputError(f"--values has {len(vals)} entries for {n} vertices")
        return tuple(vals)
    if getattr(args, "even", False):
        return tuple(range(1, n + 1))
    return tuple(experiments.random_rationals(n, rng))


def cmd_generate(args) -> None:
    rng = random.Random(args.seed)
    kind = args.kind
    if kind == "random-graph":
        if args.n is None:
            raise InputError("random-graph needs --n")
        g = random_graph(args.n, args.p, rng)
        inst = Instance(g, values=_values_for(args, g.n, rng), metadata={"generator": "random-graph", "p": str(args.p), "seed": args.seed})
    elif kind == "family":
        if args.name is None or (args.n is None and args.name != "bipartite"):
            raise InputError("family needs a kind and --n")
        inst = _family_instance(args.name, args, rng)
    elif kind == "figure":
        if args.name not in FIGURES:
            raise InputError(f"figure must be one of {', '.join(FIGURES)}")
        params = {}
        if args.s:
            params["s"] = parse_int_list(args.s)
        inst = make_figure_instance(args.name, **params)
    elif kind == "bisection":
        if args.instance:
            g = read_instance(args.instance).graph
        elif args.n is not None:
            g = random_graph(args.n, args.p, rng)
        else:
            raise InputError("bisection needs --instance or --n")
        inst = gen_from_bisection(g, args.epsilon)
    elif kind == "binpacking":
        if not (args.items and args.bin and args.bins):
            raise InputError("binpacking needs --items, --bin and --bins")
        inp = BinPackingInput(tuple(parse_int_list(args.items)), args.bin, args.bins)
        inst = gen_from_binpacking(inp, Family(args.family), args.C, args.epsilon)
    else:
        raise InputError(f"unknown generator {kind!r}")
    # the instance document is already structured; --format does not apply
    _write(args, dumps(inst))


def cmd_experiment(args) -> None:
    name = args.name
    if name == "tree-extremes":
        rep = experiments.tree_extremes(args.trees, args.n or 9, args.seed, args.budget)
    elif name == "local-median":
        rep = experiments.local_median(args.trees, args.n or 9, args.seed, args.budget)
    elif name == "mla-contiguity":
        rep = experiments.mla_contiguity(args.graphs, args.n or 8, args.seed, args.budget)
    elif name == "separability":
        rep = experiments.separability(args.figure, args.instance, args.budget)
    else:
        raise InputError(f"unknown experiment {name!r}")
    if args.format == "structured":
        _emit(args, "experiment", rep)
    else:
        summary = rep.get("summary") or rep.get("report") or rep.get("structural")
        _emit(args, "experiment", {"experiment": name, **_plain(summary)})


def cmd_render(args) -> None:
    inst = read_instance(args.instance)
    if inst.general:
        raise InputError("render needs identical valuations")
    profile = inst.profile
    if args.allocation:
        ranks = houses_to_ranks(_parse_alloc(args.allocation, inst), profile)
    else:
        ranks = solve(inst.graph, profile, "auto", args.budget).allocation
    _write(args, render_interval(inst.graph, profile, ranks, args.width))


# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, default=None, help="cap on exhaustive enumeration")
    common.add_argument("--out", default=None, help="write the record here instead of stdout")

    p = argparse.ArgumentParser(prog="housealloc", description="Minimum-envy house allocation on graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve an instance")
    s.add_argument("instance")
    s.add_argument("--solver", choices=SOLVERS, default="auto")
    s.add_argument("--evaluate", metavar="ALLOC", help="score this allocation instead of solving")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("evaluate", parents=[common], help="score an allocation")
    s.add_argument("instance")
    s.add_argument("allocation", help="house index per vertex, comma separated")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("oracle", parents=[common], help="exhaustive optimum")
    s.add_argument("instance")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("enumerate", parents=[common], help="all optimal allocations")
    s.add_argument("instance")
    s.add_argument("--canon", choices=[x.value for x in Symmetry], default="none")
    s.add_argument("--limit", type=int, default=None, help="stop after this many optima")
    s.add_argument("--show", type=int, default=50, help="allocations to print")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("classify", parents=[common], help="component classes")
    s.add_argument("instance")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("generate", parents=[common], help="write an instance")
    s.add_argument("kind", choices=("random-graph", "family", "figure", "bisection", "binpacking"))
    s.add_argument("name", nargs="?", help="family kind or figure name")
    s.add_argument("--n", type=int)
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--r", type=int)
    s.add_argument("--s", help="bipartite side size, or fig5 star sizes s1,s2,s3,s4")
    s.add_argument("--values", help="comma separated rational values")
    s.add_argument("--even", action="store_true", help="values 1..n")
    s.add_argument("--instance", help="graph source for bisection")
    s.add_argument("--epsilon")
    s.add_argument("--items")
    s.add_argument("--bin", type=int)
    s.add_argument("--bins", type=int)
    s.add_argument("--family", choices=[f.value for f in Family], default="paths")
    s.add_argument("--C")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("experiment", parents=[common], help="run an experiment")
    s.add_argument("name", choices=experiments.EXPERIMENTS)
    s.add_argument("--trees", type=int, default=20)
    s.add_argument("--graphs", type=int, default=50)
    s.add_argument("--n", type=int)
    s.add_argument("--figure", choices=FIGURES)
    s.add_argument("--instance")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("render", parents=[common], help="draw the valuation interval")
    s.add_argument("instance")
    s.add_argument("--allocation", help="house index per vertex; solved if omitted")
    s.add_argument("--width", type=int, default=60)
    s.set_defaults(func=cmd_render)
    return p


def _fail(args, kind: str, msg: str, code: int) -> int:
    if getattr(args, "format", "text") == "structured":
        err = _record(getattr(args, "command", ""), {"error": {"type": kind, "message": msg}})
        sys.stderr.write(json.dumps(err, indent=2) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {msg}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.budget = check_budget(args.budget)
        t0 = time.perf_counter()
        args.func(args)
        sys.stderr.write(f"wall time: {time.perf_counter() - t0:.3f}s\n")
    except BudgetExceeded as exc:
        return _fail(args, "BudgetExceeded", str(exc), 3)
    except InputError as exc:
        return _fail(args, "InputError", str(exc), 2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
