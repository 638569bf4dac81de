"""Seeded experiment runners. Each returns a report dict with per-instance
records and a summary; reports contain no timing so reruns are identical."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import ValueProfile, format_rational
from .graphs import Graph, RootedTree, disjoint_union, random_binary_tree, random_graph, random_tree
from .io import Instance, read_instance, to_dict
from .oracle import enumerate_optima
from .separability import (
    check_mla_contiguity,
    classify_separability_empirical,
    fig5_structural_check,
    interleaving,
    make_figure_instance,
)
from .trees import (
    check_global_median,
    check_local_median,
    deepest_violation,
    experiment_tree_extremes,
    local_median_fixpoint,
    local_median_step,
    subtree_envy,
)


def random_rationals(n: int, rng: random.Random, distinct: bool = False) -> list[Fraction]:
    """Non-negative rationals with small denominators."""
    out: list[Fraction] = []
    seen = set()
    while len(out) < n:
        x = Fraction(rng.randint(0, 999), rng.randint(1, 9))
        if distinct and x in seen:
            continue
        seen.add(x)
        out.append(x)
    return out


def _fmt_values(vals) -> list[str]:
    return [format_rational(v) for v in vals]


def tree_extremes(trees: int = 50, n: int = 9, seed: int = 0, budget: int | None = None) -> dict:
    rng = random.Random(seed)
    records = []
    counterexamples = []
    for t in range(trees):
        size = rng.randint(2, n)
        g = random_tree(size, rng)
        vals = random_rationals(size, rng)
        rep = experiment_tree_extremes(g, ValueProfile.from_values(vals), budget=budget)
        rec = {
            "index": t,
            "n": size,
            "edges": [list(e) for e in g.edges],
            "values": _fmt_values(vals),
            "optimum": rep["optimum"],
            "optima": rep["optima"],
            "holds": rep["holds"],
        }
        records.append(rec)
        if not rep["holds"]:
            counterexamples.append(to_dict(Instance(g, values=tuple(vals), metadata={"experiment": "tree-extremes"})))
    held = sum(r["holds"] for r in records)
    return {
        "experiment": "tree-extremes",
        "params": {"trees": trees, "n": n, "seed": seed},
        "records": records,
        "summary": {"instances": trees, "holds": held, "fraction": Fraction(held, trees) if trees else None},
        "counterexamples": counterexamples,
    }


def check_step_improvement(tree: RootedTree, alloc, profile) -> tuple[bool, bool, int]:
    """Run steps to the fixpoint. At every step the violating subtree must
    strictly improve and no other subtree may get worse.
    Returns ``(strict_ok, others_ok, steps)``."""
    strict_ok = True
    others_ok = True
    steps = 0
    cur = tuple(alloc)
    n = tree.graph.n
    while True:
        i = deepest_violation(tree, cur)
        nxt = local_median_step(tree, cur, profile)
        if nxt is None:
            break
        steps += 1
        if not subtree_envy(tree, nxt, profile, i) < subtree_envy(tree, cur, profile, i):
            strict_ok = False
        inside = set(tree.subtree(i))
        for v in range(n):
            if v in inside:
                continue
            if subtree_envy(tree, nxt, profile, v) > subtree_envy(tree, cur, profile, v):
                others_ok = False
        cur = nxt
        if steps > max(n**3, 1):
            raise RuntimeError("local median iteration did not terminate")
    return strict_ok, others_ok, steps


def local_median(trees: int = 20, n: int = 9, seed: int = 0, budget: int | None = None) -> dict:
    rng = random.Random(seed)
    records = []
    sizes = [s for s in range(3, n + 1) if s % 2] or [1]
    for t in range(trees):
        size = rng.choice(sizes)
        tree = random_binary_tree(size, rng)
        vals = random_rationals(size, rng, distinct=True)
        profile = ValueProfile.from_values(vals)
        start = list(range(size))
        rng.shuffle(start)
        strict_ok, others_ok, steps = check_step_improvement(tree, start, profile)
        fix = local_median_fixpoint(tree, start, profile)
        opt = enumerate_optima(tree.graph, profile, budget=budget)
        records.append(
            {
                "index": t,
                "n": size,
                "edges": [list(e) for e in tree.graph.edges],
                "root": tree.root,
                "values": _fmt_values(vals),
                "optimum": opt.envy,
                "fixpoint_envy": fix.envy,
                "fixpoint_matches_optimum": fix.envy == opt.envy,
                "steps": steps,
                "step_strict_decrease": strict_ok,
                "step_no_increase_elsewhere": others_ok,
                "optimum_local_median": any(check_local_median(tree, a) for a in opt.allocations),
                "optimum_global_median": any(check_global_median(tree, a) for a in opt.allocations),
            }
        )
    def frac(key):
        return Fraction(sum(r[key] for r in records), len(records)) if records else None

    return {
        "experiment": "local-median",
        "params": {"trees": trees, "n": n, "seed": seed},
        "records": records,
        "summary": {
            "instances": len(records),
            "optimum_local_median": frac("optimum_local_median"),
            "optimum_global_median": frac("optimum_global_median"),
            "step_improvement_holds": all(r["step_strict_decrease"] and r["step_no_increase_elsewhere"] for r in records),
            "fixpoint_optimal": frac("fixpoint_matches_optimum"),
        },
    }


def random_disconnected_graph(n: int, rng: random.Random) -> Graph:
    """Two or three random pieces; always has at least two components."""
    n = max(n, 2)
    k = rng.randint(2, min(3, n))
    cuts = sorted(rng.sample(range(1, n), k - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [n])]
    return disjoint_union(*(random_graph(s, rng.uniform(0.3, 0.9), rng) for s in sizes))


def mla_contiguity(graphs: int = 50, n: int = 8, seed: int = 0, budget: int | None = None) -> dict:
    rng = random.Random(seed)
    records = []
    for t in range(graphs):
        size = rng.randint(2, n)
        g = random_disconnected_graph(size, rng)
        records.append(
            {"index": t, "n": size, "edges": [list(e) for e in g.edges], "holds": check_mla_contiguity(g, budget)}
        )
    held = sum(r["holds"] for r in records)
    return {
        "experiment": "mla-contiguity",
        "params": {"graphs": graphs, "n": n, "seed": seed},
        "records": records,
        "summary": {"instances": graphs, "holds": held, "all_hold": held == graphs},
    }


def separability(figure: str | None = None, instance: str | None = None, budget: int | None = None) -> dict:
    if instance is not None:
        inst = read_instance(instance)
        source = {"instance": instance}
    else:
        figure = figure or "fig3-bottom"
        inst = make_figure_instance(figure)
        source = {"figure": figure}
    if inst.metadata.get("figure") == "fig5":
        check = fig5_structural_check(inst)
        a = check["interleaved_allocation"]
        s = inst.metadata["s"]
        na = s[0] + s[2] + 2
        quad = interleaving(a, range(na), range(na, inst.n))
        return {
            "experiment": "separability",
            "params": source,
            "structural": check,
            "interleaving": list(quad) if quad else None,
        }
    report = classify_separability_empirical(inst.graph, inst.profile, budget=budget)
    return {"experiment": "separability", "params": source, "report": report.as_dict()}


EXPERIMENTS = ("separability", "tree-extremes", "local-median", "mla-contiguity")
