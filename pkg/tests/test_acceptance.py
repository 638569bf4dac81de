"""Acceptance criteria, one test each. Every test prints a PASS/FAIL line."""
import functools
import itertools
import json
import random
import time
from fractions import Fraction

import pytest

from housealloc.cli import main
from housealloc.connected import (
    solve_clique,
    solve_complete_bipartite,
    solve_cycle,
    solve_path,
    solve_star,
)
from housealloc.core import ValueProfile, total_envy
from housealloc.dispatch import solve
from housealloc.experiments import check_step_improvement, random_disconnected_graph, random_rationals, tree_extremes
from housealloc.graphs import (
    ComponentClass,
    Graph,
    Kind,
    complete_bipartite_graph,
    complete_graph,
    connected_components,
    cycle_graph,
    disjoint_union,
    path_graph,
    random_binary_tree,
    random_graph,
    shape_graph,
    star_graph,
)
from housealloc.oracle import brute_force, count_classes, enumerate_optima
from housealloc.reductions import (
    BinPackingInput,
    Family,
    packing_exists,
    random_binpacking,
    verify_binpacking_small,
    verify_bisection_small,
)
from housealloc.separability import check_mla_contiguity, contiguous_blocks, make_figure_instance
from housealloc.trees import check_local_median, local_median_fixpoint
from housealloc.unions import (
    solve_cliques_xp,
    solve_equal_cliques,
    solve_matching_graph,
    solve_union_by_ordering,
    solve_union_paths_dp,
)

from conftest import FIG1_EDGES, FIG1_HOUSES, FIG1_VALUES

F = Fraction
N_RANDOM = 200


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return emit


def rand_profile(rng, n, distinct=False):
    return ValueProfile.from_values(random_rationals(n, rng, distinct=distinct))


def test_c01_figure_one(report):
    g = Graph(5, FIG1_EDGES)
    p = ValueProfile.from_values(FIG1_VALUES)
    ranks = {orig: k for k, orig in enumerate(p.original_index)}
    alloc = tuple(ranks[h] for h in FIG1_HOUSES)
    total_envy(alloc, g, p)  # warm-up
    t0 = time.perf_counter()
    envy = total_envy(alloc, g, p)
    ms = (time.perf_counter() - t0) * 1000
    ok = envy == 15 and ms < 1
    assert report("1 figure-1 envy", ok, f"envy={envy} time={ms:.3f}ms (limit 1ms)")


CLOSED_FORMS = {
    "path": (lambda n: path_graph(n), lambda n, p: solve_path(n, p), 1),
    "cycle": (lambda n: cycle_graph(n), lambda n, p: solve_cycle(n, p), 3),
    "star": (lambda n: star_graph(n - 1), lambda n, p: solve_star(n - 1, p), 2),
    "clique": (lambda n: complete_graph(n), lambda n, p: solve_clique(n, p), 1),
}


def test_c02_closed_forms_vs_oracle(report):
    rng = random.Random(2)
    t0 = time.perf_counter()
    bad = []
    for name, (graph_of, solver, lo) in CLOSED_FORMS.items():
        for _ in range(N_RANDOM):
            n = rng.randint(lo, 8)
            p = rand_profile(rng, n)
            if solver(n, p).envy != brute_force(graph_of(n), p).envy:
                bad.append((name, n))
    for _ in range(N_RANDOM):
        s = rng.randint(1, 4)
        r = rng.randint(s, 8 - s)
        p = rand_profile(rng, r + s)
        if solve_complete_bipartite(r, s, p).envy != brute_force(complete_bipartite_graph(r, s), p).envy:
            bad.append(("bipartite", r, s))
    secs = time.perf_counter() - t0
    ok = not bad and secs < 120
    assert report("2 closed forms = oracle", ok, f"{5 * N_RANDOM} instances, mismatches={bad[:3]}, {secs:.1f}s (limit 120s)")


def test_c03_counting(report):
    rng = random.Random(3)
    found = {}
    ok = True
    for n in (4, 5, 6, 7):
        p = rand_profile(rng, n, distinct=True)
        c = count_classes(enumerate_optima(cycle_graph(n), p), "cycle")
        found[f"C{n}"] = c
        ok &= c == 2 ** (n - 3)
    for r, s in itertools.product(range(1, 8), repeat=2):
        if r < s or r + s > 8:
            continue
        p = rand_profile(rng, r + s, distinct=True)
        c = count_classes(enumerate_optima(complete_bipartite_graph(r, s), p), "bipartite", sides=(r, s))
        want = 2**s if (r - s) % 2 == 0 else 1
        found[f"K{r},{s}"] = c
        ok &= c == want
    assert report("3 counting corollaries", ok, json.dumps(found))


SHAPE_MAKERS = {
    "paths": lambda rng: ComponentClass(Kind.PATH, (rng.randint(1, 4),)),
    "cycles": lambda rng: ComponentClass(Kind.CYCLE, (rng.randint(3, 5),)),
    "stars": lambda rng: ComponentClass(Kind.STAR, (rng.randint(1, 4),)),
}


def _random_union(rng, family):
    if family == "equal cliques":
        q = rng.randint(1, 4)
        r = rng.randint(1, 8 // q)
        return [ComponentClass(Kind.CLIQUE, (q,))] * r
    shapes = [SHAPE_MAKERS[family](rng)]
    while True:
        s = SHAPE_MAKERS[family](rng)
        if sum(x.size for x in shapes) + s.size > 8 or rng.random() < 0.25:
            return shapes
        shapes.append(s)


def _union_graph(shapes):
    return disjoint_union(*(shape_graph(s) for s in shapes))


@functools.lru_cache(maxsize=None)
def criterion4_instances():
    """Seeded instances shared by criteria 4 and 5."""
    rng = random.Random(4)
    out = []
    for family in ("paths", "cycles", "stars", "equal cliques"):
        for _ in range(N_RANDOM):
            shapes = _random_union(rng, family)
            n = sum(s.size for s in shapes)
            out.append(("ordering", family, tuple(shapes), rand_profile(rng, n)))
    for _ in range(N_RANDOM):
        shapes = _random_union(rng, "paths")
        n = sum(s.size for s in shapes)
        out.append(("paths_dp", "paths", tuple(shapes), rand_profile(rng, n)))
    for _ in range(N_RANDOM):
        k = rng.randint(0, 4)
        m = rng.randint(0 if k else 1, 8 - 2 * k)
        shapes = [ComponentClass(Kind.PATH, (2,))] * k + [ComponentClass(Kind.PATH, (1,))] * m
        out.append(("matching", "paths", tuple(shapes), rand_profile(rng, 2 * k + m)))
    for _ in range(N_RANDOM):
        sizes = []
        while True:
            q = rng.randint(1, 5)
            if sum(sizes) + q > 8 or (sizes and rng.random() < 0.3):
                break
            sizes.append(q)
        sizes.sort(reverse=True)
        shapes = [ComponentClass(Kind.CLIQUE, (q,)) for q in sizes]
        out.append(("cliques_xp", "cliques", tuple(shapes), rand_profile(rng, sum(sizes))))
    return out


def test_c04_unions_vs_oracle(report):
    bad = []
    cross = 0
    for solver, family, shapes, p in criterion4_instances():
        g = _union_graph(shapes)
        oracle = brute_force(g, p).envy
        if solver == "ordering":
            res = solve_union_by_ordering(list(shapes), p)
            if family == "equal cliques" and solve_equal_cliques(len(shapes), shapes[0].size, p).envy != oracle:
                bad.append(("equal_cliques", shapes))
        elif solver == "paths_dp":
            lengths = [s.size for s in shapes]
            res = solve_union_paths_dp(lengths, p)
            cross += 1
            if res.envy != solve_union_by_ordering(list(shapes), p).envy:
                bad.append(("dp != ordering", shapes))
        elif solver == "matching":
            k = sum(1 for s in shapes if s.size == 2)
            res = solve_matching_graph(k, len(shapes) - k, p)
            if res.envy != solve_union_paths_dp([s.size for s in shapes], p).envy:
                bad.append(("matching != dp", shapes))
        else:
            res = solve_cliques_xp([s.size for s in shapes], p)
        if res.envy != oracle or total_envy(res.allocation, g, p) != res.envy:
            bad.append((solver, family, [str(s) for s in shapes]))
    n = len(criterion4_instances())
    assert report("4 union solvers = oracle", not bad, f"{n} instances, {cross} cross checks, mismatches={bad[:3]}")


def test_c05_separability(report):
    t0 = time.perf_counter()
    missing = []
    checked = 0
    for solver, family, shapes, p in criterion4_instances():
        if solver == "cliques_xp":
            continue
        g = _union_graph(shapes)
        comps = [c.vertices for c in connected_components(g)]
        checked += 1
        if not any(contiguous_blocks(a, comps) for a in enumerate_optima(g, p).allocations):
            missing.append((family, [str(s) for s in shapes]))
    figures = {}
    for fig in ("fig3-bottom", "fig4"):
        inst = make_figure_instance(fig)
        comps = [c.vertices for c in connected_components(inst.graph)]
        opt = enumerate_optima(inst.graph, inst.profile)
        figures[fig] = {
            "n": inst.n,
            "optima": len(opt),
            "contiguous": sum(contiguous_blocks(a, comps) for a in opt.allocations),
        }
    secs = time.perf_counter() - t0
    ok = not missing and all(f["contiguous"] == 0 for f in figures.values()) and secs < 30
    detail = f"{checked} separable instances, missing={missing[:2]}, figures={figures}, {secs:.1f}s (limit 30s)"
    assert report("5 separability witnesses", ok, detail)


def test_c06_local_median(report):
    rng = random.Random(6)
    step_ok = True
    optimum_ok = True
    steps = 0
    for _ in range(20):
        n = rng.choice([1, 3, 5, 7, 9])
        tree = random_binary_tree(n, rng)
        p = rand_profile(rng, n, distinct=True)
        start = list(range(n))
        rng.shuffle(start)
        strict_ok, others_ok, k = check_step_improvement(tree, start, p)
        steps += k
        step_ok &= strict_ok and others_ok
        assert check_local_median(tree, local_median_fixpoint(tree, start, p).allocation)
        optimum_ok &= any(check_local_median(tree, a) for a in enumerate_optima(tree.graph, p).allocations)
    ok = step_ok and optimum_ok
    assert report("6 local median", ok, f"20 trees, {steps} steps, improvement={step_ok}, optimum_local_median={optimum_ok}")


def test_c07_tree_extremes(report, tmp_path):
    rep = tree_extremes(trees=50, n=9, seed=7)
    frac = rep["summary"]["fraction"]
    dumped = len(rep["counterexamples"])
    # a fraction below 1 is a finding; the criterion is that it is reported with the instances
    ok = len(rep["records"]) == 50 and dumped == 50 - rep["summary"]["holds"]
    if dumped:
        (tmp_path / "counterexamples.json").write_text(json.dumps(rep["counterexamples"]))
    assert report("7 tree extremes", ok, f"fraction={frac} ({rep['summary']['holds']}/50), counterexamples={dumped}")


def test_c08_reductions(report):
    rng = random.Random(8)
    t0 = time.perf_counter()
    bis_bad = []
    for i in range(30):
        n = 4 if i % 2 == 0 else 6
        g = random_graph(n, rng.uniform(0.2, 0.8), rng)
        for k in range(g.m + 1):
            if not verify_bisection_small(g, k):
                bis_bad.append((g.edges, k))
    bp_bad = []
    # random inputs at this scale are almost always feasible, so the
    # infeasible ones are checked explicitly as well
    infeasible = [((2, 2, 2), 3, 2), ((2, 2, 2, 2), 3, 3), ((2, 2, 2, 3), 3, 3), ((1, 2, 2, 2, 2), 3, 3), ((2, 3, 3), 4, 2)]
    no_checked = 0
    for fam in Family:
        for _ in range(20):
            inp = random_binpacking(rng, max_n=9, min_size=3 if fam is Family.CYCLES else 1)
            if not verify_binpacking_small(inp, fam):
                bp_bad.append((fam.value, inp))
        for sizes, B, k in infeasible:
            if fam is Family.CYCLES and min(sizes) < 3:
                continue
            inp = BinPackingInput(sizes, B, k)
            assert not packing_exists(inp)
            no_checked += 1
            if not verify_binpacking_small(inp, fam):
                bp_bad.append((fam.value, inp))
    secs = time.perf_counter() - t0
    ok = not bis_bad and not bp_bad and secs < 300
    assert report("8 reductions", ok, f"30 graphs, 80 random + {no_checked} infeasible packings, bad={bis_bad[:2] + bp_bad[:2]}, {secs:.1f}s (limit 300s)")


def test_c09_mla(report):
    rng = random.Random(9)
    bad = []
    for _ in range(50):
        g = random_disconnected_graph(rng.randint(2, 8), rng)
        assert len(connected_components(g)) >= 2
        if not check_mla_contiguity(g):
            bad.append(g.edges)
    assert report("9 MLA contiguity", not bad, f"50 graphs, failures={len(bad)}")


def _run_cli(capsys, argv):
    code = main(argv)
    out, _ = capsys.readouterr()
    return code, out


def test_c10_determinism(report, tmp_path, capsys):
    inst = tmp_path / "g.json"
    assert main(["generate", "random-graph", "--n", "7", "--seed", "5", "--out", str(inst)]) == 0
    fig1 = tmp_path / "fig1.json"
    fig1.write_text(json.dumps({"n": 5, "edges": [list(e) for e in FIG1_EDGES], "values": [str(v) for v in FIG1_VALUES]}))
    commands = [
        ["solve", str(inst)],
        ["solve", str(inst), "--solver", "heuristic"],
        ["evaluate", str(fig1), "0,3,1,4,2"],
        ["oracle", str(inst)],
        ["enumerate", str(fig1)],
        ["classify", str(inst)],
        ["render", str(fig1)],
        ["generate", "random-graph", "--n", "8", "--seed", "5"],
        ["generate", "bisection", "--n", "6", "--seed", "5"],
        ["generate", "binpacking", "--items", "2,2,2", "--bin", "3", "--bins", "2"],
        ["generate", "figure", "fig4"],
        ["experiment", "tree-extremes", "--trees", "5", "--n", "7", "--seed", "5"],
        ["experiment", "local-median", "--trees", "5", "--n", "7", "--seed", "5"],
        ["experiment", "mla-contiguity", "--graphs", "5", "--n", "6", "--seed", "5"],
        ["experiment", "separability", "--figure", "fig3-bottom"],
    ]
    differ = []
    capsys.readouterr()
    for cmd in commands:
        for fmt in ("text", "structured"):
            a = _run_cli(capsys, cmd + ["--format", fmt])
            b = _run_cli(capsys, cmd + ["--format", fmt])
            if a != b or a[0] != 0:
                differ.append((cmd[0], fmt))
    assert report("10 determinism", not differ, f"{2 * len(commands)} command forms, differing={differ}")


def _scale_cases(rng):
    n = 10**4
    vals = [F(rng.randint(0, 10**6), rng.randint(1, 9)) for _ in range(n)]
    p = ValueProfile.from_values(vals)
    lengths = [rng.choice((2, 5, 11)) for _ in range(300)]
    lengths.append(n - sum(lengths))
    cases = {
        # sparse families run end to end through auto dispatch
        "path": lambda: solve(path_graph(n), p),
        "cycle": lambda: solve(cycle_graph(n), p),
        "star": lambda: solve(star_graph(n - 1), p),
        "union_ordering (4 cycles)": lambda: solve(
            disjoint_union(cycle_graph(4000), cycle_graph(3000), cycle_graph(2000), cycle_graph(1000)), p
        ),
        "union_ordering (5 stars)": lambda: solve(disjoint_union(*(star_graph(1999) for _ in range(5))), p),
        "union_paths_dp (t=4)": lambda: solve(disjoint_union(*(path_graph(k) for k in lengths)), p),
        "matching_graph": lambda: solve(disjoint_union(*([path_graph(2)] * 4000 + [path_graph(1)] * 2000)), p),
        # dense families have ~10^7 edges, so their solvers are called directly
        "clique": lambda: solve_clique(n, p),
        "complete_bipartite": lambda: solve_complete_bipartite(6001, 3999, p),
        "equal_cliques": lambda: solve_equal_cliques(4, 2500, p),
        "cliques_xp (r=2)": lambda: solve_cliques_xp([6000, 4000], p),
    }
    return cases


@pytest.mark.slow
def test_c11_scale(report):
    rng = random.Random(11)
    times = {}
    for name, run in _scale_cases(rng).items():
        t0 = time.perf_counter()
        res = run()
        times[name] = time.perf_counter() - t0
        assert len(res.allocation) == 10**4 and res.exact
    slow = {k: round(v, 2) for k, v in times.items() if v >= 5}
    worst = max(times, key=times.get)
    detail = f"{len(times)} solvers at n=10^4, worst {worst} {times[worst]:.2f}s, over 5s: {slow}"
    assert report("11 scale n=10^4", not slow, detail)
