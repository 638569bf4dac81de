import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from housealloc.core import InputError, ValueProfile, total_envy
from housealloc.graphs import (
    Graph,
    complete_graph,
    connected_components,
    cycle_graph,
    disjoint_union,
    empty_graph,
    path_graph,
)
from housealloc.oracle import brute_force, enumerate_optima
from housealloc.separability import (
    FIG5_DEFAULT,
    check_fig5_params,
    check_mla_contiguity,
    classify_separability_empirical,
    contiguous_blocks,
    double_star,
    fig5_structural_check,
    find_interleaving,
    interleaving,
    make_figure_instance,
    solve_double_star_block,
    splits,
)

from conftest import value_lists

F = Fraction


def _alloc_for(ranks_a, ranks_b):
    # component A on vertices 0..len(a)-1, B after it
    return tuple(ranks_a) + tuple(ranks_b)


def test_splits_examples():
    a = _alloc_for([0, 1], [2, 3, 4])
    A, B = [0, 1], [2, 3, 4]
    assert splits(a, A, B) and splits(a, B, A)
    b = _alloc_for([0, 4], [1, 2, 3])
    assert splits(b, B, A)
    assert not splits(b, A, B)
    assert splits((0, 1), [0], [1]) and splits((0, 1), [1], [0])
    with pytest.raises(InputError):
        splits(a, [0, 1], [1, 2])


@given(st.integers(1, 4), st.integers(1, 4), st.randoms(use_true_random=False))
def test_splits_both_ways_iff_disjoint_intervals(p, q, rnd):
    ranks = list(range(p + q))
    rnd.shuffle(ranks)
    A, B = list(range(p)), list(range(p, p + q))
    ra, rb = sorted(ranks[:p]), sorted(ranks[p:])
    disjoint = ra[-1] < rb[0] or rb[-1] < ra[0]
    assert (splits(ranks, A, B) and splits(ranks, B, A)) == disjoint


def test_interleaving():
    a = (0, 2, 1, 3)
    assert interleaving(a, [0, 1], [2, 3]) == (0, 1, 2, 3)
    assert interleaving((0, 3, 1, 2), [0, 1], [2, 3]) is None
    assert find_interleaving((0, 3, 1, 2), [[0, 1], [2, 3]]) is None


def test_strongly_separable_path_union():
    g = disjoint_union(path_graph(2), path_graph(3))
    rep = classify_separability_empirical(g, [3, 1, 4, 15, 9])
    assert rep.contiguous_optimum_exists


def test_fig3_top_has_contiguous_optimum():
    inst = make_figure_instance("fig3-top")
    rep = classify_separability_empirical(inst.graph, inst.profile)
    assert rep.contiguous_optimum_exists
    assert rep.optimum == F(1, 20)


def test_fig3_bottom_defaults():
    inst = make_figure_instance("fig3-bottom")
    assert inst.values == (0, 49, 50, 51, 100)
    rep = classify_separability_empirical(inst.graph, inst.profile)
    assert rep.optimum == 104
    assert not rep.contiguous_optimum_exists
    # the edge is split by the triangle in every optimum
    comps = [c.vertices for c in connected_components(inst.graph)]
    opt = enumerate_optima(inst.graph, inst.profile)
    for a in opt.allocations:
        assert splits(a, comps[1], comps[0]) and not splits(a, comps[0], comps[1])
    per = rep.separable_witness_per_ordering
    assert per[(1, 0)] is not None and per[(0, 1)] is None


def test_fig4_defaults():
    inst = make_figure_instance("fig4")
    assert inst.n == 7
    rep = classify_separability_empirical(inst.graph, inst.profile)
    assert rep.optimum == 102
    assert not rep.contiguous_optimum_exists
    opt = enumerate_optima(inst.graph, inst.profile)
    # isolated vertex 6 takes the middle value in every optimum
    assert all(a[6] == 3 for a in opt.allocations)


def test_figure_parameter_errors():
    with pytest.raises(InputError):
        make_figure_instance("fig3-bottom", M=1, delta=2)
    with pytest.raises(InputError):
        make_figure_instance("fig9")
    with pytest.raises(InputError, match="s1"):
        check_fig5_params((9, 10, 15, 18))
    with pytest.raises(InputError):
        check_fig5_params((3, 6, 9, 30))
    check_fig5_params(FIG5_DEFAULT)


def test_fig5_structure():
    inst = make_figure_instance("fig5")
    assert inst.n == sum(FIG5_DEFAULT) + 4 == 58
    vals = inst.profile.values
    assert all(a < b for a, b in zip(vals, vals[1:]))
    rep = fig5_structural_check(inst)
    assert rep["interleaved_strictly_better"]
    assert rep["interleaved_envy"] < rep["best_contiguous_envy"]
    a = rep["interleaved_allocation"]
    assert total_envy(a, inst.graph, inst.profile) == rep["interleaved_envy"]
    comps = [c.vertices for c in connected_components(inst.graph)]
    assert not contiguous_blocks(a, comps)
    assert find_interleaving(a, comps) is not None


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_double_star_block_vs_oracle(p, q):
    rng = random.Random(p * 10 + q)
    g = double_star(p, q)
    for _ in range(5):
        vals = sorted(F(rng.randint(0, 60), rng.randint(1, 4)) for _ in range(p + q + 2))
        envy, alloc = solve_double_star_block(p, q, vals)
        prof = ValueProfile.from_values(vals)
        assert envy == brute_force(g, prof).envy
        assert sorted(alloc) == list(range(p + q + 2))


def test_mla_examples():
    assert check_mla_contiguity(disjoint_union(path_graph(2), complete_graph(3)))
    assert check_mla_contiguity(cycle_graph(5))
    assert check_mla_contiguity(disjoint_union(double_star(2, 2), empty_graph(1)))


FAMILY_GRAPHS = [
    disjoint_union(path_graph(2), path_graph(3), path_graph(2)),
    disjoint_union(cycle_graph(3), cycle_graph(4)),
    disjoint_union(Graph(3, ((0, 1), (0, 2))), Graph(4, ((0, 1), (0, 2), (0, 3)))),
    disjoint_union(complete_graph(3), complete_graph(3)),
]


@pytest.mark.parametrize("g", FAMILY_GRAPHS, ids=["paths", "cycles", "stars", "cliques"])
@given(data=st.data())
def test_separable_families_have_contiguous_optimum(g, data):
    vals = data.draw(value_lists(min_size=g.n, max_size=g.n))
    rep = classify_separability_empirical(g, vals)
    assert rep.contiguous_optimum_exists
