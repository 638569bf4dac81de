import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from housealloc.connected import (
    count_optima_bipartite,
    min_cost_assignment,
    satisfies_bipartite_pairing,
    solve_clique,
    solve_complete_bipartite,
    solve_complete_general,
    solve_cycle,
    solve_path,
    solve_star,
)
from housealloc.core import InputError, ValueMatrix, ValueProfile, total_envy, total_envy_general
from housealloc.graphs import complete_bipartite_graph, complete_graph, cycle_graph, path_graph, star_graph
from housealloc.oracle import brute_force, brute_force_general, count_classes, enumerate_optima

from conftest import rationals, value_lists

P5 = ValueProfile.from_values([1, 2, 4, 5, 6])


def test_path_examples():
    assert solve_path(5, P5).envy == 5
    assert solve_path(1, [3]).envy == 0
    r = solve_path(3, [0, 10, 100])
    assert r.envy == 100 and r.allocation == (0, 1, 2)


def test_cycle_examples():
    assert solve_cycle(5, P5).envy == 10
    assert solve_cycle(3, [0, 7, 3]).envy == 14
    with pytest.raises(InputError):
        solve_cycle(2, [1, 2])
    p = ValueProfile.from_values([1, 2, 3, 4])
    assert total_envy((0, 1, 3, 2), cycle_graph(4), p) == 6 == brute_force(cycle_graph(4), p).envy


def test_star_examples():
    r = solve_star(4, P5)
    assert P5[r.allocation[0]] == 4 and r.envy == 8
    assert solve_star(1, [3, 8]).envy == 5
    q = ValueProfile.from_values([1, 2, 3, 10])
    g = star_graph(3)
    # both medians tie at the optimum
    assert total_envy((1, 0, 2, 3), g, q) == total_envy((2, 0, 1, 3), g, q) == 10
    assert solve_star(3, q).envy == brute_force(g, q).envy == 10


def test_bipartite_examples():
    vals = ValueProfile.from_values(range(1, 7))
    assert solve_complete_bipartite(3, 3, vals).envy == 19 == brute_force(complete_bipartite_graph(3, 3), vals).envy
    assert solve_complete_bipartite(1, 1, [2, 9]).envy == 7
    q = ValueProfile.from_values([1, 2, 3, 10])
    r = solve_complete_bipartite(3, 1, q)
    assert set(r.allocation[:3]) >= {0, 3}
    assert r.envy == solve_star(3, q).envy
    with pytest.raises(InputError):
        solve_complete_bipartite(1, 3, q)


def test_count_optima_bipartite():
    assert count_optima_bipartite(3, 3) == 8
    assert count_optima_bipartite(4, 3) == 1
    opt = enumerate_optima(complete_bipartite_graph(2, 2), [1, 2, 3, 4])
    assert count_classes(opt, "bipartite", sides=(2, 2)) == count_optima_bipartite(2, 2) == 4


def test_clique_examples():
    assert solve_clique(3, [49, 50, 51]).envy == 4
    assert solve_clique(1, [5]).envy == 0
    p = ValueProfile.from_values([4, 5, 6])
    assert {total_envy(a, complete_graph(3), p) for a in itertools.permutations(range(3))} == {4}


def test_complete_general_examples():
    m = ValueMatrix.from_rows([[5, 0], [0, 5]])
    r = solve_complete_general(m)
    assert r.envy == 0 and r.allocation == (0, 1)
    rows = [[1, 4, 9]] * 3
    assert solve_complete_general(ValueMatrix.from_rows(rows)).envy == solve_clique(3, [1, 4, 9]).envy


def test_min_cost_assignment_matches_permutations():
    rng = random.Random(2)
    for _ in range(50):
        n = rng.randint(1, 6)
        cost = [[Fraction(rng.randint(0, 30), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        perm, total = min_cost_assignment(cost)
        best = min(sum(cost[i][p[i]] for i in range(n)) for p in itertools.permutations(range(n)))
        assert total == best == sum(cost[i][perm[i]] for i in range(n))


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(rationals(), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_complete_general_matches_oracle(rows):
    m = ValueMatrix.from_rows(rows)
    r = solve_complete_general(m)
    g = complete_graph(m.n)
    assert r.envy == brute_force_general(g, m).envy == total_envy_general(r.allocation, g, m)


@given(value_lists(min_size=1, max_size=8))
def test_path_and_clique_vs_oracle(vals):
    n = len(vals)
    p = ValueProfile.from_values(vals)
    assert solve_path(n, p).envy == brute_force(path_graph(n), p).envy
    assert solve_clique(n, p).envy == brute_force(complete_graph(n), p).envy
    if n >= 3:
        assert solve_cycle(n, p).envy == brute_force(cycle_graph(n), p).envy
    if n >= 2:
        r = solve_star(n - 1, p)
        assert r.envy == brute_force(star_graph(n - 1), p).envy == total_envy(r.allocation, star_graph(n - 1), p)
        c = r.allocation[0]
        below = sum(1 for h in r.allocation[1:] if h < c)
        assert abs(below - (n - 1 - below)) <= 1


@given(st.integers(1, 4).flatmap(lambda s: st.tuples(st.integers(s, 8 - s), st.just(s))),
       st.data())
def test_bipartite_vs_oracle(rs, data):
    r, s = rs
    vals = data.draw(value_lists(min_size=r + s, max_size=r + s, unique=True))
    p = ValueProfile.from_values(vals)
    g = complete_bipartite_graph(r, s)
    res = solve_complete_bipartite(r, s, p)
    assert res.envy == brute_force(g, p).envy == total_envy(res.allocation, g, p)
    assert satisfies_bipartite_pairing(res.allocation, r, s)


@pytest.mark.parametrize("r,s", [(1, 1), (2, 2), (3, 1), (3, 3), (4, 2), (4, 4), (5, 3)])
def test_pairing_witnesses_share_envy(r, s):
    # every allocation satisfying the pairing rule is optimal
    p = ValueProfile.from_values([Fraction(k * k + 1, 3) for k in range(r + s)])
    g = complete_bipartite_graph(r, s)
    opt = brute_force(g, p).envy
    seen = 0
    for larger in itertools.combinations(range(r + s), r):
        alloc = tuple(larger) + tuple(h for h in range(r + s) if h not in larger)
        if satisfies_bipartite_pairing(alloc, r, s):
            seen += 1
            assert total_envy(alloc, g, p) == opt
    assert seen == count_optima_bipartite(r, s)
