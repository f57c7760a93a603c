from itertools import combinations

import networkx as nx
import pytest

from services.closure import closure_augment, closure_number, co_closure_check, is_c_closed
from services.graph_core import (
    complement,
    gen_complete,
    gen_complete_bipartite,
    gen_cycle,
    gen_empty,
    gen_example1,
    gen_moon_moser,
    gen_path,
    gen_random,
)


def _closure_via_networkx(g) -> int:
    nx_graph = g.to_networkx()
    best = 0
    for u, v in combinations(range(g.n), 2):
        if not nx_graph.has_edge(u, v):
            best = max(best, len(list(nx.common_neighbors(nx_graph, u, v))))
    return best + 1


@pytest.mark.parametrize(
    "g,c,witness",
    [
        (gen_empty(0), 1, None),
        (gen_empty(1), 1, None),
        (gen_empty(4), 1, None),
        (gen_complete(5), 1, None),
        (gen_path(3), 2, (0, 2)),
        (gen_complete_bipartite(2, 2), 3, (0, 1)),
        (gen_moon_moser(9), 7, (0, 1)),
        (gen_cycle(5), 2, (0, 2)),
    ],
)
def test_closure_number_examples(g, c, witness):
    """Closure number and lexicographically first witness"""
    result = closure_number(g)
    assert result.c == c
    assert result.witness == witness


def test_example1_closure():
    """The clique-plus-independent-set family is c-closed for the advertised c"""
    for ell in (1, 2, 3):
        g, c = gen_example1(ell, 4)
        assert closure_number(g).c == c


@pytest.mark.parametrize("seed", range(10))
def test_closure_matches_networkx(seed):
    """Cross-check with networkx common neighbours"""
    g = gen_random(14, 0.35, seed)
    assert closure_number(g).c == _closure_via_networkx(g)


def test_is_c_closed():
    g = gen_complete_bipartite(2, 2)
    assert is_c_closed(g, 3)
    assert is_c_closed(g, 4)
    assert not is_c_closed(g, 2)
    with pytest.raises(ValueError):
        is_c_closed(g, 0)


@pytest.mark.parametrize("seed", range(6))
def test_co_closure_check_on_complements(seed):
    """The complement of a c-closed graph passes the co-closure check at c only"""
    g = gen_random(12, 0.5, seed)
    c = closure_number(g).c
    h = complement(g)
    assert co_closure_check(h, c) == (True, None)
    if c > 1:
        ok, edge = co_closure_check(h, c - 1)
        assert not ok
        assert h.has_edge(*edge)


@pytest.mark.parametrize("c", [1, 2, 3, 5])
def test_closure_augment(c):
    """Augmentation reaches the target and only adds edges"""
    g = gen_random(15, 0.3, c)
    augmented = closure_augment(g, c)
    assert is_c_closed(augmented, c)
    assert set(g.edges()) <= set(augmented.edges())
    assert closure_augment(augmented, c) == augmented
