from math import comb

import pytest

from schemas import ExtensionInstance, Predicate
from services.closure import closure_augment, closure_number
from services.combinatorics import KAPPA_TABLE
from services.graph_core import (
    VertexSet,
    gen_complete_bipartite,
    gen_cycle,
    gen_path,
    gen_random,
    gen_star,
)
from services.oracle import enumerate_maximal_bruteforce
from services.plex_enum import enumerate_max_plexes, extend_bounded_degree, plex_count_bound


def _oracle(g, d):
    return enumerate_maximal_bruteforce(g, Predicate.of("plex", d))


def test_c5_two_plexes():
    report = enumerate_max_plexes(gen_cycle(5), 1)
    assert report.count == 5
    assert report.results == _oracle(gen_cycle(5), 1)


@pytest.mark.parametrize("ell", [3, 4, 5])
def test_complete_bipartite_growth(ell):
    """K_{ell,ell} has C(ell, 2)^2 maximal 2-plexes"""
    g = gen_complete_bipartite(ell, ell)
    report = enumerate_max_plexes(g, 1)
    assert report.count == comb(ell, 2) ** 2
    assert report.count >= ell ** 2
    assert report.count <= report.bound_value


@pytest.mark.parametrize("d", [1, 2])
@pytest.mark.parametrize("seed", range(12))
def test_random_graphs_match_oracle(d, seed):
    g = gen_random(8 + seed % 5, 0.55, seed)
    report = enumerate_max_plexes(g, d)
    assert report.results == _oracle(g, d)
    assert report.count <= plex_count_bound(g.n, closure_number(g).c, d)


@pytest.mark.parametrize("c", [2, 3])
def test_closure_augmented_instances(c):
    g = closure_augment(gen_random(12, 0.3, 10 + c), c)
    report = enumerate_max_plexes(g, 1)
    assert report.results == _oracle(g, 1)
    assert report.closure <= c


def test_zero_slack_is_cliques():
    """d = 0 delegates to clique enumeration with its own bound"""
    g = gen_random(10, 0.5, 1)
    report = enumerate_max_plexes(g, 0)
    assert report.results == _oracle(g, 0)
    assert report.bound_value == plex_count_bound(g.n, report.closure, 0)


def test_bound_values():
    assert plex_count_bound(4, 1, 0) == 2 * 16
    assert plex_count_bound(4, 6, 1) == pytest.approx(2 * 16 * 10)
    assert plex_count_bound(3, 2, 2) == pytest.approx(2 * 3 ** 4 * KAPPA_TABLE[2] ** 5)
    with pytest.raises(ValueError):
        plex_count_bound(3, 2, -1)
    with pytest.raises(ValueError):
        enumerate_max_plexes(gen_path(3), -1)


def test_extension_matches_oracle():
    """Extensions of a prefix inside P + R agree with the restricted oracle"""
    host = gen_random(9, 0.4, 5)
    prefix = VertexSet([0])
    free = VertexSet(range(2, 9))
    inst = ExtensionInstance(host=host, prefix=prefix, free=free, d=1)
    expected = enumerate_maximal_bruteforce(
        host, Predicate.of("max_degree", 1), prefix=prefix, within=prefix | free
    )
    assert extend_bounded_degree(inst) == expected


def test_extension_with_infeasible_prefix():
    inst = ExtensionInstance(host=gen_star(3), prefix=VertexSet([0, 1, 2]), free=VertexSet([3]), d=1)
    assert extend_bounded_degree(inst) == []


def test_extension_instance_validation():
    with pytest.raises(ValueError):
        ExtensionInstance(host=gen_path(3), prefix=VertexSet([0]), free=VertexSet([0, 1]), d=1)
    with pytest.raises(ValueError):
        ExtensionInstance(host=gen_path(3), prefix=VertexSet([0]), free=VertexSet([5]), d=1)
