import pytest

from schemas import DegenConfig, Predicate
from services.closure import closure_augment, closure_number
from services.combinatorics import FOREST_BASE
from services.degen_forest_enum import (
    degen_count_bounds,
    enumerate_bounded_codegen,
    enumerate_max_coforests,
    forest_count_bound,
)
from services.graph_core import complement, gen_complete_bipartite, gen_path, gen_random, induced
from services.oracle import enumerate_maximal_bruteforce
from services.sparse_struct import detect_good_partition, find_kstar


def _oracle(g, predicate):
    return enumerate_maximal_bruteforce(complement(g), predicate)


def test_k33_coforests():
    """The complement of K_{3,3} is two triangles: pick two vertices of each"""
    report = enumerate_max_coforests(gen_complete_bipartite(3, 3))
    assert report.count == 9
    assert all(len(s) == 4 for s in report.results)


def test_forest_complement_shortcut():
    g = complement(gen_path(7))
    report = enumerate_max_coforests(g)
    assert [len(s) for s in report.results] == [7]
    assert enumerate_bounded_codegen(g, DegenConfig(d=1)).results == report.results


@pytest.mark.parametrize("seed", range(12))
def test_coforests_match_oracle(seed):
    g = gen_random(7 + seed % 4, 0.6, seed)
    report = enumerate_max_coforests(g)
    assert report.results == _oracle(g, Predicate.of("forest"))
    assert report.count <= forest_count_bound(g.n, closure_number(g).c)


@pytest.mark.parametrize("seed", range(8))
def test_codegen_one_matches_oracle_and_coforests(seed):
    """1-degenerate sets are forests, so both enumerators agree"""
    g = gen_random(7 + seed % 4, 0.6, 50 + seed)
    report = enumerate_bounded_codegen(g, DegenConfig(d=1))
    assert report.results == _oracle(g, Predicate.of("degenerate_le", 1))
    assert report.results == enumerate_max_coforests(g).results
    value, proven = degen_count_bounds(g.n, report.closure, 1)
    assert proven
    assert report.count <= value


@pytest.mark.parametrize("seed", range(4))
def test_codegen_two_matches_oracle(seed):
    g = gen_random(7 + seed % 2, 0.65, 80 + seed)
    report = enumerate_bounded_codegen(g, DegenConfig(d=2))
    assert report.results == _oracle(g, Predicate.of("degenerate_le", 2))
    assert not report.bound_proven


@pytest.mark.parametrize("seed", range(6))
def test_every_coforest_is_a_star_or_partitioned(seed):
    """Each result induces a 4-star or a forest with a good (4, 2)-partition"""
    g = gen_random(9, 0.6, 300 + seed)
    h = complement(g)
    for s in enumerate_bounded_codegen(g, DegenConfig(d=1)).results:
        sub, _ = induced(h, s)
        assert find_kstar(sub, 4) is not None or detect_good_partition(sub, 4, 2) is not None


def test_closure_augmented_instance():
    g = closure_augment(gen_random(10, 0.5, 9), 3)
    report = enumerate_max_coforests(g)
    assert report.results == _oracle(g, Predicate.of("forest"))


def test_bounds():
    assert forest_count_bound(5, 1) == 125
    assert forest_count_bound(2, 3) == pytest.approx(3 * 8 * 2 * FOREST_BASE ** 3)
    value, proven = degen_count_bounds(2, 1, 2)
    assert not proven
    assert value == pytest.approx(2 * 2 ** 11 + 2 ** 16 * FOREST_BASE ** 4)
    with pytest.raises(ValueError):
        forest_count_bound(0, 1)
    with pytest.raises(ValueError):
        degen_count_bounds(3, 2, 0)
