import pytest

from exceptions import PredicateError, SizeLimitError
from schemas import EnumMode, LocalTWProfile, Predicate, TwEnumConfig
from services.closure import closure_number
from services.graph_core import complement, gen_complete, gen_cycle, gen_empty, gen_random
from services.oracle import PredicateEvaluator, enumerate_maximal_bruteforce
from services.tw_enum import (
    cotw_candidate_bound,
    enumerate_bounded_cotw,
    enumerate_bounded_local_cotw,
    local_config,
)


def _oracle(g, t, local=False):
    kind = "local_treewidth_le" if local else "treewidth_le"
    return enumerate_maximal_bruteforce(complement(g), Predicate.of(kind, t))


@pytest.mark.parametrize("t", [1, 2])
@pytest.mark.parametrize("seed", range(6))
def test_superset_mode_contains_every_maximal_set(t, seed):
    g = gen_random(8 + seed % 2, 0.6, seed)
    report = enumerate_bounded_cotw(g, TwEnumConfig(t=t))
    assert not report.exact
    found = set(report.results)
    assert set(_oracle(g, t)) <= found
    ev = PredicateEvaluator(complement(g), Predicate.of("treewidth_le", t))
    assert all(ev.holds(s.mask) for s in report.results)
    assert report.candidates_generated <= cotw_candidate_bound(g.n, closure_number(g).c, t)


@pytest.mark.parametrize("t", [1, 2])
@pytest.mark.parametrize("seed", range(6))
def test_exact_mode_matches_oracle(t, seed):
    g = gen_random(8, 0.55, 100 + seed)
    report = enumerate_bounded_cotw(g, TwEnumConfig(t=t, mode=EnumMode.EXACT))
    assert report.exact
    assert report.results == _oracle(g, t)


def test_whole_vertex_set_shortcut():
    """When the complement itself qualifies, V is the only maximal set"""
    report = enumerate_bounded_cotw(gen_complete(6), TwEnumConfig(t=0))
    assert [list(s) for s in report.results] == [list(range(6))]


def test_complement_of_cycle():
    """Deleting any one vertex of a cycle leaves a path"""
    g = complement(gen_cycle(9))
    report = enumerate_bounded_cotw(g, TwEnumConfig(t=1, mode=EnumMode.EXACT))
    assert report.count == 9
    assert all(len(s) == 8 for s in report.results)


def test_local_mode_on_long_cycle():
    """A 13-cycle has local treewidth 1 everywhere, though its treewidth is 2"""
    g = complement(gen_cycle(13))
    report = enumerate_bounded_local_cotw(g, local_config(1))
    assert [len(s) for s in report.results] == [13]


@pytest.mark.parametrize("seed", range(4))
def test_local_mode_exact(seed):
    g = gen_random(8, 0.6, 200 + seed)
    report = enumerate_bounded_local_cotw(g, local_config(1, EnumMode.EXACT))
    assert report.results == _oracle(g, 1, local=True)


def test_local_mode_needs_equal_profile():
    g = gen_random(6, 0.5, 1)
    with pytest.raises(PredicateError):
        enumerate_bounded_local_cotw(g, TwEnumConfig(t=1))
    uneven = LocalTWProfile(values={1: 1, 2: 1, 3: 1, 4: 1, 5: 2})
    with pytest.raises(PredicateError):
        enumerate_bounded_local_cotw(g, TwEnumConfig(t=1, local=uneven))


def test_local_config_profile():
    cfg = local_config(2)
    assert cfg.local.values == {r: 2 for r in range(1, 6)}
    assert cfg.mode == EnumMode.SUPERSET


def test_exact_mode_size_limit():
    with pytest.raises(SizeLimitError):
        enumerate_bounded_cotw(gen_empty(30), TwEnumConfig(t=1, mode=EnumMode.EXACT))


def test_candidate_bound_formula():
    assert cotw_candidate_bound(2, 1, 1) == 3 * 2 ** 5
    assert cotw_candidate_bound(3, 3, 0) == 3 * 3 ** 4 * 16
