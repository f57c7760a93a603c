import pickle

import pytest

from config import get_settings
from exceptions import BoundViolationError, SizeLimitError
from schemas import Predicate
from services.combinatorics import (
    FOREST_BASE,
    KAPPA_TABLE,
    M1,
    count_bound,
    example1_threshold,
    forest_count_table,
    kappa,
    kappa_for_bound,
    max_count_over_all_graphs,
    records_to_csv,
    verify_example1,
    verify_m1_lemmas,
    verify_star_or_partition,
)
from services.graph_core import (
    complement,
    disjoint_union,
    gen_complete,
    gen_cycle,
    gen_k5_union,
    gen_k5_union_minus_matching,
    gen_moon_moser,
    gen_path,
    gen_random,
    gen_star,
    graph_from_id,
    graph_id,
    pair_index,
)
from services.oracle import count_maximal

INDEPENDENT = Predicate.of("independent_set")


@pytest.fixture
def settings_env(monkeypatch):
    """Apply environment overrides to a fresh settings object"""
    def apply(**values):
        for name, value in values.items():
            monkeypatch.setenv(name, str(value))
        get_settings.cache_clear()

    yield apply
    get_settings.cache_clear()


@pytest.mark.parametrize("d", sorted(KAPPA_TABLE))
def test_kappa_matches_table(d):
    """The published constants are the shifted roots"""
    value = kappa(d)
    assert value.table == KAPPA_TABLE[d]
    assert value.shifted_root == pytest.approx(KAPPA_TABLE[d], abs=1e-3)
    assert 1 < value.shifted_root < value.root < 2
    x = value.root
    assert x ** (d + 4) - 2 * x ** (d + 3) + 1 == pytest.approx(0, abs=1e-9)


def test_kappa_chain():
    """The root for d equals the shifted root for d + 1"""
    assert kappa(0).root == pytest.approx(kappa(1).shifted_root, abs=1e-10)
    assert kappa(0).shifted_root == pytest.approx((1 + 5 ** 0.5) / 2, abs=1e-10)
    assert kappa(7).table is None
    assert KAPPA_TABLE[4] < kappa_for_bound(5) < 2
    with pytest.raises(ValueError):
        kappa(-1)


def test_count_bounds():
    assert count_bound(INDEPENDENT, 6) == pytest.approx(9)
    assert count_bound(Predicate.of("clique"), 3) == pytest.approx(3)
    assert count_bound(M1, 5) == pytest.approx(10)
    assert count_bound(Predicate.of("max_degree", 0), 3) == pytest.approx(3)
    assert count_bound(Predicate.of("max_degree", 2), 4) == pytest.approx(KAPPA_TABLE[2] ** 4)
    assert count_bound(M1, 3, prefix_size=1) == pytest.approx(KAPPA_TABLE[1] ** 3)
    assert count_bound(Predicate.of("forest"), 2) == pytest.approx(FOREST_BASE ** 2)
    assert count_bound(Predicate.of("degenerate_le", 1), 2) == pytest.approx(FOREST_BASE ** 2)
    assert count_bound(Predicate.of("treewidth_le", 1), 4) is None


@pytest.mark.parametrize("N,expected", [(1, 1), (2, 2), (3, 3), (4, 4), (5, 6), (6, 9)])
def test_moon_moser_maxima(N, expected):
    record = max_count_over_all_graphs(N, INDEPENDENT)
    assert record.max_count == expected
    assert record.bound_satisfied
    assert record.graphs_scanned == 1 << len(pair_index(N))


def test_triangle_is_the_argmax_on_three_vertices():
    record = max_count_over_all_graphs(3, INDEPENDENT)
    assert record.argmax_ids == [7]
    assert record.argmax_graphs == [gen_complete(3)]


def test_m1_tightness_at_five(settings_env):
    """M1(5) = 10 and K5 attains it"""
    settings_env(CLOSEDGRAPHS_ARGMAX_CAP=100000)
    record = max_count_over_all_graphs(5, M1)
    assert record.max_count == 10
    assert record.bound_value == pytest.approx(10)
    assert record.bound_satisfied
    assert graph_id(gen_complete(5)) in record.argmax_ids
    assert graph_id(gen_k5_union_minus_matching(5)) in record.argmax_ids
    assert record.argmax_ids == sorted(record.argmax_ids)


def test_m1_tightness_families():
    assert count_maximal(gen_k5_union(10), M1) == 100
    assert count_maximal(gen_k5_union_minus_matching(10), M1) == 100


def test_argmax_cap(settings_env):
    settings_env(CLOSEDGRAPHS_ARGMAX_CAP=2)
    record = max_count_over_all_graphs(4, M1)
    assert len(record.argmax_ids) <= 2


def test_workers_do_not_change_results():
    serial = max_count_over_all_graphs(4, M1, workers=1)
    parallel = max_count_over_all_graphs(4, M1, workers=2)
    assert serial == parallel


def test_prefix_scan_runs():
    record = max_count_over_all_graphs(2, M1, prefix_size=1)
    assert record.prefix_size == 1
    assert record.max_count >= 1
    assert record.bound_value == pytest.approx(KAPPA_TABLE[1] ** 2)


def test_scan_size_limit():
    with pytest.raises(SizeLimitError):
        max_count_over_all_graphs(8, INDEPENDENT)
    with pytest.raises(ValueError):
        max_count_over_all_graphs(-1, INDEPENDENT)


def test_forest_table():
    """Forests and 1-degenerate sets have the same maxima"""
    table = forest_count_table(4)
    assert [row[0] for row in table] == [1, 2, 3, 4]
    assert all(f == d1 for _, f, d1 in table)
    assert table[2] == (3, 3, 3)


def test_records_to_csv():
    text = records_to_csv([max_count_over_all_graphs(3, INDEPENDENT)])
    lines = text.splitlines()
    assert lines[0] == "N,predicate,prefix_size,max_count,bound,argmax_graph"
    assert lines[1].startswith("3,independent_set,0,3,")
    assert lines[1].endswith("3 3;0 1;0 2;1 2")


@pytest.mark.parametrize(
    "g",
    [
        gen_complete(4),
        gen_path(5),
        gen_star(4),
        gen_cycle(5),
        disjoint_union(gen_complete(3), gen_path(3)),
    ],
)
def test_m1_lemmas_on_examples(g):
    report = verify_m1_lemmas(g)
    assert report.passed, report.failures
    assert report.sees_two_checked > 0


def test_m1_lemmas_exercise_each_check():
    split = verify_m1_lemmas(disjoint_union(gen_complete(3), gen_path(3)))
    assert split.disconnected_checked == 2
    assert split.twin_pairs_checked == 3
    assert split.domination_checked > 0


def test_m1_lemmas_on_all_graphs_with_four_vertices():
    pairs = pair_index(4)
    for gid in range(1 << len(pairs)):
        report = verify_m1_lemmas(graph_from_id(4, gid, pairs))
        assert report.passed, (gid, report.failures)


@pytest.mark.parametrize("n,expected", [(4, 1), (5, 5), (6, 15)])
def test_example1_counts(n, expected):
    assert example1_threshold(2, n) == 4
    assert verify_example1(2, n) == expected


def test_example1_threshold_small_n():
    assert example1_threshold(2, 2) == 2
    assert example1_threshold(1, 10) == 3


def test_example1_violation(monkeypatch):
    """A count below the floor is reported as a bound violation"""
    monkeypatch.setattr("services.combinatorics.count_maximal", lambda g, p: 0)
    with pytest.raises(BoundViolationError) as excinfo:
        verify_example1(2, 5)
    assert excinfo.value.observed == 0
    assert excinfo.value.bound == 5


def test_star_or_partition_on_trees():
    """Every labelled tree on four vertices is a proper 2-star"""
    checked, failures = verify_star_or_partition(4, 1)
    assert checked == 16
    assert failures == []


@pytest.mark.parametrize("t", [1, 2])
@pytest.mark.parametrize("N", [5, 6])
def test_star_or_partition_on_connected_graphs(N, t):
    checked, failures = verify_star_or_partition(N, t)
    assert checked > 0
    assert failures == []


def test_star_or_partition_counts_trees():
    """Connected graphs of treewidth one are trees: N^(N-2) of them"""
    assert verify_star_or_partition(5, 1)[0] == 125
    assert verify_star_or_partition(6, 1)[0] == 1296


@pytest.mark.parametrize("prefix_size", [1, 2])
def test_prefix_scan_respects_bound(prefix_size):
    record = max_count_over_all_graphs(4, M1, prefix_size=prefix_size)
    assert record.bound_value == pytest.approx(count_bound(M1, 4, prefix_size=prefix_size))
    assert record.max_count <= record.bound_value
    assert record.bound_satisfied


def test_longer_prefix_never_lowers_the_maximum():
    one = max_count_over_all_graphs(4, M1, prefix_size=1).max_count
    two = max_count_over_all_graphs(4, M1, prefix_size=2).max_count
    assert one <= two


def test_m1_lemmas_on_all_graphs_with_five_vertices():
    pairs = pair_index(5)
    for gid in range(1 << len(pairs)):
        report = verify_m1_lemmas(graph_from_id(5, gid, pairs))
        assert report.passed, (gid, report.failures)


@pytest.mark.parametrize("N", [9, 12, 15])
def test_moon_moser_family_is_tight(N):
    """Complete multipartite graphs with parts of three reach 3^(N/3) cliques"""
    g = gen_moon_moser(N)
    count = count_maximal(g, Predicate.of("clique"))
    assert count == 3 ** (N // 3)
    assert count == pytest.approx(count_bound(Predicate.of("clique"), N))
    assert count_maximal(complement(g), INDEPENDENT) == count


@pytest.mark.parametrize("seed", range(10))
def test_moon_moser_bound_on_random_graphs(seed):
    g = gen_random(8 + seed % 5, 0.3 + 0.05 * (seed % 4), seed)
    assert count_maximal(g, INDEPENDENT) <= count_bound(INDEPENDENT, g.n) + 1e-9


def test_errors_survive_worker_pickling():
    """Pool workers hand exceptions back pickled"""
    size = pickle.loads(pickle.dumps(SizeLimitError("scan", 9, 7, "hint")))
    assert (size.what, size.size, size.limit, size.hint) == ("scan", 9, 7, "hint")
    violation = pickle.loads(pickle.dumps(BoundViolationError("too many", 12, 10.5)))
    assert (violation.observed, violation.bound) == (12, 10.5)
    assert str(violation) == "too many (observed 12, bound 10.5)"
