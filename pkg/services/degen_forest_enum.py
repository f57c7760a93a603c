import logging
from itertools import combinations
from typing import Iterator, List, Tuple

from config import get_settings
from exceptions import SizeLimitError
from schemas import DegenConfig, EnumerationReport, Predicate, PredicateKind
from services.clique_enum import pivot_cliques
from services.closure import closure_number
from services.collector import CandidateCollector
from services.combinatorics import FOREST_BASE
from services.graph_core import (
    Graph,
    bits,
    complement,
    mask_degeneracy,
    mask_is_forest,
)
from services.oracle import PredicateEvaluator, maximal_masks
from services.sparse_struct import iter_proper_kstar_masks

logger = logging.getLogger(__name__)


def forest_count_bound(n: int, c: int) -> float:
    """3 n^3 (c-1) 1.8638^(2c-3) for c >= 2; n^3 when c = 1, where only stars remain."""
    if n < 1 or c < 1:
        raise ValueError(f"n and c must be positive, got n={n}, c={c}")
    if c == 1:
        return float(n ** 3)
    return 3 * n ** 3 * (c - 1) * FOREST_BASE ** (2 * c - 3)


def degen_count_bounds(n: int, c: int, d: int) -> Tuple[float, bool]:
    """
    Bound on maximal co-degeneracy-d sets: stars plus partition kernels,
    2 n^(4d+3) 3^((c-1)/3) + n^(8d) gamma^(2dc). Only gamma_1 = 1.8638 is
    known; for d >= 2 the same constant is used and the second value of the
    pair is False.
    """
    if n < 1 or c < 1 or d < 1:
        raise ValueError(f"Invalid bound parameters n={n}, c={c}, d={d}")
    stars = 2 * n ** (4 * d + 3) * 3 ** ((c - 1) / 3)
    kernels = n ** (8 * d) * FOREST_BASE ** (2 * d * c)
    return stars + kernels, d == 1


def _oracle_limit_check(free: int, what: str, hint: str) -> None:
    limit = get_settings().oracle_limit
    if free.bit_count() > limit:
        raise SizeLimitError(what, free.bit_count(), limit, hint)


def _disjoint_edge_tuples(edges: List[Tuple[int, int]], k: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    def extend(start: int, chosen: List[Tuple[int, int]], used: int):
        if len(chosen) == k:
            yield tuple(chosen)
            return
        for i in range(start, len(edges)):
            a, b = edges[i]
            if used >> a & 1 or used >> b & 1:
                continue
            chosen.append(edges[i])
            yield from extend(i + 1, chosen, used | 1 << a | 1 << b)
            chosen.pop()

    yield from extend(0, [], 0)


def _feasible_subsets(ev: PredicateEvaluator, base: int, pool: int, size: int) -> Iterator[int]:
    """Subsets A of pool with |A| <= size and base + A in the class (hereditary pruning)."""
    members = list(bits(pool))

    def walk(i: int, current: int, left: int) -> Iterator[int]:
        if i == len(members) or left == 0:
            yield current
            return
        grown = current | 1 << members[i]
        if ev.holds(grown):
            yield from walk(i + 1, grown, left - 1)
        yield from walk(i + 1, current, left)

    if ev.holds(base):
        yield from walk(0, base, size)


def enumerate_bounded_codegen(g: Graph, cfg: DegenConfig) -> EnumerationReport:
    """
    Maximal S with the complement-induced graph d-degenerate.

    Every such graph is a 4d-star or has a good (4d, 2d)-partition. Star
    candidates A + B come from the proper (4d+1)-star listing; tails with at
    most d head neighbours always stay, the others are settled by the oracle
    on A + (remaining tails). Partition candidates fix 2d disjoint edges and
    up to 4d vertices adjacent to all of them, then take the maximal members
    of the kernel formed with every vertex that misses one of the edges.

    Args:
        g: Input graph
        cfg: Degeneracy cap d >= 1

    Returns:
        EnumerationReport; ``bound_proven`` is False for d >= 2
    """
    d = cfg.d
    closure = closure_number(g)
    h = complement(g)
    adj = h.adjacency
    full = h.full_mask
    n = g.n
    bound, proven = degen_count_bounds(max(n, 1), closure.c, d)
    logger.info(f"Enumerating maximal co-{d}-degenerate sets: n={n}, c={closure.c}")

    ev = PredicateEvaluator(h, Predicate(kind=PredicateKind.DEGENERATE_LE, param=d))
    collector = CandidateCollector(ev.holds, lambda mask: ev.single_vertex_maximal(mask, full))

    if mask_degeneracy(adj, full, cap=d) <= d:
        collector.offer(full, trusted=True)
        return collector.report(bound_value=bound, bound_proven=proven, closure=closure.c)

    hint = "raise CLOSEDGRAPHS_ORACLE_LIMIT or lower c or d"
    for head, tails in iter_proper_kstar_masks(adj, g.adjacency, 4 * d + 1):
        low = 0
        for b in bits(tails):
            if (adj[b] & head).bit_count() <= d:
                low |= 1 << b
        high = tails & ~low
        if not high:
            collector.offer(head | low)
            continue
        _oracle_limit_check(high, "co-degeneracy star kernel", hint)
        for core in maximal_masks(ev, head, head | high):
            collector.offer(core | low)

    anchors = 0
    for matching in _disjoint_edge_tuples(h.edges(), 2 * d):
        covered = 0
        shared = full
        for a, b in matching:
            covered |= 1 << a | 1 << b
            shared &= adj[a] | adj[b]
        shared &= ~covered
        loose = full & ~covered & ~shared
        _oracle_limit_check(loose, "co-degeneracy partition kernel", hint)
        for prefix in _feasible_subsets(ev, covered, shared, 4 * d):
            anchors += 1
            collector.offer_all(maximal_masks(ev, prefix, prefix | loose))
    logger.debug(f"{anchors} feasible partition anchors")

    return collector.report(bound_value=bound, bound_proven=proven, closure=closure.c)


def enumerate_max_coforests(g: Graph) -> EnumerationReport:
    """
    Maximal S whose complement-induced graph is a forest.

    Three candidate families cover every maximal forest: stars {v} + I with I
    a maximal independent set of H - v; forests with two non-trivial
    components, found from an edge ab and an edge cd away from N[a, b]; and
    forests containing an induced path a-b-c-d. The last two are enumerated
    in kernels of at most about 2c vertices.
    """
    closure = closure_number(g)
    h = complement(g)
    adj = h.adjacency
    full = h.full_mask
    n = g.n
    logger.info(f"Enumerating maximal co-forests: n={n}, c={closure.c}")
    bound = forest_count_bound(max(n, 1), closure.c)

    ev = PredicateEvaluator(h, Predicate(kind=PredicateKind.FOREST))
    collector = CandidateCollector(
        lambda mask: mask_is_forest(adj, mask),
        lambda mask: ev.single_vertex_maximal(mask, full),
    )
    if mask_is_forest(adj, full):
        collector.offer(full, trusted=True)
        return collector.report(bound_value=bound, closure=closure.c)

    # independent sets of h are cliques of g
    for v in range(n):
        for independent in pivot_cliques(g.adjacency, full & ~(1 << v)):
            collector.offer(independent | 1 << v, trusted=True)

    edges = h.edges()
    hint = "raise CLOSEDGRAPHS_ORACLE_LIMIT or lower c"
    for a, b in edges:
        away_ab = full & ~(adj[a] | adj[b] | 1 << a | 1 << b)
        for c_, d_ in edges:
            if not (away_ab >> c_ & 1 and away_ab >> d_ & 1):
                continue
            away_cd = full & ~(adj[c_] | adj[d_] | 1 << c_ | 1 << d_)
            prefix = 1 << a | 1 << b | 1 << c_ | 1 << d_
            kernel = away_ab | away_cd
            _oracle_limit_check(kernel & ~prefix, "co-forest kernel", hint)
            collector.offer_all(maximal_masks(ev, prefix, kernel))

    for b in range(n):
        for a, c_ in combinations(bits(adj[b]), 2):
            if adj[a] >> c_ & 1:
                continue
            for first, last in ((a, c_), (c_, a)):
                away = full & ~(adj[first] | adj[b] | 1 << first | 1 << b)
                for d_ in bits(adj[last] & away):
                    away_cd = full & ~(adj[last] | adj[d_] | 1 << last | 1 << d_)
                    prefix = 1 << first | 1 << b | 1 << last | 1 << d_
                    kernel = away | away_cd | 1 << b | 1 << last
                    _oracle_limit_check(kernel & ~prefix, "co-forest kernel", hint)
                    collector.offer_all(maximal_masks(ev, prefix, kernel))

    return collector.report(bound_value=bound, closure=closure.c)
