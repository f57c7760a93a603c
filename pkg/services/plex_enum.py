import logging
from itertools import combinations
from typing import Iterator, List, Sequence

from schemas import EnumerationReport, ExtensionInstance
from services.clique_enum import enumerate_max_cliques
from services.closure import closure_number
from services.collector import CandidateCollector
from services.combinatorics import kappa_for_bound
from services.graph_core import Graph, VertexSet, bits, complement, mask_max_degree, mask_of

logger = logging.getLogger(__name__)


def plex_count_bound(n: int, c: int, d: int) -> float:
    """Upper bound on the number of maximal (d+1)-plexes of an n-vertex c-closed graph."""
    if d < 0 or n < 1 or c < 1:
        raise ValueError(f"Invalid bound parameters n={n}, c={c}, d={d}")
    if d == 0:
        return 2 * n ** 2 * 3 ** ((c - 1) / 3)
    if d == 1:
        return 2 * n ** 2 * 10 ** ((c - 1) / 5)
    return 2 * n ** (2 * d) * kappa_for_bound(d) ** (c - 1 + 2 * d)


def _fits(adj: Sequence[int], current: int, v: int, d: int) -> bool:
    """Whether v can join current without any degree exceeding d."""
    nbrs = adj[v] & current
    if nbrs.bit_count() > d:
        return False
    for w in bits(nbrs):
        if (adj[w] & current).bit_count() >= d:
            return False
    return True


def _extend_masks(adj: Sequence[int], prefix: int, free: int, d: int) -> Iterator[int]:
    if mask_max_degree(adj, prefix) > d:
        return
    order = list(bits(free))

    def walk(i: int, current: int, skipped: int) -> Iterator[int]:
        if i == len(order):
            if not any(_fits(adj, current, w, d) for w in bits(skipped)):
                yield current
            return
        v = order[i]
        if _fits(adj, current, v, d):
            yield from walk(i + 1, current | 1 << v, skipped)
            yield from walk(i + 1, current, skipped | 1 << v)
        else:
            yield from walk(i + 1, current, skipped)

    yield from walk(0, prefix, 0)


def extend_bounded_degree(inst: ExtensionInstance) -> List[VertexSet]:
    """
    All S with P <= S <= P + R, max degree of host[S] at most d, and no vertex
    of R addable. An infeasible prefix gives an empty list.
    """
    adj = inst.host.adjacency
    return sorted(
        VertexSet.from_mask(m) for m in _extend_masks(adj, inst.prefix.mask, inst.free.mask, inst.d)
    )


def _anchor_prefixes(adj: Sequence[int], u: int, v: int, d: int) -> Iterator[int]:
    """{u, v} plus every degree-feasible choice of at most 2d-2 of their neighbours."""
    base = 1 << u | 1 << v
    if d == 1:
        yield base
        return
    around = list(bits((adj[u] | adj[v]) & ~base))
    for size in range(0, min(2 * d - 2, len(around)) + 1):
        for chosen in combinations(around, size):
            prefix = base | mask_of(chosen)
            if mask_max_degree(adj, prefix) <= d:
                yield prefix


def enumerate_max_plexes(g: Graph, d: int) -> EnumerationReport:
    """
    Maximal (d+1)-plexes of g, found as maximal max-degree-d sets of the
    complement h.

    Edgeless sets of h are the maximal cliques of g. Any other maximal set
    contains an h-edge uv; fixing uv and the set's part of N_h(u, v) leaves
    only R = V - N_h[u, v], at most c-1 vertices, to branch over.

    Args:
        g: Input graph
        d: Missing-neighbour slack; d = 0 lists maximal cliques

    Returns:
        EnumerationReport with the maximal (d+1)-plexes in canonical order
    """
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    closure = closure_number(g)
    n = max(g.n, 1)
    if d == 0:
        report = enumerate_max_cliques(g)
        return report.model_copy(update={"bound_value": plex_count_bound(n, closure.c, 0)})

    logger.info(f"Enumerating maximal {d + 1}-plexes: n={g.n}, m={g.edge_count}, c={closure.c}")
    h = complement(g)
    adj = h.adjacency
    full = h.full_mask

    def in_class(mask: int) -> bool:
        return mask_max_degree(adj, mask) <= d

    def is_maximal(mask: int) -> bool:
        return not any(_fits(adj, mask, w, d) for w in bits(full & ~mask))

    collector = CandidateCollector(in_class, is_maximal)
    collector.offer_all((k.mask for k in enumerate_max_cliques(g).results), trusted=True)

    for u, v in h.edges():
        rest = full & ~(adj[u] | adj[v] | 1 << u | 1 << v)
        for prefix in _anchor_prefixes(adj, u, v, d):
            collector.offer_all(_extend_masks(adj, prefix, rest, d), trusted=True)
        logger.debug(f"anchor {u}-{v}: {rest.bit_count()} free vertices")

    return collector.report(bound_value=plex_count_bound(n, closure.c, d), closure=closure.c)
