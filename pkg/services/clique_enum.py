import logging
from typing import Iterator, List, Sequence

from schemas import EnumerationReport
from services.closure import closure_number
from services.graph_core import Graph, VertexSet, bits, complement

logger = logging.getLogger(__name__)


def pivot_cliques(adj: Sequence[int], candidates: int) -> Iterator[int]:
    """
    Maximal cliques of G[candidates] as bitmasks, by Bron-Kerbosch with
    Tomita pivoting. An empty candidate set yields the empty clique once.
    """
    def expand(r: int, p: int, x: int) -> Iterator[int]:
        if not p and not x:
            yield r
            return
        pivot_pool = p | x
        pivot, best = -1, -1
        for u in bits(pivot_pool):
            score = (p & adj[u]).bit_count()
            if score > best:
                pivot, best = u, score
        for v in bits(p & ~adj[pivot]):
            yield from expand(r | 1 << v, p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    yield from expand(0, candidates, 0)


def count_pivot_cliques(adj: Sequence[int], candidates: int) -> int:
    return sum(1 for _ in pivot_cliques(adj, candidates))


def elimination_order(g: Graph) -> List[int]:
    """Descending degree, ties by index."""
    return sorted(g.vertices(), key=lambda v: (-g.degree(v), v))


def clique_count_bound(n: int, c: int) -> float:
    if n < 1 or c < 1:
        raise ValueError(f"n and c must be positive, got n={n}, c={c}")
    return n * n * 3 ** ((c - 1) / 3)


def enumerate_max_cliques(g: Graph) -> EnumerationReport:
    """
    All maximal cliques, grown one vertex at a time along the elimination order.

    With V_i the first i vertices of the order and v the i-th, every maximal
    clique of G[V_i] either comes from a maximal clique K of G[V_{i-1}]
    (as K + v when v sees all of K, else K itself) or is Q + v, where Q is a
    maximal clique of the common neighbourhood of v and some earlier
    non-neighbour u. That neighbourhood has at most c-1 vertices, so Q is
    listed by pivot_cliques. Candidates are kept when nothing in V_i extends
    them.
    """
    closure = closure_number(g)
    logger.info(f"Enumerating maximal cliques: n={g.n}, m={g.edge_count}, c={closure.c}")
    adj = g.adjacency

    current = {0}
    seen_prefix = 0
    type_two = 0
    duplicates = 0
    rejected = 0
    for v in elimination_order(g):
        prev = seen_prefix
        seen_prefix |= 1 << v
        nv = adj[v]
        level = set()
        for k in current:
            level.add(k | 1 << v if k & ~nv == 0 else k)

        extended = 0
        for u in bits(prev & ~nv):
            for q in pivot_cliques(adj, nv & adj[u] & prev):
                type_two += 1
                candidate = q | 1 << v
                if candidate in level:
                    duplicates += 1
                    continue
                extended += 1
                if _extension_set(adj, candidate, seen_prefix):
                    rejected += 1
                    continue
                level.add(candidate)

        current = level
        logger.debug(f"vertex {v}: {len(current)} maximal cliques, {extended} new type-2 candidates")

    report = EnumerationReport(
        results=sorted(VertexSet.from_mask(k) for k in current),
        candidates_generated=type_two + g.n,
        duplicates_removed=duplicates,
        maximality_rejections=rejected,
        bound_value=clique_count_bound(max(g.n, 1), closure.c),
        closure=closure.c,
    )
    logger.info(f"Found {report.count} maximal cliques from {report.candidates_generated} candidates")
    return report


def _extension_set(adj: Sequence[int], clique: int, within: int) -> int:
    common = within & ~clique
    for u in bits(clique):
        common &= adj[u]
        if not common:
            break
    return common


def enumerate_max_independent_sets(g: Graph) -> EnumerationReport:
    """Maximal independent sets of g, i.e. maximal cliques of its complement."""
    return enumerate_max_cliques(complement(g))
