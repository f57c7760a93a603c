import logging
from itertools import chain, combinations
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from config import get_settings
from exceptions import SizeLimitError
from schemas import GoodPartition, KStar, Predicate
from services.clique_enum import pivot_cliques
from services.closure import closure_number
from services.graph_core import Graph, VertexSet, bits, complement, mask_of
from services.oracle import PredicateEvaluator, iter_feasible

logger = logging.getLogger(__name__)

# mask -> maximal independent sets of the host restricted to mask
MisEnumerator = Callable[[int], Iterable[int]]


def iter_proper_kstar_masks(
    adj: Sequence[int], co_adj: Sequence[int], k: int, mis: Optional[MisEnumerator] = None
) -> Iterator[Tuple[int, int]]:
    """
    (head, tails) masks for every head A with |A| <= k. Tails range over the
    maximal independent sets of H - A, or of H - A - X when |A| = k, where X
    are the vertices adjacent to all of A. Independent sets of H are cliques
    of the complement, which is where they are listed.
    """
    n = len(adj)
    full = (1 << n) - 1
    if mis is None:
        mis = lambda mask: pivot_cliques(co_adj, mask)
    for size in range(0, min(k, n) + 1):
        for head in combinations(range(n), size):
            a = mask_of(head)
            rest = full & ~a
            if size == k:
                sees_all = rest
                for v in head:
                    sees_all &= adj[v]
                rest &= ~sees_all
            for b in mis(rest):
                yield a, b


def enumerate_proper_kstars(
    g: Graph, k: int, mis: Optional[MisEnumerator] = None
) -> List[Tuple[KStar, VertexSet]]:
    """Every proper k-star candidate A + B of g (see iter_proper_kstar_masks)."""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    co = complement(g)
    logger.info(f"Listing proper {k}-stars: n={g.n}, co-closure c={closure_number(co).c}")
    return [
        (
            KStar(head=VertexSet.from_mask(a), tails=VertexSet.from_mask(b), proper=True),
            VertexSet.from_mask(a | b),
        )
        for a, b in iter_proper_kstar_masks(g.adjacency, co.adjacency, k, mis)
    ]


def _star_is_proper(adj: Sequence[int], head: int, tails: int, k: int) -> bool:
    return all((adj[b] & head).bit_count() <= k - 1 for b in bits(tails))


def is_kstar(h: Graph, star: KStar, k: int) -> bool:
    """Validates the KStar fields against h: head size, independent tails, properness flag."""
    adj = h.adjacency
    head, tails = star.head.mask, star.tails.mask
    if head & tails or len(star.head) > k:
        return False
    if any(adj[b] & tails for b in bits(tails)):
        return False
    return star.proper == _star_is_proper(adj, head, tails, k)


def find_kstar(h: Graph, k: int, proper: bool = False) -> Optional[KStar]:
    """A head of size <= k covering every edge of h (with every tail seeing < k head vertices when proper)."""
    adj = h.adjacency
    full = h.full_mask
    for size in range(0, min(k, h.n) + 1):
        for head in combinations(range(h.n), size):
            a = mask_of(head)
            tails = full & ~a
            if any(adj[b] & tails for b in bits(tails)):
                continue
            is_proper = _star_is_proper(adj, a, tails, k)
            if proper and not is_proper:
                continue
            return KStar(head=VertexSet.from_mask(a), tails=VertexSet.from_mask(tails), proper=is_proper)
    return None


def _edge_neighbourhood(adj: Sequence[int], edge: Tuple[int, int]) -> int:
    a, b = edge
    return adj[a] | adj[b]


def _partition_for(h: Graph, edges: Sequence[Tuple[int, int]], ell: int) -> Optional[GoodPartition]:
    adj = h.adjacency
    covered = mask_of(v for e in edges for v in e)
    rest = h.full_mask & ~covered
    around = [_edge_neighbourhood(adj, e) & rest for e in edges]
    shared = rest
    for mask in around:
        shared &= mask
    if shared.bit_count() > ell:
        return None
    parts = [shared] + [0] * len(edges)
    for v in bits(rest & ~shared):
        i = next(i for i, mask in enumerate(around) if not mask >> v & 1)
        parts[i + 1] |= 1 << v
    return GoodPartition(
        edges=[tuple(e) for e in edges],
        parts=[VertexSet.from_mask(p) for p in parts],
        ell=ell,
    )


def detect_good_partition(h: Graph, ell: int, k: int) -> Optional[GoodPartition]:
    """
    A good (ell, k)-partition of h, or None. A tuple of k edges works iff at
    most ell vertices outside them are adjacent to all k; those form A_0 and
    every other vertex goes to the first edge it misses. Tuples drawn from a
    maximum matching are tried before all k-subsets of edges.
    """
    if k < 1 or ell < 0:
        raise ValueError(f"Need k >= 1 and ell >= 0, got k={k}, ell={ell}")
    edges = h.edges()
    if len(edges) < k:
        return None
    matching = sorted(tuple(sorted(e)) for e in nx.max_weight_matching(h.to_networkx(), maxcardinality=True))
    tried = set()
    for combo in chain(combinations(matching, k), combinations(edges, k)):
        key = tuple(sorted(combo))
        if key in tried:
            continue
        tried.add(key)
        found = _partition_for(h, key, ell)
        if found is not None:
            return found
    return None


def is_good_partition(h: Graph, gp: GoodPartition, ell: Optional[int] = None) -> bool:
    ell = gp.ell if ell is None else ell
    adj = h.adjacency
    if len(gp.parts) != len(gp.edges) + 1:
        return False
    covered = 0
    for a, b in gp.edges:
        if not (0 <= a < h.n and 0 <= b < h.n) or not adj[a] >> b & 1:
            return False
        covered |= 1 << a | 1 << b
    union = 0
    for part in gp.parts:
        if part.mask & union or part.mask & covered:
            return False
        union |= part.mask
    if union != h.full_mask & ~covered or len(gp.parts[0]) > ell:
        return False
    return all(
        not _edge_neighbourhood(adj, e) & part.mask for e, part in zip(gp.edges, gp.parts[1:])
    )


def enumerate_good_partition_sets(
    g: Graph,
    edges: Sequence[Tuple[int, int]],
    a0: VertexSet,
    keep: Predicate,
    ell: Optional[int] = None,
) -> List[VertexSet]:
    """
    Every S = A_0 + (anchor edges) + F satisfying keep, where F ranges over
    subsets of the vertices outside the anchor that miss at least one anchor
    edge. In the complement of a c-closed graph there are at most k(c-1)
    such vertices.
    """
    adj = g.adjacency
    for a, b in edges:
        if not g.has_edge(a, b):
            raise ValueError(f"Anchor {a}-{b} is not an edge")
    if ell is not None and len(a0) > ell:
        raise ValueError(f"A_0 has {len(a0)} vertices, more than ell={ell}")
    covered = mask_of(v for e in edges for v in e)
    base = covered | a0.mask
    free = 0
    for e in edges:
        free |= g.full_mask & ~_edge_neighbourhood(adj, e)
    free &= ~base
    limit = get_settings().scan_limit
    if free.bit_count() > limit:
        raise SizeLimitError("good partition kernel", free.bit_count(), limit, "raise CLOSEDGRAPHS_SCAN_LIMIT")
    ev = PredicateEvaluator(g, keep)
    return sorted(VertexSet.from_mask(m) for m in iter_feasible(ev, base, free))
