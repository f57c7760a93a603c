import logging
from typing import Callable, Iterator, List, Optional, Union

from config import get_settings
from exceptions import PredicateError, SizeLimitError
from schemas import Predicate, PredicateKind
from services.clique_enum import count_pivot_cliques, pivot_cliques
from services.graph_core import (
    Graph,
    VertexSet,
    bits,
    complement,
    mask_degeneracy,
    mask_edge_count,
    mask_is_forest,
    mask_max_degree,
)
from services.tw_solver import TreewidthCache

logger = logging.getLogger(__name__)

SetLike = Union[VertexSet, int, None]


def _as_mask(s: SetLike, default: int) -> int:
    if s is None:
        return default
    if isinstance(s, VertexSet):
        return s.mask
    return s


class PredicateEvaluator:
    """Evaluates one predicate on induced subgraphs G[mask] of a fixed graph."""

    def __init__(self, g: Graph, p: Predicate):
        self.graph = g
        self.predicate = p
        self.adj = g.adjacency
        self._tw: Optional[TreewidthCache] = None
        if p.kind in (PredicateKind.TREEWIDTH_LE, PredicateKind.LOCAL_TREEWIDTH_LE):
            self._tw = TreewidthCache(self.adj)
        self.holds: Callable[[int], bool] = self._select()

    @property
    def hereditary(self) -> bool:
        return self.predicate.hereditary

    def _select(self) -> Callable[[int], bool]:
        adj = self.adj
        kind = self.predicate.kind
        param = self.predicate.param
        if kind == PredicateKind.INDEPENDENT_SET:
            return lambda mask: all(not adj[v] & mask for v in bits(mask))
        if kind == PredicateKind.CLIQUE:
            return lambda mask: all(not mask & ~adj[v] & ~(1 << v) for v in bits(mask))
        if kind == PredicateKind.MAX_DEGREE:
            return lambda mask: mask_max_degree(adj, mask) <= param
        if kind == PredicateKind.PLEX:
            return lambda mask: all((mask & ~adj[v]).bit_count() - 1 <= param for v in bits(mask))
        if kind == PredicateKind.FOREST:
            return lambda mask: mask_is_forest(adj, mask)
        if kind == PredicateKind.DEGENERATE_LE:
            return lambda mask: mask_degeneracy(adj, mask, cap=param) <= param
        if kind == PredicateKind.TREEWIDTH_LE:
            return lambda mask: self._tw.at_most(mask, param)
        if kind == PredicateKind.LOCAL_TREEWIDTH_LE:
            return lambda mask: self._tw.local_at_most(mask, param)
        if kind == PredicateKind.NONEDGES_LE_SIZE:
            def few_nonedges(mask: int) -> bool:
                k = mask.bit_count()
                return k * (k - 1) // 2 - mask_edge_count(adj, mask) <= k
            return few_nonedges
        raise PredicateError(f"Unsupported predicate kind: {kind}")

    def single_vertex_maximal(self, mask: int, ground: int) -> bool:
        for w in bits(ground & ~mask):
            if self.holds(mask | 1 << w):
                return False
        return True


def iter_feasible(ev: PredicateEvaluator, prefix: int, free: int) -> Iterator[int]:
    """
    Every S with prefix <= S <= prefix | free satisfying the predicate. For
    hereditary predicates branches die as soon as the predicate fails.
    """
    order = list(bits(free & ~prefix))
    if ev.hereditary:
        if not ev.holds(prefix):
            return

        def walk(i: int, current: int) -> Iterator[int]:
            if i == len(order):
                yield current
                return
            grown = current | 1 << order[i]
            if ev.holds(grown):
                yield from walk(i + 1, grown)
            yield from walk(i + 1, current)

        yield from walk(0, prefix)
        return

    for chosen in range(1 << len(order)):
        mask = prefix
        for i in bits(chosen):
            mask |= 1 << order[i]
        if ev.holds(mask):
            yield mask


def _check_walk_size(free: int) -> None:
    limit = get_settings().oracle_limit
    if free.bit_count() > limit:
        raise SizeLimitError(
            "oracle (hereditary)", free.bit_count(), limit,
            "raise CLOSEDGRAPHS_ORACLE_LIMIT or shrink the instance",
        )


def maximal_masks(ev: PredicateEvaluator, prefix: int, ground: int) -> List[int]:
    free = ground & ~prefix
    settings = get_settings()
    if ev.hereditary:
        _check_walk_size(free)
        return list(_maximal_walk(ev, prefix, free))

    if free.bit_count() > settings.scan_limit:
        raise SizeLimitError(
            "oracle (full scan)", free.bit_count(), settings.scan_limit,
            "raise CLOSEDGRAPHS_SCAN_LIMIT or shrink the instance",
        )
    feasible = sorted(iter_feasible(ev, prefix, free), key=lambda m: -m.bit_count())
    maximal: List[int] = []
    for mask in feasible:
        if not any(mask & ~kept == 0 for kept in maximal):
            maximal.append(mask)
    return maximal


def _maximal_walk(ev: PredicateEvaluator, prefix: int, free: int) -> Iterator[int]:
    """
    Include/exclude search over the free vertices. An excluded vertex must end
    up blocked, so a leaf is reported only when no excluded vertex can still
    be added.
    """
    if not ev.holds(prefix):
        return
    order = list(bits(free))

    def walk(i: int, current: int, excluded: int) -> Iterator[int]:
        if i == len(order):
            if ev.single_vertex_maximal(current, current | excluded):
                yield current
            return
        v = order[i]
        grown = current | 1 << v
        if ev.holds(grown):
            yield from walk(i + 1, grown, excluded)
            yield from walk(i + 1, current, excluded | 1 << v)
        else:
            # blocked now, blocked in every superset
            yield from walk(i + 1, current, excluded)

    yield from walk(0, prefix, 0)


def enumerate_maximal_bruteforce(
    g: Graph, p: Predicate, prefix: SetLike = None, within: SetLike = None
) -> List[VertexSet]:
    """
    Inclusion-maximal S with p(G[S]), restricted to prefix <= S <= within.

    Maximality is relative to ``within``. Hereditary kinds use a pruned
    include/exclude search; the non-hereditary kind scans every subset and
    keeps the sets with no feasible strict superset.

    Args:
        g: Input graph
        p: Predicate on induced subgraphs
        prefix: Vertices every result must contain
        within: Ground set; defaults to all vertices

    Returns:
        Sorted list of the maximal sets

    Raises:
        SizeLimitError: The free part exceeds the oracle or scan limit
    """
    ground = _as_mask(within, g.full_mask)
    fixed = _as_mask(prefix, 0)
    if ground & ~g.full_mask:
        raise IndexError("within is not a subset of the vertices")
    if fixed & ~ground:
        raise ValueError("prefix must be contained in within")
    ev = PredicateEvaluator(g, p)
    masks = maximal_masks(ev, fixed, ground)
    return sorted(VertexSet.from_mask(m) for m in masks)


def is_maximal(g: Graph, s: VertexSet, p: Predicate) -> bool:
    """
    Whether s is an inclusion-maximal member of the class. Hereditary kinds
    test single-vertex extensions; the non-hereditary kind tests every strict
    superset.
    """
    ev = PredicateEvaluator(g, p)
    if not ev.holds(s.mask):
        raise PredicateError(f"{s} does not satisfy {p.label}")
    if ev.hereditary:
        return ev.single_vertex_maximal(s.mask, g.full_mask)

    outside = g.full_mask & ~s.mask
    limit = get_settings().scan_limit
    if outside.bit_count() > limit:
        raise SizeLimitError("is_maximal (superset scan)", outside.bit_count(), limit)
    for superset in iter_feasible(ev, s.mask, outside):
        if superset != s.mask:
            return False
    return True


def count_maximal(g: Graph, p: Predicate, prefix: SetLike = None, within: SetLike = None) -> int:
    """Number of maximal sets; cliques and independent sets are counted by pivoting search."""
    fixed = _as_mask(prefix, 0)
    ground = _as_mask(within, g.full_mask)
    if not fixed and p.kind == PredicateKind.CLIQUE:
        return count_pivot_cliques(g.adjacency, ground)
    if not fixed and p.kind == PredicateKind.INDEPENDENT_SET:
        return count_pivot_cliques(complement(g).adjacency, ground)
    ev = PredicateEvaluator(g, p)
    if ev.hereditary:
        _check_walk_size(ground & ~fixed)
        return sum(1 for _ in _maximal_walk(ev, fixed, ground & ~fixed))
    return len(maximal_masks(ev, fixed, ground))


def maximal_cliques_reference(g: Graph) -> List[VertexSet]:
    """Secondary reference for the clique and independent-set kinds."""
    return sorted(VertexSet.from_mask(m) for m in pivot_cliques(g.adjacency, g.full_mask))
