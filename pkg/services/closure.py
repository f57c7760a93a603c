import logging
from typing import Optional, Tuple

from schemas import ClosureNumber
from services.graph_core import Graph

logger = logging.getLogger(__name__)


def closure_number(g: Graph) -> ClosureNumber:
    """
    Smallest c such that every non-adjacent pair has at most c-1 common
    neighbors. The witness is the lexicographically first pair attaining c-1.
    """
    adj = g.adjacency
    best = 0
    witness: Optional[Tuple[int, int]] = None
    for u in range(g.n):
        # non-neighbours after u
        others = g.full_mask & ~adj[u] & ~((1 << (u + 1)) - 1)
        while others:
            v = (others & -others).bit_length() - 1
            others &= others - 1
            shared = (adj[u] & adj[v]).bit_count()
            if shared > best:
                best, witness = shared, (u, v)
    return ClosureNumber(c=best + 1, witness=witness if best > 0 else None)


def is_c_closed(g: Graph, c: int) -> bool:
    if c < 1:
        raise ValueError(f"c must be at least 1, got {c}")
    return closure_number(g).c <= c


def co_closure_check(g: Graph, c: int) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """
    Whether g is the complement of a c-closed graph: every edge uv leaves at
    most c-1 vertices outside N[u, v]. Returns the first violating edge.
    """
    if c < 1:
        raise ValueError(f"c must be at least 1, got {c}")
    adj = g.adjacency
    for u, v in g.edges():
        outside = g.n - (adj[u] | adj[v] | 1 << u | 1 << v).bit_count()
        if outside > c - 1:
            return False, (u, v)
    return True, None


def _first_violation(adj, n: int, c: int) -> Optional[Tuple[int, int]]:
    full = (1 << n) - 1
    for u in range(n):
        others = full & ~adj[u] & ~((1 << (u + 1)) - 1)
        while others:
            v = (others & -others).bit_length() - 1
            others &= others - 1
            if (adj[u] & adj[v]).bit_count() >= c:
                return u, v
    return None


def closure_augment(g: Graph, c: int) -> Graph:
    """
    c-closed supergraph of g: while some non-adjacent pair has at least c
    common neighbors, join the lexicographically smallest such pair.

    Args:
        g: Starting graph
        c: Target closure; must be at least 1

    Returns:
        A graph containing every edge of g whose closure number is at most c
    """
    if c < 1:
        raise ValueError(f"c must be at least 1, got {c}")
    adj = list(g.adjacency)
    added = 0
    while True:
        pair = _first_violation(adj, g.n, c)
        if pair is None:
            break
        u, v = pair
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        added += 1
    if added:
        logger.debug(f"closure_augment added {added} edges to reach c={c}")
    return Graph(g.n, adj)
