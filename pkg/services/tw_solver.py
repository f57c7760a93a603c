import logging
from typing import Dict, List, Optional, Sequence, Tuple

from config import get_settings
from exceptions import SizeLimitError
from schemas import LocalTWProfile, TreeDecomposition
from services.graph_core import (
    Graph,
    VertexSet,
    bits,
    mask_ball,
    mask_degeneracy,
    mask_edge_count,
    mask_is_forest,
)

logger = logging.getLogger(__name__)

LOCAL_RADIUS = 5


def _reach_beyond(adj: Sequence[int], mask: int, prefix: int, v: int) -> int:
    """Vertices of mask outside prefix + v that v reaches through eliminated (prefix) vertices."""
    comp = 1 << v
    frontier = comp
    while frontier:
        u = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        fresh = adj[u] & prefix & ~comp
        comp |= fresh
        frontier |= fresh
    around = 0
    for u in bits(comp):
        around |= adj[u]
    return around & mask & ~prefix & ~(1 << v)


def _elimination_order(adj: Sequence[int], mask: int, t: int) -> Optional[List[int]]:
    """
    Search feasible elimination prefixes level by level. A prefix grows by v
    when v reaches at most t uneliminated vertices; treewidth <= t iff the
    whole mask is reachable. The first parent found for each prefix is kept,
    so the returned order is lexicographically determined.
    """
    parents: Dict[int, Tuple[int, int]] = {0: (0, -1)}
    level = [0]
    for _ in range(mask.bit_count()):
        next_level = []
        for prefix in level:
            for v in bits(mask & ~prefix):
                grown = prefix | 1 << v
                if grown in parents:
                    continue
                if _reach_beyond(adj, mask, prefix, v).bit_count() <= t:
                    parents[grown] = (prefix, v)
                    next_level.append(grown)
        if not next_level:
            return None
        level = next_level

    order = []
    state = mask
    while state:
        state, v = parents[state]
        order.append(v)
    order.reverse()
    return order


class TreewidthCache:
    """
    Memoized treewidth decisions on induced subgraphs G[mask] of one host.

    Keeps, per mask, the smallest t known to succeed and the largest t known
    to fail, so repeated maximality tests on a kernel are cheap.
    """

    def __init__(self, adj: Sequence[int], limit: Optional[int] = None):
        self.adj = tuple(adj)
        self.limit = limit if limit is not None else get_settings().treewidth_limit
        self._yes: Dict[int, int] = {}
        self._no: Dict[int, int] = {}

    def at_most(self, mask: int, t: int) -> bool:
        if mask in self._yes and t >= self._yes[mask]:
            return True
        if mask in self._no and t <= self._no[mask]:
            return False
        answer = self._decide(mask, t)
        if answer:
            self._yes[mask] = min(t, self._yes.get(mask, t))
        else:
            self._no[mask] = max(t, self._no.get(mask, t))
        return answer

    def _decide(self, mask: int, t: int) -> bool:
        size = mask.bit_count()
        if size <= t + 1:
            return True
        edges = mask_edge_count(self.adj, mask)
        if t == 0:
            return edges == 0
        if edges > t * size - t * (t + 1) // 2:
            return False
        if t == 1:
            return mask_is_forest(self.adj, mask)
        if mask_degeneracy(self.adj, mask, cap=t) > t:
            return False
        if size > self.limit:
            raise SizeLimitError(
                "treewidth", size, self.limit, "raise CLOSEDGRAPHS_TW_LIMIT or shrink the instance"
            )
        return _elimination_order(self.adj, mask, t) is not None

    def treewidth(self, mask: int) -> int:
        if not mask:
            return -1
        t = mask_degeneracy(self.adj, mask)
        while not self.at_most(mask, t):
            t += 1
        return t

    def local_at_most(self, mask: int, t: int, radius: int = LOCAL_RADIUS) -> bool:
        """ltw(r) <= t for r = 1..radius inside G[mask]; balls are nested, so the largest radius decides."""
        if self.at_most(mask, t):
            return True
        for v in bits(mask):
            if not self.at_most(mask_ball(self.adj, v, radius, mask), t):
                return False
        return True


def decomposition_from_order(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """
    Tree decomposition induced by an elimination order: bag i is order[i]
    plus the later vertices it reaches through earlier ones. Each bag hangs
    below the bag of its first-eliminated later neighbour; bags with no later
    neighbour close a component and are chained to the next bag.
    """
    _check_order(g, order)
    adj = g.adjacency
    position = {v: i for i, v in enumerate(order)}
    bags: List[VertexSet] = []
    tree: List[List[int]] = [[] for _ in order]
    prefix = 0
    for i, v in enumerate(order):
        later = _reach_beyond(adj, g.full_mask, prefix, v)
        bags.append(VertexSet.from_mask(later | 1 << v))
        if later:
            parent = min(position[u] for u in bits(later))
        else:
            parent = i + 1 if i + 1 < len(order) else None
        if parent is not None:
            tree[i].append(parent)
            tree[parent].append(i)
        prefix |= 1 << v
    if not bags:
        return TreeDecomposition(tree=[[]], bags=[VertexSet()], width=-1)
    return TreeDecomposition(tree=tree, bags=bags, width=max(len(b) for b in bags) - 1)


def _check_order(g: Graph, order: Sequence[int]) -> None:
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")


def elimination_width(g: Graph, order: Sequence[int]) -> int:
    """Largest number of later vertices any vertex sees when eliminated in this order."""
    _check_order(g, order)
    width = -1
    prefix = 0
    for v in order:
        width = max(width, _reach_beyond(g.adjacency, g.full_mask, prefix, v).bit_count())
        prefix |= 1 << v
    return width


def treewidth_at_most(g: Graph, t: int) -> bool:
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return TreewidthCache(g.adjacency).at_most(g.full_mask, t)


def treewidth_exact(g: Graph) -> Tuple[int, TreeDecomposition]:
    """
    Treewidth of g with a decomposition of that width

    Returns:
        (width, decomposition); the empty graph has width -1

    Raises:
        SizeLimitError: g has more vertices than CLOSEDGRAPHS_TW_LIMIT
    """
    limit = get_settings().treewidth_limit
    if g.n > limit:
        raise SizeLimitError("treewidth_exact", g.n, limit, "raise CLOSEDGRAPHS_TW_LIMIT")
    if g.n == 0:
        return -1, decomposition_from_order(g, [])

    t = mask_degeneracy(g.adjacency, g.full_mask)
    while True:
        order = _elimination_order(g.adjacency, g.full_mask, t)
        if order is not None:
            break
        t += 1
    logger.debug(f"treewidth {t} on {g.n} vertices, order {order}")
    return t, decomposition_from_order(g, order)


def validate_decomposition(g: Graph, td: TreeDecomposition) -> Tuple[bool, Optional[str]]:
    """Check the decomposition axioms; on failure returns the name of the violated one."""
    k = len(td.bags)
    if len(td.tree) != k or k == 0:
        return False, "tree"
    links = 0
    for i, nbrs in enumerate(td.tree):
        for j in nbrs:
            if not 0 <= j < k or j == i or i not in td.tree[j]:
                return False, "tree"
            links += 1
    if links != 2 * (k - 1) or len(_tree_component(td.tree, 0, set(range(k)))) != k:
        return False, "tree"

    covered = 0
    for bag in td.bags:
        covered |= bag.mask
    if covered != g.full_mask:
        return False, "vertex coverage"
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            return False, "edge coverage"
    for v in range(g.n):
        holding = {i for i, bag in enumerate(td.bags) if v in bag}
        start = next(iter(holding))
        if _tree_component(td.tree, start, holding) != holding:
            return False, "running intersection"
    if td.width != max(len(b) for b in td.bags) - 1:
        return False, "width"
    return True, None


def _tree_component(tree: List[List[int]], start: int, allowed: set) -> set:
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in tree[i]:
            if j in allowed and j not in seen:
                seen.add(j)
                stack.append(j)
    return seen


def local_treewidth(g: Graph, r: int) -> int:
    """Max over v of tw(G[N_r(v)]), where N_r(v) contains v."""
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    cache = TreewidthCache(g.adjacency)
    return max((cache.treewidth(mask_ball(g.adjacency, v, r, g.full_mask)) for v in g.vertices()), default=0)


def local_treewidth_profile(g: Graph, r_max: int = LOCAL_RADIUS) -> LocalTWProfile:
    cache = TreewidthCache(g.adjacency)
    values = {}
    for r in range(1, r_max + 1):
        values[r] = max(
            (cache.treewidth(mask_ball(g.adjacency, v, r, g.full_mask)) for v in g.vertices()), default=0
        )
    return LocalTWProfile(values=values)
