import hashlib
import logging
import math
import random
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic_core import core_schema

from exceptions import GraphFormatError

logger = logging.getLogger(__name__)

INFINITE_DIAMETER = math.inf


def bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class VertexSet:
    """
    Immutable subset of the vertices of a graph, stored as a bitset.

    Equality and hashing go through the bitset; ordering is the canonical
    order of the sorted member tuples, so ``sorted()`` over a collection of
    VertexSets is the canonical listing used in reports.
    """

    __slots__ = ("_mask",)

    def __init__(self, members: Iterable[int] = ()):
        mask = 0
        for v in members:
            if v < 0:
                raise IndexError(f"Vertex index {v} is negative")
            mask |= 1 << v
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "VertexSet":
        if mask < 0:
            raise ValueError("A vertex mask cannot be negative")
        s = cls.__new__(cls)
        s._mask = mask
        return s

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(bits(self._mask))

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return bits(self._mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and v >= 0 and bool(self._mask >> v & 1)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, VertexSet):
            return self._mask == other._mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._mask)

    def __lt__(self, other: "VertexSet") -> bool:
        return self.members < other.members

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask | other._mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & other._mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_mask(self._mask & ~other._mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self._mask & ~other._mask == 0

    def __repr__(self) -> str:
        return f"VertexSet({list(self.members)})"

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls._coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda s: list(s.members), info_arg=False
            ),
        )

    @classmethod
    def _coerce(cls, value) -> "VertexSet":
        if isinstance(value, VertexSet):
            return value
        if isinstance(value, int):
            return cls.from_mask(value)
        return cls(value)


class Graph:
    """
    Immutable undirected simple graph on vertices 0..n-1.

    Adjacency is one bitset per vertex. Instances are never mutated after
    construction and can be shared freely between threads.
    """

    __slots__ = ("n", "_adj", "edge_count")

    def __init__(self, n: int, adjacency: Sequence[int]):
        if n < 0:
            raise ValueError("Vertex count must be non-negative")
        if len(adjacency) != n:
            raise ValueError(f"Expected {n} adjacency rows, got {len(adjacency)}")
        full = (1 << n) - 1
        for v, row in enumerate(adjacency):
            if row & ~full:
                raise IndexError(f"Adjacency of vertex {v} references a vertex outside [0, {n})")
            if row >> v & 1:
                raise GraphFormatError(f"Self-loop at vertex {v}")
            for u in bits(row):
                if not adjacency[u] >> v & 1:
                    raise ValueError(f"Adjacency is not symmetric for edge {v}-{u}")
        self._init(n, tuple(adjacency))

    def _init(self, n: int, adjacency: Tuple[int, ...]) -> None:
        self.n = n
        self._adj = adjacency
        self.edge_count = sum(row.bit_count() for row in adjacency) // 2

    @classmethod
    def _trusted(cls, n: int, adjacency: Sequence[int]) -> "Graph":
        g = cls.__new__(cls)
        g._init(n, tuple(adjacency))
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise IndexError(f"Edge {u}-{v} references a vertex outside [0, {n})")
            if u == v:
                raise GraphFormatError(f"Self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls._trusted(n, adj)

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph) -> Tuple["Graph", List]:
        """Relabel a networkx graph densely; returns the graph and the label list."""
        labels = sorted(nx_graph.nodes(), key=repr)
        index = {label: i for i, label in enumerate(labels)}
        edges = [(index[a], index[b]) for a, b in nx_graph.edges() if a != b]
        return cls.from_edges(len(labels), edges), labels

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adj

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> int:
        self._check(v)
        return self._adj[v]

    def neighbor_set(self, v: int) -> VertexSet:
        return VertexSet.from_mask(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return bool(self._adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.neighbors(v).bit_count()

    def max_degree(self) -> int:
        return max((row.bit_count() for row in self._adj), default=0)

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self._adj[u] >> (u + 1) << (u + 1))]

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.n))
        nx_graph.add_edges_from(self.edges())
        return nx_graph

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"Vertex index {v} out of range [0, {self.n})")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Graph):
            return self.n == other.n and self._adj == other._adj
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls._coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda g: write_edge_list(g), info_arg=False
            ),
        )

    @classmethod
    def _coerce(cls, value) -> "Graph":
        if isinstance(value, Graph):
            return value
        if isinstance(value, str):
            return parse_edge_list(value)
        raise TypeError(f"Cannot build a Graph from {type(value).__name__}")


# ---------------------------------------------------------------------------
# Bitset kernels over (adjacency, mask) pairs; every enumerator builds on these.

def mask_edge_count(adj: Sequence[int], mask: int) -> int:
    return sum((adj[v] & mask).bit_count() for v in bits(mask)) // 2


def mask_component_masks(adj: Sequence[int], mask: int) -> List[int]:
    comps = []
    remaining = mask
    while remaining:
        low = remaining & -remaining
        comp = low
        frontier = low
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            fresh = adj[v] & mask & ~comp
            comp |= fresh
            frontier |= fresh
        comps.append(comp)
        remaining &= ~comp
    return comps


def mask_is_forest(adj: Sequence[int], mask: int) -> bool:
    return mask_edge_count(adj, mask) == mask.bit_count() - len(mask_component_masks(adj, mask))


def mask_max_degree(adj: Sequence[int], mask: int) -> int:
    return max(((adj[v] & mask).bit_count() for v in bits(mask)), default=0)


def mask_degeneracy(adj: Sequence[int], mask: int, cap: Optional[int] = None) -> int:
    """
    Peel minimum-degree vertices off ``mask`` and return the largest degree
    seen at removal. With ``cap`` the peel stops as soon as the answer is known
    to exceed it (the returned value is then only guaranteed to be > cap).
    """
    remaining = mask
    best = 0
    while remaining:
        pick, low_deg = -1, None
        for v in bits(remaining):
            deg = (adj[v] & remaining).bit_count()
            if low_deg is None or deg < low_deg:
                pick, low_deg = v, deg
                if deg <= best:
                    break
        if low_deg > best:
            best = low_deg
            if cap is not None and best > cap:
                return best
        remaining &= ~(1 << pick)
    return best


def mask_ball(adj: Sequence[int], v: int, radius: int, mask: int) -> int:
    """Vertices of ``mask`` within distance ``radius`` of v inside G[mask]."""
    ball = 1 << v
    frontier = ball
    for _ in range(radius):
        grown = 0
        for u in bits(frontier):
            grown |= adj[u]
        grown &= mask & ~ball
        if not grown:
            break
        ball |= grown
        frontier = grown
    return ball


def _eccentricity(adj: Sequence[int], v: int, mask: int) -> Union[int, float]:
    seen = 1 << v
    frontier = seen
    depth = 0
    while True:
        grown = 0
        for u in bits(frontier):
            grown |= adj[u]
        grown &= mask & ~seen
        if not grown:
            break
        seen |= grown
        frontier = grown
        depth += 1
    return depth if seen == mask else INFINITE_DIAMETER


# ---------------------------------------------------------------------------
# Operations

def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph._trusted(g.n, [full & ~row & ~(1 << v) for v, row in enumerate(g.adjacency)])


def _to_mask(g: Graph, s: Union[VertexSet, Iterable[int]]) -> int:
    mask = s.mask if isinstance(s, VertexSet) else mask_of(s)
    if mask & ~g.full_mask:
        raise IndexError(f"Vertex set {VertexSet.from_mask(mask)} is not contained in [0, {g.n})")
    return mask


def open_neighborhood(g: Graph, s: Union[VertexSet, Iterable[int]]) -> VertexSet:
    mask = _to_mask(g, s)
    out = 0
    for v in bits(mask):
        out |= g.adjacency[v]
    return VertexSet.from_mask(out & ~mask)


def closed_neighborhood(g: Graph, s: Union[VertexSet, Iterable[int]]) -> VertexSet:
    mask = _to_mask(g, s)
    return VertexSet.from_mask(open_neighborhood(g, VertexSet.from_mask(mask)).mask | mask)


def common_neighbors(g: Graph, u: int, v: int) -> VertexSet:
    return VertexSet.from_mask(g.neighbors(u) & g.neighbors(v))


def components(g: Graph) -> List[VertexSet]:
    return [VertexSet.from_mask(c) for c in mask_component_masks(g.adjacency, g.full_mask)]


def diameter(g: Graph) -> Union[int, float]:
    """Largest eccentricity; ``INFINITE_DIAMETER`` (math.inf) for disconnected graphs."""
    best = 0
    for v in g.vertices():
        ecc = _eccentricity(g.adjacency, v, g.full_mask)
        if ecc == INFINITE_DIAMETER:
            return INFINITE_DIAMETER
        best = max(best, ecc)
    return best


def induced(g: Graph, s: Union[VertexSet, Iterable[int]]) -> Tuple[Graph, List[int]]:
    """
    Induced subgraph on ``s``.

    Returns the subgraph (relabelled 0..|s|-1 in ascending order) and the
    index map from new labels to vertices of ``g``.
    """
    mask = _to_mask(g, s)
    index_map = list(bits(mask))
    position = {v: i for i, v in enumerate(index_map)}
    adj = []
    for v in index_map:
        adj.append(mask_of(position[u] for u in bits(g.adjacency[v] & mask)))
    return Graph._trusted(len(index_map), adj), index_map


def degeneracy(g: Graph) -> Tuple[int, List[int]]:
    """
    Degeneracy and a peeling witness.

    The order repeatedly removes a minimum-degree vertex (ties by index); the
    largest degree seen at removal is the degeneracy.
    """
    adj = g.adjacency
    remaining = g.full_mask
    order: List[int] = []
    d = 0
    while remaining:
        pick, low_deg = -1, None
        for v in bits(remaining):
            deg = (adj[v] & remaining).bit_count()
            if low_deg is None or deg < low_deg:
                pick, low_deg = v, deg
        d = max(d, low_deg)
        order.append(pick)
        remaining &= ~(1 << pick)
    return d, order


# ---------------------------------------------------------------------------
# Generators

def gen_empty(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be non-negative")
    return Graph._trusted(n, [0] * n)


def gen_complete(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be non-negative")
    full = (1 << n) - 1
    return Graph._trusted(n, [full & ~(1 << v) for v in range(n)])


def gen_path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("A cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_star(k: int) -> Graph:
    """K_{1,k} with centre 0."""
    return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)])


def gen_complete_multipartite(part_sizes: Sequence[int]) -> Graph:
    if any(size <= 0 for size in part_sizes):
        raise ValueError(f"Part sizes must be positive, got {list(part_sizes)}")
    n = sum(part_sizes)
    full = (1 << n) - 1
    adj = [0] * n
    start = 0
    for size in part_sizes:
        part = ((1 << size) - 1) << start
        for v in range(start, start + size):
            adj[v] = full & ~part
        start += size
    return Graph._trusted(n, adj)


def gen_complete_bipartite(a: int, b: int) -> Graph:
    return gen_complete_multipartite([a, b])


def gen_moon_moser(n: int) -> Graph:
    """Complete (n/3)-partite graph with parts of size 3."""
    if n <= 0 or n % 3:
        raise ValueError(f"gen_moon_moser needs a positive multiple of 3, got {n}")
    return gen_complete_multipartite([3] * (n // 3))


def disjoint_union(*graphs: Graph) -> Graph:
    adj: List[int] = []
    offset = 0
    for g in graphs:
        adj.extend(row << offset for row in g.adjacency)
        offset += g.n
    return Graph._trusted(offset, adj)


def gen_k5_union(n: int) -> Graph:
    """n/5 disjoint copies of K5."""
    if n <= 0 or n % 5:
        raise ValueError(f"gen_k5_union needs a positive multiple of 5, got {n}")
    return disjoint_union(*[gen_complete(5)] * (n // 5))


def gen_k5_union_minus_matching(n: int) -> Graph:
    """n/5 copies of K5 with a 2-edge matching removed from each; same M1 count as gen_k5_union."""
    base = gen_k5_union(n)
    removed = set()
    for block in range(n // 5):
        s = 5 * block
        removed.update({(s, s + 1), (s + 2, s + 3)})
    return Graph.from_edges(n, [e for e in base.edges() if e not in removed])


def gen_example1(ell: int, n: int) -> Tuple[Graph, int]:
    """
    A clique K on c-1 vertices joined to an independent set I of size n,
    with c = ell(ell+1)/2 + 1. Vertices 0..c-2 form K, the rest form I.

    Returns the graph and c.
    """
    if ell <= 0 or n <= 0:
        raise ValueError("ell and n must be positive")
    c = ell * (ell + 1) // 2 + 1
    k = c - 1
    total = k + n
    clique = (1 << k) - 1
    full = (1 << total) - 1
    adj = [full & ~(1 << v) for v in range(k)] + [clique] * n
    return Graph._trusted(total, adj), c


def gen_random(n: int, p: float, seed: int) -> Graph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError(f"Invalid G(n, p) parameters n={n}, p={p}")
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p])


def add_universal_vertices(g: Graph, k: int) -> Graph:
    """Append k vertices adjacent to every other vertex (including each other)."""
    n = g.n + k
    full = (1 << n) - 1
    old = g.full_mask
    new = full & ~old
    adj = [row | new for row in g.adjacency]
    adj += [full & ~(1 << v) for v in range(g.n, n)]
    return Graph._trusted(n, adj)


def pair_index(n: int) -> List[Tuple[int, int]]:
    return list(combinations(range(n), 2))


def graph_from_id(n: int, gid: int, pairs: Optional[List[Tuple[int, int]]] = None) -> Graph:
    """Labelled graph whose edge set is the bit pattern of gid over the pairs of [0, n) in lexicographic order."""
    pairs = pairs if pairs is not None else pair_index(n)
    adj = [0] * n
    for i in bits(gid):
        u, v = pairs[i]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph._trusted(n, adj)


def graph_id(g: Graph) -> int:
    gid = 0
    for i, (u, v) in enumerate(pair_index(g.n)):
        if g.adjacency[u] >> v & 1:
            gid |= 1 << i
    return gid


# ---------------------------------------------------------------------------
# Serialization

def _data_lines(text: str, comment_prefixes: Tuple[str, ...]) -> Iterator[Tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(comment_prefixes):
            continue
        yield number, line


def _parse_int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got '{token}'", number)


def _build(n: int, edges: List[Tuple[int, int, int]], declared_m: Optional[int]) -> Graph:
    adj = [0] * n
    seen = set()
    duplicates = 0
    for u, v, number in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"edge {u} {v} outside [0, {n})", number)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", number)
        key = (min(u, v), max(u, v))
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    if duplicates:
        logger.warning(f"Dropped {duplicates} duplicate edge(s)")
    g = Graph._trusted(n, adj)
    if declared_m is not None and declared_m != g.edge_count:
        logger.warning(f"Header declares {declared_m} edges, read {g.edge_count}")
    return g


def parse_edge_list(text: str) -> Graph:
    """
    Parse the "n m" header format: first data line "n m", then one
    0-indexed "u v" pair per line. Lines starting with # or % are comments.
    """
    lines = _data_lines(text, ("#", "%"))
    try:
        number, header = next(lines)
    except StopIteration:
        raise GraphFormatError("empty input: expected an 'n m' header line")
    tokens = header.split()
    if len(tokens) != 2:
        raise GraphFormatError(f"expected header 'n m', got '{header}'", number)
    n, m = (_parse_int(t, number) for t in tokens)
    if n < 0 or m < 0:
        raise GraphFormatError("header values must be non-negative", number)

    edges = []
    for number, line in lines:
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"expected 'u v', got '{line}'", number)
        u, v = (_parse_int(t, number) for t in tokens)
        edges.append((u, v, number))
    return _build(n, edges, m)


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS "p edge n m" / "e u v" text (1-indexed) into a 0-indexed graph."""
    n: Optional[int] = None
    m: Optional[int] = None
    edges = []
    for number, line in _data_lines(text, ("c",)):
        tokens = line.split()
        if tokens[0] == "p":
            if len(tokens) != 4 or n is not None:
                raise GraphFormatError(f"bad problem line '{line}'", number)
            n, m = _parse_int(tokens[2], number), _parse_int(tokens[3], number)
        elif tokens[0] == "e":
            if n is None:
                raise GraphFormatError("edge line before the problem line", number)
            if len(tokens) != 3:
                raise GraphFormatError(f"expected 'e u v', got '{line}'", number)
            u, v = _parse_int(tokens[1], number), _parse_int(tokens[2], number)
            edges.append((u - 1, v - 1, number))
        else:
            raise GraphFormatError(f"unknown DIMACS line '{line}'", number)
    if n is None:
        raise GraphFormatError("missing 'p edge n m' line")
    return _build(n, edges, m)


def parse_graph_text(text: str) -> Graph:
    """Dispatch on the first data line: DIMACS if it starts with 'p', edge list otherwise."""
    for _, line in _data_lines(text, ("#", "%")):
        if line.split()[0] in ("p", "c", "e"):
            return parse_dimacs(text)
        break
    return parse_edge_list(text)


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def edge_list_digest(g: Graph) -> str:
    return hashlib.sha256(write_edge_list(g).encode("utf-8")).hexdigest()


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    """Graph with vertex order[i] renamed to i."""
    position: Dict[int, int] = {v: i for i, v in enumerate(order)}
    if len(position) != g.n:
        raise ValueError("order must be a permutation of the vertices")
    adj = [0] * g.n
    for v in range(g.n):
        adj[position[v]] = mask_of(position[u] for u in bits(g.adjacency[v]))
    return Graph._trusted(g.n, adj)
