import csv
import io
import logging
from math import comb
from multiprocessing import Pool
from typing import Iterable, List, Optional, Tuple

from scipy.optimize import brentq

from config import get_settings
from exceptions import BoundViolationError, SizeLimitError
from schemas import BoundRecord, KappaValue, M1LemmaReport, Predicate, PredicateKind
from services.graph_core import (
    Graph,
    bits,
    components,
    gen_example1,
    graph_from_id,
    pair_index,
    write_edge_list,
)
from services.oracle import PredicateEvaluator, count_maximal, iter_feasible, maximal_masks
from services.sparse_struct import detect_good_partition, find_kstar
from services.tw_solver import treewidth_at_most

logger = logging.getLogger(__name__)

# Published values of kappa_d for d = 0..4
KAPPA_TABLE = {0: 1.618, 1: 1.839, 2: 1.928, 3: 1.966, 4: 1.984}
FOREST_BASE = 1.8638

M1 = Predicate(kind=PredicateKind.MAX_DEGREE, param=1)


def _root_in_unit_interval(exponent: int) -> float:
    """Root in (1, 2) of x^(e+1) - 2x^e + 1; x = 1 is always a root and is excluded."""
    return brentq(lambda x: x ** (exponent + 1) - 2 * x ** exponent + 1, 1 + 1e-6, 2.0, xtol=1e-12)


def kappa(d: int) -> KappaValue:
    """
    Root of x^(d+4) - 2x^(d+3) + 1 in (1, 2) next to the published constant.
    The published constants are the roots of x^(d+3) - 2x^(d+2) + 1, which
    is reported as ``shifted_root``.
    """
    if d < 0:
        raise ValueError(f"d must be non-negative, got {d}")
    return KappaValue(
        d=d,
        root=_root_in_unit_interval(d + 3),
        shifted_root=_root_in_unit_interval(d + 2),
        table=KAPPA_TABLE.get(d),
    )


def kappa_for_bound(d: int) -> float:
    """Published constant where one exists, the matching shifted root beyond it."""
    if d in KAPPA_TABLE:
        return KAPPA_TABLE[d]
    return kappa(d).shifted_root


def count_bound(p: Predicate, N: int, prefix_size: int = 0) -> Optional[float]:
    """
    Claimed maximum number of maximal sets over N-vertex graphs

    Args:
        p: Predicate the sets satisfy
        N: Number of free vertices
        prefix_size: Size of the fixed prefix every set contains

    Returns:
        The bound as a float, or None where no bound is claimed
    """
    kind, param = p.kind, p.param
    if kind == PredicateKind.MAX_DEGREE and prefix_size:
        return kappa_for_bound(param) ** N
    if kind in (PredicateKind.INDEPENDENT_SET, PredicateKind.CLIQUE) or (
        kind == PredicateKind.MAX_DEGREE and param == 0
    ):
        return 3 ** (N / 3)
    if kind == PredicateKind.MAX_DEGREE and param == 1:
        return 10 ** (N / 5)
    if kind == PredicateKind.MAX_DEGREE:
        return kappa_for_bound(param) ** N
    if kind == PredicateKind.FOREST or (kind == PredicateKind.DEGENERATE_LE and param == 1):
        return FOREST_BASE ** N
    return None


def _scan_range(task: Tuple[int, Predicate, int, int, int, int]) -> Tuple[int, List[int], int]:
    total, predicate, prefix_size, start, stop, cap = task
    pairs = pair_index(total)
    prefix = (1 << prefix_size) - 1
    best, argmax = -1, []
    for gid in range(start, stop):
        g = graph_from_id(total, gid, pairs)
        count = count_maximal(g, predicate, prefix=prefix)
        if count > best:
            best, argmax = count, [gid]
        elif count == best and len(argmax) < cap:
            argmax.append(gid)
    return best, argmax, stop - start


def _shards(count: int, pieces: int) -> List[Tuple[int, int]]:
    step = max(1, -(-count // pieces))
    return [(lo, min(lo + step, count)) for lo in range(0, count, step)]


def max_count_over_all_graphs(
    N: int, p: Predicate, prefix_size: int = 0, workers: int = 1
) -> BoundRecord:
    """
    Maximum number of maximal sets over every labelled graph on N + prefix_size
    vertices. With a prefix, only sets containing vertices 0..prefix_size-1
    count; every prefix placement is a relabelling of this one.

    Args:
        N: Number of free vertices
        p: Predicate to count maximal sets of
        prefix_size: Number of fixed vertices every set must contain
        workers: Processes sharing the graph-id range

    Returns:
        BoundRecord with the maximum, the first argmax ids and the bound

    Raises:
        SizeLimitError: N + prefix_size exceeds CLOSEDGRAPHS_EXHAUSTIVE_LIMIT
    """
    settings = get_settings()
    total = N + prefix_size
    if N < 0 or prefix_size < 0:
        raise ValueError("N and prefix_size must be non-negative")
    if total > settings.exhaustive_limit:
        raise SizeLimitError(
            "exhaustive scan", total, settings.exhaustive_limit, "raise CLOSEDGRAPHS_EXHAUSTIVE_LIMIT"
        )
    count = 1 << len(pair_index(total))
    cap = settings.argmax_cap
    logger.info(f"Scanning {count} labelled graphs on {total} vertices for {p.label} (workers={workers})")

    tasks = [(total, p, prefix_size, lo, hi, cap) for lo, hi in _shards(count, max(1, workers) * 4)]
    if workers > 1 and len(tasks) > 1:
        with Pool(processes=min(workers, len(tasks))) as pool:
            partials = pool.map(_scan_range, tasks)
    else:
        partials = [_scan_range(task) for task in tasks]

    best = max(partial[0] for partial in partials)
    argmax = sorted(gid for value, ids, _ in partials if value == best for gid in ids)[:cap]
    record = BoundRecord(
        N=N,
        predicate=p.label,
        prefix_size=prefix_size,
        max_count=best,
        argmax_graphs=[graph_from_id(total, gid) for gid in argmax],
        argmax_ids=argmax,
        bound_value=count_bound(p, N, prefix_size),
        graphs_scanned=sum(partial[2] for partial in partials),
    )
    logger.info(f"{p.label} N={N} prefix={prefix_size}: max {best}, bound {record.bound_value}")
    return record


def forest_count_table(n_max: int, workers: int = 1) -> List[Tuple[int, int, int]]:
    """(N, F(N), D_1(N)) for N = 1..n_max."""
    forest = Predicate(kind=PredicateKind.FOREST)
    one_degenerate = Predicate(kind=PredicateKind.DEGENERATE_LE, param=1)
    rows = []
    for N in range(1, n_max + 1):
        f = max_count_over_all_graphs(N, forest, workers=workers).max_count
        d1 = max_count_over_all_graphs(N, one_degenerate, workers=workers).max_count
        rows.append((N, f, d1))
    return rows


def records_to_csv(records: Iterable[BoundRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["N", "predicate", "prefix_size", "max_count", "bound", "argmax_graph"])
    for record in records:
        witness = write_edge_list(record.argmax_graphs[0]).strip().replace("\n", ";") if record.argmax_graphs else ""
        writer.writerow([record.N, record.predicate, record.prefix_size, record.max_count, record.bound_value, witness])
    return buffer.getvalue()


def _without_edge(g: Graph, u: int, v: int) -> Graph:
    adj = list(g.adjacency)
    adj[u] &= ~(1 << v)
    adj[v] &= ~(1 << u)
    return Graph(g.n, adj)


def verify_m1_lemmas(g: Graph) -> M1LemmaReport:
    """
    Check the structural facts about maximal generalized induced matchings
    (max-degree-1 sets) on g:
      - the count multiplies across a component and the rest of the graph;
      - deleting the edge between closed twins never lowers the count;
      - a vertex of S dominating one of its neighbours is matched in S;
      - S is maximal iff every outside vertex sees a matched vertex of S or
        two unmatched ones.
    """
    limit = get_settings().scan_limit
    if g.n > limit:
        raise SizeLimitError("verify_m1_lemmas", g.n, limit, "raise CLOSEDGRAPHS_SCAN_LIMIT")
    adj = g.adjacency
    full = g.full_mask
    m1 = count_maximal(g, M1)
    report = M1LemmaReport(m1=m1)

    parts = components(g)
    if len(parts) > 1:
        for part in parts:
            inside = count_maximal(g, M1, within=part.mask)
            outside = count_maximal(g, M1, within=full & ~part.mask)
            report.disconnected_checked += 1
            if inside * outside != m1:
                report.failures.append(f"component {list(part)}: {inside} * {outside} != {m1}")

    for u, v in g.edges():
        if adj[u] | 1 << u == adj[v] | 1 << v:
            report.twin_pairs_checked += 1
            split = count_maximal(_without_edge(g, u, v), M1)
            if m1 > split:
                report.failures.append(f"twins {u},{v}: {m1} > {split} after deleting the edge")

    ev = PredicateEvaluator(g, M1)
    for s in maximal_masks(ev, 0, full):
        for v in bits(s):
            dominates = any(not adj[u] & ~(adj[v] | 1 << v) for u in bits(adj[v]))
            if dominates:
                report.domination_checked += 1
                if not adj[v] & s:
                    report.failures.append(f"vertex {v} dominates a neighbour but is unmatched in {list(bits(s))}")

    for s in iter_feasible(ev, 0, full):
        matched = 0
        for v in bits(s):
            if adj[v] & s:
                matched |= 1 << v
        unmatched = s & ~matched
        sees_two = all(
            adj[w] & matched or (adj[w] & unmatched).bit_count() >= 2 for w in bits(full & ~s)
        )
        report.sees_two_checked += 1
        if sees_two != ev.single_vertex_maximal(s, full):
            report.failures.append(f"sees-two rule disagrees with maximality on {list(bits(s))}")

    logger.info(f"M1 lemma checks on n={g.n}: m1={m1}, {len(report.failures)} failures")
    return report


def example1_threshold(ell: int, n: int) -> int:
    """Largest s <= n with s(s-1)/2 <= s + c - 1: the size of S in every maximal K + S."""
    c = ell * (ell + 1) // 2 + 1
    s = 0
    while s + 1 <= n and (s + 1) * s // 2 <= s + 1 + c - 1:
        s += 1
    return s


def verify_example1(ell: int, n: int) -> int:
    """Count maximal 'at most |S| non-edges' sets in the clique-plus-independent-set family."""
    g, c = gen_example1(ell, n)
    limit = get_settings().scan_limit
    if g.n > limit:
        raise SizeLimitError("verify_example1", g.n, limit, "raise CLOSEDGRAPHS_SCAN_LIMIT")
    count = count_maximal(g, Predicate(kind=PredicateKind.NONEDGES_LE_SIZE))
    s_star = example1_threshold(ell, n)
    floor = comb(n, s_star)
    logger.info(f"example1 ell={ell} n={n} c={c}: {count} maximal sets (C(n, {s_star}) = {floor}, C(n, ell) = {comb(n, ell)})")
    if count < floor:
        raise BoundViolationError(f"example1 ell={ell} n={n}: count below C(n, {s_star})", observed=count, bound=floor)
    return count


def verify_star_or_partition(N: int, t: int) -> Tuple[int, List[int]]:
    """
    Every connected labelled graph on N vertices with treewidth at most t is
    a proper (t+1)-star or has a good (t, 2)-partition.

    Args:
        N: Vertex count of the scanned graphs
        t: Treewidth cap

    Returns:
        (number of graphs checked, ids of the counterexamples)
    """
    settings = get_settings()
    if N > settings.exhaustive_limit:
        raise SizeLimitError("star-or-partition scan", N, settings.exhaustive_limit, "raise CLOSEDGRAPHS_EXHAUSTIVE_LIMIT")
    pairs = pair_index(N)
    checked, failures = 0, []
    for gid in range(1 << len(pairs)):
        h = graph_from_id(N, gid, pairs)
        if len(components(h)) > 1 or not treewidth_at_most(h, t):
            continue
        checked += 1
        if find_kstar(h, t + 1, proper=True) is None and detect_good_partition(h, t, 2) is None:
            failures.append(gid)
    logger.info(f"star-or-partition N={N} t={t}: {checked} graphs, {len(failures)} failures")
    return checked, failures
