import logging
from itertools import combinations
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from config import get_settings
from exceptions import PredicateError, SizeLimitError
from schemas import EnumerationReport, EnumMode, LocalTWProfile, Predicate, PredicateKind, TwEnumConfig
from services.closure import closure_number
from services.collector import CandidateCollector
from services.graph_core import Graph, bits, complement
from services.oracle import PredicateEvaluator, maximal_masks
from services.sparse_struct import iter_proper_kstar_masks
from services.tw_solver import LOCAL_RADIUS

logger = logging.getLogger(__name__)


def cotw_candidate_bound(n: int, c: int, t: int) -> float:
    """Candidate count bound 3 n^(t+4) 2^(2(c-1)) for co-treewidth at most t."""
    return 3 * n ** (t + 4) * 2 ** (2 * (c - 1))


def _subsets_up_to(pool: int, size: int) -> Iterator[int]:
    members = list(bits(pool))
    for k in range(0, min(size, len(members)) + 1):
        for chosen in combinations(members, k):
            mask = 0
            for v in chosen:
                mask |= 1 << v
            yield mask


def _edge_pair_anchors(adj: Sequence[int], edges: List[Tuple[int, int]], full: int, t: int) -> Iterator[Tuple[int, int]]:
    """
    (prefix, kernel) per edge pair e, f and A_0: A_0 takes at most t of the
    vertices adjacent to both edges, the kernel adds every vertex missing
    one of them. A maximal set with a good (t, 2)-partition on e, f lies in
    the kernel of the anchor whose A_0 is its share of the shared vertices.
    """
    for e, f in combinations(edges, 2):
        covered = 1 << e[0] | 1 << e[1] | 1 << f[0] | 1 << f[1]
        near_e = adj[e[0]] | adj[e[1]]
        near_f = adj[f[0]] | adj[f[1]]
        shared = near_e & near_f & full & ~covered
        loose = full & ~covered & ~shared
        for a0 in _subsets_up_to(shared, t):
            prefix = covered | a0
            yield prefix, prefix | loose


def _collect_anchors(
    collector: CandidateCollector, ev: PredicateEvaluator, h: Graph, t: int
) -> None:
    adj = h.adjacency
    limit = get_settings().oracle_limit
    anchors = 0
    for prefix, kernel in _edge_pair_anchors(adj, h.edges(), h.full_mask, t):
        if not ev.holds(prefix):
            continue
        free = (kernel & ~prefix).bit_count()
        if free > limit:
            raise SizeLimitError(
                "co-treewidth kernel", free, limit, "raise CLOSEDGRAPHS_ORACLE_LIMIT or lower c"
            )
        anchors += 1
        collector.offer_all(maximal_masks(ev, prefix, kernel), trusted=True)
    logger.debug(f"{anchors} feasible edge-pair anchors")


def _run(g: Graph, cfg: TwEnumConfig, predicate: Predicate) -> EnumerationReport:
    closure = closure_number(g)
    h = complement(g)
    n = g.n
    t = cfg.t
    exact = cfg.mode == EnumMode.EXACT
    settings = get_settings()
    if exact and n > settings.exact_mode_limit:
        raise SizeLimitError(
            "co-treewidth exact mode", n, settings.exact_mode_limit, "raise CLOSEDGRAPHS_EXACT_LIMIT or use superset mode"
        )
    logger.info(f"Enumerating {predicate.label} in the complement: n={n}, c={closure.c}, mode={cfg.mode.value}")
    ev = PredicateEvaluator(h, predicate)
    full = h.full_mask
    bound = cotw_candidate_bound(max(n, 1), closure.c, t)

    maximal_check: Optional[Callable[[int], bool]] = None
    if exact:
        maximal_check = lambda mask: ev.single_vertex_maximal(mask, full)
    collector = CandidateCollector(ev.holds, maximal_check)

    if n <= settings.scan_limit and ev.holds(full):
        collector.offer(full, trusted=True)
        return collector.report(bound_value=bound, closure=closure.c, exact=True)

    # proper (t+1)-stars have treewidth at most t, hence local treewidth at most t
    for a, b in iter_proper_kstar_masks(h.adjacency, g.adjacency, t + 1):
        collector.offer(a | b, trusted=True)
    _collect_anchors(collector, ev, h, t)
    return collector.report(bound_value=bound, closure=closure.c, exact=exact)


def enumerate_bounded_cotw(g: Graph, cfg: TwEnumConfig) -> EnumerationReport:
    """
    Sets S whose complement-induced graph has treewidth at most t.

    Superset mode returns every proper (t+1)-star candidate together with the
    maximal members of each edge-pair kernel; every maximal set is among
    them. Exact mode drops the sets that a single vertex extends.

    Args:
        g: Input graph
        cfg: Treewidth cap and mode

    Returns:
        EnumerationReport; ``exact`` is False in superset mode and the bound
        applies to ``candidates_generated``
    """
    predicate = Predicate(kind=PredicateKind.TREEWIDTH_LE, param=cfg.t)
    return _run(g, cfg, predicate)


def enumerate_bounded_local_cotw(g: Graph, cfg: TwEnumConfig) -> EnumerationReport:
    """
    Sets S whose complement-induced graph has ltw(r) <= t for r = 1..5.

    Needs a profile with f(1) = ... = f(5) = t. Candidates are the
    co-treewidth family evaluated against the local predicate: the A_0 = {}
    edge-pair anchors cover the sets with two non-trivial components or a
    component of diameter at least 6, the rest have treewidth at most t.

    Args:
        g: Input graph
        cfg: Config built by ``local_config``

    Raises:
        PredicateError: The profile is missing or not constant
    """
    if cfg.local is None:
        raise PredicateError("Local co-treewidth needs a local profile")
    caps = [cfg.local.cap(r) for r in range(1, LOCAL_RADIUS + 1)]
    if any(cap != cfg.t for cap in caps):
        raise PredicateError(f"Local profile must set f(1..{LOCAL_RADIUS}) = {cfg.t}, got {caps}")
    predicate = Predicate(kind=PredicateKind.LOCAL_TREEWIDTH_LE, param=cfg.t)
    return _run(g, cfg, predicate)


def local_config(t: int, mode: EnumMode = EnumMode.SUPERSET) -> TwEnumConfig:
    """Config with the equality profile f(1..5) = t."""
    profile = LocalTWProfile(values={r: t for r in range(1, LOCAL_RADIUS + 1)})
    return TwEnumConfig(t=t, mode=mode, local=profile)
