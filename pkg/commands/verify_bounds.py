import logging
from typing import List

from commands.common import (
    EXIT_USAGE,
    Stopwatch,
    add_output_arguments,
    exit_code_for,
    finish,
    load_graph,
)
from config import get_settings
from exceptions import BoundViolationError, ClosedGraphsError, CommandError
from schemas import BoundRecord, M1LemmaReport, Predicate, PredicateKind, RunReport
from services.combinatorics import (
    M1,
    forest_count_table,
    kappa,
    max_count_over_all_graphs,
    records_to_csv,
    verify_example1,
    verify_m1_lemmas,
    verify_star_or_partition,
)
from services.graph_core import edge_list_digest, graph_from_id, pair_index

logger = logging.getLogger(__name__)

SUITES = ("moon-moser", "m1", "lemmas", "example1", "kappa", "forests", "star-or-partition")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify-bounds", help="Exhaustive checks of the counting bounds")
    add_output_arguments(parser)
    parser.add_argument("--suite", required=True, choices=SUITES)
    parser.add_argument("--N", type=int, nargs="+", default=[5], help="Free vertex counts to scan")
    parser.add_argument("--prefix", type=int, default=0, help="Fixed prefix size for the m1 suite")
    parser.add_argument("--ell", type=int, default=2, help="ell for the example1 suite")
    parser.add_argument("--n", type=int, nargs="+", default=[4, 5, 6], help="Independent-set sizes for example1")
    parser.add_argument("--d", type=int, default=4, help="Largest d for the kappa suite")
    parser.add_argument("--t", type=int, default=1, help="Treewidth cap for star-or-partition")
    parser.add_argument("--input", default=None, help="Graph for the lemmas suite instead of the exhaustive scan")
    parser.add_argument("--limit-n", type=int, default=None)
    parser.add_argument("--threads", type=int, default=1, help="Worker processes for exhaustive scans")
    parser.set_defaults(handler=cmd_verify_bounds)


def _scan(predicate: Predicate, args) -> List[BoundRecord]:
    return [
        max_count_over_all_graphs(N, predicate, prefix_size=args.prefix, workers=args.threads)
        for N in args.N
    ]


def _merge_lemmas(reports: List[M1LemmaReport]) -> dict:
    return {
        "graphs_checked": len(reports),
        "disconnected_checked": sum(r.disconnected_checked for r in reports),
        "twin_pairs_checked": sum(r.twin_pairs_checked for r in reports),
        "domination_checked": sum(r.domination_checked for r in reports),
        "sees_two_checked": sum(r.sees_two_checked for r in reports),
        "failures": [f for r in reports for f in r.failures][: get_settings().argmax_cap],
        "failure_count": sum(len(r.failures) for r in reports),
    }


def _lemma_reports(args) -> List[M1LemmaReport]:
    limit = get_settings().exhaustive_limit
    reports = []
    for N in args.N:
        if N > limit:
            raise CommandError(EXIT_USAGE, f"lemmas: N={N} exceeds CLOSEDGRAPHS_EXHAUSTIVE_LIMIT {limit}")
        pairs = pair_index(N)
        reports.extend(verify_m1_lemmas(graph_from_id(N, gid, pairs)) for gid in range(1 << len(pairs)))
    return reports


def cmd_verify_bounds(args):
    """
    Run one verification suite; exit code 2 when a bound or identity fails
    """
    try:
        if args.threads < 1:
            raise CommandError(EXIT_USAGE, "--threads must be a positive integer")
        if any(N < 0 for N in args.N) or args.prefix < 0:
            raise CommandError(EXIT_USAGE, "--N and --prefix must be non-negative")

        watch = Stopwatch()
        logger.info(f"Running verification suite {args.suite}")
        rows = None
        csv_text = None
        digest = None

        if args.suite in ("moon-moser", "m1"):
            predicate = Predicate(kind=PredicateKind.INDEPENDENT_SET) if args.suite == "moon-moser" else M1
            if args.suite == "moon-moser" and args.prefix:
                raise CommandError(EXIT_USAGE, "--prefix applies to the m1 suite only")
            records = _scan(predicate, args)
            satisfied = all(r.bound_satisfied is not False for r in records)
            payload = {"records": [r.model_dump(mode="json") for r in records]}
            if len(records) == 1:
                payload.update(max_count=records[0].max_count, bound=records[0].bound_value)
            csv_text = records_to_csv(records)

        elif args.suite == "forests":
            table = forest_count_table(max(args.N), workers=args.threads)
            satisfied = all(f == d1 for _, f, d1 in table)
            payload = {"table": [{"N": N, "forest": f, "degenerate_1": d1} for N, f, d1 in table]}
            rows = [["N", "forest", "degenerate_1"], *table]

        elif args.suite == "lemmas":
            if args.input is not None:
                g = load_graph(args.input, args.limit_n)
                digest = edge_list_digest(g)
                reports = [verify_m1_lemmas(g)]
            else:
                reports = _lemma_reports(args)
            payload = _merge_lemmas(reports)
            satisfied = payload["failure_count"] == 0

        elif args.suite == "example1":
            counts = []
            satisfied = True
            for n in args.n:
                try:
                    counts.append({"n": n, "count": verify_example1(args.ell, n)})
                except BoundViolationError as e:
                    logger.warning(str(e))
                    counts.append({"n": n, "count": e.observed, "violation": str(e)})
                    satisfied = False
            increasing = all(a["count"] < b["count"] for a, b in zip(counts, counts[1:]))
            if not increasing:
                logger.warning(f"example1 ell={args.ell}: counts are not strictly increasing in n")
            satisfied = satisfied and increasing
            payload = {"ell": args.ell, "counts": counts, "strictly_increasing": increasing}
            rows = [["n", "count"], *[[entry["n"], entry["count"]] for entry in counts]]

        elif args.suite == "kappa":
            if args.d < 0:
                raise CommandError(EXIT_USAGE, "--d must be non-negative")
            values = [kappa(d) for d in range(args.d + 1)]
            payload = {"kappa": [v.model_dump() for v in values]}
            satisfied = None
            rows = [["d", "root", "shifted_root", "table"], *[[v.d, v.root, v.shifted_root, v.table] for v in values]]

        else:
            results = [verify_star_or_partition(N, args.t) for N in args.N]
            payload = {
                "t": args.t,
                "runs": [{"N": N, "checked": checked, "failures": ids} for N, (checked, ids) in zip(args.N, results)],
            }
            satisfied = all(not ids for _, ids in results)

        report = RunReport(
            command=args.echo,
            input_digest=digest,
            wall_time_s=watch.elapsed() if args.timing else None,
            payload=payload,
            bound_satisfied=satisfied,
        )
        if args.csv and csv_text is not None:
            return csv_text, exit_code_for(satisfied)
        return finish(report, rows, args.csv), exit_code_for(satisfied)

    except CommandError:
        raise
    except ClosedGraphsError as e:
        logger.error(f"Verification error: {str(e)}")
        raise CommandError(EXIT_USAGE, str(e))
    except ValueError as e:
        logger.error(f"Verification parameter error: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Invalid parameters: {str(e)}")
    except Exception as e:
        logger.error(f"Verification failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Verification failed: {str(e)}")
