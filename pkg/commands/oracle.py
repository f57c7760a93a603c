import logging

from commands.common import (
    EXIT_OK,
    EXIT_USAGE,
    Stopwatch,
    add_input_arguments,
    add_output_arguments,
    finish,
    load_graph,
    set_rows,
)
from exceptions import ClosedGraphsError, CommandError
from schemas import Predicate, PredicateKind, RunReport
from services.closure import closure_number
from services.graph_core import edge_list_digest
from services.oracle import enumerate_maximal_bruteforce

logger = logging.getLogger(__name__)

TW_KINDS = {PredicateKind.TREEWIDTH_LE, PredicateKind.LOCAL_TREEWIDTH_LE}


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle", help="Brute-force maximal sets for a predicate")
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("--predicate", required=True, choices=[k.value for k in PredicateKind])
    parser.add_argument("--d", type=int, default=None, help="Parameter for max_degree, plex and degenerate_le")
    parser.add_argument("--t", type=int, default=None, help="Parameter for treewidth_le and local_treewidth_le")
    parser.set_defaults(handler=cmd_oracle)


def predicate_from_args(args) -> Predicate:
    kind = PredicateKind(args.predicate)
    param = args.t if kind in TW_KINDS else args.d
    try:
        return Predicate(kind=kind, param=param)
    except ValueError as e:
        raise CommandError(EXIT_USAGE, f"Invalid predicate: {e}")


def cmd_oracle(args):
    """
    Reference run: every inclusion-maximal set by exhaustive search
    """
    try:
        predicate = predicate_from_args(args)
        g = load_graph(args.input, args.limit_n)
        logger.info(f"Oracle run for {predicate.label} on n={g.n}")
        watch = Stopwatch()
        results = enumerate_maximal_bruteforce(g, predicate)
        c = closure_number(g).c

        report = RunReport(
            command=args.echo,
            input_digest=edge_list_digest(g),
            closure=c,
            wall_time_s=watch.elapsed() if args.timing else None,
            payload={
                "predicate": predicate.label,
                "count": len(results),
                "results": [list(s) for s in results],
            },
        )
        return finish(report, set_rows(results), args.csv), EXIT_OK

    except CommandError:
        raise
    except ClosedGraphsError as e:
        logger.error(f"Oracle error: {str(e)}")
        raise CommandError(EXIT_USAGE, str(e))
    except Exception as e:
        logger.error(f"Oracle run failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Oracle run failed: {str(e)}")
