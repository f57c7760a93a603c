import logging

from commands.common import (
    EXIT_OK,
    EXIT_USAGE,
    Stopwatch,
    add_input_arguments,
    add_output_arguments,
    finish,
    load_graph,
)
from exceptions import ClosedGraphsError, CommandError
from schemas import RunReport
from services.closure import closure_number, co_closure_check
from services.graph_core import edge_list_digest

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("closure", help="Closure number c and a witness pair")
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.add_argument("--co-c", type=int, default=None, help="Also check whether the complement is c-closed")
    parser.set_defaults(handler=cmd_closure)


def cmd_closure(args):
    """
    Report the smallest c for which the input is c-closed
    """
    try:
        if args.co_c is not None and args.co_c < 1:
            raise CommandError(EXIT_USAGE, "--co-c must be a positive integer")

        g = load_graph(args.input, args.limit_n)
        watch = Stopwatch()
        result = closure_number(g)
        logger.info(f"Closure number {result.c} for n={g.n}, m={g.edge_count}")

        payload = {"n": g.n, "m": g.edge_count, "c": result.c, "witness": result.witness}
        if args.co_c is not None:
            closed, violation = co_closure_check(g, args.co_c)
            payload["co_closed"] = closed
            payload["co_violation"] = violation

        report = RunReport(
            command=args.echo,
            input_digest=edge_list_digest(g),
            closure=result.c,
            wall_time_s=watch.elapsed() if args.timing else None,
            payload=payload,
        )
        rows = [["n", "m", "c", "witness"], [g.n, g.edge_count, result.c, "" if result.witness is None else "%d %d" % result.witness]]
        return finish(report, rows, args.csv), EXIT_OK

    except CommandError:
        raise
    except ClosedGraphsError as e:
        logger.error(f"Closure error: {str(e)}")
        raise CommandError(EXIT_USAGE, str(e))
    except Exception as e:
        logger.error(f"Closure computation failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Closure computation failed: {str(e)}")
