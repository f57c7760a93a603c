import logging
from typing import Tuple

from commands.common import (
    EXIT_USAGE,
    Stopwatch,
    add_input_arguments,
    add_output_arguments,
    exit_code_for,
    finish,
    load_graph,
    set_rows,
)
from exceptions import ClosedGraphsError, CommandError
from schemas import DegenConfig, EnumerationReport, EnumMode, RunReport, TwEnumConfig
from services.clique_enum import enumerate_max_cliques, enumerate_max_independent_sets
from services.degen_forest_enum import enumerate_bounded_codegen, enumerate_max_coforests
from services.graph_core import Graph, edge_list_digest
from services.plex_enum import enumerate_max_plexes
from services.tw_enum import enumerate_bounded_cotw, enumerate_bounded_local_cotw, local_config

logger = logging.getLogger(__name__)

CLASSES = (
    "cliques",
    "independent-sets",
    "plexes",
    "co-forests",
    "co-treewidth",
    "co-degeneracy",
    "local-co-treewidth",
)
# classes whose bound counts candidates rather than results
CANDIDATE_BOUNDED = {"co-treewidth", "local-co-treewidth"}


def add_class_arguments(parser) -> None:
    parser.add_argument("--class", dest="graph_class", required=True, choices=CLASSES, help="Family to enumerate")
    parser.add_argument("--d", type=int, default=None, help="Plex slack or degeneracy cap")
    parser.add_argument("--t", type=int, default=None, help="Treewidth cap")
    parser.add_argument("--mode", choices=[m.value for m in EnumMode], default=EnumMode.SUPERSET.value)


def register(subparsers) -> None:
    parser = subparsers.add_parser("enumerate", help="Enumerate maximal sets of a class")
    add_input_arguments(parser)
    add_output_arguments(parser)
    add_class_arguments(parser)
    parser.set_defaults(handler=cmd_enumerate)


def _require(value, flag: str, graph_class: str, minimum: int = 0) -> int:
    if value is None:
        raise CommandError(EXIT_USAGE, f"--class {graph_class} needs {flag}")
    if value < minimum:
        raise CommandError(EXIT_USAGE, f"{flag} must be at least {minimum}, got {value}")
    return value


def check_class_arguments(graph_class: str, d=None, t=None) -> None:
    """Raise CommandError when the class is missing its --d or --t."""
    if graph_class == "plexes":
        _require(d, "--d", graph_class)
    elif graph_class == "co-degeneracy":
        _require(d, "--d", graph_class, 1)
    elif graph_class in CANDIDATE_BOUNDED:
        _require(t, "--t", graph_class)


def run_class(g: Graph, graph_class: str, d=None, t=None, mode: str = EnumMode.SUPERSET.value) -> EnumerationReport:
    """Dispatch one enumeration by class name; shared with bench."""
    if graph_class == "cliques":
        return enumerate_max_cliques(g)
    if graph_class == "independent-sets":
        return enumerate_max_independent_sets(g)
    if graph_class == "plexes":
        return enumerate_max_plexes(g, _require(d, "--d", graph_class))
    if graph_class == "co-forests":
        return enumerate_max_coforests(g)
    if graph_class == "co-degeneracy":
        return enumerate_bounded_codegen(g, DegenConfig(d=_require(d, "--d", graph_class, 1)))
    if graph_class == "co-treewidth":
        cfg = TwEnumConfig(t=_require(t, "--t", graph_class), mode=EnumMode(mode))
        return enumerate_bounded_cotw(g, cfg)
    if graph_class == "local-co-treewidth":
        return enumerate_bounded_local_cotw(g, local_config(_require(t, "--t", graph_class), EnumMode(mode)))
    raise CommandError(EXIT_USAGE, f"Unknown class '{graph_class}'")


def bound_check(graph_class: str, report: EnumerationReport) -> Tuple[int, bool]:
    """(observed value, whether it respects the bound)."""
    observed = report.candidates_generated if graph_class in CANDIDATE_BOUNDED else report.count
    if report.bound_value is None:
        return observed, True
    return observed, observed <= report.bound_value + 1e-9


def cmd_enumerate(args):
    """
    Enumerate the maximal sets of one class and compare against its counting bound
    """
    try:
        g = load_graph(args.input, args.limit_n)
        logger.info(f"Enumerating {args.graph_class} on n={g.n}, m={g.edge_count}")
        watch = Stopwatch()
        result = run_class(g, args.graph_class, args.d, args.t, args.mode)
        observed, satisfied = bound_check(args.graph_class, result)
        if not satisfied:
            logger.warning(f"{args.graph_class}: observed {observed} exceeds bound {result.bound_value}")

        report = RunReport(
            command=args.echo,
            input_digest=edge_list_digest(g),
            closure=result.closure,
            wall_time_s=watch.elapsed() if args.timing else None,
            payload=result.model_dump(mode="json") | {"count": result.count},
            bound_satisfied=satisfied,
        )
        return finish(report, set_rows(result.results), args.csv), exit_code_for(satisfied)

    except CommandError:
        raise
    except ClosedGraphsError as e:
        logger.error(f"Enumeration error: {str(e)}")
        raise CommandError(EXIT_USAGE, str(e))
    except ValueError as e:
        logger.error(f"Enumeration parameter error: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Invalid parameters: {str(e)}")
    except Exception as e:
        logger.error(f"Enumeration failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Enumeration failed: {str(e)}")
