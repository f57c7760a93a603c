import logging
from multiprocessing import Pool
from typing import Iterator, List, Tuple

from commands.common import EXIT_USAGE, Stopwatch, exit_code_for, load_graph, rows_to_csv
from commands.enumeration import add_class_arguments, bound_check, check_class_arguments, run_class
from exceptions import ClosedGraphsError, CommandError
from services.closure import closure_augment
from services.graph_core import Graph, gen_random

logger = logging.getLogger(__name__)

HEADER = ["source", "n", "m", "c", "class", "results", "candidates", "bound", "bound_satisfied", "time_s"]


def register(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="CSV of result and candidate counts against the bound")
    parser.add_argument("--input", nargs="*", default=None, help="Graph files; generated instances when omitted")
    parser.add_argument("--limit-n", type=int, default=None)
    add_class_arguments(parser)
    parser.add_argument("--c-min", type=int, default=2)
    parser.add_argument("--c-max", type=int, default=6)
    parser.add_argument("--n", type=int, default=12, help="Vertices per generated instance")
    parser.add_argument("--p", type=float, default=0.3, help="Edge probability before augmentation")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1, help="Worker processes, one instance per task")
    parser.set_defaults(handler=cmd_bench)


def instances(args) -> Iterator[Tuple[str, Graph]]:
    """Explicit inputs, or one closure_augment instance per c in [c-min, c-max]."""
    if args.input:
        for path in args.input:
            yield path, load_graph(path, args.limit_n)
        return
    if args.c_min < 1 or args.c_max < args.c_min:
        raise CommandError(EXIT_USAGE, "Need 1 <= --c-min <= --c-max")
    for c in range(args.c_min, args.c_max + 1):
        g = closure_augment(gen_random(args.n, args.p, args.seed + c), c)
        yield f"augmented(c<={c},seed={args.seed + c})", g


def bench_row(task: Tuple[str, Graph, str, object, object, str]) -> Tuple[List, bool]:
    """Run one instance; returns its CSV row and whether the bound held."""
    source, g, graph_class, d, t, mode = task
    watch = Stopwatch()
    result = run_class(g, graph_class, d, t, mode)
    elapsed = watch.elapsed()
    _, ok = bound_check(graph_class, result)
    logger.info(f"{source}: {result.count} results, {result.candidates_generated} candidates, {elapsed:.3f}s")
    row = [
        source, g.n, g.edge_count, result.closure, graph_class,
        result.count, result.candidates_generated, result.bound_value, ok, f"{elapsed:.6f}",
    ]
    return row, ok


def cmd_bench(args):
    """
    Time one enumerator across a set of instances
    """
    try:
        if args.threads < 1:
            raise CommandError(EXIT_USAGE, "--threads must be a positive integer")
        check_class_arguments(args.graph_class, args.d, args.t)

        tasks = [
            (source, g, args.graph_class, args.d, args.t, args.mode)
            for source, g in instances(args)
        ]
        if args.threads > 1 and len(tasks) > 1:
            with Pool(processes=min(args.threads, len(tasks))) as pool:
                outcomes = pool.map(bench_row, tasks)
        else:
            outcomes = [bench_row(task) for task in tasks]

        rows = [HEADER, *(row for row, _ in outcomes)]
        satisfied = all(ok for _, ok in outcomes)
        return rows_to_csv(rows), exit_code_for(satisfied)

    except CommandError:
        raise
    except ClosedGraphsError as e:
        logger.error(f"Bench error: {str(e)}")
        raise CommandError(EXIT_USAGE, str(e))
    except ValueError as e:
        logger.error(f"Bench parameter error: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Invalid parameters: {str(e)}")
    except Exception as e:
        logger.error(f"Bench failed: {str(e)}")
        raise CommandError(EXIT_USAGE, f"Bench failed: {str(e)}")
