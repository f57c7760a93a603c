import csv
import io
import logging
import sys
import time
from typing import Iterable, List, Optional, Sequence

from exceptions import ClosedGraphsError, CommandError
from schemas import RunReport
from services.graph_core import Graph, parse_graph_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BOUND_VIOLATION = 2


def add_input_arguments(parser) -> None:
    parser.add_argument("--input", default="-", help="Edge-list or DIMACS file, '-' for standard input")
    parser.add_argument("--limit-n", type=int, default=None, help="Refuse graphs with more vertices than this")


def add_output_arguments(parser) -> None:
    parser.add_argument("--csv", action="store_true", help="Write CSV instead of JSON")
    parser.add_argument("--timing", action="store_true", help="Record wall time in the report")


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as e:
        raise CommandError(EXIT_USAGE, f"Cannot read {path}: {e.strerror or e}")


def load_graph(path: str, limit_n: Optional[int] = None) -> Graph:
    """Read and parse one input graph, applying the --limit-n guard."""
    text = read_text(path)
    try:
        g = parse_graph_text(text)
    except ClosedGraphsError as e:
        raise CommandError(EXIT_USAGE, f"{path}: {e}")
    if limit_n is not None and g.n > limit_n:
        raise CommandError(EXIT_USAGE, f"{path}: {g.n} vertices exceeds --limit-n {limit_n}")
    logger.info(f"Loaded {path}: n={g.n}, m={g.edge_count}")
    return g


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return time.perf_counter() - self.start


def finish(report: RunReport, csv_rows: Optional[Sequence[Sequence]] = None, as_csv: bool = False) -> str:
    """JSON report text, or the given rows as CSV when requested."""
    if as_csv and csv_rows is not None:
        return rows_to_csv(csv_rows)
    return report.model_dump_json(indent=2) + "\n"


def rows_to_csv(rows: Iterable[Sequence]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def set_rows(sets: Iterable, header: str = "members") -> List[List]:
    rows: List[List] = [["size", header]]
    for s in sets:
        rows.append([len(s), " ".join(str(v) for v in s)])
    return rows


def exit_code_for(bound_satisfied: Optional[bool]) -> int:
    return EXIT_BOUND_VIOLATION if bound_satisfied is False else EXIT_OK
