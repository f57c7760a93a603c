import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

# Load environment variables before the settings are first read
load_dotenv()

from config import get_settings
from exceptions import CommandError

# Import commands
from commands import bench, closure, enumeration, generate, oracle, verify_bounds

COMMANDS = (closure, enumeration, oracle, verify_bounds, generate, bench)

logger = logging.getLogger(__name__)


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors as exit code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise CommandError(1, message)


def configure_logging() -> None:
    logging.basicConfig(
        level=get_settings().log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def build_parser() -> CommandParser:
    parser = CommandParser(
        prog="closedgraphs",
        description="Maximal dense subgraph enumeration in c-closed graphs and exhaustive bound checks",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        args.echo = " ".join(["closedgraphs", *argv])
        logger.debug(f"Dispatching {args.command}")
        output, exit_code = args.handler(args)
    except CommandError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    sys.stdout.write(output)
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
