"""
globlin command-line interface
==============================
    globlin {solve|certify|compare|sweep} --config PATH [--out DIR] [--seed U64] [--quiet]

Exit codes: 0 ok, 1 certificate failed, 2 max-iter, 3 diverged,
4 singular operator, 64 config error, 69 operation unsupported by the problem,
70 other runtime failure.
"""

import argparse
import sys
from typing import List, Optional

from config.settings import settings
from core.errors import ConfigError
from orchestrator.orchestrator import COMMANDS, Orchestrator
from orchestrator.run_config import RunConfig
from utilities.logger import configure_logging, get_logger
from utilities.models import ExitCode

logger = get_logger("cli")

MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


class _ConfigErrorParser(argparse.ArgumentParser):
    """Argument errors exit with the config-error code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(int(ExitCode.CONFIG_ERROR), f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ConfigErrorParser(
        prog="globlin",
        description="Global-linearization solver for nonlinear operator equations A(u) = f.",
    )
    parser.add_argument("command", choices=COMMANDS, help="workflow to run")
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides the config)")
    parser.add_argument("--seed", type=_seed, default=None, help="sampling seed (u64)")
    parser.add_argument("--quiet", action="store_true", help="only log warnings and errors")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging("WARNING" if args.quiet else settings.log_level)

    try:
        config = RunConfig.from_file(args.config)
    except ConfigError as exc:
        logger.error(str(exc))
        print(f"config error: {exc}", file=sys.stderr)
        return int(ExitCode.CONFIG_ERROR)

    orchestrator = Orchestrator(
        config, output_dir=args.out, seed=args.seed, show_progress=not args.quiet
    )
    result = orchestrator.run(args.command)
    if result.error:
        print(result.error, file=sys.stderr)
    return int(result.exit_code)


if __name__ == "__main__":
    sys.exit(main())
