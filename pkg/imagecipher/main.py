import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import analysis, cipher, codec, experiments, keystream
from .exceptions import ImageCipherError, UsageError
from .models import Command, Level, ReportFormat, StageKind, split_channels
from .permutations import as_permutation, grid_for
from .schemas import DEFAULT_ARNOLD_ITERATIONS, DEFAULT_BLOCK, CliInvocation, Stage

# Configure logging
LOG_LEVEL_ENV = "IMAGECIPHER_LOG_LEVEL"
DEFAULT_LOG_LEVEL = "INFO"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1

KEY_HELP = (
    "decimal string, parsed once to an IEEE-754 double; that double is the effective key, "
    "so two strings parsing to the same double are the same key"
)


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser with one subcommand per Command"""
    parser = argparse.ArgumentParser(
        prog="imagecipher",
        description=(
            "Multilevel image encryption: sum-keyed row/column shifts, two logistic-map keystream "
            "passes, per-block Arnold cat map and cross-block pixel distribution.\n"
            "Images are binary PGM (P5) or PPM (P6) files with maxval 255."
        ),
        epilog=(
            "Examples:\n"
            "  imagecipher encrypt --in plain.pgm --out cipher.pgm --key-a 0.3905 --key-k 3.9886\n"
            "  imagecipher decrypt --in cipher.pgm --out plain.pgm --key-a 0.3905 --key-k 3.9886\n"
            "  imagecipher analyze --in cipher.pgm --report structured\n"
            "Exit statuses: 0 success, 2 usage, 3 key range, 4 codec, 5 dimensions."
        ),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Log per-stage progress")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Only log errors")

    keys = argparse.ArgumentParser(add_help=False)
    keys.add_argument("--key-a", help=f"Seed A in (0, 1); {KEY_HELP}")
    keys.add_argument("--key-k", help=f"Control parameter K in (3.5, 4); {KEY_HELP}")

    geometry = argparse.ArgumentParser(add_help=False)
    geometry.add_argument("--block", type=int, default=DEFAULT_BLOCK, help="Block side in pixels (default 16)")
    geometry.add_argument("--arnold-iters", type=int, default=DEFAULT_ARNOLD_ITERATIONS, dest="arnold_iterations",
                          help="Arnold cat map iterations per block (default 1)")

    level = argparse.ArgumentParser(add_help=False)
    level.add_argument("--level", choices=[value.value for value in Level], default=Level.FULL.value,
                       help="full runs all six stages, basic only the row shift and first keystream pass")

    files = argparse.ArgumentParser(add_help=False)
    files.add_argument("--in", dest="input", help="Input PGM/PPM file")
    files.add_argument("--out", dest="output", help="Output PGM/PPM file")

    report = argparse.ArgumentParser(add_help=False)
    report.add_argument("--report", choices=[fmt.value for fmt in ReportFormat], default=ReportFormat.TEXT.value,
                        help="Report as key-value text or one JSON object per channel")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(Command.ENCRYPT.value, parents=[files, keys, geometry, level], help="Encrypt an image file")
    commands.add_parser(Command.DECRYPT.value, parents=[files, keys, geometry, level], help="Decrypt an image file")
    analyze = commands.add_parser(Command.ANALYZE.value, parents=[files, geometry, report],
                                  help="Report entropy, correlations, histogram uniformity per channel")
    analyze.add_argument("--stage", choices=[kind.value for kind in StageKind if kind != StageKind.IDENTITY],
                         help="Also report the position entropy of this stage on the input image")
    special = commands.add_parser(Command.EXPERIMENTS.value, parents=[keys, geometry, level],
                                  help="Encrypt the built-in special-case images and tabulate the statistics")
    special.add_argument("--size", type=int, default=256, help="Side of the generated test images (default 256)")
    commands.add_parser(Command.KEYSPACE.value, help="Count the distinct double-precision keys")
    return parser


def parse_invocation(args: argparse.Namespace) -> CliInvocation:
    values = {name: value for name, value in vars(args).items() if name not in ("verbose", "quiet")}
    try:
        return CliInvocation(**values)
    except ValidationError as e:
        raise UsageError(f"Invalid arguments: {e.errors()[0]['msg']}")


def _run_cipher(invocation: CliInvocation) -> int:
    keys = invocation.keys()
    config = invocation.config()
    image = codec.load_image(invocation.input)
    if invocation.command == Command.ENCRYPT:
        result = cipher.encrypt(image, keys, config)
    else:
        result = cipher.decrypt(image, keys, config)
    codec.save_image(result, invocation.output)
    print(
        f"{invocation.command.value}ed {invocation.input} -> {invocation.output}: "
        f"{result.width}x{result.height}, {result.channels} channel(s), level {config.level.value}"
    )
    return EXIT_OK


def _run_analyze(invocation: CliInvocation) -> int:
    image = codec.load_image(invocation.input)
    stage = grid = None
    if invocation.stage is not None:
        stage = Stage(kind=invocation.stage, block=invocation.block, iterations=invocation.arnold_iterations)
        grid = grid_for(image, invocation.block)

    reports = []
    names = analysis.CHANNEL_NAMES[image.channels]
    for name, channel in zip(names, split_channels(image)):
        perm = None if stage is None else as_permutation(stage, channel)
        reports.append(analysis.analyze(channel, perm, grid, channel=name))

    if invocation.report == ReportFormat.STRUCTURED:
        print(analysis.report_structured(reports))
    else:
        print(analysis.report_text(reports))
    return EXIT_OK


def _run_experiments(invocation: CliInvocation) -> int:
    results = experiments.run_special_cases(invocation.keys(), invocation.config(), invocation.size)
    print(experiments.format_case_table(results))
    return EXIT_OK if all(result.round_trip for result in results) else EXIT_FAILURE


def _run_keyspace(invocation: CliInvocation) -> int:
    space = keystream.key_space()
    print(f"key_a_values: {space.a_values}")
    print(f"key_k_values: {space.k_values}")
    print(f"key_space_bits: {space.bits:.3f}")
    return EXIT_OK


HANDLERS = {
    Command.ENCRYPT: _run_cipher,
    Command.DECRYPT: _run_cipher,
    Command.ANALYZE: _run_analyze,
    Command.EXPERIMENTS: _run_experiments,
    Command.KEYSPACE: _run_keyspace,
}


def run(invocation: CliInvocation) -> int:
    """Execute one invocation and return the process exit status"""
    try:
        return HANDLERS[invocation.command](invocation)
    except ValidationError as e:
        logger.error(f"{invocation.command.value} failed: invalid arguments")
        print(f"error: invalid arguments: {e.errors()[0]['msg']}", file=sys.stderr)
        return UsageError.exit_status
    except ImageCipherError as e:
        logger.debug(f"{invocation.command.value} failed", exc_info=True)
        logger.error(f"{invocation.command.value} failed: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_status


def log_level(verbose: bool = False, quiet: bool = False) -> int:
    """Level from the flags, else from IMAGECIPHER_LOG_LEVEL"""
    if verbose:
        return logging.DEBUG
    if quiet:
        return logging.ERROR
    name = os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).strip().upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise UsageError(f"{LOG_LEVEL_ENV}={name!r} is not a logging level (use DEBUG, INFO, WARNING, ERROR or CRITICAL)")
    return level


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else UsageError.exit_status

    try:
        level = log_level(args.verbose, args.quiet)
    except UsageError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_status
    logging.basicConfig(level=level, format=LOG_FORMAT)

    try:
        invocation = parse_invocation(args)
    except UsageError as e:
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_status
    return run(invocation)


if __name__ == "__main__":
    sys.exit(main())
