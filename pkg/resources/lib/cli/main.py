#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
#  Copyright (C) 2024-2026 Rouzax
#
#  SPDX-License-Identifier: GPL-3.0-or-later
#  See LICENSE.txt for more information.
#
"""
OArrays Command-Line Entry Point.

Parses arguments, resolves settings, starts logging and dispatches to one
of the subcommands: bounds, construct, verify, catalog, search.

Exit codes:
    0  success / all requested checks hold
    1  a verification failed (or a catalog row mismatched)
    2  usage, parse or unsupported-case error
    3  search budget exhausted before a definite answer

Logging:
    Module: cli
    Events:
        - cli.start (INFO): Command started
        - cli.fail (INFO): Command ended with a usage or data error
        - cli.crash (ERROR): Unexpected exception
"""
from __future__ import annotations

import argparse
import sys
from typing import Callable, Dict, List, NoReturn, Optional, TextIO

from resources.lib.cli.commands import (
    cmd_bounds,
    cmd_catalog,
    cmd_construct,
    cmd_search,
    cmd_verify,
)
from resources.lib.constants import (
    EXIT_USAGE,
    EXIT_VERIFY_FAIL,
    LAYOUT_BALANCED,
    LAYOUT_LITERAL,
    ORDERING_FIRST,
    ORDERING_SECOND,
    TOOL_NAME,
    TOOL_VERSION,
)
from resources.lib.errors import (
    ArrayParseError,
    CatalogMismatchError,
    UnsupportedCaseError,
    UsageError,
)
from resources.lib.settings import ToolSettings, load_settings
from resources.lib.utils import StructuredLogger, get_logger

Command = Callable[[argparse.Namespace, ToolSettings, TextIO], int]

_COMMANDS: Dict[str, Command] = {
    "bounds": cmd_bounds,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "search": cmd_search,
}


class _ArgumentParser(argparse.ArgumentParser):
    """Raises UsageError instead of printing usage and exiting."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--config", help="settings file of 'key = value' lines")
    common.add_argument("--verbose", action="store_true", default=None,
                        help="echo INFO log lines to stderr")
    common.add_argument("--debug", action="store_true", default=None,
                        help="write DEBUG lines to the log file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--capacity-limit", type=_positive_int,
                        help="largest array or search space to materialize")

    parser = _ArgumentParser(
        prog=TOOL_NAME,
        description="Bounds, constructions, verification and search for mixed-level orthogonal arrays.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    bounds = sub.add_parser("bounds", parents=[common], help="L_1..L_k, d and proper-fraction feasibility")
    bounds.add_argument("orders", nargs="+", help="factor orders s_1 .. s_k")

    construct = sub.add_parser("construct", parents=[common], help="build a proper-fraction array")
    construct.add_argument("orders", nargs="+", help="factor orders; the first has 6, 8 or 10 levels")
    construct.add_argument("--output", "-o", help="array file to write (default: stdout)")
    construct.add_argument("--layout", choices=(LAYOUT_BALANCED, LAYOUT_LITERAL),
                           default=LAYOUT_BALANCED, help="last-row layout")
    construct.add_argument("--first-ordering", choices=(ORDERING_FIRST, ORDERING_SECOND),
                           help="S3 element ordering for the first factor")

    verify = sub.add_parser("verify", parents=[common], help="check strength and conjugacy of an array file")
    verify.add_argument("file", help="array file (.oa text or .json mirror)")
    verify.add_argument("--strength", "-t", type=_positive_int, required=True, help="strength to check")
    verify.add_argument("--groups", nargs="*",
                        help="group tags per factor for the conjugacy check; no tags uses the file's")

    catalog = sub.add_parser("catalog", parents=[common], help="build and check every catalog design")
    catalog.add_argument("--output", "-o", help="directory for the array files and summary")
    catalog.add_argument("--layout", choices=(LAYOUT_BALANCED, LAYOUT_LITERAL),
                         default=LAYOUT_BALANCED, help="last-row layout")
    catalog.add_argument("--workers", type=_positive_int, help="threads used to build rows")

    search = sub.add_parser("search", parents=[common], help="exhaustive search for small arrays")
    search.add_argument("orders", nargs="+", help="factor orders s_1 .. s_k")
    search.add_argument("--size", "-N", type=_positive_int, help="number of runs")
    search.add_argument("--strength", "-t", type=_positive_int, help="required strength")
    search.add_argument("--limit", type=_positive_int, help="stop after this many arrays")
    search.add_argument("--exclude-complete", action="store_true",
                        help="skip copies of the complete factorial")
    search.add_argument("--uniqueness", action="store_true",
                        help="ask whether the complete factorial is the only array of its size")
    search.add_argument("--budget", type=_positive_int, help="node budget")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {
        "search_budget": getattr(args, "budget", None),
        "result_limit": getattr(args, "limit", None),
        "workers": getattr(args, "workers", None),
        "capacity_limit": args.capacity_limit,
        "debug_logging": args.debug,
        "verbose": args.verbose,
    }


def _fail(log: StructuredLogger, code: int, error: Exception, command: str) -> int:
    sys.stderr.write(f"{TOOL_NAME}: error: {error}\n")
    log.info("Command failed", event="cli.fail", command=command,
             error=type(error).__name__, exit_code=code)
    return code


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one command.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:]).
        out: Data stream (defaults to sys.stdout).

    Returns:
        Process exit code.
    """
    stream = out if out is not None else sys.stdout
    log = get_logger('cli')
    command = "?"
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        settings = load_settings(_overrides(args), config_path=args.config)
        StructuredLogger.initialize(
            debug_enabled=settings.debug_logging,
            verbose=settings.verbose,
            log_dir=settings.log_dir,
        )
        log.info("Command started", event="cli.start", command=command, version=TOOL_VERSION)
        return _COMMANDS[command](args, settings, stream)
    except (UsageError, ArrayParseError, UnsupportedCaseError) as e:
        return _fail(log, EXIT_USAGE, e, command)
    except CatalogMismatchError as e:
        return _fail(log, EXIT_VERIFY_FAIL, e, command)
    except OSError as e:
        return _fail(log, EXIT_USAGE, e, command)
    except Exception:
        log.exception("Unexpected error", event="cli.crash", command=command)
        raise


def run() -> None:
    """Console-script entry point."""
    raise SystemExit(main())
