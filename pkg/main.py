# main.py
import argparse
import logging
import sys
from typing import List, Optional

from app_config import (
    DEFAULT_REPORT_FORMAT, EXIT_PARSE_ERROR, EXIT_USAGE, EXIT_VIOLATION, LOG_FILE, LOG_LEVEL, REPORT_FORMATS,
)
from handlers.commands import cmd_certify, cmd_dump, cmd_verify_small
from services.report_service import ReportService
from utils.errors import (
    AlgebraError, BootstrapOrderError, ExpressionError, SpecParseError, UsageError,
)

logger = logging.getLogger(__name__)


def configure_logging(level: str = LOG_LEVEL, log_file: Optional[str] = LOG_FILE):
    """Logs go to stderr (and optionally a file); reports own stdout"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--spec', metavar='PATH', help='algebra spec file (default: built-in IG(2,6))')
    common.add_argument('--q', metavar='RATIONAL', help='specialize q, e.g. 1, 2 or 1/3')
    common.add_argument('--format', choices=REPORT_FORMATS, default=DEFAULT_REPORT_FORMAT)
    common.add_argument('--timing', action='store_true', help='include elapsed time in the report')
    common.add_argument('--log-level', default=LOG_LEVEL)

    parser = argparse.ArgumentParser(
        prog='igqh',
        description='Exact quantum cohomology checks and semisimplicity certificates for IG(2,6)',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('verify-small', parents=[common], help='verify the small quantum ring')

    certify = commands.add_parser('certify', parents=[common], help='certify generic semisimplicity')
    certify.add_argument('element', nargs='?', help='gamma, euler or a linear expression like "D1 + 2*D2"')
    certify.add_argument('--element', dest='element_option', metavar='ELEMENT')
    certify.add_argument('--order', type=int, help='precision t^N of the certified matrix')

    commands.add_parser('dump', parents=[common], help='print the spec file of the ring')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point"""
    options = build_parser().parse_args(argv)
    configure_logging(options.log_level)
    if options.command == 'certify' and options.element_option:
        options.element = options.element_option

    try:
        if options.command == 'dump':
            text, code = cmd_dump(options)
            print(text, end='')
            return code
        if options.command == 'verify-small':
            report, code = cmd_verify_small(options)
        else:
            report, code = cmd_certify(options)
        print(ReportService.render(report, options.format))
        return code
    except (SpecParseError, ExpressionError) as e:
        logger.error(f"Parse error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except (UsageError, BootstrapOrderError) as e:
        logger.error(f"Usage error: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraError as e:
        logger.error(f"Check failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
