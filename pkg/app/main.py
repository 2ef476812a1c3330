import argparse
import logging
import sys
from typing import List, Optional

from app import __version__
from app.commands import explain, render, report, synth
from app.commands.common import EXIT_FAILURE, EXIT_USAGE, CommandError, fail
from app.core.config import get_settings
from app.core.distance import ShapeMismatchError
from app.core.file_store import FileStoreError
from app.core.logging import configure_logging
from app.data.store import DatasetError
from app.services import (
    InvalidSpecError,
    OracleError,
    RenderError,
    ReportError,
    RunAbortedError,
    RunError,
    SsetError,
)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="sset",
        description="Swapping-sliding explanations for multivariate time-series classifiers",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Logging level (default from LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Sub-commands
    synth.register(subparsers)
    explain.register(subparsers)
    report.register(subparsers)
    render.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except CommandError as e:
        return fail(str(e), e.code)
    except RunAbortedError as e:
        return fail(str(e), EXIT_FAILURE)
    except (DatasetError, InvalidSpecError, ReportError, RenderError, RunError, FileStoreError) as e:
        return fail(str(e), EXIT_USAGE)
    except (OracleError, SsetError, ShapeMismatchError) as e:
        return fail(str(e), EXIT_FAILURE)


if __name__ == "__main__":
    sys.exit(main())
