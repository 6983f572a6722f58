import json
import logging
import sys
from traceback import format_exc
from typing import Callable, TextIO

from app.exceptions.hoharmonic_error import HoharmonicError
from app.exceptions.usage_error import UsageError
from app.schemas.error import ErrorPayload

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_DOMAIN_ERROR = 2
EXIT_USAGE_ERROR = 64


def error_exit_code(exc: BaseException) -> int:
    """Map an exception to the process exit code."""
    if isinstance(exc, UsageError):
        return EXIT_USAGE_ERROR
    if isinstance(exc, HoharmonicError):
        return EXIT_DOMAIN_ERROR
    return EXIT_UNEXPECTED


def write_error(exc: BaseException, stream: TextIO = None) -> int:
    """Write a machine-readable error payload and return the exit code."""
    stream = stream or sys.stderr
    if isinstance(exc, HoharmonicError):
        payload = exc.to_payload()
    else:
        tracback_msg = format_exc()
        logger.error(f"Unexpected error: {tracback_msg}")
        payload = ErrorPayload(
            error=type(exc).__name__, code="unexpected_error", message=str(exc)
        ).model_dump()
    stream.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    return error_exit_code(exc)


def run_with_handlers(action: Callable[[], int], stream: TextIO = None) -> int:
    """Run a command action, converting raised errors into exit codes."""
    try:
        return action()
    except HoharmonicError as exc:
        logger.debug(f"{type(exc).__name__}: {exc.message}")
        return write_error(exc, stream)
    except Exception as exc:  # noqa: BLE001
        return write_error(exc, stream)
