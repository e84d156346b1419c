"""
Error Handler Module for RANK FLOW

Defines the exception hierarchy shared by every algebra module, the CLI exit
codes, and the centralized ErrorHandler that configures logging and reports
handled errors with their context.
"""

import logging
import sys
import time
import traceback
from dataclasses import dataclass
from enum import Enum, IntEnum
from functools import wraps
from typing import Any, Callable, List, Optional


class AlgebraError(Exception):
    """Root of every error raised by the algebra modules."""


class DomainMismatch(AlgebraError):
    """Operands live over different FieldSpecs."""


class DivisionByZero(AlgebraError, ZeroDivisionError):
    """Inverse of zero or division by the zero polynomial."""


class DimensionMismatch(AlgebraError):
    """Matrix shapes are incompatible with the requested operation."""


class NotMonic(AlgebraError):
    """A monic polynomial was required."""


class DegreeTooSmall(AlgebraError):
    """A polynomial of positive degree was required."""


class BothZero(AlgebraError):
    """Both polynomials of a pair are zero."""


class NotCoprime(AlgebraError):
    """The polynomial pair has a nontrivial common divisor."""


class NotPairwiseCoprime(AlgebraError):
    """Some pair of factors has a nontrivial common divisor."""


class NotCharPolyFactorization(AlgebraError):
    """The factors do not multiply to the characteristic polynomial."""


class CharacteristicTwo(AlgebraError):
    """The statement group is only valid away from characteristic 2."""


class BadField(AlgebraError):
    """A field selection string does not name Q or a supported prime."""


class ParseError(AlgebraError):
    """Malformed matrix, polynomial or field text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}"
            location += f", column {column})" if column is not None else ")"
        super().__init__(f"{message}{location}")


class ConfigError(AlgebraError):
    """Fuzz or harness configuration failed validation."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("Invalid configuration:\n" + "\n".join(f"  - {e}" for e in self.errors))


class ExitCode(IntEnum):
    """Process exit status convention of the CLI."""
    OK = 0
    CONTRACT_VIOLATION = 1
    USAGE_ERROR = 2


def exit_code_for(exception: BaseException) -> ExitCode:
    """
    Map an exception to the CLI exit status.

    Args:
        exception: Exception raised while running a subcommand

    Returns:
        USAGE_ERROR for user-facing errors, CONTRACT_VIOLATION otherwise
    """
    if isinstance(exception, (AlgebraError, OSError, ValueError)):
        return ExitCode.USAGE_ERROR
    return ExitCode.CONTRACT_VIOLATION


class ErrorSeverity(Enum):
    """Error severity levels"""
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"
    CRITICAL = "critical"

    @property
    def log_level(self) -> int:
        return getattr(logging, self.name)


@dataclass
class ErrorContext:
    """Context information for an error"""
    component: str
    operation: str
    error_type: str
    message: str
    severity: ErrorSeverity
    timestamp: float
    traceback_str: Optional[str] = None


LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'


class ErrorHandler:
    """
    Centralized logging setup and error reporting.

    Attaches handlers to the ``src`` package logger so that every module logger
    (``src.field_core``, ``src.rank_theorem``, ...) reports through it. Console
    output goes to stderr; stdout is left to command results.
    """

    LOGGER_NAME = 'src'

    def __init__(self, log_file: Optional[str] = None, level: str = "INFO"):
        """
        Initialize error handler.

        Args:
            log_file: Path to log file (None for console only)
            level: Console log level name
        """
        self.log_file = log_file
        self.level = level.upper()
        self.logger = self._setup_logging()

    def _setup_logging(self) -> logging.Logger:
        """
        Set up logging configuration.

        Returns:
            Configured logger
        """
        logger = logging.getLogger(self.LOGGER_NAME)
        logger.setLevel(logging.DEBUG)

        for handler in list(logger.handlers):
            if getattr(handler, '_rank_flow', False):
                logger.removeHandler(handler)
                handler.close()

        formatter = logging.Formatter(LOG_FORMAT, datefmt=LOG_DATEFMT)

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(getattr(logging, self.level, logging.INFO))
        console_handler.setFormatter(formatter)
        console_handler._rank_flow = True
        logger.addHandler(console_handler)

        if self.log_file:
            file_handler = logging.FileHandler(self.log_file)
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(formatter)
            file_handler._rank_flow = True
            logger.addHandler(file_handler)

        return logger

    def log_error(self, context: ErrorContext) -> None:
        """
        Log an error with context at its severity; tracebacks go to DEBUG.

        Args:
            context: Error context information
        """
        self.logger.log(context.severity.log_level,
                        f"[{context.component}] {context.operation}: {context.error_type}: {context.message}")
        if context.traceback_str:
            self.logger.debug(f"Traceback:\n{context.traceback_str}")

    def handle_exception(
        self,
        component: str,
        operation: str,
        exception: BaseException,
        severity: ErrorSeverity = ErrorSeverity.ERROR
    ) -> ExitCode:
        """
        Log an exception and return the exit status it maps to.

        Args:
            component: Component where error occurred
            operation: Operation being performed
            exception: The exception that occurred
            severity: Error severity level

        Returns:
            ExitCode for the exception
        """
        context = ErrorContext(
            component=component,
            operation=operation,
            error_type=type(exception).__name__,
            message=str(exception),
            severity=severity,
            timestamp=time.time(),
            traceback_str=traceback.format_exc()
        )
        self.log_error(context)
        return exit_code_for(exception)

    def shutdown(self) -> None:
        """Flush and detach the handlers installed by this instance."""
        for handler in list(self.logger.handlers):
            if getattr(handler, '_rank_flow', False):
                handler.flush()
                self.logger.removeHandler(handler)
                handler.close()


def with_error_handling(
    component: str,
    operation: str,
    error_handler: ErrorHandler,
    severity: ErrorSeverity = ErrorSeverity.ERROR,
    default_return: Any = ExitCode.USAGE_ERROR
):
    """
    Decorator turning user-facing errors into a logged default return.

    Args:
        component: Component name
        operation: Operation name
        error_handler: ErrorHandler instance
        severity: Error severity level
        default_return: Value returned when an AlgebraError, OSError or ValueError escapes

    Returns:
        Decorated function
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except (AlgebraError, OSError, ValueError) as e:
                error_handler.handle_exception(
                    component=component,
                    operation=operation,
                    exception=e,
                    severity=severity
                )
                return default_return
        return wrapper
    return decorator
