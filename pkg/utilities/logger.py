"""Logger utility with colored console output."""

import logging
import sys
from enum import Enum
from typing import Optional, Union

try:
    from colorama import Fore, Style, init

    init(autoreset=True)
    COLORAMA_AVAILABLE = True
except ImportError:
    COLORAMA_AVAILABLE = False

ROOT_LOGGER_NAME = "globlin"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


class LogLevel(Enum):
    """Log levels enum."""

    DEBUG = logging.DEBUG
    INFO = logging.INFO
    WARNING = logging.WARNING
    ERROR = logging.ERROR
    CRITICAL = logging.CRITICAL


def _level_value(level: Union[LogLevel, int, str]) -> int:
    if isinstance(level, LogLevel):
        return level.value
    if isinstance(level, str):
        return logging.getLevelName(level.upper())
    return level


class ColoredFormatter(logging.Formatter):
    """Formatter that colors the level name and message on a terminal."""

    COLORS = {
        logging.DEBUG: Fore.CYAN if COLORAMA_AVAILABLE else "",
        logging.INFO: Fore.GREEN if COLORAMA_AVAILABLE else "",
        logging.WARNING: Fore.YELLOW if COLORAMA_AVAILABLE else "",
        logging.ERROR: Fore.RED if COLORAMA_AVAILABLE else "",
        logging.CRITICAL: Fore.RED + Style.BRIGHT if COLORAMA_AVAILABLE else "",
    }

    RESET = Style.RESET_ALL if COLORAMA_AVAILABLE else ""

    def format(self, record):
        color = self.COLORS.get(record.levelno, "")
        # Copy so file handlers sharing the record stay uncolored.
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{self.RESET}"
        record.msg = f"{color}{record.msg}{self.RESET}"
        return super().format(record)


def configure_logging(
    level: Union[LogLevel, int, str] = LogLevel.INFO,
    log_file: Optional[str] = None,
    use_console: bool = True,
) -> logging.Logger:
    """Install handlers on the ``globlin`` logger; children propagate to it."""
    value = _level_value(level)
    root = logging.getLogger(ROOT_LOGGER_NAME)
    root.setLevel(value)
    root.handlers.clear()
    root.propagate = False

    if use_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(value)
        if COLORAMA_AVAILABLE and sys.stderr.isatty():
            console_format = ColoredFormatter(LOG_FORMAT, datefmt=DATE_FORMAT)
        else:
            console_format = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)
        console_handler.setFormatter(console_format)
        root.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setLevel(value)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT))
        root.addHandler(file_handler)
    return root


class SolverLogger:
    """Thin wrapper adding ``success`` to a stdlib logger."""

    def __init__(self, name: str = ROOT_LOGGER_NAME):
        self.name = name
        self.logger = logging.getLogger(name)

    def debug(self, message: str, *args):
        self.logger.debug(message, *args)

    def info(self, message: str, *args):
        self.logger.info(message, *args)

    def warning(self, message: str, *args):
        self.logger.warning(message, *args)

    def error(self, message: str, *args):
        self.logger.error(message, *args)

    def success(self, message: str, *args):
        """Info level, marked as a completed step."""
        self.logger.info("✅ " + message, *args)


# Global logger instance
logger = SolverLogger()


def get_logger(name: Optional[str] = None) -> SolverLogger:
    """Get a child of the ``globlin`` logger.

    Args:
        name: Child name, e.g. ``"linsolve"`` (default: the root logger)

    Returns:
        SolverLogger instance
    """
    if name:
        return SolverLogger(f"{ROOT_LOGGER_NAME}.{name}")
    return logger
