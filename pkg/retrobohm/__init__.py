"""RetroBohm is a numerical laboratory for the causally symmetric de Broglie-Bohm model."""
import logging

from .const import COLORS, DATE_FORMAT, DEFAULT_LOG_FORMAT
from .logger import Loggers, setup_logging

__version__ = "1.0.0"

loggers = Loggers()

loggers.add(__name__, logging.INFO)


def set_normal():
    """Log info messages and above."""
    loggers.add(__name__, logging.INFO)
    setup_logging(loggers)


def set_quiet():
    """Only log warnings and errors."""
    loggers.add(__name__, logging.WARNING)
    setup_logging(loggers)


def set_verbose():
    """Set verbose logging."""
    loggers.add(__name__, logging.DEBUG)
    setup_logging(loggers)


setup_logging(loggers)
