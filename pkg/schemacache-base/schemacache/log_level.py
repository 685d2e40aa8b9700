
from enum import Enum
import logging

class LogLevel(Enum):
    DEBUG = 'debug'
    INFO = 'info'
    WARN = 'warn'
    ERROR = 'error'

    def __str__(self):
        return self.value

    def to_logging(self):
        if self == LogLevel.DEBUG: return logging.DEBUG
        if self == LogLevel.INFO: return logging.INFO
        if self == LogLevel.WARN: return logging.WARNING
        if self == LogLevel.ERROR: return logging.ERROR
        raise RuntimeError("Log level mismatch")

