import logging
import os
from datetime import datetime
from typing import Optional


def millisecond_timestamp(include_year: bool = False) -> str:
    format_string = "%Y-%m-%d %H:%M:%S.%f" if include_year else "%m-%d %H:%M:%S.%f"
    return datetime.now().strftime(format_string)[:-3]


class CompactFormatter(logging.Formatter):
    """Drops the level name from INFO and DEBUG records unless show_lower_levels."""

    def __init__(self, fmt: str, *, show_lower_levels: bool = False):
        super().__init__(fmt)
        self.show_lower_levels = show_lower_levels
        self.short_fmt = fmt.replace(" - %(levelname)s", "")

    def format(self, record: logging.LogRecord) -> str:
        record.filename = os.path.splitext(record.filename)[0]
        if self.show_lower_levels or record.levelno > logging.INFO:
            return super().format(record)
        saved = self._style._fmt
        self._style._fmt = self.short_fmt
        try:
            return super().format(record)
        finally:
            self._style._fmt = saved

    def formatTime(self, record, datefmt=None):
        return millisecond_timestamp()


class SingletonLogger:
    """One handler on the package logger, however often the CLI sets it up."""

    _instance: Optional[logging.Logger] = None

    @classmethod
    def get_logger(
        cls,
        name: str = "polycover",
        level: int = logging.INFO,
        show_lower_levels: bool = False,
    ) -> logging.Logger:
        if cls._instance is None:
            cls._instance = cls._setup_logger(name, show_lower_levels)
        cls._instance.setLevel(level)
        return cls._instance

    @staticmethod
    def _setup_logger(name: str, show_lower_levels: bool) -> logging.Logger:
        logger = logging.getLogger(name)
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(
                CompactFormatter(
                    "%(asctime)s - %(filename)s:%(lineno)d - %(levelname)s - %(message)s",
                    show_lower_levels=show_lower_levels,
                )
            )
            logger.addHandler(handler)
        logger.propagate = False
        return logger


def level_from_env(default: str = "INFO") -> int:
    name = os.getenv("LOG_LEVEL", default).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"LOG_LEVEL={name} is not a logging level")
    return level
