import logging
from time import perf_counter
from typing import Optional

logger = logging.getLogger(__name__)


class measure_time:
    def __init__(self, message: Optional[str] = "Time: {time:.3f} seconds", level: int = logging.INFO):
        self.message = message
        self.level = level

    def __enter__(self):
        self.start = perf_counter()
        return self

    def __exit__(self, type, value, traceback):
        self.time = perf_counter() - self.start
        if self.message is not None:
            logger.log(self.level, self.message.format(time=self.time))
