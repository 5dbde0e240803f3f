import logging
import os
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).parent / "defaults.toml"


@dataclass
class PolycoverConfig:
    """
    Runtime settings shared by all verbs.

    precedence order: cmdline > POLYCOVER_THREADS > --config toml > packaged defaults
    (command-line values are applied by the per-verb argument dataclasses)
    """

    n_max: int = 4
    grid_denominator: int = 4
    threads: int = 0

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError(f"[idp] n_max must be >= 2, got {self.n_max}")
        if self.grid_denominator < 1:
            raise ValueError(f"[cover] grid_denominator must be >= 1, got {self.grid_denominator}")
        if self.threads < 0:
            raise ValueError(f"[runtime] threads must be >= 0, got {self.threads}")

    @classmethod
    def load(cls, config_file: Optional[Union[str, Path]] = None) -> "PolycoverConfig":
        sections = defaultdict(dict)
        for path in [DEFAULTS_PATH] + ([Path(config_file)] if config_file else []):
            if not path.is_file():
                raise ValueError(f"Config file {path} does not exist")
            logger.debug(f"Loading config file {path}")
            try:
                with open(path, "rb") as f:
                    for k, v in tomllib.load(f).items():
                        # keep keys the file does not mention
                        sections[k] |= v
            except tomllib.TOMLDecodeError as e:
                raise ValueError(f"Config file {path} is not valid TOML: {e}") from e

        threads = sections["runtime"].get("threads", 0)
        env_threads = os.getenv("POLYCOVER_THREADS")
        if env_threads:
            try:
                threads = int(env_threads)
            except ValueError:
                raise ValueError(f"POLYCOVER_THREADS={env_threads!r} is not an integer") from None

        return cls(
            n_max=sections["idp"].get("n_max", 4),
            grid_denominator=sections["cover"].get("grid_denominator", 4),
            threads=threads,
        )
