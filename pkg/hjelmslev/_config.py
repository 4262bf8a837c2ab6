import logging
import os
from dataclasses import dataclass, replace
from typing import Optional

DEFAULT_BITSET_THRESHOLD = 4096


@dataclass(frozen=True)
class Settings:
    """
    Settings - runtime knobs of the toolkit

    Read from the environment once per process by get_settings():
    - HJELMSLEV_BITSET_THRESHOLD: largest point count for which line
      intersections use packed-bit masks (default 4096); larger structures
      fall back to sorted-array merging
    - HJELMSLEV_THREADS: worker threads used while assembling line classes
      (default: all cores). Never affects output.
    - HJELMSLEV_LOG_LEVEL: level name for the CLI's root logger (default WARNING)

    Usage:
        ```python
        from hjelmslev import configure, get_settings, reset_settings

        configure(threads=1)
        assert get_settings().threads == 1
        reset_settings()  # back to the environment
        ```
    """

    bitset_threshold: int = DEFAULT_BITSET_THRESHOLD
    threads: int = 1
    log_level: str = "WARNING"

    def replace(self, **changes) -> "Settings":
        return replace(self, **changes)

    @classmethod
    def from_env(cls) -> "Settings":
        """
        Build settings from HJELMSLEV_* environment variables.

        Raises:
            ValueError: If a variable is set to a value of the wrong form
        """
        threshold = _int_from_env("HJELMSLEV_BITSET_THRESHOLD", DEFAULT_BITSET_THRESHOLD, minimum=0)
        threads = _int_from_env("HJELMSLEV_THREADS", os.cpu_count() or 1, minimum=1)

        log_level = os.getenv("HJELMSLEV_LOG_LEVEL", "WARNING").strip().upper()
        if not isinstance(logging.getLevelName(log_level), int):
            raise ValueError(
                f"Invalid log level: HJELMSLEV_LOG_LEVEL={log_level!r} is not a logging level name. "
                "Tip: use one of DEBUG, INFO, WARNING, ERROR."
            )

        return cls(bitset_threshold=threshold, threads=threads, log_level=log_level)


def _int_from_env(name: str, default: int, minimum: int) -> int:
    raw: Optional[str] = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Invalid setting: {name}={raw!r} is not an integer.") from None
    if value < minimum:
        raise ValueError(f"Invalid setting: {name}={value} must be at least {minimum}.")
    return value


_current: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Return the process-wide settings, read from the environment on first use.
    """
    global _current
    if _current is None:
        _current = Settings.from_env()
    return _current


def configure(**changes) -> Settings:
    """
    Override settings for the rest of the process (the CLI's --threads).
    reset_settings() drops every override.
    """
    global _current
    _current = get_settings().replace(**changes)
    return _current


def reset_settings() -> None:
    global _current
    _current = None
