"""
BL Frame - Configuration

This module holds the run settings shared by the command-line front end, the
JSON service and the system cache, and the logging setup for the package.

Settings are layered: built-in defaults, then environment variables (a local
``.env`` file is honoured through python-dotenv), then a JSON config file,
then explicit overrides such as command-line flags.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace

from dotenv import load_dotenv

from .errors import ConfigError

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


@dataclass(frozen=True)
class Settings:
    """Run settings.

    Attributes:
        symbol_samples: Number of samples N of the periodic symbols.
        truncation: Coefficient half-width K, or None to choose it from the
            tail mass.
        j_max: Finest scale of frame-coefficient tables.
        tol: Tail tolerance for coefficient windows.
        cache_dir: Directory of the system cache database.
        workers: Thread count for sweeps and matrix assembly.
        log_level: Name of the logging level.
        ridge: Tikhonov parameter of the oversampled least-squares solve.
        lp_levels: Number of Littlewood-Paley levels of the reference norms.
        lp_padding: Length units added on both sides of a function's support
            when it is sampled for the reference norms.
        lp_min_samples: Minimal grid size of the reference norms.
    """
    symbol_samples: int = 8192
    truncation: int | None = None
    j_max: int = 8
    tol: float = 1e-10
    cache_dir: str = os.path.join(os.path.expanduser('~'), '.cache', 'blframe')
    workers: int = 1
    log_level: str = 'WARNING'
    ridge: float = 1e-10
    lp_levels: int = 12
    lp_padding: float = 20.0
    lp_min_samples: int = 2 ** 16

    def to_dict(self):
        """Return the settings as a JSON-ready dictionary."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        """Build settings from a dictionary, rejecting unknown keys.

        Args:
            data: Mapping of field names to values.

        Returns:
            Settings: A new instance on top of the defaults.

        Raises:
            ConfigError: If a key is not a settings field.
        """
        return cls().updated(data)

    def updated(self, data):
        """Return a copy with the given fields replaced.

        None values are ignored so that unset command-line flags do not mask
        lower layers; ``truncation`` may be reset with the string 'auto'.
        """
        known = {f.name: f for f in fields(self)}
        changes = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f'unknown setting: {key}')
            if value is None:
                continue
            if key == 'truncation' and value == 'auto':
                changes[key] = None
                continue
            changes[key] = _coerce(key, value)
        return replace(self, **changes)


_KINDS = {
    'symbol_samples': int,
    'truncation': int,
    'j_max': int,
    'workers': int,
    'lp_levels': int,
    'lp_min_samples': int,
    'tol': float,
    'ridge': float,
    'lp_padding': float,
}


def _coerce(key, value):
    kind = _KINDS.get(key, str)
    try:
        return kind(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f'invalid value for {key}: {value!r}') from exc


def _environment():
    env = {
        'cache_dir': os.getenv('BLFRAME_CACHE_DIR'),
        'workers': os.getenv('BLFRAME_WORKERS'),
        'log_level': os.getenv('BLFRAME_LOG_LEVEL'),
    }
    return {key: value for key, value in env.items() if value}


def load_settings(path=None, overrides=None):
    """Load settings from the environment, a JSON file and overrides.

    Args:
        path: Optional path of a JSON config file.
        overrides: Optional mapping applied last (e.g. parsed CLI flags).

    Returns:
        Settings: The merged settings.

    Raises:
        ConfigError: If the file cannot be read or contains unknown keys.
    """
    load_dotenv()
    settings = Settings().updated(_environment())

    if path:
        try:
            with open(path, encoding='utf-8') as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f'cannot read config file {path}: {exc}') from exc
        if not isinstance(data, dict):
            raise ConfigError(f'config file {path} must hold a JSON object')
        settings = settings.updated(data)

    if overrides:
        settings = settings.updated(overrides)
    return settings


def configure_logging(level='WARNING'):
    """Attach a single stream handler to the package logger.

    Args:
        level: Logging level name or number.

    Returns:
        logging.Logger: The configured ``blframe`` logger.
    """
    logger = logging.getLogger('blframe')
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level if isinstance(level, int) else str(level).upper())
    return logger
