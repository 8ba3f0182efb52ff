"""
Seed file loading.
"""

import json
from pathlib import Path

from src.domain.entities.retail import EntityStore
from src.domain.exceptions import DanglingReferenceError, SeedValidationError
from src.domain.services.retail_env import load_seed
from src.infrastructure.exceptions import ConfigurationException


def load_seed_file(path: Path | str) -> EntityStore:
    """
    Raises:
        ConfigurationException: Missing or unparseable file, or a seed that
            fails schema or reference checks; the message names the path
    """
    target = Path(path)
    if not target.is_file():
        raise ConfigurationException("seed file not found", str(target))
    try:
        document = json.loads(target.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationException(f"invalid JSON: {exc.msg} (line {exc.lineno})", str(target)) from exc
    try:
        return load_seed(document)
    except (SeedValidationError, DanglingReferenceError) as exc:
        raise ConfigurationException(exc.message, str(target)) from exc
