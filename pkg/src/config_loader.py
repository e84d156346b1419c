"""
Configuration loader and validator for RANK FLOW.

Fuzz runs are configured from a YAML/JSON file with a ``fuzz:`` section and an
optional ``harness:`` section, from command-line flags, or both (flags win).
"""

import json
import logging
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from src.error_handler import ConfigError, ParseError
from src.field_core import FieldSpec

logger = logging.getLogger(__name__)

IntRange = Tuple[int, int]

SEED_LIMIT = 2 ** 64


class Generator(Enum):
    """Matrix generators available to the fuzz harness."""
    GENERIC = "generic"
    IDEMPOTENT = "idempotent"
    INVOLUTIVE = "involutive"
    TRIPOTENT = "tripotent"
    NILPOTENT = "nilpotent"
    COMPANION = "companion"


GENERATOR_NAMES = tuple(g.value for g in Generator)


def parse_range(value: Union[str, int, List[int], Tuple[int, int]]) -> IntRange:
    """
    Parse an inclusive integer range.

    Accepts "LO..HI", a single integer (LO = HI) or a two-element list.

    Raises:
        ParseError: If the value is not a range
    """
    if isinstance(value, bool):
        raise ParseError(f"Invalid range {value!r}")
    if isinstance(value, int):
        return value, value
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise ParseError(f"Range list must hold two integers, got {value!r}")
        return value[0], value[1]
    text = str(value).strip()
    lo, sep, hi = text.partition('..')
    try:
        if not sep:
            return int(text), int(text)
        return int(lo), int(hi)
    except ValueError:
        raise ParseError(f"Invalid range {value!r}; expected LO..HI") from None


def parse_generators(value: Union[str, List[str]]) -> Tuple[str, ...]:
    """Comma-separated string or list of generator names, order preserved."""
    if isinstance(value, str):
        names = [v.strip() for v in value.split(',')]
    else:
        names = [str(v).strip() for v in value]
    return tuple(name for name in names if name)


@dataclass
class HarnessSettings:
    """Limits and sampling knobs shared by every fuzz run."""
    matrix_order_cap: int = 64
    rational_numerator_bound: int = 9
    rational_denominator_bound: int = 9
    # out of 3 trials
    shared_factor_rate: int = 1

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'HarnessSettings':
        """Create HarnessSettings from dictionary."""
        return cls(
            matrix_order_cap=data.get('matrix_order_cap', 64),
            rational_numerator_bound=data.get('rational_numerator_bound', 9),
            rational_denominator_bound=data.get('rational_denominator_bound', 9),
            shared_factor_rate=data.get('shared_factor_rate', 1)
        )


@dataclass
class FuzzConfig:
    """One fuzz run: field, sizes, trial count, seed and generators."""
    field: FieldSpec = dataclass_field(default_factory=lambda: FieldSpec.prime(7))
    n_range: IntRange = (1, 6)
    deg_range: IntRange = (0, 5)
    trials: int = 100
    seed: int = 42
    generators: Tuple[str, ...] = GENERATOR_NAMES
    workers: int = 1
    progress: bool = False
    harness: HarnessSettings = dataclass_field(default_factory=HarnessSettings)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'FuzzConfig':
        """
        Create FuzzConfig from a configuration dictionary.

        Args:
            data: Mapping with a 'fuzz' section (or the fuzz keys at top
                level) and an optional 'harness' section

        Raises:
            BadField: If the field is neither Q nor a supported prime
            ParseError: If a range is malformed
        """
        fuzz = data.get('fuzz', data) or {}
        defaults = cls()
        return cls(
            field=FieldSpec.parse(str(fuzz['field'])) if 'field' in fuzz else defaults.field,
            n_range=parse_range(fuzz['n']) if 'n' in fuzz else defaults.n_range,
            deg_range=parse_range(fuzz['deg']) if 'deg' in fuzz else defaults.deg_range,
            trials=fuzz.get('trials', defaults.trials),
            seed=fuzz.get('seed', defaults.seed),
            generators=parse_generators(fuzz['generators']) if 'generators' in fuzz else defaults.generators,
            workers=fuzz.get('workers', defaults.workers),
            progress=bool(fuzz.get('progress', defaults.progress)),
            harness=HarnessSettings.from_dict(data.get('harness', {}) or {})
        )


class ConfigLoader:
    """Load and validate configuration files."""

    @staticmethod
    def load_file(file_path: Union[str, Path]) -> Dict[str, Any]:
        """
        Load configuration file (JSON or YAML).

        Args:
            file_path: Path to configuration file

        Returns:
            Dictionary containing configuration data

        Raises:
            FileNotFoundError: If file doesn't exist
            ValueError: If file format is unsupported or invalid
        """
        file_path = Path(file_path)

        if not file_path.exists():
            raise FileNotFoundError(f"Configuration file not found: {file_path}")

        suffix = file_path.suffix.lower()

        try:
            with open(file_path, 'r') as f:
                if suffix == '.json':
                    data = json.load(f)
                elif suffix in ['.yaml', '.yml']:
                    data = yaml.safe_load(f)
                else:
                    raise ValueError(f"Unsupported file format: {suffix}. Use .json, .yaml, or .yml")
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in {file_path}: {e}")
        except yaml.YAMLError as e:
            raise ValueError(f"Invalid YAML in {file_path}: {e}")

        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ValueError(f"Configuration in {file_path} must be a mapping")
        return data

    @staticmethod
    def validate_fuzz_config(config: FuzzConfig) -> List[str]:
        """
        Validate fuzz configuration.

        Args:
            config: FuzzConfig to validate

        Returns:
            List of validation error messages (empty if valid)
        """
        errors = []
        settings = config.harness

        if not isinstance(config.trials, int) or config.trials < 1:
            errors.append("Trials must be a positive integer")
        if not isinstance(config.seed, int) or not 0 <= config.seed < SEED_LIMIT:
            errors.append("Seed must be an unsigned 64-bit integer")

        n_lo, n_hi = config.n_range
        if n_lo > n_hi:
            errors.append(f"Matrix order range {n_lo}..{n_hi} is empty")
        if n_lo < 1:
            errors.append("Matrix order must be at least 1")
        if n_hi > settings.matrix_order_cap:
            errors.append(f"Matrix order {n_hi} exceeds the cap {settings.matrix_order_cap}")

        d_lo, d_hi = config.deg_range
        if d_lo > d_hi:
            errors.append(f"Degree range {d_lo}..{d_hi} is empty")
        if d_lo < 0:
            errors.append("Polynomial degree must be non-negative")

        if not config.generators:
            errors.append("At least one generator must be selected")
        for name in config.generators:
            if name not in GENERATOR_NAMES:
                errors.append(f"Unknown generator '{name}' (choose from {', '.join(GENERATOR_NAMES)})")

        if not isinstance(config.workers, int) or config.workers < 1:
            errors.append("Workers must be a positive integer")

        if settings.matrix_order_cap < 1:
            errors.append("Matrix order cap must be positive")
        if settings.rational_numerator_bound < 1:
            errors.append("Rational numerator bound must be positive")
        if settings.rational_denominator_bound < 1:
            errors.append("Rational denominator bound must be positive")
        if not 0 <= settings.shared_factor_rate <= 3:
            errors.append("Shared factor rate must be between 0 and 3")

        return errors


def load_fuzz_config(
    file_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> FuzzConfig:
    """
    Load and validate a fuzz configuration.

    Args:
        file_path: Optional YAML/JSON file
        overrides: Fuzz-section keys taking precedence over the file (CLI flags)

    Returns:
        Validated FuzzConfig

    Raises:
        ConfigError: If validation reports any problem
    """
    loader = ConfigLoader()
    data = loader.load_file(file_path) if file_path else {}
    fuzz = dict(data.get('fuzz', {}) or {})
    fuzz.update({k: v for k, v in (overrides or {}).items() if v is not None})
    config = FuzzConfig.from_dict({'fuzz': fuzz, 'harness': data.get('harness', {})})

    errors = loader.validate_fuzz_config(config)
    if errors:
        raise ConfigError(errors)
    logger.debug(f"fuzz config: field={config.field}, n={config.n_range}, deg={config.deg_range}, "
                 f"trials={config.trials}, seed={config.seed}")
    return config
