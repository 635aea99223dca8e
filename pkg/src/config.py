import os
import json
import copy
import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .helpers.errors import ConfigError

load_dotenv()

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'")
    if value < 1:
        raise ConfigError(f"{name} must be positive, got {value}")
    return value


# Enumeration cap for explicit path enumeration (Pi_n grows like Lambda^n)
ENUM_CAP = 1_000_000

LOG_LEVEL = os.getenv("CANTORLAB_LOG_LEVEL", "WARNING").upper()

# Perron-Frobenius power iteration
PERRON_TOL = 1e-12
PERRON_MAX_ITER = 100_000

# Exact distance on periodic specs; bounded comparison on truncated ones
DISTANCE_MAX_DEPTH = 1000

# Largest telescoping exponent tried by the embedding planner
PLAN_MAX_K = 64

# Tech-condition scan
TECH_GRID_POINTS = 32
NU_DISTINCT_TOL = 1e-9

# Significant digits of every float written to JSON/CSV
FLOAT_DIGITS = 12

DEFAULT_OUT_DIR = "cantorlab-out"


def enum_cap() -> int:
    """Current enumeration cap; CANTORLAB_ENUM_CAP is read here, never at import"""
    return _int_env("CANTORLAB_ENUM_CAP", ENUM_CAP)


DEFAULT_RUN_CONFIG: Dict[str, Any] = {
    "name": "",
    "metric": {"mode": "substitution"},
    "seed": 0,
    "dim": {
        "depth": 40,
        "epsilon": 5e-3,
        "content_depth": 12,
    },
    "embed": {
        "n": None,
        "s": None,
        "depth": 30,
        "samples": 10_000,
        "plan": False,
        "labels": None,
    },
    "spectrum": {
        "s": None,
        "depth": 8,
        "mode": "enumerate",
        "budget": 1000,
        "beta_file": None,
        "seeds_file": None,
        "grid": TECH_GRID_POINTS,
        "samples": 10_000,
        "pair_depth": 30,
    },
    "verify": {
        "spectrum": False,
        "samples": 10_000,
        "depth": 30,
        "max_n": 8,
        "k_values": [1, 2, 3],
        "image_depth": 10,
    },
}

SPECTRUM_MODES = ("enumerate", "sample")


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration: one diagram source plus per-command parameters"""

    name: str
    source: str  # "substitution" or "diagram"
    source_block: Dict[str, Any]
    metric: Dict[str, Any]
    seed: int
    dim: Dict[str, Any]
    embed: Dict[str, Any]
    spectrum: Dict[str, Any]
    verify: Dict[str, Any]


def _check_int(path: str, value: Any, minimum: int = 0, optional: bool = False):
    if value is None and optional:
        return
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ConfigError(f"{path}: expected an integer >= {minimum}, got {value!r}")


def _check_number(path: str, value: Any, positive: bool = True, optional: bool = False):
    if value is None and optional:
        return
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{path}: expected a positive number, got {value!r}")


class ConfigManager:
    """Loads a JSON run configuration and merges it over the documented defaults"""

    def __init__(self, path: Optional[str] = None, data: Optional[Dict[str, Any]] = None):
        self.path = os.path.expanduser(path) if path else None
        self.default_config: Dict[str, Any] = copy.deepcopy(DEFAULT_RUN_CONFIG)
        if data is not None:
            self.config = self._merge(data)
        elif self.path is not None:
            self.config = self._merge(self.load())
        else:
            raise ConfigError("No configuration given (use --config FILE)")

    def load(self) -> Dict[str, Any]:
        if not os.path.exists(self.path):
            raise ConfigError(f"Config file not found: {self.path}")
        with open(self.path, "r", encoding="utf-8") as f:
            text = f.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{self.path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
        if not isinstance(data, dict):
            raise ConfigError(f"{self.path}: top level must be a JSON object")
        logger.info(f"Loaded run configuration from {self.path}")
        return data

    def _merge(self, data: Dict[str, Any]) -> Dict[str, Any]:
        merged = copy.deepcopy(self.default_config)
        for key, value in data.items():
            if isinstance(value, dict) and isinstance(merged.get(key), dict):
                merged[key].update(value)
            else:
                merged[key] = value
        sources = [key for key in ("substitution", "diagram") if merged.get(key) is not None]
        if len(sources) != 1:
            raise ConfigError(
                "exactly one of 'substitution' or 'diagram' must be given "
                f"(found: {', '.join(sources) or 'none'})"
            )
        if not isinstance(merged["metric"], dict) or "mode" not in merged["metric"]:
            raise ConfigError("metric: expected an object with a 'mode' field")
        if not self.path and not merged.get("name"):
            merged["name"] = sources[0]
        elif not merged.get("name"):
            merged["name"] = os.path.splitext(os.path.basename(self.path))[0]
        return merged

    def get(self, section: str, key: str, default: Any = None) -> Any:
        block = self.config.get(section)
        if isinstance(block, dict):
            value = block.get(key)
            return default if value is None else value
        return default

    def section(self, name: str) -> Dict[str, Any]:
        block = self.config.get(name)
        return dict(block) if isinstance(block, dict) else {}

    def set(self, section: str, key: str, value: Any):
        """Apply a command-line override (None leaves the config value untouched)"""
        if value is None:
            return
        self.config.setdefault(section, {})[key] = value

    @property
    def seed(self) -> int:
        seed = self.config.get("seed", 0)
        _check_int("seed", seed)
        return seed

    def set_seed(self, seed: Optional[int]):
        if seed is not None:
            self.config["seed"] = seed

    def run_config(self) -> RunConfig:
        """Validate parameter ranges and freeze the merged configuration"""
        for section in ("dim", "embed", "spectrum", "verify"):
            if not isinstance(self.config.get(section), dict):
                raise ConfigError(f"{section}: expected an object")
        dim = self.section("dim")
        _check_int("dim.depth", dim["depth"], 2)
        _check_number("dim.epsilon", dim["epsilon"])
        _check_int("dim.content_depth", dim["content_depth"])

        embed = self.section("embed")
        _check_int("embed.n", embed["n"], 1, optional=True)
        _check_number("embed.s", embed["s"], optional=True)
        _check_int("embed.depth", embed["depth"], 1)
        _check_int("embed.samples", embed["samples"], 1)
        if embed["labels"] is not None and not isinstance(embed["labels"], (dict, str)):
            raise ConfigError("embed.labels: expected an object or a file name")

        spectrum = self.section("spectrum")
        _check_number("spectrum.s", spectrum["s"], optional=True)
        _check_int("spectrum.depth", spectrum["depth"], 2)
        _check_int("spectrum.budget", spectrum["budget"], 1)
        _check_int("spectrum.grid", spectrum["grid"], 1)
        _check_int("spectrum.samples", spectrum["samples"], 1)
        _check_int("spectrum.pair_depth", spectrum["pair_depth"], 1)
        if spectrum["mode"] not in SPECTRUM_MODES:
            raise ConfigError(
                f"spectrum.mode: expected one of {', '.join(SPECTRUM_MODES)}, got {spectrum['mode']!r}"
            )

        verify = self.section("verify")
        _check_int("verify.samples", verify["samples"], 1)
        _check_int("verify.depth", verify["depth"], 1)
        _check_int("verify.max_n", verify["max_n"])
        _check_int("verify.image_depth", verify["image_depth"], 1)
        ks = verify["k_values"]
        if not isinstance(ks, list) or not ks:
            raise ConfigError("verify.k_values: expected a non-empty list")
        for i, k in enumerate(ks):
            _check_int(f"verify.k_values[{i}]", k, 1)

        source = "substitution" if self.config.get("substitution") is not None else "diagram"
        return RunConfig(
            name=str(self.config.get("name") or source),
            source=source,
            source_block=self.config[source],
            metric=self.section("metric"),
            seed=self.seed,
            dim=dim,
            embed=embed,
            spectrum=spectrum,
            verify=verify,
        )
