"""
Utils Module
Number formatting and report emission
"""

import csv
import json
import logging
import math
import os
from typing import Any, Iterable, List, Sequence

import numpy as np

from .. import config
from .errors import ConfigError

logger = logging.getLogger(__name__)


class Utils:
    """Formatting and file helpers shared by the services and the CLI"""

    @staticmethod
    def format_float(value: float, digits: int = config.FLOAT_DIGITS) -> str:
        """Fixed significant digits, the only float rendering used in outputs"""
        return f"{float(value):.{digits}g}"

    @staticmethod
    def to_jsonable(obj: Any) -> Any:
        """Round floats to the output precision; NaN and infinities become null"""
        if isinstance(obj, bool) or obj is None or isinstance(obj, str):
            return obj
        if isinstance(obj, (float, np.floating)):
            if not math.isfinite(obj):
                return None
            return float(Utils.format_float(obj))
        if isinstance(obj, (int, np.integer)):
            return int(obj)
        if isinstance(obj, dict):
            return {str(key): Utils.to_jsonable(value) for key, value in obj.items()}
        if isinstance(obj, (list, tuple, np.ndarray)):
            return [Utils.to_jsonable(value) for value in obj]
        raise TypeError(f"cannot serialize {type(obj).__name__}")

    @staticmethod
    def dumps(obj: Any) -> str:
        return json.dumps(Utils.to_jsonable(obj), indent=2) + "\n"

    @staticmethod
    def write_json(out_dir: str, name: str, obj: Any) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(Utils.dumps(obj))
        logger.info(f"Wrote {path}")
        return path

    @staticmethod
    def format_row(row: Iterable[Any]) -> List[str]:
        cells = []
        for value in row:
            if isinstance(value, (float, np.floating)):
                cells.append(Utils.format_float(value))
            else:
                cells.append(str(value))
        return cells

    @staticmethod
    def write_csv(out_dir: str, name: str, header: Sequence[str], rows: Iterable[Iterable[Any]]) -> str:
        os.makedirs(out_dir, exist_ok=True)
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(Utils.format_row(row))
        logger.info(f"Wrote {path}")
        return path

    @staticmethod
    def read_json_file(path: str, what: str) -> Any:
        """Parse an auxiliary JSON input (labels, beta table, seeds)"""
        path = os.path.expanduser(path)
        if not os.path.exists(path):
            raise ConfigError(f"{what} file not found: {path}")
        with open(path, "r", encoding="utf-8") as f:
            try:
                return json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
