"""
Core cantorlab CLI client functionality.
"""

import logging
import os
import sys
from typing import Any, Callable, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler

from .. import config
from ..config import ConfigManager
from ..helpers.errors import CantorLabError
from ..services.report_service import RunContext, report_service
from ..services.verify_service import VerifyService
from .display import DisplayManager

# Setup logging
logger = logging.getLogger(__name__)


def setup_logging(verbose: int = 0):
    """Route log records through rich to stderr; -v gives INFO, -vv DEBUG"""
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, config.LOG_LEVEL, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


class CantorLabCLI:
    """Core cantorlab CLI client"""

    def __init__(self, config_path: Optional[str], out_dir: str = config.DEFAULT_OUT_DIR,
                 seed: Optional[int] = None):
        self.config_path = config_path
        self.out_dir = out_dir
        self.seed = seed
        self.display = DisplayManager()
        self.config_manager: Optional[ConfigManager] = None

    def _load(self, overrides: Dict[str, Dict[str, Any]]):
        self.config_manager = ConfigManager(self.config_path)
        self.config_manager.set_seed(self.seed)
        for section, values in overrides.items():
            for key, value in values.items():
                self.config_manager.set(section, key, value)
        return self.config_manager.run_config()

    def _context(self, overrides: Dict[str, Dict[str, Any]], strict: bool = True) -> RunContext:
        run = self._load(overrides)
        return report_service.build_context(run, strict=strict)

    def _guard(self, action: Callable[[], None]):
        """Run a command, mapping failures to the documented exit codes"""
        try:
            action()
        except CantorLabError as e:
            logger.error(e.message)
            self.display.show_error(f"Error: {e.message}")
            sys.exit(e.exit_code)
        except Exception as e:
            logger.error(f"Unexpected failure: {e}", exc_info=True)
            self.display.show_error(f"Unexpected error: {e}")
            sys.exit(1)

    def _out(self, name: str) -> str:
        return os.path.join(self.out_dir, name)

    def info(self):
        """Diagram summary, primitivity, Perron data and Cantor verdicts"""

        def action():
            ctx = self._context({}, strict=False)
            with self.display.show_spinner("Inspecting diagram..."):
                report = report_service.info(ctx, self.out_dir)
            self.display.show_info(report)
            self.display.show_written([self._out("info.json"), self._out("diagram.json")])

        self._guard(action)

    def dim(self, depth: Optional[int] = None, epsilon: Optional[float] = None):
        def action():
            ctx = self._context({"dim": {"depth": depth, "epsilon": epsilon}})
            with self.display.show_spinner("Computing dimension..."):
                report = report_service.dim(ctx, self.out_dir)
            self.display.show_dim(report)
            self.display.show_written([self._out("dim.json")])

        self._guard(action)

    def embed(self, n: Optional[int] = None, s: Optional[float] = None, depth: Optional[int] = None,
              samples: Optional[int] = None, plan: bool = False, labels: Optional[str] = None):
        def action():
            ctx = self._context({"embed": {
                "n": n, "s": s, "depth": depth, "samples": samples, "plan": plan or None, "labels": labels,
            }})
            with self.display.show_spinner("Sampling embedding..."):
                report = report_service.embed(ctx, self.out_dir)
            self.display.show_embed(report)
            self.display.show_written([self._out("embed_points.csv"), self._out("embed_report.json")])

        self._guard(action)

    def spectrum(self, s: Optional[float] = None, depth: Optional[int] = None, mode: Optional[str] = None,
                 budget: Optional[int] = None, beta_file: Optional[str] = None, seeds_file: Optional[str] = None):
        def action():
            ctx = self._context({"spectrum": {
                "s": s, "depth": depth, "mode": mode, "budget": budget,
                "beta_file": beta_file, "seeds_file": seeds_file,
            }})
            written = [self._out(name) for name in ("eigenvalues.csv", "omega.csv", "spectrum_report.json")]
            with self.display.show_spinner("Computing spectrum..."):
                report = report_service.spectrum(ctx, self.out_dir)
            self.display.show_spectrum(report)
            self.display.show_written(written)

        self._guard(action)

    def verify(self, spectrum: bool = False, samples: Optional[int] = None):
        """Run the invariant suite and display results"""

        def action():
            ctx = self._context({"verify": {"samples": samples}})
            service = VerifyService(ctx)
            with self.display.show_spinner("Running invariant checks..."):
                results = service.run_all_checks(spectrum=spectrum or bool(ctx.run.verify["spectrum"]))
            self.display.show_verify_results(results)
            self.display.show_written([self._out("verify.json")])
            service.write(self.out_dir)

        self._guard(action)
