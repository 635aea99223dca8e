"""
Perron-Frobenius data of a primitive diagram and the invariant measure on cylinders.
"""

import logging
from typing import Optional

import numpy as np

from .. import config
from ..helpers.errors import ConvergenceError, NotPrimitiveError, PreconditionError
from .base import FinitePath, Measure, PerronData, StationaryDiagram
from .diagram import is_primitive, path_counts

logger = logging.getLogger(__name__)

# extra steps taken after convergence while the residual still drops
POLISH_STEPS = 100


def _residual(matrix: np.ndarray, nu: np.ndarray, lam: float) -> float:
    return float(np.max(np.abs(matrix @ nu - lam * nu)))


def perron(d: StationaryDiagram, tol: Optional[float] = None, max_iter: Optional[int] = None) -> PerronData:
    """Power iteration from the uniform vector; nu is the right eigenvector normalized to sum 1"""
    tol = config.PERRON_TOL if tol is None else tol
    max_iter = config.PERRON_MAX_ITER if max_iter is None else max_iter
    primitive, _ = is_primitive(d)
    if not primitive:
        raise NotPrimitiveError(f"adjacency of {d.name or 'diagram'} is not primitive")

    matrix = d.matrix.astype(float)
    nu = np.full(d.q, 1.0 / d.q)
    lam = 0.0
    residual = np.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y = matrix @ nu
        lam = float(y.sum())
        nu = y / lam
        residual = _residual(matrix, nu, lam)
        if residual <= tol * lam:
            break
    else:
        logger.error(f"Power iteration stalled at residual {residual:.3e} after {max_iter} steps")
        raise ConvergenceError(
            f"power iteration did not reach residual {tol:g}*lambda within {max_iter} iterations"
        )

    for _ in range(POLISH_STEPS):
        y = matrix @ nu
        cand_lam = float(y.sum())
        cand_nu = y / cand_lam
        cand_res = _residual(matrix, cand_nu, cand_lam)
        if cand_res >= residual:
            break
        lam, nu, residual = cand_lam, cand_nu, cand_res
        iterations += 1

    logger.info(f"Perron data converged: lambda={lam:.12g}, residual={residual:.3e}, {iterations} iterations")
    return PerronData(lam, tuple(float(v) for v in nu), residual, iterations)


def measure(m: Measure, path: FinitePath) -> float:
    """mu[gamma] = nu_{r(gamma)} Lambda^{1-|gamma|}; 1 for the whole space"""
    if path.root is None:
        return 1.0
    vertex = m.diagram.range_of(path)
    return m.perron.nu[vertex] * m.perron.lam ** (1 - path.depth)


def cylinder_mass_total(m: Measure, n: int) -> float:
    """Sum of mu over Pi_n, from per-vertex path counts"""
    if n < 0:
        raise PreconditionError(f"depth must be >= 0, got {n}")
    if n == 0:
        return 1.0
    counts = path_counts(m.diagram, n)
    return sum(c * nu for c, nu in zip(counts, m.perron.nu)) * m.perron.lam ** (1 - n)
