"""
Représentation générique d'un programme linéaire et contrat du solveur

    min c·z  s.c.  G·z ≤ g,  E·z = e,  lower ≤ z ≤ upper

La résolution est déléguée à scipy.optimize.linprog (HiGHS, simplexe dual).
"""

import logging
from pathlib import Path
from typing import Optional, Union

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy.optimize import linprog

from config.settings import SOLVER_CONFIG
from data.models import SolveStatus
from utils.errors import SolverError

logger = logging.getLogger(__name__)

# Codes de retour de linprog
_SCIPY_STATUS = {
    0: SolveStatus.OPTIMAL,
    2: SolveStatus.INFEASIBLE,
    3: SolveStatus.UNBOUNDED
}


def _as_sparse(matrix, columns: int) -> sp.csr_matrix:
    if matrix is None:
        return sp.csr_matrix((0, columns))
    return sp.csr_matrix(matrix, dtype=float)


class LinearProgram(BaseModel):
    """Programme linéaire sous forme creuse"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    objective: np.ndarray
    eq_matrix: Optional[sp.csr_matrix] = None
    eq_rhs: Optional[np.ndarray] = None
    ub_matrix: Optional[sp.csr_matrix] = None
    ub_rhs: Optional[np.ndarray] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    label: str = ""

    @field_validator('objective', 'eq_rhs', 'ub_rhs', 'lower', 'upper', mode='before')
    @classmethod
    def as_array(cls, v):
        if v is None:
            return None
        return np.array(v, dtype=float).ravel()

    @field_validator('eq_matrix', 'ub_matrix', mode='before')
    @classmethod
    def as_csr(cls, v):
        return None if v is None else sp.csr_matrix(v, dtype=float)

    @model_validator(mode='after')
    def validate_dimensions(self):
        n_vars = self.objective.size
        if not np.all(np.isfinite(self.objective)):
            raise ValueError('Objectif non fini')

        for name, matrix, rhs in (
            ("égalité", self.eq_matrix, self.eq_rhs),
            ("inégalité", self.ub_matrix, self.ub_rhs)
        ):
            if (matrix is None) != (rhs is None):
                raise ValueError(f'Bloc {name} incomplet')
            if matrix is None:
                continue
            if matrix.shape != (rhs.size, n_vars):
                raise ValueError(
                    f'Bloc {name} de forme {matrix.shape}, ({rhs.size}, {n_vars}) attendue'
                )
            if not (np.all(np.isfinite(matrix.data)) and np.all(np.isfinite(rhs))):
                raise ValueError(f'Bloc {name} non fini')

        for name, bound in (("inférieures", self.lower), ("supérieures", self.upper)):
            if bound is not None and bound.size != n_vars:
                raise ValueError(f'{n_vars} bornes {name} attendues, reçu {bound.size}')
            if bound is not None and np.any(np.isnan(bound)):
                raise ValueError(f'Bornes {name} invalides')
        return self

    @property
    def variable_count(self) -> int:
        return self.objective.size

    def lower_bounds(self) -> np.ndarray:
        return np.zeros(self.variable_count) if self.lower is None else self.lower

    def upper_bounds(self) -> np.ndarray:
        return np.full(self.variable_count, np.inf) if self.upper is None else self.upper


class LPSolution(BaseModel):
    """Solution d'un programme linéaire et résidus du contrat"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    status: SolveStatus
    primal: Optional[np.ndarray] = None
    objective: Optional[float] = None
    eq_duals: Optional[np.ndarray] = None
    ub_duals: Optional[np.ndarray] = None
    lower_duals: Optional[np.ndarray] = None
    upper_duals: Optional[np.ndarray] = None
    iterations: int = 0
    primal_residual: float = 0.0
    slackness_residual: float = 0.0
    dual_objective: Optional[float] = None
    duality_gap: float = 0.0

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.OPTIMAL


def _bounds(lp: LinearProgram):
    """Bornes au format attendu par linprog (None pour l'infini)"""
    return [
        (None if np.isinf(lo) else lo, None if np.isinf(hi) else hi)
        for lo, hi in zip(lp.lower_bounds(), lp.upper_bounds())
    ]


def _call_linprog(lp: LinearProgram, presolve: bool):
    options = {
        "primal_feasibility_tolerance": SOLVER_CONFIG["primal_feasibility_tolerance"],
        "dual_feasibility_tolerance": SOLVER_CONFIG["dual_feasibility_tolerance"],
        "presolve": presolve
    }
    return linprog(
        lp.objective,
        A_ub=lp.ub_matrix,
        b_ub=lp.ub_rhs,
        A_eq=lp.eq_matrix,
        b_eq=lp.eq_rhs,
        bounds=_bounds(lp),
        method=SOLVER_CONFIG["method"],
        options=options
    )


def _marginals(block, size: int) -> np.ndarray:
    if block is None or getattr(block, "marginals", None) is None:
        return np.zeros(size)
    return np.asarray(block.marginals, dtype=float)


def _contract(lp: LinearProgram, z: np.ndarray, ub: np.ndarray, eq: np.ndarray,
              lo: np.ndarray, hi: np.ndarray):
    """Résidu primal, résidu de complémentarité et objectif dual"""
    lower, upper = lp.lower_bounds(), lp.upper_bounds()
    residuals = [np.maximum(lower - z, 0.0), np.maximum(z - upper, 0.0)]
    slackness = [lo * np.where(np.isfinite(lower), z - lower, 0.0),
                 hi * np.where(np.isfinite(upper), upper - z, 0.0)]
    dual = np.dot(np.where(np.isfinite(lower), lower, 0.0), lo)
    dual += np.dot(np.where(np.isfinite(upper), upper, 0.0), hi)

    if lp.ub_matrix is not None:
        slack = lp.ub_matrix @ z - lp.ub_rhs
        residuals.append(np.maximum(slack, 0.0))
        slackness.append(ub * slack)
        dual += np.dot(lp.ub_rhs, ub)
    if lp.eq_matrix is not None:
        residuals.append(np.abs(lp.eq_matrix @ z - lp.eq_rhs))
        dual += np.dot(lp.eq_rhs, eq)

    primal_residual = max((float(r.max()) for r in residuals if r.size), default=0.0)
    slackness_residual = max((float(np.abs(s).max()) for s in slackness if s.size), default=0.0)
    return primal_residual, slackness_residual, float(dual)


def solve(lp: LinearProgram) -> LPSolution:
    """
    Résoudre un programme linéaire

    Returns:
        LPSolution avec statut optimal, infeasible ou unbounded

    Raises:
        SolverError: limite d'itérations ou difficulté numérique
    """
    result = _call_linprog(lp, presolve=SOLVER_CONFIG["presolve"])
    if result.status not in _SCIPY_STATUS:
        logger.debug("Nouvelle tentative sans présolution (%s) : %s", lp.label, result.message)
        result = _call_linprog(lp, presolve=False)
    if result.status not in _SCIPY_STATUS:
        raise SolverError(f"Échec du solveur pour {lp.label or 'le programme'}", result.message)

    status = _SCIPY_STATUS[result.status]
    iterations = int(getattr(result, "nit", 0) or 0)
    logger.debug("%s : %s en %d itérations", lp.label, status.value, iterations)
    if status != SolveStatus.OPTIMAL:
        return LPSolution(status=status, iterations=iterations)

    z = np.asarray(result.x, dtype=float)
    n_ub = 0 if lp.ub_rhs is None else lp.ub_rhs.size
    n_eq = 0 if lp.eq_rhs is None else lp.eq_rhs.size
    ub = _marginals(getattr(result, "ineqlin", None), n_ub)
    eq = _marginals(getattr(result, "eqlin", None), n_eq)
    lo = _marginals(getattr(result, "lower", None), lp.variable_count)
    hi = _marginals(getattr(result, "upper", None), lp.variable_count)

    primal_residual, slackness_residual, dual_objective = _contract(lp, z, ub, eq, lo, hi)
    objective = float(result.fun)
    gap = abs(objective - dual_objective) / max(1.0, abs(objective))

    if primal_residual > SOLVER_CONFIG["contract_residual"]:
        logger.warning("%s : résidu primal %.2e au-delà du contrat", lp.label, primal_residual)
    if slackness_residual > SOLVER_CONFIG["contract_slackness"]:
        logger.warning("%s : complémentarité %.2e au-delà du contrat", lp.label, slackness_residual)
    if gap > SOLVER_CONFIG["contract_gap"]:
        logger.warning("%s : écart de dualité %.2e au-delà du contrat", lp.label, gap)

    return LPSolution(
        status=status,
        primal=z,
        objective=objective,
        eq_duals=eq,
        ub_duals=ub,
        lower_duals=lo,
        upper_duals=hi,
        iterations=iterations,
        primal_residual=primal_residual,
        slackness_residual=slackness_residual,
        dual_objective=dual_objective,
        duality_gap=gap
    )


def dump_program(lp: LinearProgram, path: Union[str, Path]) -> Path:
    """Écrire le programme au format texte (sections c, E/e, G/g, bornes)"""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(f"# {lp.label}\n")
        handle.write(f"variables {lp.variable_count}\n")
        handle.write("c " + " ".join(repr(float(v)) for v in lp.objective) + "\n")

        for name, matrix, rhs in (("E", lp.eq_matrix, lp.eq_rhs), ("G", lp.ub_matrix, lp.ub_rhs)):
            if matrix is None:
                continue
            coo = matrix.tocoo()
            handle.write(f"{name} {matrix.shape[0]} {coo.nnz}\n")
            for i, j, v in zip(coo.row, coo.col, coo.data):
                handle.write(f"{i} {j} {v!r}\n")
            handle.write(f"{name.lower()} " + " ".join(repr(float(v)) for v in rhs) + "\n")

        handle.write("lower " + " ".join(repr(float(v)) for v in lp.lower_bounds()) + "\n")
        handle.write("upper " + " ".join(repr(float(v)) for v in lp.upper_bounds()) + "\n")
    return path
