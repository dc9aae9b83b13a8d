"""
Balayages reproductibles : NL à valeur de fonctionnelle fixée et famille γ
Résultats en CSV, script gnuplot optionnel
"""

import logging
from pathlib import Path
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from pydantic import BaseModel, Field, model_validator

from config.catalogue import FamilyKind, get_family, resolve_parameters
from config.settings import REFERENCE_VALUES, SCAN_CONFIG
from data.models import BellFunctional, InputDistribution, Scenario
from data.storage import load_functional, load_input_distribution
from inequalities.families import make_cglmp, make_inn22, make_mermin
from inequalities.functionals import evaluate, make_chsh, ns_bound
from measures.entropy import kl_upper_bound, nl_kl, pinsker_bound
from measures.trace import nl, nl_given_value
from quantum.setups import cglmp_setup
from quantum.states import born_behavior
from scenario.strategies import enumerate_strategies
from utils.errors import DomainError, NonLocalityError

logger = logging.getLogger(__name__)

_BUILDERS = {
    "chsh": lambda params: make_chsh(),
    "cglmp": lambda params: make_cglmp(params["d"]),
    "inn22": lambda params: make_inn22(params["n"]),
    "mermin": lambda params: make_mermin(params["N"])[1]
}


class ScanSpec(BaseModel):
    """Paramètres d'un balayage"""
    functional: str = "cglmp:d=3"
    grid_min: float = 0.0
    grid_max: Optional[float] = None        # None : jusqu'à la borne non signalante
    steps: int = Field(SCAN_CONFIG["default_steps"], ge=2)
    inputs: str = "uniform"
    output: Optional[Path] = None
    jobs: int = SCAN_CONFIG["default_jobs"]
    skip_kl: bool = False

    @model_validator(mode='after')
    def validate_grid(self):
        if self.grid_max is not None and self.grid_min > self.grid_max:
            raise ValueError(f'Grille vide : min {self.grid_min} > max {self.grid_max}')
        return self

    def grid(self, default_max: float) -> np.ndarray:
        upper = default_max if self.grid_max is None else self.grid_max
        if self.grid_min > upper:
            raise DomainError(f"Grille vide : min {self.grid_min} > max {upper}")
        return np.linspace(self.grid_min, upper, self.steps)


def parse_reference(reference: str) -> tuple:
    """`cglmp:d=3` -> ("cglmp", {"d": "3"})"""
    name, _, params = reference.partition(":")
    raw = {}
    for item in filter(None, params.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise DomainError(f"Paramètre mal formé : {item} (clé=valeur attendu)")
        raw[key.strip()] = value.strip()
    return name.strip(), raw


def resolve_functional(reference: str) -> BellFunctional:
    """Fonctionnelle intégrée (`chsh`, `cglmp:d=4`, `mermin:N=3`...) ou fichier"""
    path = Path(reference)
    if path.is_file():
        return load_functional(path)

    name, raw = parse_reference(reference)
    family = get_family(name)
    if not family or family["kind"] != FamilyKind.FUNCTIONAL:
        raise DomainError(f"Fonctionnelle inconnue et fichier introuvable : {reference}")
    try:
        params = resolve_parameters(name, raw)
    except ValueError as e:
        raise DomainError(str(e))
    return _BUILDERS[name](params)


def resolve_distribution(
    mode: str,
    scenario: Scenario,
    functional: Optional[BellFunctional] = None
) -> InputDistribution:
    """`uniform`, `support` (entrées de la fonctionnelle) ou fichier de poids"""
    if mode == "uniform":
        return InputDistribution.uniform(scenario)
    if mode == "support":
        if functional is None:
            raise DomainError("Le mode `support` exige une fonctionnelle")
        return InputDistribution.on_support(functional)
    return load_input_distribution(mode, scenario)


def _value_row(functional: BellFunctional, target: float, distribution, strategies) -> Dict:
    try:
        result = nl_given_value(functional, float(target), distribution, strategies)
    except NonLocalityError as e:
        logger.warning("Point %g en échec : %s", target, e)
        return {"value": target, "nl": np.nan, "status": "error"}
    return {
        "value": target,
        "nl": result.value if result.is_feasible else np.nan,
        "status": result.status.value
    }


def run_scan(spec: ScanSpec) -> pd.DataFrame:
    """NL minimale le long d'une grille de valeurs c de la fonctionnelle"""
    functional = resolve_functional(spec.functional)
    scenario = functional.scenario
    distribution = resolve_distribution(spec.inputs, scenario, functional)
    strategies = enumerate_strategies(scenario)

    default_max = ns_bound(functional) if spec.grid_max is None else spec.grid_max
    grid = spec.grid(default_max)
    logger.info("Balayage de %s sur %d points", functional.label, grid.size)

    rows = Parallel(n_jobs=spec.jobs, prefer="threads")(
        delayed(_value_row)(functional, target, distribution, strategies) for target in grid
    )
    table = pd.DataFrame(rows, columns=["value", "nl", "status"])
    if spec.output is not None:
        write_csv(table, spec.output)
    return table


def gamma_grid(spec: ScanSpec) -> np.ndarray:
    """Grille γ, complétée par le point maximalement intriqué 1/√3"""
    upper = SCAN_CONFIG["gamma_max"] if spec.grid_max is None else spec.grid_max
    grid = spec.grid(upper)
    special = REFERENCE_VALUES["maximally_entangled_gamma"]
    if grid[0] <= special <= grid[-1]:
        grid = np.union1d(grid, [special])
    return grid


def _gamma_row(gamma: float, functional: BellFunctional, strategies, skip_kl: bool) -> Dict:
    row = {"gamma": gamma}
    try:
        state, measurements = cglmp_setup(float(gamma))
        behavior = born_behavior(state, measurements)
        result = nl(behavior, strategies=strategies)
        row.update({
            "i_cglmp": evaluate(functional, behavior),
            "nl": result.value,
            "pinsker": pinsker_bound(min(1.0, result.value))
        })
        if skip_kl:
            row.update({"kl_min": np.nan, "kl_min_raw": np.nan, "kl_upper": np.nan})
        else:
            kl = nl_kl(behavior, strategies=strategies)
            row.update({
                "kl_min": kl.value,
                "kl_min_raw": kl.unscaled,
                "kl_upper": kl_upper_bound(behavior, result.closest_local)
            })
        row["status"] = "optimal"
    except NonLocalityError as e:
        logger.warning("γ = %g en échec : %s", gamma, e)
        row["status"] = "error"
    return row


def run_gamma_scan(spec: ScanSpec) -> pd.DataFrame:
    """
    CGLMP, NL, KL minimale et borne de Pinsker le long de la famille γ

    Returns:
        DataFrame (gamma, i_cglmp, nl, kl_min, kl_min_raw, kl_upper, pinsker, status)
    """
    functional = make_cglmp(3)
    strategies = enumerate_strategies(functional.scenario)
    grid = gamma_grid(spec)
    logger.info("Balayage γ sur %d points", grid.size)

    rows = Parallel(n_jobs=spec.jobs, prefer="threads")(
        delayed(_gamma_row)(gamma, functional, strategies, spec.skip_kl) for gamma in grid
    )
    columns = ["gamma", "i_cglmp", "nl", "kl_min", "kl_min_raw", "kl_upper", "pinsker", "status"]
    table = pd.DataFrame(rows).reindex(columns=columns)
    if spec.output is not None:
        write_csv(table, spec.output)
    return table


def write_csv(table: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Écrire un tableau de résultats au format CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=SCAN_CONFIG["float_format"])
    logger.info("Résultats écrits dans %s", path)
    return path


def write_gnuplot(csv_path: Union[str, Path], x_label: str, columns: Dict[int, str]) -> Path:
    """Écrire `<csv>.gp` traçant les colonnes données contre la première"""
    csv_path = Path(csv_path)
    script = csv_path.with_suffix(csv_path.suffix + ".gp")
    curves = ", \\\n     ".join(
        f"'{csv_path.name}' using 1:{index} with linespoints title '{title}'"
        for index, title in columns.items()
    )
    script.write_text(
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{x_label}'\n"
        "set grid\n"
        f"plot {curves}\n",
        encoding="utf-8"
    )
    return script
