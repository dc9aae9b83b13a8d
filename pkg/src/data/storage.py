"""
Lecture et écriture des fichiers texte : comportements, fonctionnelles,
distributions d'entrées et certificats

Chaque fichier commence par `scenario N; m_1 ... m_N; d_1 ... d_N` ; les
lignes suivantes portent des indices puis une valeur décimale. Les
commentaires commencent par `#`.
"""

import logging
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError

from config.settings import get_tolerance
from data.models import Behavior, BellFunctional, Certificate, InputDistribution, Scenario
from inequalities.functionals import make_functional
from utils.errors import CapacityError, ParseError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _content_lines(path: Path) -> Iterator[Tuple[int, List[str]]]:
    """Lignes utiles (numéro, jetons), commentaires et lignes vides exclus"""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"Lecture impossible : {e}", path=str(path))

    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def parse_scenario(tokens: List[str], line: int, path: str) -> Scenario:
    """Interpréter `scenario N; m_1 ... m_N; d_1 ... d_N`"""
    text = " ".join(tokens)
    if not text.startswith("scenario"):
        raise ParseError("Ligne `scenario N; m...; d...` attendue", line, path)

    groups = [group.split() for group in text[len("scenario"):].split(";")]
    if len(groups) != 3 or len(groups[0]) != 1:
        raise ParseError("En-tête de scénario mal formé", line, path)
    try:
        parties = int(groups[0][0])
        inputs = tuple(int(v) for v in groups[1])
        outputs = tuple(int(v) for v in groups[2])
        return Scenario(parties=parties, inputs=inputs, outputs=outputs)
    except CapacityError:
        raise
    except (ValueError, ValidationError) as e:
        raise ParseError(f"Scénario invalide : {e}", line, path)


def _parse_float(token: str, line: int, path: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"Nombre invalide : {token}", line, path)
    if not np.isfinite(value):
        raise ParseError(f"Valeur non finie : {token}", line, path)
    return value


def _parse_entries(
    lines: Iterator[Tuple[int, List[str]]],
    scenario: Scenario,
    path: str
) -> np.ndarray:
    """Lignes `x_1 ... x_N a_1 ... a_N valeur` vers le vecteur plat (0 par défaut)"""
    parties = scenario.parties
    values = np.zeros(scenario.dimension)
    seen = set()
    for number, tokens in lines:
        if len(tokens) != 2 * parties + 1:
            raise ParseError(
                f"{2 * parties + 1} champs attendus, reçu {len(tokens)}", number, path
            )
        try:
            indices = [int(t) for t in tokens[:-1]]
        except ValueError:
            raise ParseError("Indices entiers attendus", number, path)

        x, a = indices[:parties], indices[parties:]
        for k in range(parties):
            if not 0 <= x[k] < scenario.inputs[k] or not 0 <= a[k] < scenario.outputs[k]:
                raise ParseError(f"Indice hors du scénario pour la partie {k}", number, path)

        index = (
            int(np.ravel_multi_index(x, scenario.inputs)) * scenario.output_count
            + int(np.ravel_multi_index(a, scenario.outputs))
        )
        if index in seen:
            raise ParseError("Entrée dupliquée", number, path)
        seen.add(index)
        values[index] = _parse_float(tokens[-1], number, path)
    return values


def _header(path: PathLike) -> Tuple[Path, Iterator[Tuple[int, List[str]]], Scenario]:
    path = Path(path)
    lines = _content_lines(path)
    first = next(lines, None)
    if first is None:
        raise ParseError("Fichier vide", path=str(path))
    return path, lines, parse_scenario(first[1], first[0], str(path))


def _entry_lines(scenario: Scenario, values: np.ndarray, skip_zeros: bool = True) -> List[str]:
    rows = []
    xs = np.indices(scenario.inputs).reshape(scenario.parties, -1).T
    as_ = np.indices(scenario.outputs).reshape(scenario.parties, -1).T
    for j, value in enumerate(values):
        if skip_zeros and value == 0:
            continue
        x_index, a_index = divmod(j, scenario.output_count)
        indices = " ".join(str(int(v)) for v in (*xs[x_index], *as_[a_index]))
        rows.append(f"{indices} {float(value)!r}")
    return rows


def _write(path: PathLike, lines: List[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def load_behavior(path: PathLike) -> Behavior:
    """
    Charger un comportement

    Raises:
        ParseError: format invalide (avec numéro de ligne)
    """
    path, lines, scenario = _header(path)
    values = _parse_entries(lines, scenario, str(path))
    logger.debug("Comportement chargé depuis %s (%s)", path, scenario.describe())
    return Behavior(scenario=scenario, values=values)


def save_behavior(behavior: Behavior, path: PathLike, comment: str = "") -> Path:
    """Écrire un comportement (entrées nulles omises)"""
    lines = [f"# {comment}"] if comment else []
    lines.append(behavior.scenario.describe())
    lines.extend(_entry_lines(behavior.scenario, behavior.values))
    return _write(path, lines)


def load_functional(path: PathLike) -> BellFunctional:
    """
    Charger une fonctionnelle ; la borne locale est toujours recalculée

    Une borne déclarée différente de la borne recalculée est signalée par
    un avertissement.
    """
    path, lines, scenario = _header(path)
    second = next(lines, None)
    if second is None or second[1][0] != "local_bound" or len(second[1]) != 2:
        line = second[0] if second else None
        raise ParseError("Ligne `local_bound <valeur|auto>` attendue", line, str(path))

    declared = None
    if second[1][1] != "auto":
        declared = _parse_float(second[1][1], second[0], str(path))

    coefficients = _parse_entries(lines, scenario, str(path))
    functional = make_functional(scenario, coefficients, path.stem)
    if declared is not None and abs(declared - functional.local_bound) > 1e-9:
        logger.warning(
            "%s : borne locale déclarée %.10g, recalculée %.10g",
            path, declared, functional.local_bound
        )
    return functional


def save_functional(functional: BellFunctional, path: PathLike) -> Path:
    """Écrire une fonctionnelle avec sa borne locale"""
    lines = [f"# {functional.label}"] if functional.label else []
    lines.append(functional.scenario.describe())
    lines.append(f"local_bound {functional.local_bound!r}")
    lines.extend(_entry_lines(functional.scenario, functional.coefficients))
    return _write(path, lines)


def load_input_distribution(path: PathLike, scenario: Optional[Scenario] = None) -> InputDistribution:
    """
    Charger une distribution d'entrées (`x_1 ... x_N poids`)

    Les poids sont renormalisés si leur somme est à moins de 1e-6 de 1.

    Raises:
        ParseError: format invalide, poids négatif ou somme trop éloignée de 1,
            scénario différent de celui attendu
    """
    path, lines, declared = _header(path)
    if scenario is not None and (declared.inputs != scenario.inputs or declared.parties != scenario.parties):
        raise ParseError(
            f"Scénario {declared.describe()} incompatible avec {scenario.describe()}", 1, str(path)
        )
    scenario = scenario or declared

    weights = np.zeros(scenario.input_count)
    seen = set()
    for number, tokens in lines:
        if len(tokens) != scenario.parties + 1:
            raise ParseError(f"{scenario.parties + 1} champs attendus", number, str(path))
        try:
            x = [int(t) for t in tokens[:-1]]
        except ValueError:
            raise ParseError("Indices entiers attendus", number, str(path))
        if any(not 0 <= v < m for v, m in zip(x, scenario.inputs)):
            raise ParseError("Entrée hors du scénario", number, str(path))
        index = int(np.ravel_multi_index(x, scenario.inputs))
        if index in seen:
            raise ParseError("Entrée dupliquée", number, str(path))
        seen.add(index)
        weight = _parse_float(tokens[-1], number, str(path))
        if weight < 0:
            raise ParseError("Poids négatif", number, str(path))
        weights[index] = weight

    total = weights.sum()
    if abs(total - 1.0) > get_tolerance("file_weight_tolerance"):
        raise ParseError(f"Les poids somment à {total:.10g}, pas à 1", path=str(path))
    return InputDistribution(scenario=scenario, weights=weights / total)


def save_input_distribution(distribution: InputDistribution, path: PathLike) -> Path:
    """Écrire une distribution d'entrées"""
    scenario = distribution.scenario
    lines = [scenario.describe()]
    xs = np.indices(scenario.inputs).reshape(scenario.parties, -1).T
    for x, weight in zip(xs, distribution.weights):
        if weight > 0:
            lines.append(" ".join(str(int(v)) for v in x) + f" {float(weight)!r}")
    return _write(path, lines)


def write_certificate(certificate: Certificate, path: PathLike) -> Path:
    """Écrire le vecteur v du certificat, précédé de sa valeur et du terme max"""
    lines = [
        f"# value {certificate.value!r}",
        f"# strategy_max {certificate.strategy_max!r}",
        certificate.scenario.describe()
    ]
    lines.extend(_entry_lines(certificate.scenario, certificate.v))
    return _write(path, lines)
