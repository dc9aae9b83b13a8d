"""
Catalogue des familles intégrées
Inégalités de Bell et familles d'états quantiques accessibles par leur nom
"""

from typing import Dict, List, Any
from enum import Enum

from config.settings import LIMITS


class FamilyKind(Enum):
    """Nature d'une famille du catalogue"""
    FUNCTIONAL = "functional"    # inégalité de Bell
    QUANTUM = "quantum"          # état + mesures


class ParameterType(Enum):
    """Types de paramètres acceptés"""
    INTEGER = "integer"
    REAL = "real"


# Inégalités de Bell intégrées
FUNCTIONAL_FAMILIES = {
    "chsh": {
        "title": "CHSH (forme de Collins-Gisin)",
        "kind": FamilyKind.FUNCTIONAL,
        "parameters": {}
    },
    "cglmp": {
        "title": "CGLMP à d sorties",
        "kind": FamilyKind.FUNCTIONAL,
        "parameters": {
            "d": {
                "type": ParameterType.INTEGER,
                "default": 3,
                "min_value": LIMITS["cglmp_outputs"][0],
                "max_value": LIMITS["cglmp_outputs"][1]
            }
        }
    },
    "inn22": {
        "title": "I_nn22 à n réglages binaires",
        "kind": FamilyKind.FUNCTIONAL,
        "parameters": {
            "n": {
                "type": ParameterType.INTEGER,
                "default": 3,
                "min_value": LIMITS["inn22_settings"][0],
                "max_value": LIMITS["inn22_settings"][1]
            }
        }
    },
    "mermin": {
        "title": "Mermin M_N à N parties",
        "kind": FamilyKind.FUNCTIONAL,
        "parameters": {
            "N": {
                "type": ParameterType.INTEGER,
                "default": 3,
                "min_value": LIMITS["mermin_parties"][0],
                "max_value": LIMITS["mermin_parties"][1]
            }
        }
    }
}

# Familles quantiques intégrées
QUANTUM_FAMILIES = {
    "chsh-tsirelson": {
        "title": "État maximalement intriqué à deux qubits, angles de Tsirelson",
        "kind": FamilyKind.QUANTUM,
        "parameters": {}
    },
    "cglmp-gamma": {
        "title": "État de deux qutrits γ|00⟩ + √(1-2γ²)|11⟩ + γ|22⟩",
        "kind": FamilyKind.QUANTUM,
        "parameters": {
            "gamma": {
                "type": ParameterType.REAL,
                "default": 0.617,
                "min_value": 0.0,
                "max_value": 2 ** -0.5
            }
        }
    },
    "ghz-mermin": {
        "title": "État GHZ et observables du plan XY",
        "kind": FamilyKind.QUANTUM,
        "parameters": {
            "N": {
                "type": ParameterType.INTEGER,
                "default": 3,
                "min_value": LIMITS["mermin_parties"][0],
                "max_value": LIMITS["mermin_parties"][1]
            }
        }
    }
}


def get_family(name: str) -> Dict[str, Any]:
    """Récupérer la description d'une famille (inégalité ou quantique)"""
    if name in FUNCTIONAL_FAMILIES:
        return FUNCTIONAL_FAMILIES[name]
    if name in QUANTUM_FAMILIES:
        return QUANTUM_FAMILIES[name]
    return {}


def get_family_names(kind: FamilyKind) -> List[str]:
    """Lister les noms des familles d'une nature donnée"""
    catalogue = FUNCTIONAL_FAMILIES if kind == FamilyKind.FUNCTIONAL else QUANTUM_FAMILIES
    return sorted(catalogue)


def resolve_parameters(name: str, raw: Dict[str, str]) -> Dict[str, Any]:
    """
    Convertir et valider les paramètres textuels d'une famille

    Returns:
        Paramètres typés, valeurs par défaut comprises

    Raises:
        ValueError: famille inconnue, paramètre inconnu ou hors bornes
    """
    family = get_family(name)
    if not family:
        raise ValueError(f"Famille inconnue : {name}")

    specs = family["parameters"]
    unknown = set(raw) - set(specs)
    if unknown:
        raise ValueError(f"Paramètres inconnus pour {name} : {', '.join(sorted(unknown))}")

    resolved = {}
    for key, spec in specs.items():
        if key not in raw:
            resolved[key] = spec["default"]
            continue

        try:
            if spec["type"] == ParameterType.INTEGER:
                value = int(raw[key])
            else:
                value = float(raw[key])
        except ValueError:
            raise ValueError(f"Valeur invalide pour {key} : {raw[key]}")

        if not spec["min_value"] <= value <= spec["max_value"] + 1e-12:
            raise ValueError(
                f"{key} doit être entre {spec['min_value']} et {spec['max_value']}"
            )
        resolved[key] = value

    return resolved
